"""Directional couplings and the excitation asymmetry they produce.

    python3 demos/nonreciprocity.py
"""

import math
from dataclasses import replace

import numpy as np

from nhcircuit import CircuitParams, SweepAxis, nonrecip_map
from nhcircuit.figures import FIG7_GE, fig7_params
from nhcircuit.model import derive_effective_model
from nhcircuit.nonreciprocity import both_excited_populations


def main():
    grid = nonrecip_map(CircuitParams(), SweepAxis.linspace("g_e", -3.0, 3.0, 601),
                        SweepAxis.linspace("delta_theta", 0.0, math.pi, 201))
    for key, (g, t) in grid.extrema().items():
        print(f"{key}: g_e = {g:+.3f}, dtheta = {t / math.pi:.3f} pi")

    p = replace(fig7_params(), g_e=FIG7_GE)
    for frac in (0.0, 0.25, 0.5):
        m = derive_effective_model(p.with_delta_theta(frac * math.pi))
        tau, p1, p2 = both_excited_populations(m, 20.0, 401)
        print(f"dtheta = {frac:.2f} pi: max |P2 - P1| = {np.max(np.abs(p2 - p1)):.2e}")


if __name__ == "__main__":
    main()
