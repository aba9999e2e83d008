"""Locate exceptional points of the two-qubit effective model.

Scans the level and damping splittings over (g_e, dtheta), finds the
exceptional points on the I = 0 contour, and checks that the eigenvectors
coalesce there.

    python3 demos/exceptional_points.py
"""

import math

from nhcircuit import CircuitParams, SweepAxis, derive_effective_model, find_ep_2d, scan_2d
from nhcircuit.eplocator import locus_eigenvector_angle
from nhcircuit.spectrum import joint_splitting_minima


def main():
    p = CircuitParams()
    m = derive_effective_model(p)
    print(f"g_e = {m.g_e:.6f} MHz, Omega_n = {m.omega_n:.6f} MHz")

    ge = SweepAxis.linspace("g_e", -3.0, 3.0, 201)
    th = SweepAxis.linspace("delta_theta", 0.0, math.pi, 201)
    grid = scan_2d(p, ge, th)
    for i, j in joint_splitting_minima(grid):
        print(f"grid minimum of the splittings: g_e = {ge.values[i]:+.2f}, dtheta = {th.values[j] / math.pi:.3f} pi")

    for loc in find_ep_2d(p, ge, th):
        g, t = loc.location
        angle = locus_eigenvector_angle(p, loc)
        print(f"exceptional point: g_e = {g:+.6f}, dtheta = {t / math.pi:.6f} pi, eigenvector angle {angle:.1e} rad")


if __name__ == "__main__":
    main()
