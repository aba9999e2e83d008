"""Population exchange between a gain qubit and a loss qubit.

Evolves the eight trajectory settings used for the g_e and dtheta series,
compares the exact propagator with RK4, and prints the long-time populations.

    python3 demos/population_dynamics.py
"""

import numpy as np

from nhcircuit import EvolveSpec, evolve, steady_populations, trajectory_arrays
from nhcircuit.figures import fig5_models


def main():
    for panel, label, m in fig5_models():
        spec = EvolveSpec(t_max=50.0, n_steps=501)
        exact = trajectory_arrays(evolve(m, spec))
        rk4 = trajectory_arrays(evolve(m, EvolveSpec(t_max=50.0, n_steps=501, engine="rk4")))
        p1, p2 = steady_populations(m)
        diff = np.max(np.abs(exact["p1"] - rk4["p1"]))
        print(f"{panel} {label:>16}: P1(50) = {exact['p1'][-1]:.5f}, steady P1 = {p1:.5f}, "
              f"P2 = {p2:.5f}, |exact - rk4| = {diff:.1e}")


if __name__ == "__main__":
    main()
