"""How well does the 2x2 model track the qubit-resonator model?

Two comparisons over a growing resonator loss: the eliminated 2x2 generator
(which converges to the full model) and the effective matrix used elsewhere
in the package (whose splitting keeps a finite offset).

    python3 demos/reduction_check.py
"""

from nhcircuit import CircuitParams
from nhcircuit.oracle import compare_coupler_reduction, compare_elimination, compare_reduction

SCHEDULE = (65.0, 130.0, 260.0, 520.0)


def main():
    p = CircuitParams()
    elim = dict(compare_elimination(p, SCHEDULE))
    print("gamma_a  eliminated  effective")
    for r in compare_reduction(p, SCHEDULE):
        print(f"{r.gamma_a:7.0f}  {elim[r.gamma_a]:10.4f}  {r.rel_error:9.4f}")
    print("\ncoupler frequency vs explicit-coupler model")
    for wc, ratio, err in compare_coupler_reduction(p, (3500.0, 5200.0, 8000.0)):
        print(f"omega_c = {wc:6.0f}: g/|Delta| = {ratio:.3f}, rel error = {err:.1e}")


if __name__ == "__main__":
    main()
