"""Conjugate gradient iteration counts on Gram matrices of Gaussian draws.

Solves (A A') x = c per draw and compares the mean iteration count with the
0.5 * (20.1/(1-lam)) * |ln eps| estimate, then prints the direct-solve
break-even accuracy for a larger system.

Run:  python3 demos/cg_iterations.py
"""

import math

import numpy as np

from pinvcond import GaussianEnsemble, Seed, cg_cost_and_breakeven, cg_experiment


def main() -> None:
    m, n, eps = 20, 60, 1e-6
    ensemble = GaussianEnsemble(center=np.zeros((m, n)), sigma=1.0)
    report = cg_experiment(ensemble, eps, trials=50, seed=Seed(11))

    est = report.estimates
    print(f"m={m}, n={n}, eps={eps:g}, 50 solves of (A A') x = c")
    print(f"mean iterations = {est['mean_iterations']:.2f} "
          f"+- {est['stderr_iterations']:.2f}")
    print(f"iteration estimate (mean-kappa plug-in) = {report.bounds['iteration_estimate']:.2f}")
    print(f"mean kappa(A) = {est['mean_kappa']:.3f}")
    for verdict in report.verdicts:
        print(f"  {verdict.name}: {'PASS' if verdict.passed else 'FAIL'}")
    print()

    big_n, lam = 910, 0.0
    for acc in (1e-2, 1e-4):
        cost, breakeven = cg_cost_and_breakeven(big_n, lam, acc)
        print(f"n={big_n}: cost at eps={acc:g} is {cost:.3e} flops "
              f"(direct solve ~ {2.0 * big_n**3 / 3.0:.3e})")
    print(f"break-even accuracy: eps = exp(-n(1-lam)/91) = {breakeven:.3e}; "
          f"iterating below this is slower than factorizing")


if __name__ == "__main__":
    main()
