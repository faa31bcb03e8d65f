"""Rerun two reference simulation rows and print the comparison.

Each row estimates the mean of ln(kappa) over draws of center + sigma * G
with the unit-norm constant center and sigma = 1/sqrt(m), next to the
stored reference value and the closed-form bound column.

Run:  python3 demos/table_row.py
"""

from pinvcond import Seed, reproduce_tables


def main() -> None:
    rep = reproduce_tables("2", trials=300, seed=Seed(7), max_m=20)
    print(f"aspect ratio n/m = {rep.ratio}, {rep.trials} trials per row")
    print(f"{'m':>4} {'n':>4} {'mean ln k':>10} {'stderr':>8} {'reference':>10} "
          f"{'delta':>8} {'bound':>7}")
    for r in rep.rows:
        print(f"{r.m:4d} {r.n:4d} {r.mean_ln_kappa:10.4f} {r.stderr:8.4f} "
              f"{r.reference:10.4f} {r.delta:+8.4f} {r.bound_log:7.4f}")
    print()
    print("delta is measured minus reference; bound is ln(20.1/(1-m/n))")


if __name__ == "__main__":
    main()
