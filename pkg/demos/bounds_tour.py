"""Walk through the closed-form bound family for one matrix shape.

Run:  python3 demos/bounds_tour.py
"""

import math

from pinvcond import (
    BoundContext,
    c_lambda,
    chen_dongarra_bounds,
    edelman_limit,
    expectation_bound,
    expectation_bound_log,
    pinv_tail_bound,
    q_analytic_bounds,
    q_limit,
    theorem_tail_bound,
    z_of_eps,
    zeta,
)


def main() -> None:
    m, n, sigma = 10, 20, 0.5
    ctx = BoundContext(m=m, n=n, sigma=sigma, q_value=1.5)
    lam = ctx.lam

    print(f"shape m={m}, n={n}, sigma={sigma}")
    print(f"aspect lambda = (m-1)/n = {lam:.4f}, tail exponent n-m+1 = {ctx.tail_exponent}")
    print(f"c(lambda) = {c_lambda(lam):.6f}")
    print()

    zc = zeta(ctx)
    print(f"tail bound asserted for z >= zeta = {zc:.6f}")
    print(f"{'z':>8} {'kappa threshold':>16} {'P bound':>12}")
    for z in (zc, 2 * zc, 5 * zc, 20 * zc):
        threshold = math.e * z / (1.0 - lam)
        print(f"{z:8.3f} {threshold:16.3f} {theorem_tail_bound(ctx, z):12.3e}")
    print()

    for eps in (0.5, 1e-2, 1e-6):
        print(f"z needed for tail probability {eps:g}: {z_of_eps(ctx, eps):.4f}")
    print()

    print(f"inverse-norm tail at t=3: {pinv_tail_bound(ctx, 3.0):.3e}")
    lo, hi = chen_dongarra_bounds(m, n, 2.0 * ctx.tail_exponent)
    print(f"centered two-sided sandwich at x = 2(n-m+1): [{lo:.3e}, {hi:.3e}]")
    print()

    ratio = m / n
    print(f"mean kappa bound 20.1/(1-m/n)   = {expectation_bound(ratio):.4f}")
    print(f"its log (the table bound column) = {expectation_bound_log(ratio):.4f}")
    print(f"almost-sure kappa limit          = {edelman_limit(ratio):.4f}")
    qlo, qhi = q_analytic_bounds(m, n)
    print(f"norm constant Q interval         = [{qlo:.4f}, {qhi:.4f}], limit {q_limit(ratio):.4f}")


if __name__ == "__main__":
    main()
