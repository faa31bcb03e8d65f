"""Closed-form tail bounds, limits and cost formulas for the condition
number of noncentered Gaussian matrices.

Everything here is pure and deterministic.  Probability bounds are evaluated
in log space so that tail exponents in the thousands neither overflow nor
lose the leading behaviour; results may underflow to exactly 0.0, which is
the honest answer at that magnitude.

Two ratio conventions coexist and are never mixed implicitly: the finite-m
inequalities use lam = (m-1)/n ("theorem" mode, which makes (1-lam)*n equal
the integer n-m+1), while large-n statements use lam = m/n ("asymptotic"
mode).  ``BoundContext`` carries the choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ExtrapolationWarning, HypothesisViolationError

import warnings

__all__ = [
    "BoundContext",
    "GammaHelper",
    "LemmaCheck",
    "analytic_lemma_checks",
    "c_lambda",
    "cg_cost_and_breakeven",
    "cg_iteration_bound",
    "chen_dongarra_bounds",
    "edelman_limit",
    "expectation_bound",
    "expectation_bound_log",
    "lop_bound",
    "mu_cdw",
    "pinv_directional_tail_bound",
    "pinv_tail_bound",
    "q_analytic_bounds",
    "q_limit",
    "theorem_tail_bound",
    "z_of_eps",
    "zeta",
]

LAMBDA_MODES = ("theorem", "asymptotic")


def _exp_guard(log_value: float) -> float:
    # exp() without OverflowError; underflow to 0.0 is fine
    return math.exp(log_value) if log_value < 700.0 else math.inf


class GammaHelper:
    """Stateless log-gamma and sphere-surface evaluator.

    ``sphere_area(p)`` is the total surface measure of the unit sphere
    S^{p-1} in R^p: 2 pi^{p/2} / Gamma(p/2).  So sphere_area(1) = 2 and
    sphere_area(2) = 2*pi.
    """

    @staticmethod
    def log_gamma(x: float) -> float:
        if x <= 0.0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        return math.lgamma(x)

    @staticmethod
    def gamma(x: float) -> float:
        if x <= 0.0:
            raise DomainError(f"gamma needs x > 0, got {x}")
        return math.gamma(x)

    @classmethod
    def log_sphere_area(cls, p: int) -> float:
        if p < 1:
            raise DomainError(f"sphere dimension must be >= 1, got {p}")
        return math.log(2.0) + 0.5 * p * math.log(math.pi) - cls.log_gamma(0.5 * p)

    @classmethod
    def sphere_area(cls, p: int) -> float:
        return math.exp(cls.log_sphere_area(p))


@dataclass(frozen=True)
class BoundContext:
    """Shape, noise level and aspect-ratio convention for the bound family.

    q_value is the norm constant Q(m, n) = E(1/sqrt(n))||X|| of the centered
    ensemble; it is measured (see experiments.estimate_q) or taken from its
    analytic interval, never hardcoded.
    """

    m: int
    n: int
    sigma: float
    lambda_mode: str = "theorem"
    q_value: float = 1.5

    def __post_init__(self):
        if not (isinstance(self.m, int) and isinstance(self.n, int)):
            raise DomainError("m and n must be integers")
        if not (1 <= self.m <= self.n):
            raise DomainError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if self.lambda_mode not in LAMBDA_MODES:
            raise DomainError(f"lambda_mode must be one of {LAMBDA_MODES}, got {self.lambda_mode!r}")
        if self.lambda_mode == "asymptotic" and self.m == self.n:
            raise DomainError("asymptotic mode needs m < n (otherwise the ratio is 1)")
        sigma = float(self.sigma)
        object.__setattr__(self, "sigma", sigma)
        if not math.isfinite(sigma) or sigma <= 0.0:
            raise DomainError(f"sigma must be finite and positive, got {sigma}")
        q = float(self.q_value)
        object.__setattr__(self, "q_value", q)
        if not math.isfinite(q) or q <= 0.0:
            raise DomainError(f"q_value must be finite and positive, got {q}")

    @property
    def lam(self) -> float:
        if self.lambda_mode == "theorem":
            return (self.m - 1) / self.n
        return self.m / self.n

    @property
    def tail_exponent(self) -> int:
        # equals (1 - lam) * n exactly, as an integer
        if self.lambda_mode == "theorem":
            return self.n - self.m + 1
        return self.n - self.m


def c_lambda(lam: float) -> float:
    """sqrt((1 + lam) / (2 (1 - lam))) for lam in [0, 1)."""
    if not (0.0 <= lam < 1.0):
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    return math.sqrt((1.0 + lam) / (2.0 * (1.0 - lam)))


def zeta(ctx: BoundContext) -> float:
    """Smallest z at which the main tail bound is asserted:
    (Q + 1/(sigma sqrt(n))) * c(lam)^(1/((1-lam) n))."""
    c = c_lambda(ctx.lam)
    return (ctx.q_value + 1.0 / (ctx.sigma * math.sqrt(ctx.n))) * c ** (1.0 / ctx.tail_exponent)


def theorem_tail_bound(ctx: BoundContext, z: float) -> float:
    """Upper bound on P{kappa >= e z / (1 - lam)} for z >= zeta(ctx):

        2 c(lam) [(Q + sqrt(2 ln 2z) + 1/(sigma sqrt(n))) / z]^((1-lam) n)

    Refuses z below zeta, where the inequality is not asserted.  Callers
    owe ||center|| <= 1 and sigma <= 1; that obligation is recorded in
    experiment reports, not checkable from (m, n, sigma) alone.
    """
    zc = zeta(ctx)
    if z < zc:
        raise HypothesisViolationError(f"tail bound needs z >= zeta = {zc:.6g}, got z = {z:.6g}")
    bracket = ctx.q_value + math.sqrt(2.0 * math.log(2.0 * z)) + 1.0 / (ctx.sigma * math.sqrt(ctx.n))
    log_rhs = (
        math.log(2.0)
        + math.log(c_lambda(ctx.lam))
        + ctx.tail_exponent * (math.log(bracket) - math.log(z))
    )
    return _exp_guard(log_rhs)


def pinv_tail_bound(ctx: BoundContext, t: float) -> float:
    """Upper bound on P{||pinv(A)|| >= t / (1 - lam)}:
    c(lam) (e / (sigma sqrt(n) t))^((1-lam) n).  Valid for any sigma > 0."""
    if t <= 0.0:
        raise DomainError(f"t must be positive, got {t}")
    log_rhs = math.log(c_lambda(ctx.lam)) + ctx.tail_exponent * (
        1.0 - math.log(ctx.sigma * math.sqrt(ctx.n) * t)
    )
    return _exp_guard(log_rhs)


def pinv_directional_tail_bound(m: int, n: int, sigma: float, xi: float) -> float:
    """Upper bound on P{||pinv(A) v|| >= xi}, uniform over the center and
    over unit vectors v:

        (2 pi)^(-(n-m+1)/2) * (O_{n-m} / (n-m+1)) * (sigma xi)^(-(n-m+1))

    with O_{n-m} the surface area of S^{n-m} in R^{n-m+1}.
    """
    if not (1 <= m <= n):
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    if sigma <= 0.0 or xi <= 0.0:
        raise DomainError("sigma and xi must be positive")
    k = n - m + 1
    log_rhs = (
        -0.5 * k * math.log(2.0 * math.pi)
        + GammaHelper.log_sphere_area(k)
        - math.log(k)
        - k * math.log(sigma * xi)
    )
    return _exp_guard(log_rhs)


def chen_dongarra_bounds(m: int, n: int, x: float) -> tuple[float, float]:
    """Two-sided tail estimate for the centered unit ensemble, valid for
    x >= n - m + 1:

        (2 pi)^(-1/2) (5x)^(-(n-m+1)) <= P{kappa >= x/(1-lam)}
                                       <= (2 pi)^(-1/2) (7/x)^(n-m+1)

    Both sides are clipped into [0, 1].
    """
    if not (1 <= m <= n):
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    k = n - m + 1
    if x < k:
        raise HypothesisViolationError(f"sandwich is stated for x >= n-m+1 = {k}, got x = {x}")
    log_front = -0.5 * math.log(2.0 * math.pi)
    log_lower = log_front - k * math.log(5.0 * x)
    log_upper = log_front + k * (math.log(7.0) - math.log(x))
    lower = math.exp(log_lower) if log_lower < 0.0 else 1.0
    upper = math.exp(log_upper) if log_upper < 0.0 else 1.0
    return min(lower, 1.0), min(upper, 1.0)


def edelman_limit(lam: float) -> float:
    """Almost-sure limit of kappa for centered ensembles with m/n -> lam:
    (1 + sqrt(lam)) / (1 - sqrt(lam))."""
    if not (0.0 <= lam < 1.0):
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    r = math.sqrt(lam)
    return (1.0 + r) / (1.0 - r)


def q_limit(lam: float) -> float:
    """Limit of the norm constant Q(m, n) as n grows with m/n -> lam."""
    if not (0.0 <= lam <= 1.0):
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    if lam == 1.0:
        warnings.warn("q_limit at the lambda = 1 boundary is a continuity extrapolation",
                      ExtrapolationWarning)
    return 1.0 + math.sqrt(lam)


def q_analytic_bounds(m: int, n: int) -> tuple[float, float]:
    """Provable interval for Q(m, n):
    sqrt(n/(n+1)) <= Q <= min(2 (1 + sqrt(2 ln(2m-1)/n) + 1/sqrt(n)), 6)."""
    if n <= 1:
        raise DomainError(f"interval needs n > 1, got n={n}")
    if not (1 <= m <= n):
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    lower = math.sqrt(n / (n + 1.0))
    upper = 2.0 * (1.0 + math.sqrt(2.0 * math.log(2.0 * m - 1.0) / n) + 1.0 / math.sqrt(n))
    return lower, min(upper, 6.0)


def expectation_bound(lam: float) -> float:
    """Mean condition number bound 20.1 / (1 - lam)."""
    if not (0.0 <= lam < 1.0):
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    return 20.1 / (1.0 - lam)


def expectation_bound_log(lam: float) -> float:
    """ln(20.1 / (1 - lam)), the form the simulation tables print."""
    return math.log(expectation_bound(lam))


def z_of_eps(ctx: BoundContext, eps: float) -> float:
    """Value of z at which the main tail bound equals eps:

        z(eps) = (Q + sqrt((2/n) ln(1/eps)) + 1/(sigma sqrt(n))) (c/eps)^(1/((1-lam) n))

    Decreasing in eps on (0, 1]; z(1) equals zeta(ctx) exactly.
    """
    if not (0.0 < eps <= 1.0):
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    c = c_lambda(ctx.lam)
    bracket = (
        ctx.q_value
        + math.sqrt((2.0 / ctx.n) * math.log(1.0 / eps))
        + 1.0 / (ctx.sigma * math.sqrt(ctx.n))
    )
    return bracket * (c / eps) ** (1.0 / ctx.tail_exponent)


def mu_cdw(m: int, n: int, sigma: float, r: float) -> float:
    """Reference mean-log-condition bound
    ln(m + sigma m sqrt(5n)) + ln(2.35/sigma) + 1/r + sqrt(e pi / 5).

    The remainder parameter r is not pinned down by the source inequality,
    so it is an explicit argument rather than a default.
    """
    if m < 1 or n < 1 or sigma <= 0.0 or r <= 0.0:
        raise DomainError("mu needs positive m, n, sigma, r")
    return (
        math.log(m + sigma * m * math.sqrt(5.0 * n))
        + math.log(2.35 / sigma)
        + 1.0 / r
        + math.sqrt(math.e * math.pi / 5.0)
    )


def lop_bound(m: int, n: int, kappa: float, o1: float = 0.0) -> float:
    """Decimal digits lost by a least-squares solve through the normal
    equations route: log10(m n^{3/2}) + 2 log10(kappa) + o1."""
    if not (m > n >= 1):
        raise DomainError(f"least-squares regime needs m > n >= 1, got m={m}, n={n}")
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    return math.log10(m * n ** 1.5) + 2.0 * math.log10(kappa) + o1


def cg_iteration_bound(kappa: float, eps: float) -> float:
    """Iterations sufficient for conjugate gradients to reach relative
    error eps in the energy norm: (1/2) sqrt(kappa) |ln eps|."""
    if kappa < 1.0:
        raise DomainError(f"kappa must be >= 1, got {kappa}")
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return 0.5 * math.sqrt(kappa) * abs(math.log(eps))


def cg_cost_and_breakeven(n: int, lam: float, eps: float, o_n: float = 0.0) -> tuple[float, float]:
    """Leading-order arithmetic cost of a CG solve whose condition number
    sits at the mean bound, and the accuracy at which it ties with a direct
    O(2/3 n^3) factorization:

        cost = 3 n^2 (20.1/(1-lam)) |ln eps| + o_n
        breakeven_eps = exp(-n (1-lam) / 91)
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not (0.0 <= lam < 1.0):
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    cost = 3.0 * n * n * expectation_bound(lam) * abs(math.log(eps)) + o_n
    breakeven = math.exp(-n * (1.0 - lam) / 91.0)
    return cost, breakeven


@dataclass(frozen=True)
class LemmaCheck:
    name: str
    passed: bool
    points: int
    worst_margin: float  # smallest slack seen on the grid; negative means a violation


def analytic_lemma_checks() -> tuple[LemmaCheck, ...]:
    """Grid verification of the small analytic facts the probability bounds
    lean on.  Margins are in log space where the inequality is a ratio.

      ratio_cap: lam^(-lam/(1-lam)) <= e            on lam = .001 .. .999
      gamma_ratio: Gamma(m/2)/Gamma((m+1)/2) >= sqrt(2/m)      m = 1 .. 500
      norm_mean: sqrt(2) Gamma((m+1)/2)/Gamma(m/2) >= m/sqrt(m+1)  m = 1 .. 500
      stirling_lower: Gamma(x) > sqrt(2 pi / x) (x/e)^x     x = 0.25 .. 200
    """
    checks = []

    worst = math.inf
    for k in range(1, 1000):
        lam = k / 1000.0
        val = math.exp(-lam * math.log(lam) / (1.0 - lam))
        worst = min(worst, math.e - val)
    checks.append(LemmaCheck("ratio_cap", worst >= 0.0, 999, worst))

    worst = math.inf
    for m in range(1, 501):
        margin = (
            GammaHelper.log_gamma(0.5 * m)
            - GammaHelper.log_gamma(0.5 * (m + 1))
            - 0.5 * (math.log(2.0) - math.log(m))
        )
        worst = min(worst, margin)
    checks.append(LemmaCheck("gamma_ratio", worst >= 0.0, 500, worst))

    worst = math.inf
    for m in range(1, 501):
        log_mean = 0.5 * math.log(2.0) + GammaHelper.log_gamma(0.5 * (m + 1)) - GammaHelper.log_gamma(0.5 * m)
        margin = log_mean - (math.log(m) - 0.5 * math.log(m + 1.0))
        worst = min(worst, margin)
    checks.append(LemmaCheck("norm_mean", worst >= 0.0, 500, worst))

    worst = math.inf
    points = 0
    x = 0.25
    while x <= 200.0 + 1e-12:
        rhs = 0.5 * (math.log(2.0 * math.pi) - math.log(x)) + x * (math.log(x) - 1.0)
        worst = min(worst, GammaHelper.log_gamma(x) - rhs)
        points += 1
        x += 0.25
    checks.append(LemmaCheck("stirling_lower", worst > 0.0, points, worst))

    return tuple(checks)
