"""Monte Carlo experiment harness.

Estimates the norm constant Q(m, n), empirical tail probabilities and
expectations of the condition number, reproduces the reference simulation
tables, and runs the full inequality battery with Wilson-interval slack.

Determinism contract: trial i of any experiment draws from
seed.substream(i), results are aggregated in trial-index order, and worker
threads only fill disjoint slices of preallocated buffers, so every report
is a pure function of (config, master seed) no matter how many threads run.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import DomainError, HeavyTailWarning, RankDeficiencyError
from .linalg import (
    bidiagonal_singular_values,
    rank_tolerance,
    singular_values,
    svd,
)
from .reports import ExperimentReport, Verdict, Z_95, format_float, wilson_interval, wilson_lower, wilson_upper
from .sampling import (
    GaussianEnsemble,
    Seed,
    sample_bidiagonal_model,
    sample_gaussian_matrix,
    sample_unit_sphere,
    standard_normals,
)

__all__ = [
    "TrialRecord",
    "TailPoint",
    "TailEstimate",
    "TableRow",
    "TableReproduction",
    "REFERENCE_TABLES",
    "collect_trials",
    "empirical_expectation",
    "empirical_tail",
    "estimate_q",
    "expectation_experiment",
    "make_ones_center",
    "q_experiment",
    "reproduce_tables",
    "run_trials",
    "tail_experiment",
    "verify_inequality_suite",
    "write_trials_csv",
]

# Reference simulation rows: (m, n, mean ln kappa, reference mu value).
# Table deltas are computed against the third column.
REFERENCE_TABLES = {
    "1.5": (
        (10, 15, 1.88278226808667, 7.73190477060415),
        (20, 30, 2.04718612539162, 8.74083698937094),
        (40, 60, 2.13539482051851, 9.75820027818245),
        (80, 120, 2.19377719811291, 10.78180469776403),
        (160, 240, 2.23119383890675, 11.80997066079053),
    ),
    "2": (
        (5, 10, 1.28204418194521, 6.35902343647518),
        (10, 20, 1.48669849397793, 7.36178009761038),
        (20, 40, 1.59394635398509, 8.37451330180407),
        (40, 80, 1.64896402420115, 9.39470162365532),
        (80, 160, 1.69565973841311, 10.42037692088400),
        (160, 320, 1.72154032592663, 11.45004561375610),
    ),
    "2.5": (
        (10, 25, 1.24167342192086, 7.46370799208199),
        (20, 50, 1.34213347902230, 8.47908853717777),
        (40, 100, 1.40120155287858, 9.50123344342563),
        (80, 200, 1.44120596017225, 10.52833707967242),
        (160, 400, 1.45928497502137, 11.55903912197539),
    ),
    "3": (
        (5, 15, 0.98741849882614, 6.37209092337754),
        (10, 30, 1.10550395287499, 7.38102314214432),
        (20, 60, 1.18790345922560, 8.39838643095583),
        (40, 120, 1.23914387557043, 9.42199085053742),
        (80, 240, 1.27096561714092, 10.45015681356392),
        (160, 480, 1.28600775609989, 12.14829242876138),
    ),
}


@dataclass(frozen=True)
class TrialRecord:
    """One draw: condition number and the norms it factors into.
    kappa is +inf when the draw was numerically rank deficient."""

    trial_index: int
    kappa: float
    ln_kappa: float
    spectral_norm: float
    pinv_norm: float
    seed: Seed


def run_trials(fn, trials: int, seed: Seed, threads: int = 1) -> list:
    """Evaluate fn(i, seed.substream(i)) for i in 0..trials-1.

    Results come back in trial-index order regardless of threads; workers
    own disjoint index ranges of one preallocated list.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    out = [None] * trials
    threads = max(1, int(threads))

    def work(lo: int, hi: int) -> None:
        for i in range(lo, hi):
            out[i] = fn(i, seed.substream(i))

    if threads == 1 or trials == 1:
        work(0, trials)
        return out
    chunk = -(-trials // threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(work, lo, min(lo + chunk, trials))
            for lo in range(0, trials, chunk)
        ]
        for fut in futures:
            fut.result()
    return out


def _extreme_singular_values(ensemble: GaussianEnsemble, trials: int, seed: Seed,
                             threads: int) -> tuple[np.ndarray, np.ndarray]:
    def one(i, sub):
        s = singular_values(sample_gaussian_matrix(ensemble, sub))
        return s[0], s[-1]

    pairs = run_trials(one, trials, seed, threads)
    smax = np.array([p[0] for p in pairs])
    smin = np.array([p[1] for p in pairs])
    return smax, smin


def collect_trials(ensemble: GaussianEnsemble, trials: int, seed: Seed,
                   threads: int = 1) -> list[TrialRecord]:
    """Sample the ensemble and record per-trial condition data."""
    smax, smin = _extreme_singular_values(ensemble, trials, seed, threads)
    tol = rank_tolerance(ensemble.m, ensemble.n)
    records = []
    for i in range(trials):
        deficient = smax[i] == 0.0 or smin[i] <= tol * smax[i]
        if deficient:
            kappa = math.inf
            pinv_norm = math.inf
            ln_kappa = math.inf
        else:
            kappa = float(smax[i] / smin[i])
            pinv_norm = float(1.0 / smin[i])
            ln_kappa = math.log(kappa)
        records.append(TrialRecord(
            trial_index=i,
            kappa=kappa,
            ln_kappa=ln_kappa,
            spectral_norm=float(smax[i]),
            pinv_norm=pinv_norm,
            seed=seed.substream(i),
        ))
    return records


def estimate_q(m: int, n: int, trials: int, seed: Seed, method: str = "dense",
               threads: int = 1) -> tuple[float, float]:
    """Monte Carlo estimate of Q(m, n) = E ||X|| / sqrt(n) for the centered
    unit ensemble, with its standard error.

    method "dense" samples full matrices; "bidiagonal" samples the chi band
    with the same singular value law and never forms a matrix.
    """
    if trials < 100:
        raise DomainError(f"need at least 100 trials for a usable Q estimate, got {trials}")
    if not (1 <= m <= n):
        raise DomainError(f"need 1 <= m <= n, got m={m}, n={n}")
    if method == "dense":
        ensemble = GaussianEnsemble(center=np.zeros((m, n)), sigma=1.0)

        def one(i, sub):
            return singular_values(sample_gaussian_matrix(ensemble, sub))[0]
    elif method == "bidiagonal":
        def one(i, sub):
            return bidiagonal_singular_values(sample_bidiagonal_model(m, n, sub))[0]
    else:
        raise DomainError(f"method must be 'dense' or 'bidiagonal', got {method!r}")

    norms = np.array(run_trials(one, trials, seed, threads))
    scale = 1.0 / math.sqrt(n)
    estimate = float(norms.mean() * scale)
    stderr = float(norms.std(ddof=1) * scale / math.sqrt(trials))
    return estimate, stderr


@dataclass(frozen=True)
class TailPoint:
    threshold: float
    exceed_count: int
    probability: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class TailEstimate:
    points: tuple
    trials: int
    deficient_count: int


def empirical_tail(ensemble: GaussianEnsemble, thresholds, trials: int, seed: Seed,
                   threads: int = 1) -> TailEstimate:
    """Empirical P{kappa >= T} for each threshold T, with Wilson 95%
    intervals.  Rank-deficient draws count as kappa = +inf (they exceed
    every threshold) and their count is reported separately."""
    if trials < 1000:
        raise DomainError(f"tail estimation needs at least 1000 trials, got {trials}")
    records = collect_trials(ensemble, trials, seed, threads)
    kappas = np.array([r.kappa for r in records])
    deficient = int(np.sum(np.isinf(kappas)))
    points = []
    for t in thresholds:
        t = float(t)
        count = int(np.sum(kappas >= t))
        lo, hi = wilson_interval(count, trials)
        points.append(TailPoint(t, count, count / trials, lo, hi))
    return TailEstimate(points=tuple(points), trials=trials, deficient_count=deficient)


def empirical_expectation(ensemble: GaussianEnsemble, trials: int, seed: Seed,
                          statistic: str = "kappa", threads: int = 1) -> tuple[float, float]:
    """Sample mean and standard error of kappa or ln(kappa).

    Any rank-deficient draw makes the mean undefined and raises.  For the
    raw kappa statistic a heavy-tail warning fires when the single largest
    draw carries more than 20% of the total, a sign the sample size is too
    small for a stable mean.
    """
    if trials < 100:
        raise DomainError(f"need at least 100 trials, got {trials}")
    if statistic not in ("kappa", "ln_kappa"):
        raise DomainError(f"statistic must be 'kappa' or 'ln_kappa', got {statistic!r}")
    smax, smin = _extreme_singular_values(ensemble, trials, seed, threads)
    tol = rank_tolerance(ensemble.m, ensemble.n)
    bad = np.where((smax == 0.0) | (smin <= tol * smax))[0]
    if bad.size:
        i = int(bad[0])
        raise RankDeficiencyError(float(smin[i]), float(smax[i]), tol * float(smax[i]))
    kappas = smax / smin
    values = np.log(kappas) if statistic == "ln_kappa" else kappas
    if statistic == "kappa" and trials >= 2:
        total = float(values.sum())
        if total > 0.0 and float(values.max()) > 0.2 * total:
            warnings.warn(
                "largest draw carries more than 20% of the kappa mean; "
                "estimate is unstable at this sample size",
                HeavyTailWarning,
            )
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return mean, stderr


def make_ones_center(m: int, n: int, scale_mode: str = "unit_norm") -> np.ndarray:
    """Constant matrix with spectral norm 1 (entries 1/sqrt(mn)); sqrt_m
    mode scales it by sqrt(m), the center used with sigma-free sampling."""
    if m < 1 or n < 1:
        raise DomainError(f"need positive dimensions, got m={m}, n={n}")
    if scale_mode == "unit_norm":
        value = 1.0 / math.sqrt(m * n)
    elif scale_mode == "sqrt_m":
        value = math.sqrt(m) / math.sqrt(m * n)
    else:
        raise DomainError(f"scale_mode must be 'unit_norm' or 'sqrt_m', got {scale_mode!r}")
    return np.full((m, n), value)


def _ratio_key(ratio) -> str:
    key = str(ratio)
    if key.endswith(".0"):
        key = key[:-2]
    if key not in REFERENCE_TABLES:
        raise DomainError(f"ratio must be one of {sorted(REFERENCE_TABLES)}, got {ratio!r}")
    return key


@dataclass(frozen=True)
class TableRow:
    m: int
    n: int
    mean_ln_kappa: float
    stderr: float
    reference: float
    delta: float
    bound_log: float


@dataclass(frozen=True)
class TableReproduction:
    ratio: str
    trials: int
    seed: Seed
    rows: tuple

    def to_report(self) -> ExperimentReport:
        return ExperimentReport(
            command="tables",
            config={
                "ratio": self.ratio,
                "trials": self.trials,
                "seed_master": self.seed.master,
                "seed_stream": self.seed.stream_index,
                "lambda_mode": "asymptotic",
                "center": "ones-unit",
                "sigma": "1/sqrt(m) per row",
            },
            estimates={},
            rows=[
                {
                    "m": r.m,
                    "n": r.n,
                    "mean_ln_kappa": r.mean_ln_kappa,
                    "stderr": r.stderr,
                    "reference": r.reference,
                    "delta": r.delta,
                    "bound_log": r.bound_log,
                }
                for r in self.rows
            ],
            bounds={},
            verdicts=[],
            notes=["rows sample center + sigma*G with center = ones/sqrt(mn), sigma = 1/sqrt(m)"],
        )


def reproduce_tables(ratio, trials: int = 500, seed: Seed = Seed(0), threads: int = 1,
                     max_m: int | None = None) -> TableReproduction:
    """Rerun the reference simulation rows for one aspect ratio.

    Each row draws `trials` matrices from N(center, sigma^2 I) with the
    unit-norm constant center and sigma = 1/sqrt(m), then reports the mean
    of ln(kappa) next to the reference value and the closed-form bound
    column ln(20.1/(1 - m/n)).
    """
    key = _ratio_key(ratio)
    rows = []
    for row_index, (m, n, reference, _mu) in enumerate(REFERENCE_TABLES[key]):
        if max_m is not None and m > max_m:
            continue
        ensemble = GaussianEnsemble(center=make_ones_center(m, n), sigma=1.0 / math.sqrt(m))
        mean, stderr = empirical_expectation(
            ensemble, trials, seed.substream(row_index), statistic="ln_kappa", threads=threads
        )
        rows.append(TableRow(
            m=m,
            n=n,
            mean_ln_kappa=mean,
            stderr=stderr,
            reference=reference,
            delta=mean - reference,
            bound_log=bounds.expectation_bound_log(m / n),
        ))
    return TableReproduction(ratio=key, trials=trials, seed=seed, rows=tuple(rows))


def write_trials_csv(records, ensemble: GaussianEnsemble, path) -> None:
    """Per-trial dump: trial,m,n,sigma,kappa,ln_kappa,spec_norm,pinv_norm
    with 17 significant digits and LF endings."""
    lines = ["trial,m,n,sigma,kappa,ln_kappa,spec_norm,pinv_norm"]
    for r in records:
        lines.append(",".join([
            str(r.trial_index),
            str(ensemble.m),
            str(ensemble.n),
            format_float(ensemble.sigma),
            format_float(r.kappa),
            format_float(r.ln_kappa),
            format_float(r.spectral_norm),
            format_float(r.pinv_norm),
        ]))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def q_experiment(m: int, n: int, trials: int, seed: Seed, method: str = "dense",
                 threads: int = 1) -> ExperimentReport:
    """Q(m, n) estimate wrapped in a report, checked against its provable
    interval expanded by 3 standard errors."""
    estimate, stderr = estimate_q(m, n, trials, seed, method=method, threads=threads)
    lo, hi = bounds.q_analytic_bounds(m, n) if n > 1 else (0.0, 6.0)
    passed = (lo - 3.0 * stderr) <= estimate <= (hi + 3.0 * stderr)
    verdict = Verdict(
        name="q_inside_analytic_interval",
        passed=passed,
        lhs_label="estimate",
        lhs_value=estimate,
        rhs_label=f"interval [{format_float(lo)}, {format_float(hi)}] +- 3 SE",
        rhs_value=hi,
        detail=f"stderr = {format_float(stderr)}, method = {method}",
    )
    return ExperimentReport(
        command="estimate-q",
        config={"m": m, "n": n, "trials": trials, "method": method,
                "seed_master": seed.master, "seed_stream": seed.stream_index},
        estimates={"q": estimate, "stderr": stderr},
        bounds={"interval_low": lo, "interval_high": hi,
                "limit_value": bounds.q_limit(m / n) if m < n else 2.0},
        verdicts=[verdict],
    )


def tail_experiment(ensemble: GaussianEnsemble, trials: int, seed: Seed,
                    q_trials: int = 5000, z_points: int = 12, z_max_factor: float = 50.0,
                    lambda_mode: str = "theorem", threads: int = 1) -> ExperimentReport:
    """Empirical tail of kappa against the closed-form tail bound on a
    log-spaced z grid from the bound's threshold zeta to z_max_factor*zeta.

    Thresholds are T = e z / (1 - lam).  The check is one-sided: empirical
    minus 3-sigma Wilson slack must not exceed the bound.  The bound's
    hypotheses (sigma <= 1, unit-norm center) are the caller's obligation;
    the report records whether they held.
    """
    m, n = ensemble.m, ensemble.n
    q_est, q_se = estimate_q(m, n, q_trials, seed.substream(0), threads=threads)
    ctx = bounds.BoundContext(m=m, n=n, sigma=ensemble.sigma, lambda_mode=lambda_mode,
                              q_value=q_est)
    zc = bounds.zeta(ctx)
    zs = np.exp(np.linspace(math.log(zc), math.log(z_max_factor * zc), z_points))
    zs[0] = zc
    lam = ctx.lam
    thresholds = [math.e * z / (1.0 - lam) for z in zs]
    tail = empirical_tail(ensemble, thresholds, trials, seed.substream(1), threads)

    rows = []
    cells = []
    for z, point in zip(zs, tail.points):
        bound_value = bounds.theorem_tail_bound(ctx, float(z))
        rows.append({
            "z": float(z),
            "threshold": point.threshold,
            "exceed_count": point.exceed_count,
            "probability": point.probability,
            "ci_low": point.ci_low,
            "ci_high": point.ci_high,
            "bound": bound_value,
        })
        cells.append({
            "stat": wilson_lower(point.exceed_count, trials, 3.0),
            "bound": bound_value,
            "label": f"z={z:.6g}, count={point.exceed_count}/{trials}",
        })
    verdict = _grid_verdict("tail_bound_grid", cells, direction="upper")

    center_norm = float(singular_values(ensemble.center)[0])
    hypotheses_hold = ensemble.sigma <= 1.0 and center_norm <= 1.0 + 1e-12
    return ExperimentReport(
        command="tail",
        config={"m": m, "n": n, "sigma": ensemble.sigma, "trials": trials,
                "seed_master": seed.master, "seed_stream": seed.stream_index,
                "lambda_mode": lambda_mode, "z_points": z_points,
                "z_max_factor": z_max_factor},
        estimates={"q": q_est, "q_stderr": q_se, "zeta": zc,
                   "deficient_count": tail.deficient_count},
        tails=rows,
        bounds={"zeta": zc},
        verdicts=[verdict],
        notes=[
            f"center spectral norm = {format_float(center_norm)}; "
            f"bound hypotheses (sigma <= 1, center norm <= 1) "
            f"{'hold' if hypotheses_hold else 'DO NOT hold'}",
        ],
    )


def expectation_experiment(ensemble: GaussianEnsemble, trials: int, seed: Seed,
                           lambda_mode: str = "theorem", threads: int = 1) -> ExperimentReport:
    """Mean kappa and mean ln(kappa) with standard errors, compared
    one-sided against the 20.1/(1-lam) mean bound."""
    m, n = ensemble.m, ensemble.n
    if m > n:
        raise DomainError(f"the mean bound needs m <= n, got m={m}, n={n}")
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mean_k, se_k = empirical_expectation(ensemble, trials, seed.substream(0),
                                             statistic="kappa", threads=threads)
    for w in caught:
        notes.append(str(w.message))
    mean_ln, se_ln = empirical_expectation(ensemble, trials, seed.substream(1),
                                           statistic="ln_kappa", threads=threads)
    if lambda_mode == "theorem":
        lam = (m - 1) / n
    elif lambda_mode == "asymptotic":
        if m == n:
            raise DomainError("asymptotic mode needs m < n")
        lam = m / n
    else:
        raise DomainError(f"lambda_mode must be 'theorem' or 'asymptotic', got {lambda_mode!r}")
    bound = bounds.expectation_bound(lam)
    verdict = Verdict(
        name="mean_kappa_bound",
        passed=(mean_k - 3.0 * se_k) <= bound,
        lhs_label="mean kappa - 3 SE",
        lhs_value=mean_k - 3.0 * se_k,
        rhs_label="20.1/(1-lam)",
        rhs_value=bound,
        detail=f"lam ({lambda_mode}) = {lam:.6g}",
    )
    return ExperimentReport(
        command="expect",
        config={"m": m, "n": n, "sigma": ensemble.sigma, "trials": trials,
                "seed_master": seed.master, "seed_stream": seed.stream_index,
                "lambda_mode": lambda_mode},
        estimates={"mean_kappa": mean_k, "stderr_kappa": se_k,
                   "mean_ln_kappa": mean_ln, "stderr_ln_kappa": se_ln},
        bounds={"mean_bound": bound, "mean_bound_log": math.log(bound)},
        verdicts=[verdict],
        notes=notes,
    )


# ---------------------------------------------------------------------------
# inequality battery


def _grid_verdict(name: str, cells: list[dict], direction: str) -> Verdict:
    """Aggregate per-cell one-sided checks into one verdict.

    direction "upper": empirical must not significantly exceed the bound
    (wilson lower at 3 sigma stays <= bound).  direction "lower": empirical
    must not fall significantly below (wilson upper at 3 sigma stays >=
    bound).  The verdict reports the worst cell.
    """
    worst = None
    worst_margin = math.inf
    for cell in cells:
        if direction == "upper":
            margin = cell["bound"] - cell["stat"]
        else:
            margin = cell["stat"] - cell["bound"]
        if margin < worst_margin:
            worst_margin = margin
            worst = cell
    passed = worst_margin >= 0.0
    side = "empirical-3sigma" if direction == "upper" else "empirical+3sigma"
    return Verdict(
        name=name,
        passed=passed,
        lhs_label=side,
        lhs_value=worst["stat"],
        rhs_label="bound",
        rhs_value=worst["bound"],
        detail=worst["label"],
    )


def _check_sphere_cap(seed: Seed, trials: int, threads: int) -> Verdict:
    # P{|<u, v>| >= xi} >= sqrt(2/(pi m)) (1 - xi^2)^((m-1)/2) for v uniform
    # on the sphere; by rotation invariance take u = e_1.
    cells = []
    for j, m in enumerate((2, 5, 20)):
        coords = run_trials(lambda i, s: abs(float(sample_unit_sphere(m, s)[0])),
                            trials, seed.substream(j), threads)
        coords = np.array(coords)
        for xi in (0.1, 0.5, 0.9):
            count = int(np.sum(coords >= xi))
            bound = math.sqrt(2.0 / (math.pi * m)) * (1.0 - xi * xi) ** (0.5 * (m - 1))
            cells.append({
                "stat": wilson_upper(count, trials, 3.0),
                "bound": bound,
                "label": f"m={m}, xi={xi}, count={count}/{trials}",
            })
    return _grid_verdict("sphere_cap_lower", cells, direction="lower")


def _check_norm_concentration(seed: Seed, trials: int, threads: int) -> Verdict:
    # P{||X|| >= Q sqrt(n) + t} <= exp(-t^2/2) for the centered unit ensemble
    m, n = 10, 20
    q_est, _ = estimate_q(m, n, 2000, seed.substream(0), threads=threads)
    ensemble = GaussianEnsemble(center=np.zeros((m, n)), sigma=1.0)
    norms, _ = _extreme_singular_values(ensemble, trials, seed.substream(1), threads)
    cells = []
    for t in (0.5, 1.0, 2.0):
        threshold = q_est * math.sqrt(n) + t
        count = int(np.sum(norms >= threshold))
        cells.append({
            "stat": wilson_lower(count, trials, 3.0),
            "bound": math.exp(-0.5 * t * t),
            "label": f"m={m}, n={n}, t={t}, count={count}/{trials}",
        })
    return _grid_verdict("norm_concentration", cells, direction="upper")


def _check_max_chi(seed: Seed, threads: int) -> Verdict:
    # E(max_i r_i) <= max_i sqrt(f_i) + sqrt(2 ln n) + 1 for r_i chi with
    # f_i degrees of freedom; grid f_i = i, i = 1..50, 2000 trials
    n_vars = 50
    trials = 2000

    def one(i, sub):
        rng = sub.generator()
        best = 0.0
        for k in range(1, n_vars + 1):
            z = standard_normals(rng, k)
            r = math.sqrt(float(np.dot(z, z)))
            if r > best:
                best = r
        return best

    maxima = np.array(run_trials(one, trials, seed, threads))
    bound = math.sqrt(n_vars) + math.sqrt(2.0 * math.log(n_vars)) + 1.0
    mean = float(maxima.mean())
    return Verdict(
        name="max_chi_mean",
        passed=mean <= bound,
        lhs_label="sample mean of max chi",
        lhs_value=mean,
        rhs_label="sqrt(max f) + sqrt(2 ln n) + 1",
        rhs_value=bound,
        detail=f"{trials} trials, f_i = 1..{n_vars}",
    )


def _check_noncentered_norm_tail(seed: Seed, trials: int, threads: int) -> Verdict:
    # P{||A|| >= Q sigma sqrt(n) + t + 1} <= exp(-t^2/(2 sigma^2)) for
    # A ~ N(center, sigma^2 I) with ||center|| <= 1
    m, n = 10, 20
    q_est, _ = estimate_q(m, n, 2000, seed.substream(0), threads=threads)
    cells = []
    stream = 1
    for center_name, center in (("zero", np.zeros((m, n))), ("ones-unit", make_ones_center(m, n))):
        for sigma in (1.0, 0.5):
            ensemble = GaussianEnsemble(center=center, sigma=sigma)
            norms, _ = _extreme_singular_values(ensemble, trials, seed.substream(stream), threads)
            stream += 1
            for t in (1.0, 2.0):
                threshold = q_est * sigma * math.sqrt(n) + t + 1.0
                count = int(np.sum(norms >= threshold))
                cells.append({
                    "stat": wilson_lower(count, trials, 3.0),
                    "bound": math.exp(-0.5 * t * t / (sigma * sigma)),
                    "label": f"center={center_name}, sigma={sigma}, t={t}, count={count}/{trials}",
                })
    return _grid_verdict("noncentered_norm_tail", cells, direction="upper")


def _check_pinv_tail(seed: Seed, trials: int, threads: int) -> Verdict:
    # P{||pinv(A)|| >= t/(1-lam)} <= c(lam) (e/(sigma sqrt(n) t))^((1-lam) n)
    m, n = 10, 15
    cells = []
    stream = 0
    for center_name, center in (("zero", np.zeros((m, n))), ("ones-unit", make_ones_center(m, n))):
        for sigma, t_grid in ((1.0, (1.5, 2.0, 3.0)), (0.5, (3.0, 4.0, 6.0))):
            ctx = bounds.BoundContext(m=m, n=n, sigma=sigma, lambda_mode="theorem")
            ensemble = GaussianEnsemble(center=center, sigma=sigma)
            _, smin = _extreme_singular_values(ensemble, trials, seed.substream(stream), threads)
            stream += 1
            pinv_norms = 1.0 / smin
            for t in t_grid:
                threshold = t / (1.0 - ctx.lam)
                count = int(np.sum(pinv_norms >= threshold))
                cells.append({
                    "stat": wilson_lower(count, trials, 3.0),
                    "bound": bounds.pinv_tail_bound(ctx, t),
                    "label": f"center={center_name}, sigma={sigma}, t={t}, count={count}/{trials}",
                })
    return _grid_verdict("pinv_norm_tail", cells, direction="upper")


def _check_pinv_directional(seed: Seed, trials: int, threads: int) -> Verdict:
    # P{||pinv(A) v|| >= xi} <= directional bound, both for v = e_m and for
    # a fresh uniform v each trial (the bound is uniform over v)
    m, n = 10, 15
    sigma = 1.0
    xi_grid = (0.8, 1.0, 1.5)
    cells = []
    stream = 0
    for center_name, center in (("zero", np.zeros((m, n))), ("ones-unit", make_ones_center(m, n))):
        ensemble = GaussianEnsemble(center=center, sigma=sigma)
        for v_mode in ("e_m", "random"):
            def one(i, sub):
                a = sample_gaussian_matrix(ensemble, sub.substream(0))
                fac = svd(a)
                if v_mode == "e_m":
                    v = np.zeros(m)
                    v[m - 1] = 1.0
                else:
                    v = sample_unit_sphere(m, sub.substream(1))
                coeff = fac.left_vectors.T @ v
                return float(np.linalg.norm(coeff / fac.singular_values))

            norms = np.array(run_trials(one, trials, seed.substream(stream), threads))
            stream += 1
            for xi in xi_grid:
                count = int(np.sum(norms >= xi))
                cells.append({
                    "stat": wilson_lower(count, trials, 3.0),
                    "bound": bounds.pinv_directional_tail_bound(m, n, sigma, xi),
                    "label": f"center={center_name}, v={v_mode}, xi={xi}, count={count}/{trials}",
                })
    return _grid_verdict("pinv_directional_tail", cells, direction="upper")


def _check_lastcol_identity(seed: Seed, threads: int) -> Verdict:
    # ||pinv(A) e_m|| * ||component of last row orthogonal to the others|| = 1
    from .linalg import pseudo_inverse, row_complement

    shapes = ((2, 4), (5, 8), (10, 15))
    count = 1000

    def one(i, sub):
        m, n = shapes[i % len(shapes)]
        ensemble = GaussianEnsemble(center=np.zeros((m, n)), sigma=1.0)
        a = sample_gaussian_matrix(ensemble, sub)
        _, perp_norm = row_complement(a)
        pinv_col = pseudo_inverse(a)[:, m - 1]
        return abs(float(np.linalg.norm(pinv_col)) * perp_norm - 1.0)

    errs = run_trials(one, count, seed, threads)
    worst = max(errs)
    return Verdict(
        name="pinv_lastcol_identity",
        passed=worst <= 1e-8,
        lhs_label="max |product - 1|",
        lhs_value=worst,
        rhs_label="tolerance",
        rhs_value=1e-8,
        detail=f"{count} matrices over shapes {shapes}",
    )


def _check_weakest_direction(seed: Seed, threads: int) -> Verdict:
    # ||pinv(A) v|| >= ||pinv(A)|| |<u, v>| with u the weakest left direction,
    # and equality at v = u
    from .linalg import sharpest_direction, svd_tolerance

    m, n = 10, 15
    pairs = 200
    ensemble = GaussianEnsemble(center=np.zeros((m, n)), sigma=1.0)

    def one(i, sub):
        a = sample_gaussian_matrix(ensemble, sub.substream(0))
        fac = svd(a)
        s = fac.singular_values
        pinv_norm = 1.0 / float(s[-1])
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            u = sharpest_direction(a)
        v = sample_unit_sphere(m, sub.substream(1))
        lhs = float(np.linalg.norm((fac.left_vectors.T @ v) / s))
        rhs = pinv_norm * abs(float(u @ v))
        slack = lhs - rhs
        eq_err = abs(float(np.linalg.norm((fac.left_vectors.T @ u) / s)) - pinv_norm)
        return slack, eq_err

    results = run_trials(one, pairs, seed, threads)
    worst_slack = min(r[0] for r in results)
    worst_eq = max(r[1] for r in results)
    tol = svd_tolerance(m, n)
    passed = worst_slack >= -1e-10 and worst_eq <= tol * 10.0
    return Verdict(
        name="weakest_direction_inequality",
        passed=passed,
        lhs_label="min(||pinv v|| - ||pinv|| |u.v|)",
        lhs_value=worst_slack,
        rhs_label="equality residual at v=u (max)",
        rhs_value=worst_eq,
        detail=f"{pairs} (matrix, direction) pairs at m={m}, n={n}",
    )


def verify_inequality_suite(seed: Seed, trials: int = 10000, threads: int = 1) -> ExperimentReport:
    """Run the whole inequality battery and aggregate one verdict per
    inequality.  Probabilistic checks are one-sided with 3-sigma Wilson
    slack; identities are checked to fixed tolerances."""
    if trials < 1000:
        raise DomainError(f"battery needs at least 1000 trials, got {trials}")
    verdicts = [
        _check_sphere_cap(seed.substream(0), trials, threads),
        _check_norm_concentration(seed.substream(1), trials, threads),
        _check_max_chi(seed.substream(2), threads),
        _check_noncentered_norm_tail(seed.substream(3), trials, threads),
        _check_pinv_tail(seed.substream(4), trials, threads),
        _check_pinv_directional(seed.substream(5), trials, threads),
        _check_lastcol_identity(seed.substream(6), threads),
        _check_weakest_direction(seed.substream(7), threads),
    ]
    return ExperimentReport(
        command="verify",
        config={
            "trials": trials,
            "seed_master": seed.master,
            "seed_stream": seed.stream_index,
        },
        verdicts=verdicts,
        notes=[
            "one-sided checks: a bound fails only when the empirical estimate "
            "contradicts it by more than 3 sigma (Wilson score)",
        ],
    )
