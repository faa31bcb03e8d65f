"""Conjugate gradients for symmetric positive-definite systems, with the
iteration accounting needed to test condition-number complexity claims.

The caller's accuracy target eps is relative Euclidean error of the
solution, which a residual test alone cannot certify.  The stopping rule is
therefore a conservative surrogate: relative residual <= eps / sqrt(kappa)
when a condition estimate is supplied, else <= eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import DimensionError, DomainError, IndefiniteMatrixError
from .linalg import as_matrix, singular_values
from .reports import ExperimentReport, Verdict
from .sampling import GaussianEnsemble, Seed, sample_gaussian_matrix, sample_unit_sphere
from .experiments import run_trials

__all__ = ["CgRunStats", "cg_solve", "cg_experiment"]


@dataclass(frozen=True)
class CgRunStats:
    """Accounting for one solve.

    residual_history holds the relative residual at the start of every
    iteration actually performed (strictly positive: a converged system
    never enters another iteration).  cost_estimate counts the leading
    6 n^2 arithmetic term per iteration.  relative_error and energy_history
    are filled only when the true solution was supplied.
    """

    iterations: int
    residual_history: tuple
    converged: bool
    cost_estimate: float
    relative_error: float | None = None
    energy_history: tuple = ()


def cg_solve(P, c, eps: float, kappa_est: float | None = None, x_true=None,
             max_iter: int | None = None) -> tuple[np.ndarray, CgRunStats]:
    """Hestenes-Stiefel conjugate gradients on P x = c from x = 0.

    P must be symmetric within 1e-10 relative.  Raises on a direction of
    nonpositive curvature (P not positive definite).  Hitting the iteration
    cap (default 4m, the floating-point slack over the exact-arithmetic
    maximum of m) returns the partial result with converged = False.
    """
    P = as_matrix(P)
    m = P.shape[0]
    if P.shape[1] != m:
        raise DimensionError(f"P must be square, got {P.shape}")
    sym_err = float(np.linalg.norm(P - P.T))
    if sym_err > 1e-10 * max(float(np.linalg.norm(P)), 1e-300):
        raise DimensionError(f"P is not symmetric: ||P - P'|| = {sym_err:.3e}")
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (m,):
        raise DimensionError(f"right-hand side must have shape ({m},), got {c.shape}")
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if kappa_est is not None and kappa_est < 1.0:
        raise DomainError(f"kappa_est must be >= 1, got {kappa_est}")
    if max_iter is None:
        max_iter = 4 * m

    tol = eps / math.sqrt(kappa_est) if kappa_est is not None else eps
    cnorm = float(np.linalg.norm(c))

    track = x_true is not None
    if track:
        x_true = np.asarray(x_true, dtype=np.float64)

    x = np.zeros(m)
    energy = []
    if track:
        e = x - x_true
        energy.append(float(e @ (P @ e)))
    if cnorm == 0.0:
        stats = CgRunStats(0, (), True, 0.0,
                           relative_error=_rel_err(x, x_true) if track else None,
                           energy_history=tuple(energy))
        return x, stats

    r = c.copy()
    p = r.copy()
    rs = float(r @ r)
    history = []
    converged = False
    k = 0
    while True:
        rel = math.sqrt(rs) / cnorm
        if rel <= tol:
            converged = True
            break
        if k >= max_iter:
            break
        history.append(rel)
        Pp = P @ p
        curv = float(p @ Pp)
        if curv <= 0.0:
            raise IndefiniteMatrixError(
                f"nonpositive curvature {curv:.3e} at iteration {k}; P is not positive definite"
            )
        alpha = rs / curv
        x += alpha * p
        r -= alpha * Pp
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
        k += 1
        if track:
            e = x - x_true
            energy.append(float(e @ (P @ e)))

    stats = CgRunStats(
        iterations=k,
        residual_history=tuple(history),
        converged=converged,
        cost_estimate=6.0 * m * m * k,
        relative_error=_rel_err(x, x_true) if track else None,
        energy_history=tuple(energy),
    )
    return x, stats


def _rel_err(x, x_true) -> float:
    denom = float(np.linalg.norm(x_true))
    diff = float(np.linalg.norm(x - x_true))
    return diff / denom if denom > 0.0 else diff


def cg_experiment(ensemble: GaussianEnsemble, eps: float, trials: int, seed: Seed,
                  threads: int = 1) -> ExperimentReport:
    """Solve P x = c for P = A A' over ensemble draws and compare iteration
    counts with the condition-number estimate.

    Per trial: kappa(A) comes from the singular values of A, kappa(P) from
    an independent symmetric eigensolve; sqrt(kappa(P)) must equal kappa(A)
    to 1e-8 relative.  The mean iteration count is compared one-sided
    against (1/2) (20.1/(1-lam)) |ln eps| with lam = m/n, the expected-
    condition plug-in of the iteration rule.
    """
    if trials < 10:
        raise DomainError(f"need at least 10 trials, got {trials}")
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    m, n = ensemble.m, ensemble.n
    if m > n:
        raise DomainError(f"the Gram system A A' needs m <= n, got m={m}, n={n}")

    def one(i, sub):
        a = sample_gaussian_matrix(ensemble, sub.substream(0))
        s = singular_values(a)
        kappa_a = float(s[0] / s[-1])
        P = a @ a.T
        eig = np.linalg.eigvalsh(P)
        kappa_p = float(eig[-1] / eig[0])
        ident_err = abs(math.sqrt(kappa_p) - kappa_a) / kappa_a
        c = sample_unit_sphere(m, sub.substream(1))
        _, stats = cg_solve(P, c, eps, kappa_est=kappa_a * kappa_a)
        return stats.iterations, kappa_a, ident_err, stats.converged

    results = run_trials(one, trials, seed, threads)
    iters = np.array([r[0] for r in results], dtype=np.float64)
    kappas = np.array([r[1] for r in results])
    ident_errs = np.array([r[2] for r in results])
    all_converged = all(r[3] for r in results)

    lam = m / n
    iter_estimate = 0.5 * bounds.expectation_bound(lam) * abs(math.log(eps))
    mean_iters = float(iters.mean())

    verdicts = [
        Verdict(
            name="sqrt_gram_condition_identity",
            passed=bool(ident_errs.max() <= 1e-8),
            lhs_label="max relative |sqrt(kappa(AA')) - kappa(A)|",
            lhs_value=float(ident_errs.max()),
            rhs_label="tolerance",
            rhs_value=1e-8,
            detail=f"{trials} trials",
        ),
        Verdict(
            name="mean_iterations_vs_estimate",
            passed=mean_iters <= iter_estimate,
            lhs_label="mean iterations",
            lhs_value=mean_iters,
            rhs_label="0.5 (20.1/(1-lam)) |ln eps|",
            rhs_value=iter_estimate,
            detail=f"lam = m/n = {lam:.6g}, eps = {eps:.3g}",
        ),
        Verdict(
            name="all_solves_converged",
            passed=all_converged,
            lhs_label="converged trials",
            lhs_value=float(sum(1 for r in results if r[3])),
            rhs_label="trials",
            rhs_value=float(trials),
            detail="iteration cap 4m",
        ),
    ]

    return ExperimentReport(
        command="cg-bench",
        config={
            "m": m,
            "n": n,
            "sigma": ensemble.sigma,
            "eps": eps,
            "trials": trials,
            "seed_master": seed.master,
            "seed_stream": seed.stream_index,
            "lambda_mode": "asymptotic",
        },
        estimates={
            "mean_iterations": mean_iters,
            "stderr_iterations": float(iters.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0,
            "mean_kappa": float(kappas.mean()),
        },
        rows=[
            {"trial": i, "iterations": int(results[i][0]), "kappa": float(results[i][1]),
             "converged": bool(results[i][3])}
            for i in range(trials)
        ],
        bounds={"iteration_estimate": iter_estimate},
        verdicts=verdicts,
    )
