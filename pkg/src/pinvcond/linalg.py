"""Dense linear algebra for rectangular matrices.

Everything is built on one SVD routine: Householder reduction to a
nonnegative lower-bidiagonal band followed by implicit-shift QR on the band.
The pseudo-inverse, spectral norm, condition number, two solvers and the
worst-direction extractor are all thin layers over those factors.

Shape convention: a matrix is m x n.  Operations that are defined for wide
matrices (m <= n) transpose internally when handed a tall one, so callers
never need to special-case orientation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    DegenerateSpanError,
    DimensionError,
    DomainError,
    MultiplicityWarning,
    RankDeficiencyError,
    SvdConvergenceError,
)

__all__ = [
    "BidiagonalForm",
    "SvdFactors",
    "as_matrix",
    "bidiagonalize",
    "bidiagonal_singular_values",
    "condition_number",
    "pseudo_inverse",
    "rank_tolerance",
    "read_matrix_csv",
    "row_complement",
    "sharpest_direction",
    "singular_values",
    "solve_least_squares",
    "solve_min_norm",
    "spectral_norm",
    "svd",
    "svd_tolerance",
    "write_matrix_csv",
]

# QR sweep budget per singular value; generous, typical need is 2-3
_SWEEPS_PER_VALUE = 30

_DUMMY = np.empty((1, 1))


def svd_tolerance(m: int, n: int) -> float:
    """Absolute tolerance for orthogonality and reconstruction checks."""
    return 1e-10 * max(m, n)


def rank_tolerance(m: int, n: int) -> float:
    """sigma_min below rank_tolerance(m, n) * sigma_max counts as rank deficient."""
    return 1e-12 * max(m, n)


def as_matrix(a) -> np.ndarray:
    """Validate and convert to a float64 2-d array with finite entries."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a nonempty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class SvdFactors:
    """Full factorization a = left_vectors @ S @ right_vectors.T with S the
    m x n rectangular diagonal of ``singular_values``."""

    left_vectors: np.ndarray      # (m, m) orthogonal
    singular_values: np.ndarray   # (min(m, n),) nonnegative, nonincreasing
    right_vectors: np.ndarray     # (n, n) orthogonal, columns are the vectors

    def reconstruct(self) -> np.ndarray:
        m = self.left_vectors.shape[0]
        n = self.right_vectors.shape[0]
        k = self.singular_values.shape[0]
        out = np.zeros((m, n))
        out[:k, :k] = np.diag(self.singular_values)
        return self.left_vectors @ out @ self.right_vectors.T


@dataclass(frozen=True)
class BidiagonalForm:
    """Lower-bidiagonal band of a wide matrix: diagonal[k] at (k, k) and
    subdiagonal[k] at (k+1, k), both nonnegative; remaining cols are zero."""

    diagonal: np.ndarray
    subdiagonal: np.ndarray
    cols: int

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=np.float64)
        e = np.asarray(self.subdiagonal, dtype=np.float64)
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "subdiagonal", e)
        if d.ndim != 1 or e.ndim != 1 or d.shape[0] < 1:
            raise DimensionError("bidiagonal band must be a pair of 1-d arrays")
        if e.shape[0] != max(d.shape[0] - 1, 0):
            raise DimensionError(
                f"subdiagonal length {e.shape[0]} does not match diagonal length {d.shape[0]}"
            )
        if self.cols < d.shape[0]:
            raise DimensionError("band is wider than the matrix it came from")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("band entries must be finite")
        if np.any(d < 0.0) or np.any(e < 0.0):
            raise DomainError("band entries must be nonnegative")

    @property
    def rows(self) -> int:
        return int(self.diagonal.shape[0])

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols))
        np.fill_diagonal(out, self.diagonal)
        for k in range(self.rows - 1):
            out[k + 1, k] = self.subdiagonal[k]
        return out


def _run_qr(d, e, Pt, Qt, want_uv):
    budget = max(_SWEEPS_PER_VALUE * d.shape[0], 100)
    sweeps = _kernels.bidiag_qr(d, e, Pt, Qt, want_uv, budget)
    if sweeps < 0:
        raise SvdConvergenceError(budget)


def bidiagonalize(a) -> BidiagonalForm:
    """Reduce a wide matrix (m <= n) to its lower-bidiagonal band.

    The band has the same singular values as the input.  Tall inputs are
    rejected: callers own the transpose.
    """
    arr = as_matrix(a)
    m, n = arr.shape
    if m > n:
        raise DimensionError(f"bidiagonalize needs m <= n, got {m} x {n}; pass the transpose")
    work = np.ascontiguousarray(arr).copy()
    d, e = _kernels.bidiag_reduce(work, _DUMMY, _DUMMY, False)
    # reflector arithmetic can leave -0.0; normalize
    return BidiagonalForm(diagonal=np.abs(d), subdiagonal=np.abs(e), cols=n)


def bidiagonal_singular_values(form: BidiagonalForm) -> np.ndarray:
    """Singular values of a band without densifying it."""
    d = form.diagonal.copy()
    e = form.subdiagonal.copy()
    _run_qr(d, e, _DUMMY, _DUMMY, False)
    return d


def singular_values(a) -> np.ndarray:
    """Singular values only (no vector accumulation), nonincreasing."""
    arr = as_matrix(a)
    if arr.shape[0] > arr.shape[1]:
        arr = arr.T
    work = np.ascontiguousarray(arr).copy()
    d, e = _kernels.bidiag_reduce(work, _DUMMY, _DUMMY, False)
    _run_qr(d, e, _DUMMY, _DUMMY, False)
    return d


def svd(a) -> SvdFactors:
    """Full singular value decomposition a = U @ S @ V.T."""
    arr = as_matrix(a)
    m, n = arr.shape
    if m <= n:
        return _gk_svd(arr)
    fac = _gk_svd(np.ascontiguousarray(arr.T))
    return SvdFactors(
        left_vectors=fac.right_vectors,
        singular_values=fac.singular_values,
        right_vectors=fac.left_vectors,
    )


def _gk_svd(arr: np.ndarray) -> SvdFactors:
    m, n = arr.shape
    work = np.ascontiguousarray(arr).copy()
    U = np.eye(m)
    Vt = np.eye(n)
    d, e = _kernels.bidiag_reduce(work, U, Vt, True)
    Pt = np.eye(m)
    Qt = np.eye(m)
    _run_qr(d, e, Pt, Qt, True)
    # band = Qt.T @ diag(d) @ Pt, so fold the rotations into the reflectors
    left = U @ Qt.T
    Vt[:m, :] = Pt @ Vt[:m, :]
    return SvdFactors(left_vectors=left, singular_values=d, right_vectors=Vt.T)


def spectral_norm(a) -> float:
    """Largest singular value."""
    return float(singular_values(a)[0])


def _rank_check(s: np.ndarray, m: int, n: int) -> None:
    smax = float(s[0])
    smin = float(s[-1])
    tol = rank_tolerance(m, n) * smax
    if smax == 0.0 or smin <= tol:
        raise RankDeficiencyError(smin, smax, tol)


def pseudo_inverse(a) -> np.ndarray:
    """Moore-Penrose inverse of a full-rank m x n matrix, shape (n, m).

    Raises RankDeficiencyError when sigma_min is numerically zero relative
    to sigma_max.
    """
    arr = as_matrix(a)
    m, n = arr.shape
    fac = svd(arr)
    s = fac.singular_values
    _rank_check(s, m, n)
    k = s.shape[0]
    return (fac.right_vectors[:, :k] / s) @ fac.left_vectors[:, :k].T


def condition_number(a) -> float:
    """sigma_max / sigma_min over the min(m, n) singular values."""
    arr = as_matrix(a)
    s = singular_values(arr)
    _rank_check(s, *arr.shape)
    return float(s[0] / s[-1])


def solve_least_squares(a, b) -> np.ndarray:
    """Minimizer of ||a x - b||_2 for tall full-column-rank a (m >= n)."""
    arr = as_matrix(a)
    m, n = arr.shape
    if m < n:
        raise DimensionError(f"least squares needs m >= n, got {m} x {n}")
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape != (m,):
        raise DimensionError(f"right-hand side must have shape ({m},), got {rhs.shape}")
    return pseudo_inverse(arr) @ rhs


def solve_min_norm(a, b) -> np.ndarray:
    """Smallest-norm solution of a x = b for wide full-row-rank a (m <= n)."""
    arr = as_matrix(a)
    m, n = arr.shape
    if m > n:
        raise DimensionError(f"minimum-norm solve needs m <= n, got {m} x {n}")
    rhs = np.asarray(b, dtype=np.float64)
    if rhs.shape != (m,):
        raise DimensionError(f"right-hand side must have shape ({m},), got {rhs.shape}")
    return pseudo_inverse(arr) @ rhs


def row_complement(a) -> tuple[np.ndarray, float]:
    """Component of the last row orthogonal to the span of the rows above it.

    For an m x n input (m <= n) returns (v, ||v||) where v is the projection
    of row m-1 onto the orthogonal complement of rows 0..m-2.  The first
    m-1 rows must be linearly independent; the last row lying inside their
    span is legal and simply returns norm 0, which is the rank boundary.
    Classical Gram-Schmidt with a second reorthogonalization pass.
    """
    arr = as_matrix(a)
    m, n = arr.shape
    if m > n:
        raise DimensionError(f"row complement needs m <= n, got {m} x {n}")
    basis = np.empty((m - 1, n))
    for i in range(m - 1):
        v = arr[i].copy()
        scale = np.linalg.norm(v)
        if scale == 0.0:
            raise DegenerateSpanError(f"row {i} is zero")
        for _ in range(2):
            v -= basis[:i].T @ (basis[:i] @ v)
        nv = np.linalg.norm(v)
        if nv <= svd_tolerance(m, n) * scale:
            raise DegenerateSpanError(f"row {i} is numerically dependent on the rows above it")
        basis[i] = v / nv
    v = arr[m - 1].copy()
    for _ in range(2):
        v -= basis.T @ (basis @ v)
    return v, float(np.linalg.norm(v))


def sharpest_direction(a) -> np.ndarray:
    """Unit left singular vector for the smallest singular value.

    This is the direction in which the row action of the matrix is weakest;
    sign is fixed so the first nonnegligible coordinate is positive.  Warns
    when the smallest singular value is numerically repeated, in which case
    the returned vector is one representative of a whole subspace.
    """
    arr = as_matrix(a)
    m, n = arr.shape
    fac = svd(arr)
    s = fac.singular_values
    k = s.shape[0]
    if k >= 2 and (s[-2] - s[-1]) <= svd_tolerance(m, n) * max(float(s[0]), 1.0):
        warnings.warn(
            "smallest singular value is numerically repeated; direction is not unique",
            MultiplicityWarning,
        )
    u = fac.left_vectors[:, k - 1].copy()
    for i in range(u.shape[0]):
        if abs(u[i]) > 1e-12:
            if u[i] < 0.0:
                u = -u
            break
    return u


def write_matrix_csv(a, path) -> None:
    """Plain CSV, one row per line, 17 significant digits (lossless for float64)."""
    arr = as_matrix(a)
    np.savetxt(path, arr, fmt="%.17g", delimiter=",", newline="\n")


def read_matrix_csv(path) -> np.ndarray:
    arr = np.loadtxt(path, delimiter=",", ndmin=2)
    return as_matrix(arr)
