"""Reproducible sampling for Gaussian matrix ensembles.

All randomness flows through ``Seed``: a (master, stream_index) pair hashed
into a PCG64 state.  Substreams derived with ``Seed.substream`` are what make
multi-threaded experiment drivers deterministic; trial i always sees the same
bits no matter which thread runs it.

Normal variates use inverse-transform sampling on centered 53-bit uniforms
rather than the generator's native ziggurat, so a stream's output is a pure
function of the integer draw sequence: u = (j + 0.5) / 2^53 never touches 0
or 1 and ndtri(u) is always finite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import DimensionError, DomainError
from .linalg import BidiagonalForm, as_matrix

__all__ = [
    "GaussianEnsemble",
    "Seed",
    "sample_bidiagonal_model",
    "sample_chi",
    "sample_gaussian_matrix",
    "sample_unit_sphere",
    "standard_normals",
]

_MASK = (1 << 64) - 1
# direct sum of squared normals below this dof; gamma sampling above
_CHI_DIRECT_LIMIT = 64


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def mix64(a: int, b: int) -> int:
    """Order-sensitive 64-bit hash of two nonnegative integers."""
    return _splitmix64(_splitmix64(a & _MASK) ^ (b & _MASK))


@dataclass(frozen=True)
class Seed:
    """Addressable source of randomness.

    ``generator()`` yields a fresh PCG64-backed generator every call, always
    in the same state.  ``substream(i)`` derives an independent child seed;
    children of distinct (master, stream_index, i) never share a stream.
    """

    master: int
    stream_index: int = 0

    def __post_init__(self):
        if not isinstance(self.master, int) or not isinstance(self.stream_index, int):
            raise DomainError("seed components must be integers")
        if self.master < 0 or self.stream_index < 0:
            raise DomainError("seed components must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(mix64(self.master, self.stream_index)))

    def substream(self, i: int) -> "Seed":
        if i < 0:
            raise DomainError("substream index must be nonnegative")
        return Seed(master=mix64(self.master, self.stream_index), stream_index=i)


def standard_normals(rng: np.random.Generator, shape) -> np.ndarray:
    """N(0, 1) variates by inverse CDF on centered 53-bit uniforms."""
    j = rng.integers(0, 1 << 53, size=shape, dtype=np.uint64)
    u = (j.astype(np.float64) + 0.5) * (2.0 ** -53)
    return ndtri(u)


@dataclass(frozen=True)
class GaussianEnsemble:
    """Matrix law center + sigma * G with G an i.i.d. standard normal m x n.

    sigma = 0 is the point mass at the center, which lets the same driver
    evaluate deterministic matrices.
    """

    center: np.ndarray
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_matrix(self.center))
        object.__setattr__(self, "sigma", float(self.sigma))
        if not np.isfinite(self.sigma) or self.sigma < 0.0:
            raise DomainError(f"sigma must be finite and >= 0, got {self.sigma}")

    @property
    def m(self) -> int:
        return int(self.center.shape[0])

    @property
    def n(self) -> int:
        return int(self.center.shape[1])


def sample_gaussian_matrix(ensemble: GaussianEnsemble, seed: Seed) -> np.ndarray:
    """One draw from the ensemble."""
    if ensemble.sigma == 0.0:
        return ensemble.center.copy()
    noise = standard_normals(seed.generator(), (ensemble.m, ensemble.n))
    return ensemble.center + ensemble.sigma * noise


def _chi(rng: np.random.Generator, k: int) -> float:
    # chi_k: length of a k-dimensional standard normal vector
    if k <= _CHI_DIRECT_LIMIT:
        z = standard_normals(rng, k)
        return float(np.sqrt(np.dot(z, z)))
    return float(np.sqrt(2.0 * rng.standard_gamma(0.5 * k)))


def sample_chi(k: int, seed: Seed) -> float:
    if k < 1:
        raise DomainError(f"chi needs at least one degree of freedom, got {k}")
    return _chi(seed.generator(), k)


def sample_bidiagonal_model(m: int, n: int, seed: Seed) -> BidiagonalForm:
    """Lower-bidiagonal band distributed like the reduction of an m x n
    standard Gaussian matrix (m <= n): diagonal entries are chi with
    n, n-1, ..., n-m+1 degrees of freedom and subdiagonal entries chi with
    m-1, ..., 1, drawn in band order.
    """
    if m < 1 or n < m:
        raise DimensionError(f"band model needs 1 <= m <= n, got m={m}, n={n}")
    rng = seed.generator()
    d = np.empty(m)
    e = np.empty(max(m - 1, 0))
    for k in range(m):
        d[k] = _chi(rng, n - k)
        if k < m - 1:
            e[k] = _chi(rng, m - 1 - k)
    return BidiagonalForm(diagonal=d, subdiagonal=e, cols=n)


def sample_unit_sphere(m: int, seed: Seed) -> np.ndarray:
    """Uniform point on the unit sphere in R^m."""
    if m < 1:
        raise DimensionError(f"dimension must be positive, got {m}")
    rng = seed.generator()
    while True:
        v = standard_normals(rng, m)
        norm = np.linalg.norm(v)
        if norm > 0.0:
            return v / norm
