"""Compiled kernels for the two-phase SVD.

Phase 1 reduces a wide (m <= n) matrix to lower-bidiagonal form with
alternating right/left Householder reflectors.  Phase 2 runs implicit-shift
QR with deflation on the bidiagonal until every off-diagonal entry is
negligible.  Both phases optionally accumulate the orthogonal factors; the
values-only path skips all accumulator work and is the one the Monte Carlo
drivers hit in a tight loop.
"""

import numpy as np
from numba import njit

_EPS = float(np.finfo(np.float64).eps)
# relative deflation threshold for off-diagonal entries
_DEFLATE = 100.0 * _EPS
# below this an entry is zero no matter what its neighbours look like
_TINY = 1e-290


@njit(cache=True, nogil=True)
def _givens(a, b):
    # c*a + s*b = r,  -s*a + c*b = 0,  c^2 + s^2 = 1
    if b == 0.0:
        return 1.0, 0.0, a
    if a == 0.0:
        return 0.0, 1.0, b
    r = np.hypot(a, b)
    return a / r, b / r, r


@njit(cache=True, nogil=True)
def bidiag_reduce(A, U, Vt, want_uv):
    """Overwrite A (m x n, m <= n) while extracting its lower bidiagonal:
    d[k] = B[k, k] >= 0 and e[k] = B[k+1, k] >= 0.

    When want_uv, U and Vt must be identity matrices of size m and n; the
    invariant A_original = U @ B @ Vt then holds on exit (B padded with zero
    columns to m x n).  Entries of A outside the bidiagonal band are left as
    garbage: callers must use only the returned (d, e).
    """
    m, n = A.shape
    d = np.zeros(m)
    e = np.zeros(max(m - 1, 0))
    w = np.empty(n)
    tmp = np.empty(n)

    for k in range(m):
        # right reflector: collapse row k onto the diagonal
        norm2 = 0.0
        for j in range(k, n):
            norm2 += A[k, j] * A[k, j]
        alpha = np.sqrt(norm2)
        if alpha > 0.0:
            x0 = A[k, k]
            beta = alpha if x0 >= 0.0 else -alpha
            # w = (x + beta*e1)/||.||; I - 2ww^T maps x to -beta*e1
            vnorm2 = norm2 + 2.0 * x0 * beta + beta * beta
            if vnorm2 > 0.0:
                inv = 1.0 / np.sqrt(vnorm2)
                w[k] = (x0 + beta) * inv
                for j in range(k + 1, n):
                    w[j] = A[k, j] * inv
                for i in range(k, m):
                    dot = 0.0
                    for j in range(k, n):
                        dot += A[i, j] * w[j]
                    dot *= 2.0
                    for j in range(k, n):
                        A[i, j] -= dot * w[j]
                if want_uv:
                    for i in range(n):
                        tmp[i] = 0.0
                    for j in range(k, n):
                        wj = w[j]
                        for i in range(n):
                            tmp[i] += wj * Vt[j, i]
                    for j in range(k, n):
                        wj = 2.0 * w[j]
                        for i in range(n):
                            Vt[j, i] -= wj * tmp[i]
            if A[k, k] < 0.0:
                # flip column k so the diagonal entry is nonnegative
                for i in range(k, m):
                    A[i, k] = -A[i, k]
                if want_uv:
                    for i in range(n):
                        Vt[k, i] = -Vt[k, i]
        d[k] = A[k, k]

        if k >= m - 1:
            continue
        # left reflector: collapse column k below the subdiagonal
        norm2 = 0.0
        for i in range(k + 1, m):
            norm2 += A[i, k] * A[i, k]
        alpha = np.sqrt(norm2)
        if alpha > 0.0:
            x0 = A[k + 1, k]
            beta = alpha if x0 >= 0.0 else -alpha
            vnorm2 = norm2 + 2.0 * x0 * beta + beta * beta
            if vnorm2 > 0.0:
                inv = 1.0 / np.sqrt(vnorm2)
                w[k + 1] = (x0 + beta) * inv
                for i in range(k + 2, m):
                    w[i] = A[i, k] * inv
                for j in range(k, n):
                    tmp[j] = 0.0
                for i in range(k + 1, m):
                    wi = w[i]
                    for j in range(k, n):
                        tmp[j] += wi * A[i, j]
                for i in range(k + 1, m):
                    wi = 2.0 * w[i]
                    for j in range(k, n):
                        A[i, j] -= wi * tmp[j]
                if want_uv:
                    for i in range(m):
                        dot = 0.0
                        for j in range(k + 1, m):
                            dot += U[i, j] * w[j]
                        dot *= 2.0
                        for j in range(k + 1, m):
                            U[i, j] -= dot * w[j]
            if A[k + 1, k] < 0.0:
                for j in range(k, n):
                    A[k + 1, j] = -A[k + 1, j]
                if want_uv:
                    for i in range(m):
                        U[i, k + 1] = -U[i, k + 1]
        e[k] = A[k + 1, k]

    return d, e


@njit(cache=True, nogil=True)
def _qr_sweep(d, e, Pt, Qt, want_uv, lo, hi):
    # one implicit-shift sweep on the upper-bidiagonal block [lo, hi]
    t11 = d[hi - 1] * d[hi - 1]
    if hi - 1 > lo:
        t11 += e[hi - 2] * e[hi - 2]
    t12 = d[hi - 1] * e[hi - 1]
    t22 = d[hi] * d[hi] + e[hi - 1] * e[hi - 1]
    # Wilkinson shift from the trailing 2x2 of B^T B
    delta = 0.5 * (t11 - t22)
    root = np.sqrt(delta * delta + t12 * t12)
    denom = delta + root if delta >= 0.0 else delta - root
    mu = t22 if denom == 0.0 else t22 - (t12 * t12) / denom

    y = d[lo] * d[lo] - mu
    z = d[lo] * e[lo]
    for k in range(lo, hi):
        # right rotation on columns (k, k+1)
        c, s, r = _givens(y, z)
        if k > lo:
            e[k - 1] = r
        f = c * d[k] + s * e[k]
        e[k] = -s * d[k] + c * e[k]
        d[k] = f
        bulge = s * d[k + 1]
        d[k + 1] = c * d[k + 1]
        if want_uv:
            for i in range(Qt.shape[1]):
                t = c * Qt[k, i] + s * Qt[k + 1, i]
                Qt[k + 1, i] = -s * Qt[k, i] + c * Qt[k + 1, i]
                Qt[k, i] = t
        # left rotation on rows (k, k+1) kills the bulge
        c, s, r = _givens(d[k], bulge)
        d[k] = r
        f = c * e[k] + s * d[k + 1]
        d[k + 1] = -s * e[k] + c * d[k + 1]
        e[k] = f
        if k < hi - 1:
            y = e[k]
            z = s * e[k + 1]
            e[k + 1] = c * e[k + 1]
        if want_uv:
            for i in range(Pt.shape[1]):
                t = c * Pt[k, i] + s * Pt[k + 1, i]
                Pt[k + 1, i] = -s * Pt[k, i] + c * Pt[k + 1, i]
                Pt[k, i] = t


@njit(cache=True, nogil=True)
def _kill_row(d, e, Pt, want_uv, i, hi):
    # d[i] == 0: rotate rows (j, i) for j > i to annihilate e[i] and the
    # fill-in it produces along row i
    f = e[i]
    e[i] = 0.0
    for j in range(i + 1, hi + 1):
        c, s, r = _givens(d[j], f)
        d[j] = r
        if j < hi:
            f = -s * e[j]
            e[j] = c * e[j]
        if want_uv:
            for t in range(Pt.shape[1]):
                tmp = c * Pt[j, t] + s * Pt[i, t]
                Pt[i, t] = -s * Pt[j, t] + c * Pt[i, t]
                Pt[j, t] = tmp


@njit(cache=True, nogil=True)
def _kill_col(d, e, Qt, want_uv, lo, hi):
    # d[hi] == 0: rotate columns (j, hi) upward to annihilate e[hi-1]
    f = e[hi - 1]
    e[hi - 1] = 0.0
    for j in range(hi - 1, lo - 1, -1):
        c, s, r = _givens(d[j], f)
        d[j] = r
        if j > lo:
            f = -s * e[j - 1]
            e[j - 1] = c * e[j - 1]
        if want_uv:
            for t in range(Qt.shape[1]):
                tmp = c * Qt[j, t] + s * Qt[hi, t]
                Qt[hi, t] = -s * Qt[j, t] + c * Qt[hi, t]
                Qt[j, t] = tmp


@njit(cache=True, nogil=True)
def bidiag_qr(d, e, Pt, Qt, want_uv, max_sweeps):
    """Diagonalize the upper bidiagonal (d, e) in place.

    When want_uv, Pt and Qt must be identity matrices; on exit
    B_original = Pt^T @ diag(d) @ Qt.  Output d is nonnegative and sorted
    nonincreasing.  Returns the number of sweeps used, or -1 when the
    iteration hits max_sweeps without deflating everything.
    """
    p = d.shape[0]
    sweeps = 0
    if p > 1:
        while True:
            bnorm = 0.0
            for i in range(p):
                if np.abs(d[i]) > bnorm:
                    bnorm = np.abs(d[i])
            for i in range(p - 1):
                if np.abs(e[i]) > bnorm:
                    bnorm = np.abs(e[i])
            # neighbour-relative test keeps tiny values accurate; the
            # band-norm absolute test clears rounding-noise plateaus that
            # the relative test can never deflate
            for i in range(p - 1):
                if np.abs(e[i]) <= _DEFLATE * (np.abs(d[i]) + np.abs(d[i + 1])) \
                        or np.abs(e[i]) <= _DEFLATE * bnorm \
                        or np.abs(e[i]) <= _TINY * max(bnorm, 1.0):
                    e[i] = 0.0
            hi = p - 1
            while hi > 0 and e[hi - 1] == 0.0:
                hi -= 1
            if hi == 0:
                break
            lo = hi - 1
            while lo > 0 and e[lo - 1] != 0.0:
                lo -= 1
            # exact zeros on the diagonal stall the shifted sweep; rotate
            # them away instead
            handled = False
            if d[hi] == 0.0:
                _kill_col(d, e, Qt, want_uv, lo, hi)
                handled = True
            else:
                for i in range(lo, hi):
                    if d[i] == 0.0:
                        _kill_row(d, e, Pt, want_uv, i, hi)
                        handled = True
                        break
            if handled:
                continue
            _qr_sweep(d, e, Pt, Qt, want_uv, lo, hi)
            sweeps += 1
            if sweeps > max_sweeps:
                return -1

    for i in range(p):
        if d[i] < 0.0:
            d[i] = -d[i]
            if want_uv:
                for t in range(Pt.shape[1]):
                    Pt[i, t] = -Pt[i, t]

    order = np.argsort(-d)
    ds = d.copy()
    for i in range(p):
        d[i] = ds[order[i]]
    if want_uv:
        Ps = Pt.copy()
        Qs = Qt.copy()
        for i in range(p):
            for t in range(Pt.shape[1]):
                Pt[i, t] = Ps[order[i], t]
                Qt[i, t] = Qs[order[i], t]
    return sweeps
