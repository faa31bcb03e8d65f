"""Independent verification primitives for test goldens.

Deliberately naive algorithms that share no code path with the library's
Householder/Givens SVD: characteristic polynomials by the Faddeev-LeVerrier
recurrence, closed-form quadratic/cubic roots, and cofactor inversion.
Accuracy is fine for the small integer matrices the tests feed them.
"""

import math

import numpy as np


def charpoly(M) -> list:
    """Coefficients [1, c1, ..., cn] of det(xI - M) via Faddeev-LeVerrier."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    assert M.shape == (n, n)
    coeffs = [1.0]
    N = np.zeros_like(M)
    for k in range(1, n + 1):
        N = M @ N + coeffs[-1] * np.eye(n)
        c = -(M @ N).trace() / k
        coeffs.append(float(c))
    return coeffs


def quadratic_roots(b, c) -> tuple:
    """Real roots of x^2 + b x + c, largest first."""
    disc = b * b - 4.0 * c
    assert disc >= 0.0
    r = math.sqrt(disc)
    return (-b + r) / 2.0, (-b - r) / 2.0


def cubic_roots(b, c, d) -> tuple:
    """All-real roots of x^3 + b x^2 + c x + d (trigonometric form),
    sorted decreasing.  Requires three real roots, as for a symmetric
    matrix's characteristic polynomial."""
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    if abs(p) < 1e-14:
        r = -np.cbrt(q)
        roots = [r + shift] * 3
    else:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]
    return tuple(sorted(roots, reverse=True))


def det_recursive(M) -> float:
    """Cofactor expansion along the first row."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    if n == 1:
        return float(M[0, 0])
    total = 0.0
    for j in range(n):
        minor = np.delete(np.delete(M, 0, axis=0), j, axis=1)
        total += ((-1.0) ** j) * M[0, j] * det_recursive(minor)
    return total


def cofactor_inverse(M) -> np.ndarray:
    """Inverse as adjugate / determinant."""
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    det = det_recursive(M)
    assert det != 0.0
    cof = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            cof[i, j] = ((-1.0) ** (i + j)) * det_recursive(minor)
    return cof.T / det


def singular_values_via_charpoly(A) -> np.ndarray:
    """Singular values of an m x n matrix with min(m, n) <= 3, from the
    closed-form roots of the Gram matrix's characteristic polynomial."""
    A = np.asarray(A, dtype=np.float64)
    G = A @ A.T if A.shape[0] <= A.shape[1] else A.T @ A
    k = G.shape[0]
    coeffs = charpoly(G)
    if k == 1:
        eigs = (-coeffs[1],)
    elif k == 2:
        eigs = quadratic_roots(coeffs[1], coeffs[2])
    elif k == 3:
        eigs = cubic_roots(coeffs[1], coeffs[2], coeffs[3])
    else:
        raise AssertionError("oracle only handles min(m, n) <= 3")
    return np.sqrt(np.maximum(np.array(eigs), 0.0))


def pinv_via_cofactor(A) -> np.ndarray:
    """A' (A A')^{-1} for wide full-row-rank A, Gram inverse by cofactors."""
    A = np.asarray(A, dtype=np.float64)
    assert A.shape[0] <= A.shape[1]
    return A.T @ cofactor_inverse(A @ A.T)
