import math

import numpy as np
import pytest

import pinvcond as pc
from pinvcond.errors import (
    DegenerateSpanError,
    DimensionError,
    DomainError,
    MultiplicityWarning,
    RankDeficiencyError,
)
from pinvcond.linalg import BidiagonalForm, as_matrix, svd_tolerance

import oracles

RNG = np.random.default_rng(20240811)


def random_shapes(count, lo=1, hi=12):
    rng = np.random.default_rng(7)
    return [(int(rng.integers(lo, hi + 1)), int(rng.integers(lo, hi + 1)))
            for _ in range(count)]


# --- singular values ---------------------------------------------------------

def test_singular_values_diagonal_exact():
    s = pc.singular_values([[3.0, 0.0], [0.0, 4.0]])
    assert np.allclose(s, [4.0, 3.0], rtol=0, atol=1e-15)


def test_singular_values_match_charpoly_oracle_2x3():
    A = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    # Gram matrix [[14, 32], [32, 77]]: roots of x^2 - 91 x + 54
    coeffs = oracles.charpoly(A @ A.T)
    assert coeffs == pytest.approx([1.0, -91.0, 54.0], abs=1e-9)
    expected = oracles.singular_values_via_charpoly(A)
    got = pc.singular_values(A)
    assert got == pytest.approx(expected, rel=1e-13)


def test_singular_values_match_charpoly_oracle_3x4():
    A = np.array([[1.0, 0.0, 1.0, 0.0],
                  [0.0, 2.0, 0.0, 1.0],
                  [1.0, 1.0, 1.0, 1.0]])
    expected = oracles.singular_values_via_charpoly(A)
    got = pc.singular_values(A)
    assert got == pytest.approx(expected, rel=1e-12)


def test_singular_values_match_numpy_on_random_shapes():
    for m, n in random_shapes(60):
        A = RNG.normal(size=(m, n))
        got = pc.singular_values(A)
        want = np.linalg.svd(A, compute_uv=False)
        scale = max(want[0], 1.0)
        assert np.max(np.abs(got - want)) <= svd_tolerance(m, n) * scale
        assert np.all(np.diff(got) <= 1e-12 * scale)  # nonincreasing
        assert np.all(got >= 0.0)


def test_singular_values_rank_one_constant_matrix():
    # a plateau of equal-magnitude rounding noise in the band must deflate
    for m, n in [(10, 15), (20, 60), (50, 200)]:
        C = pc.make_ones_center(m, n)
        s = pc.singular_values(C)
        assert s[0] == pytest.approx(1.0, abs=1e-12)
        assert np.all(s[1:] <= 1e-12)


def test_singular_values_low_rank_and_graded():
    rng = np.random.default_rng(3)
    for _ in range(40):
        m, n = int(rng.integers(2, 15)), int(rng.integers(2, 15))
        r = int(rng.integers(1, min(m, n) + 1))
        A = (rng.normal(size=(m, r)) * 10.0 ** rng.integers(-9, 4, size=r)) @ rng.normal(size=(r, n))
        got = pc.singular_values(A)
        want = np.linalg.svd(A, compute_uv=False)
        assert np.max(np.abs(got - want)) <= 1e-12 * max(want[0], 1e-300)


def test_singular_values_zero_matrix():
    s = pc.singular_values(np.zeros((3, 5)))
    assert np.all(s == 0.0)


# --- full decomposition ------------------------------------------------------

@pytest.mark.parametrize("m,n", [(1, 1), (1, 7), (7, 1), (2, 3), (3, 2),
                                 (5, 5), (4, 9), (9, 4), (11, 12)])
def test_svd_factors_reconstruct_and_are_orthogonal(m, n):
    A = RNG.normal(size=(m, n))
    f = pc.svd(A)
    tol = svd_tolerance(m, n)
    assert np.max(np.abs(f.reconstruct() - A)) <= tol * max(1.0, f.singular_values[0])
    assert np.max(np.abs(f.left_vectors.T @ f.left_vectors - np.eye(m))) <= tol
    assert np.max(np.abs(f.right_vectors.T @ f.right_vectors - np.eye(n))) <= tol


def test_svd_of_tall_is_transpose_of_wide():
    A = RNG.normal(size=(8, 3))
    f = pc.svd(A)
    g = pc.svd(A.T)
    assert f.singular_values == pytest.approx(g.singular_values, rel=1e-14)
    assert np.max(np.abs(f.reconstruct() - A)) <= svd_tolerance(8, 3) * f.singular_values[0]


def test_svd_rejects_bad_input():
    with pytest.raises(DimensionError):
        pc.svd(np.ones(3))
    with pytest.raises(DimensionError):
        pc.svd(np.ones((0, 3)))
    with pytest.raises(DomainError):
        pc.svd([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(DomainError):
        pc.svd([[1.0, np.inf], [0.0, 1.0]])


# --- bidiagonal reduction ----------------------------------------------------

def test_bidiagonalize_preserves_singular_values():
    for m, n in [(1, 1), (2, 5), (6, 6), (7, 13)]:
        A = RNG.normal(size=(m, n))
        form = pc.bidiagonalize(A)
        assert form.rows == m and form.cols == n
        assert np.all(form.diagonal >= 0.0) and np.all(form.subdiagonal >= 0.0)
        want = np.linalg.svd(A, compute_uv=False)
        got = np.linalg.svd(form.to_matrix(), compute_uv=False)
        assert got == pytest.approx(want, abs=svd_tolerance(m, n) * max(want[0], 1.0))


def test_bidiagonalize_rejects_tall():
    with pytest.raises(DimensionError):
        pc.bidiagonalize(np.ones((4, 2)))


def test_bidiagonal_singular_values_matches_dense():
    form = pc.bidiagonalize(RNG.normal(size=(6, 10)))
    got = pc.bidiagonal_singular_values(form)
    want = np.linalg.svd(form.to_matrix(), compute_uv=False)
    assert got == pytest.approx(want, rel=1e-12)


def test_bidiagonal_singular_values_zero_diagonal_block():
    # d = (0, 0), e = (1,): shifted sweeps stall here; the rotation path
    # must resolve it to values (1, 0)
    form = BidiagonalForm(diagonal=np.array([0.0, 0.0]),
                          subdiagonal=np.array([1.0]), cols=3)
    got = pc.bidiagonal_singular_values(form)
    assert got == pytest.approx([1.0, 0.0], abs=1e-15)


def test_bidiagonal_form_validation():
    with pytest.raises(DimensionError):
        BidiagonalForm(diagonal=np.ones(3), subdiagonal=np.ones(3), cols=5)
    with pytest.raises(DimensionError):
        BidiagonalForm(diagonal=np.ones(4), subdiagonal=np.ones(3), cols=2)
    with pytest.raises(DomainError):
        BidiagonalForm(diagonal=np.array([1.0, -0.5]), subdiagonal=np.array([1.0]), cols=3)


# --- pseudo-inverse ----------------------------------------------------------

def test_pseudo_inverse_matches_cofactor_oracle():
    A = np.array([[1.0, 0.0, 1.0, 0.0],
                  [0.0, 2.0, 0.0, 1.0],
                  [1.0, 1.0, 1.0, 1.0]])
    want = oracles.pinv_via_cofactor(A)
    got = pc.pseudo_inverse(A)
    assert got == pytest.approx(want, abs=1e-12)


def test_pseudo_inverse_identities_hold():
    for m, n in random_shapes(30, lo=1, hi=10):
        A = RNG.normal(size=(m, n))
        kappa = np.linalg.cond(A)
        if kappa > 1e8:
            continue
        P = pc.pseudo_inverse(A)
        tol = 1e-8 * kappa
        assert np.max(np.abs(A @ P @ A - A)) <= tol
        assert np.max(np.abs(P @ A @ P - P)) <= tol
        assert np.max(np.abs((A @ P).T - A @ P)) <= tol
        assert np.max(np.abs((P @ A).T - P @ A)) <= tol


def test_pseudo_inverse_shape_and_square_inverse():
    A = RNG.normal(size=(4, 7))
    assert pc.pseudo_inverse(A).shape == (7, 4)
    B = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert pc.pseudo_inverse(B) == pytest.approx(oracles.cofactor_inverse(B), abs=1e-13)


def test_pseudo_inverse_rank_deficient_raises_with_context():
    A = np.ones((3, 5))
    with pytest.raises(RankDeficiencyError) as err:
        pc.pseudo_inverse(A)
    assert err.value.sigma_max == pytest.approx(math.sqrt(15.0), rel=1e-12)
    assert err.value.sigma_min <= err.value.tol


# --- condition number --------------------------------------------------------

def test_condition_number_matches_charpoly_oracle():
    A = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    s = oracles.singular_values_via_charpoly(A)
    assert pc.condition_number(A) == pytest.approx(s[0] / s[-1], rel=1e-12)


def test_condition_number_matches_numpy():
    for m, n in random_shapes(20, lo=2, hi=10):
        A = RNG.normal(size=(m, n))
        assert pc.condition_number(A) == pytest.approx(np.linalg.cond(A), rel=1e-10)


def test_condition_number_scale_invariant():
    A = RNG.normal(size=(5, 9))
    assert pc.condition_number(1e-7 * A) == pytest.approx(pc.condition_number(A), rel=1e-10)


def test_condition_number_gram_square_root_identity():
    for _ in range(10):
        A = RNG.normal(size=(6, 11))
        kappa = pc.condition_number(A)
        kappa_gram = pc.condition_number(A @ A.T)
        assert abs(math.sqrt(kappa_gram) - kappa) <= 1e-8 * kappa


def test_condition_number_rank_deficient_raises():
    with pytest.raises(RankDeficiencyError):
        pc.condition_number(np.ones((4, 4)))


def test_spectral_norm_of_constant_matrix():
    assert pc.spectral_norm(np.full((3, 7), 2.0)) == pytest.approx(2.0 * math.sqrt(21.0), rel=1e-13)


# --- solvers -----------------------------------------------------------------

def test_solve_least_squares_satisfies_normal_equations():
    A = RNG.normal(size=(9, 4))
    b = RNG.normal(size=9)
    x = pc.solve_least_squares(A, b)
    assert np.max(np.abs(A.T @ (A @ x - b))) <= 1e-10 * np.linalg.norm(b)
    with pytest.raises(DimensionError):
        pc.solve_least_squares(A.T, RNG.normal(size=4))
    with pytest.raises(DimensionError):
        pc.solve_least_squares(A, RNG.normal(size=5))


def test_solve_min_norm_is_exact_and_minimal():
    A = RNG.normal(size=(4, 9))
    b = RNG.normal(size=4)
    x = pc.solve_min_norm(A, b)
    assert A @ x == pytest.approx(b, abs=1e-10)
    # any other solution is longer
    z = RNG.normal(size=9)
    null_part = z - pc.pseudo_inverse(A) @ (A @ z)
    assert np.linalg.norm(x + null_part) >= np.linalg.norm(x) - 1e-12
    with pytest.raises(DimensionError):
        pc.solve_min_norm(A.T, b)


# --- row complement and weakest direction ------------------------------------

def test_row_complement_hand_case():
    A = np.array([[1.0, 0.0, 0.0],
                  [0.0, 1.0, 0.0],
                  [1.0, 2.0, 3.0]])
    v, norm = pc.row_complement(A)
    assert v == pytest.approx([0.0, 0.0, 3.0], abs=1e-14)
    assert norm == pytest.approx(3.0, rel=1e-14)


def test_row_complement_orthogonality_property():
    A = RNG.normal(size=(5, 8))
    v, norm = pc.row_complement(A)
    assert np.max(np.abs(A[:4] @ v)) <= 1e-10 * np.linalg.norm(A[4])
    proj = A[4] - v
    # the complement reassembles the last row
    assert A[4] == pytest.approx(proj + v, abs=1e-12)
    assert norm == pytest.approx(np.linalg.norm(v), rel=1e-14)


def test_row_complement_last_row_in_span_is_legal():
    A = np.array([[1.0, 0.0, 0.0],
                  [0.0, 1.0, 0.0],
                  [2.0, -3.0, 0.0]])
    v, norm = pc.row_complement(A)
    assert norm <= 1e-12


def test_row_complement_rejects_degenerate_leading_rows():
    A = np.array([[1.0, 0.0, 0.0],
                  [2.0, 0.0, 0.0],
                  [0.0, 1.0, 0.0]])
    with pytest.raises(DegenerateSpanError):
        pc.row_complement(A)
    with pytest.raises(DegenerateSpanError):
        pc.row_complement(np.array([[0.0, 0.0], [1.0, 1.0]]))
    with pytest.raises(DimensionError):
        pc.row_complement(np.ones((3, 2)))


def test_pinv_lastcol_product_identity():
    # ||pinv(A) e_m|| * ||complement of last row|| = 1
    for _ in range(20):
        A = RNG.normal(size=(4, 7))
        v, norm = pc.row_complement(A)
        e_m = np.zeros(4)
        e_m[-1] = 1.0
        product = np.linalg.norm(pc.pseudo_inverse(A) @ e_m) * norm
        assert abs(product - 1.0) <= 1e-8


def test_sharpest_direction_diagonal_case():
    A = np.array([[3.0, 0.0, 0.0], [0.0, 0.5, 0.0]])
    u = pc.sharpest_direction(A)
    assert u == pytest.approx([0.0, 1.0], abs=1e-14)


def test_sharpest_direction_attains_pinv_norm():
    A = RNG.normal(size=(5, 9))
    u = pc.sharpest_direction(A)
    P = pc.pseudo_inverse(A)
    pinv_norm = pc.spectral_norm(P)
    assert np.linalg.norm(P @ u) == pytest.approx(pinv_norm, rel=1e-10)
    # directional lower bound, equality at v = u
    for _ in range(10):
        v = RNG.normal(size=5)
        v /= np.linalg.norm(v)
        assert np.linalg.norm(P @ v) >= pinv_norm * abs(u @ v) - 1e-10


def test_sharpest_direction_warns_on_repeated_minimum():
    with pytest.warns(MultiplicityWarning):
        pc.sharpest_direction(np.eye(3))


# --- io and validation -------------------------------------------------------

def test_matrix_csv_roundtrip_is_lossless(tmp_path):
    A = RNG.normal(size=(4, 6)) * 10.0 ** RNG.integers(-8, 9, size=(4, 6))
    path = tmp_path / "mat.csv"
    pc.write_matrix_csv(A, path)
    B = pc.read_matrix_csv(path)
    assert np.array_equal(A, B)
    text = path.read_bytes()
    assert b"\r" not in text


def test_as_matrix_validation():
    assert as_matrix([[1, 2], [3, 4]]).dtype == np.float64
    with pytest.raises(DimensionError):
        as_matrix([1.0, 2.0])
    with pytest.raises(DomainError):
        as_matrix([[1.0, float("nan")]])
