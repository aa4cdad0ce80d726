import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from ekr_kit.errors import DomainError, ResourceError
from ekr_kit.pseudoadjacency import schrijver_descriptor, wilson_descriptor
from ekr_kit.scheme import DenseRationalMatrix, SchemeParams
from ekr_kit.spectral import (
    certify_extremes,
    certify_matrix,
    exact_rank,
    hoffman_bound,
    nullspace_basis,
    psd_certify,
    row_sum_eigenvalue,
    solve_rational,
)

from oracles import eigenvalues, float_psd, to_float


def M(rows):
    return DenseRationalMatrix([[Fraction(x) for x in r] for r in rows])


def quad(A, v):
    n = len(v)
    return sum(v[i] * A.rows[i][j] * v[j] for i in range(n) for j in range(n))


def random_symmetric(rng, n):
    kind = rng.choice(["gram", "gram_shift", "plain"])
    if kind == "plain":
        A = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                A[i][j] = A[j][i] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
        return M(A)
    r = rng.randint(1, n)
    B = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(r)] for _ in range(n)]
    G = [[sum(B[i][s] * B[j][s] for s in range(r)) for j in range(n)] for i in range(n)]
    if kind == "gram_shift":
        d = Fraction(rng.choice([-1, 1]), rng.randint(2, 5))
        for i in range(n):
            G[i][i] += d
    return M(G)


def random_matrices(count, seed):
    rng = random.Random(seed)
    return [random_symmetric(rng, rng.randint(1, 12)) for _ in range(count)]


# -- psd_certify -------------------------------------------------------------

def test_identity_is_psd():
    c = psd_certify(DenseRationalMatrix.identity(6))
    assert c.is_psd and c.rank == 6 and all(p == 1 for p in c.pivots)


def test_all_ones_is_psd_rank_one():
    c = psd_certify(M([[1] * 7 for _ in range(7)]))
    assert c.is_psd and c.rank == 1 and c.pivots == [7 - 6]


def test_diag_negative_witness():
    c = psd_certify(M([[1, 0], [0, -1]]))
    assert c.verdict == "not_psd"
    assert c.witness == [0, 1] and c.witness_value == -1
    assert c.failure == "negative_pivot"


def test_zero_diagonal_with_nonzero_row():
    A = M([[0, 3], [3, 0]])
    c = psd_certify(A)
    assert c.verdict == "not_psd" and c.failure == "zero_pivot_nonzero_row"
    assert c.witness_value == quad(A, c.witness) == -6


def test_negative_schur_complement_witness_is_lifted():
    A = M([[2, 2, 0], [2, 1, 0], [0, 0, 5]])
    c = psd_certify(A)
    assert not c.is_psd
    assert quad(A, c.witness) == c.witness_value < 0


def test_zero_pivot_after_elimination():
    # eliminating row 0 leaves [[0, 1], [1, 0]]
    A = M([[1, 1, 1], [1, 1, 2], [1, 2, 1]])
    c = psd_certify(A)
    assert not c.is_psd and c.failure == "zero_pivot_nonzero_row"
    assert c.pivot_order == [0]
    assert quad(A, c.witness) == c.witness_value < 0


def test_rejects_asymmetric_and_bad_rule():
    with pytest.raises(DomainError):
        psd_certify(M([[1, 2], [0, 1]]))
    with pytest.raises(DomainError):
        psd_certify(DenseRationalMatrix.identity(2), pivot="random")


def test_cap():
    with pytest.raises(ResourceError):
        psd_certify(DenseRationalMatrix.identity(5), cap=4)
    with pytest.raises(ResourceError):
        exact_rank(DenseRationalMatrix.identity(301))


def test_empty_matrix():
    assert psd_certify(M([])).is_psd
    assert exact_rank(M([])) == 0


@pytest.mark.parametrize("seed", range(4))
def test_random_matrices_agree_with_eigensolver(seed):
    for A in random_matrices(25, seed):
        c = psd_certify(A)
        assert c.is_psd == float_psd(A.rows), A.rows
        alt = psd_certify(A, pivot="first")
        assert alt.verdict == c.verdict
        if c.is_psd:
            assert c.rank == alt.rank == exact_rank(A) == np.linalg.matrix_rank(to_float(A.rows))
            assert all(p > 0 for p in c.pivots)
        else:
            assert quad(A, c.witness) == c.witness_value < 0
            assert quad(A, alt.witness) == alt.witness_value < 0


# -- rank and kernel ---------------------------------------------------------

def test_rank_examples():
    assert exact_rank(DenseRationalMatrix.identity(9)) == 9
    assert exact_rank(M([[1] * 5 for _ in range(5)])) == 1


def test_rank_and_nullity_omega_732():
    p = SchemeParams(7, 3, 2)
    shifted = wilson_descriptor(p).materialize().shifted(1)
    ev = eigenvalues(shifted.rows)
    assert int(np.sum(np.abs(ev) < 1e-9)) == 20
    assert exact_rank(shifted) == 15
    basis = nullspace_basis(shifted)
    assert len(basis) == 20
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in shifted.rows)
    assert exact_rank(M(basis + [[0] * 35] * 15)) == 20


@pytest.mark.parametrize("seed", range(2))
def test_rank_plus_nullity(seed):
    for A in random_matrices(15, 100 + seed):
        r = exact_rank(A)
        kernel = nullspace_basis(A)
        assert r + len(kernel) == A.N
        assert r == np.linalg.matrix_rank(to_float(A.rows))


def test_solve_rational():
    A = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_rational(A, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    with pytest.raises(DomainError):
        solve_rational([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(1)]], [Fraction(1), Fraction(1)])


# -- row sums and Hoffman ----------------------------------------------------

@pytest.mark.parametrize("triple, value", [((7, 3, 2), 6), ((9, 4, 2), 5)])
def test_row_sum_eigenvalue(triple, value):
    n, k, t = triple
    assert value == Fraction(comb(n, k), comb(n - t, k - t)) - 1
    assert row_sum_eigenvalue(wilson_descriptor(SchemeParams(*triple)).materialize()) == value


def test_row_sum_zero_and_error():
    assert row_sum_eigenvalue(M([[0] * 3] * 3)) == 0
    with pytest.raises(DomainError, match="row 2"):
        row_sum_eigenvalue(M([[1, 0, 0], [0, 1, 0], [0, 0, 2]]))


@pytest.mark.parametrize("l1, ln, N, value", [(6, -1, 35, 5), (5, -1, 126, 21), (1, -1, 10, 5)])
def test_hoffman_examples(l1, ln, N, value):
    assert hoffman_bound(l1, ln, N) == value


@pytest.mark.parametrize("l1, ln", [(3, 0), (3, 1), (-2, -1), (-1, -1)])
def test_hoffman_rejects(l1, ln):
    with pytest.raises(DomainError):
        hoffman_bound(l1, ln, 10)


# -- certificates ------------------------------------------------------------

@pytest.mark.parametrize("triple, lam1, bound", [((7, 3, 2), 6, 5), ((9, 4, 2), 5, 21), ((8, 3, 2), Fraction(25, 3), 6)])
def test_certify_extremes_above_threshold(triple, lam1, bound):
    p = SchemeParams(*triple)
    cert = certify_extremes(p)
    ev = eigenvalues(wilson_descriptor(p).materialize().rows)
    assert abs(ev.max() - float(lam1)) < 1e-9 and abs(ev.min() + 1) < 1e-9
    assert cert.row_sum_eigenvalue == lam1
    assert cert.lambda_max_certified == lam1
    assert cert.lambda_min_certified == -1
    assert cert.shifted_psd.is_psd and cert.shifted_rank < cert.N
    assert cert.hoffman_bound == bound == comb(p.n - p.t, p.k - p.t)


def test_spectrum_732_values():
    ev = np.round(eigenvalues(wilson_descriptor(SchemeParams(7, 3, 2)).materialize().rows), 9)
    assert sorted(set(ev.tolist())) == [-1.0, 1.0, 6.0]


def test_certify_extremes_below_threshold():
    p = SchemeParams(8, 4, 2)
    cert = certify_extremes(p)
    assert eigenvalues(wilson_descriptor(p).materialize().rows).min() < -1 - 1e-6
    assert cert.shifted_psd.verdict == "not_psd"
    assert cert.lambda_min_certified is None
    assert cert.hoffman_bound is None
    A = wilson_descriptor(p).materialize().shifted(1)
    assert quad(A, cert.shifted_psd.witness) == cert.shifted_psd.witness_value < 0


def test_schrijver_descriptor_gives_same_certificate():
    p = SchemeParams(7, 3, 2)
    a = certify_extremes(p, schrijver_descriptor(p))
    b = certify_extremes(p)
    assert (a.lambda_max_certified, a.lambda_min_certified, a.hoffman_bound) == (
        b.lambda_max_certified, b.lambda_min_certified, b.hoffman_bound)


def test_certify_extremes_cap_checked_before_materialising():
    with pytest.raises(ResourceError):
        certify_extremes(SchemeParams(20, 10, 2))


def test_certify_matrix_nonsingular_shift_is_not_min_minus_one():
    # complete graph K_4: spectrum {3, -1, -1, -1}; adding a loop-free scaling keeps -1
    K4 = M([[0 if i == j else 1 for j in range(4)] for i in range(4)])
    cert = certify_matrix(K4)
    assert cert.lambda_min_certified == -1 and cert.lambda_max_certified == 3 and cert.hoffman_bound == 1
    half = M([[0 if i == j else Fraction(1, 2) for j in range(4)] for i in range(4)])
    cert = certify_matrix(half)
    assert cert.shifted_psd.is_psd and cert.shifted_rank == 4
    assert cert.lambda_min_certified is None and cert.hoffman_bound is None
