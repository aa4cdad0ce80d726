"""Exact spectral certificates for pseudoadjacency matrices.

Eigenvalues are never computed. Instead:

* ``lambda_min == -1`` follows from ``M + I`` being PSD and singular;
* ``lambda_max == r`` (``r`` the common row sum, an eigenvalue for the
  all-ones vector) follows from ``r*I - M`` being PSD.

PSD-ness is decided by fraction-free symmetric elimination on the integer
matrix ``L * M`` with diagonal pivots only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _kernels
from .errors import DomainError, InvariantError, ResourceError
from .exact import binomial
from .scheme import DenseRationalMatrix, SchemeParams

DEFAULT_SPECTRAL_CAP = 300

PIVOT_RULES = {"largest": _kernels.PIVOT_LARGEST, "first": _kernels.PIVOT_FIRST}


@dataclass
class PsdCertificate:
    """Outcome of :func:`psd_certify`.

    On ``psd``: ``pivot_order`` lists eliminated rows and ``pivots`` the
    matching LDL^T diagonal entries (all positive); every row left over
    was identically zero. On ``not_psd``: ``witness`` is a rational vector
    with ``witness^T M witness == witness_value < 0``.
    """

    verdict: str
    pivot_order: list[int] = field(default_factory=list)
    pivots: list[Fraction] = field(default_factory=list)
    failure: str | None = None
    failure_at: tuple[int, ...] = ()
    witness: list[Fraction] | None = None
    witness_value: Fraction | None = None

    @property
    def is_psd(self) -> bool:
        return self.verdict == "psd"

    @property
    def rank(self) -> int | None:
        """Number of positive pivots, which is the rank when the verdict is ``psd``."""
        return len(self.pivots) if self.is_psd else None


def _check_cap(N: int, cap: int | None) -> None:
    cap = DEFAULT_SPECTRAL_CAP if cap is None else cap
    if N > cap:
        raise ResourceError(f"dimension {N} exceeds the spectral cap {cap}")


def _as_matrix(M) -> DenseRationalMatrix:
    if isinstance(M, DenseRationalMatrix):
        return M
    return DenseRationalMatrix([[Fraction(x) for x in row] for row in M])


def solve_rational(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``A x = b`` for nonsingular ``A`` by Gaussian elimination over Q."""
    n = len(A)
    rows = [list(map(Fraction, r)) + [Fraction(bi)] for r, bi in zip(A, b)]
    for c in range(n):
        p = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if p is None:
            raise DomainError("singular system")
        rows[c], rows[p] = rows[p], rows[c]
        pr = rows[c]
        inv = 1 / pr[c]
        for r in range(c + 1, n):
            f = rows[r][c] * inv
            if f:
                rr = rows[r]
                for j in range(c, n + 1):
                    rr[j] -= f * pr[j]
    x = [Fraction(0)] * n
    for c in range(n - 1, -1, -1):
        s = rows[c][n] - sum((rows[c][j] * x[j] for j in range(c + 1, n)), Fraction(0))
        x[c] = s / rows[c][c]
    return x


def _lift(M: DenseRationalMatrix, pivots: list[int], w: dict[int, Fraction]) -> list[Fraction]:
    """Extend a vector on the un-eliminated rows so its quadratic form equals the Schur form."""
    v = [Fraction(0)] * M.N
    for i, c in w.items():
        v[i] = c
    if pivots:
        A = [[M.rows[p][q] for q in pivots] for p in pivots]
        b = [-sum((M.rows[p][i] * c for i, c in w.items()), Fraction(0)) for p in pivots]
        for p, x in zip(pivots, solve_rational(A, b)):
            v[p] = x
    return v


def psd_certify(M, pivot: str = "largest", cap: int | None = None) -> PsdCertificate:
    """Decide positive semidefiniteness exactly.

    ``pivot`` selects the largest remaining diagonal (default) or the first
    positive one; the verdict does not depend on it.
    """
    M = _as_matrix(M)
    _check_cap(M.N, cap)
    if pivot not in PIVOT_RULES:
        raise DomainError(f"unknown pivot rule {pivot!r}")
    if not M.is_symmetric():
        raise DomainError("psd_certify needs a symmetric matrix")
    a, L = M.scaled_integer_rows()
    status, order, minors, where, value = _kernels.sym_bareiss(a, PIVOT_RULES[pivot])
    pivots = []
    prev = 1
    for m in minors:
        pivots.append(Fraction(m, prev * L))
        prev = m
    if status == _kernels.PSD:
        return PsdCertificate("psd", list(order), pivots)
    if status == _kernels.NEGATIVE_DIAGONAL:
        kind = "negative_pivot"
        w = {where[0]: Fraction(1)}
    elif status == _kernels.ZERO_DIAGONAL_OFFDIAG:
        kind = "zero_pivot_nonzero_row"
        i, j = where
        w = {i: Fraction(1), j: Fraction(-1 if value > 0 else 1)}
    else:  # pragma: no cover
        raise InvariantError(f"unknown elimination status {status}")
    v = _lift(M, list(order), w)
    value = M.quadratic_form(v)
    if value >= 0:
        raise InvariantError(f"witness failed to re-verify (value {value})")
    return PsdCertificate("not_psd", list(order), pivots, kind, tuple(where), v, value)


def exact_rank(M, cap: int | None = None) -> int:
    M = _as_matrix(M)
    _check_cap(M.N, cap)
    a, _ = M.scaled_integer_rows()
    return _kernels.bareiss_rank(a)


def nullspace_basis(M) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, from the reduced row echelon form."""
    M = _as_matrix(M)
    n = M.N
    rows = [list(r) for r in M.rows]
    pivcols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == n:
            break
    free = [c for c in range(n) if c not in set(pivcols)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivcols):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def row_sum_eigenvalue(M) -> Fraction:
    """Common row sum of ``M``; raises :class:`DomainError` if the rows disagree."""
    M = _as_matrix(M)
    sums = M.row_sums()
    if not sums:
        return Fraction(0)
    for u, s in enumerate(sums):
        if s != sums[0]:
            raise DomainError(f"row sums differ: row 0 sums to {sums[0]}, row {u} to {s}")
    return sums[0]


def hoffman_bound(lambda1, lambdan, N: int) -> Fraction:
    """``(-lambda_n / (lambda_1 - lambda_n)) * N``."""
    l1, ln = Fraction(lambda1), Fraction(lambdan)
    if ln >= 0:
        raise DomainError(f"smallest eigenvalue must be negative, got {ln}")
    if l1 <= ln:
        raise DomainError(f"need lambda_1 > lambda_n, got {l1} <= {ln}")
    return -ln / (l1 - ln) * N


@dataclass
class SpectralCertificate:
    params: SchemeParams | None
    N: int
    row_sum_eigenvalue: Fraction
    shifted_psd: PsdCertificate
    shifted_rank: int
    top_psd: PsdCertificate
    lambda_min_certified: Fraction | None
    lambda_max_certified: Fraction | None
    hoffman_bound: Fraction | None

    @property
    def certified(self) -> bool:
        return self.hoffman_bound is not None


def certify_matrix(M, params: SchemeParams | None = None, cap: int | None = None) -> SpectralCertificate:
    """Certify ``lambda_min = -1`` and ``lambda_max = row sum`` for a pseudoadjacency matrix."""
    M = _as_matrix(M)
    N = M.N
    _check_cap(N, cap)
    lam1 = row_sum_eigenvalue(M)
    shifted = M.shifted(1)
    shifted_psd = psd_certify(shifted, cap=cap)
    shifted_rank = exact_rank(shifted, cap=cap)
    lam_min = Fraction(-1) if shifted_psd.is_psd and shifted_rank < N else None
    top_psd = psd_certify(M.shifted(lam1, sign=-1), cap=cap)
    lam_max = lam1 if top_psd.is_psd else None
    bound = None
    if lam_min is not None and lam_max is not None and lam_max > lam_min:
        bound = hoffman_bound(lam_max, lam_min, N)
    return SpectralCertificate(params, N, lam1, shifted_psd, shifted_rank, top_psd, lam_min, lam_max, bound)


def certify_extremes(params: SchemeParams, descriptor=None, cap: int | None = None) -> SpectralCertificate:
    """Materialise ``descriptor`` (Wilson's matrix by default) and certify its extreme eigenvalues."""
    from .pseudoadjacency import wilson_descriptor

    _check_cap(binomial(params.n, params.k), cap)
    desc = descriptor if descriptor is not None else wilson_descriptor(params)
    M = desc.materialize(cap=max(binomial(params.n, params.k), 1))
    return certify_matrix(M, params, cap=cap)
