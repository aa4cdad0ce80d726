"""Schrijver's and Wilson's pseudoadjacency matrices for G(n, k, t).

Schrijver's matrix is built in the distance basis from the design-like
a-vector; Wilson's is built in the inclusion basis. Their equality is
checked either on coefficients (after converting Schrijver's vector to the
inclusion basis) or on the materialised dense matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, InvariantError
from .exact import binomial
from .scheme import BasisVector, DenseRationalMatrix, SchemeParams, convert, materialize

SCHRIJVER = "schrijver"
WILSON = "wilson"


@dataclass(frozen=True)
class AVector:
    """Entries ``a[k - i]`` for ``i = 0..t-1``, keyed by the distance index ``k - i``."""

    params: SchemeParams
    entries: dict[int, Fraction]

    def __getitem__(self, index: int) -> Fraction:
        return self.entries[index]

    def as_list(self) -> list[tuple[int, Fraction]]:
        return sorted(self.entries.items(), reverse=True)


@dataclass(frozen=True)
class PseudoadjacencyDescriptor:
    params: SchemeParams
    label: str
    coeffs: BasisVector

    def materialize(self, cap: int | None = None) -> DenseRationalMatrix:
        return materialize(self.params, self.coeffs, cap=cap)


def a_vector(params: SchemeParams) -> AVector:
    n, k, t = params.n, params.k, params.t
    norm = binomial(n - t, k - t)
    entries = {}
    for i in range(t):
        m = k - i
        total = 0
        for j in range(m + 1):
            total += (-1) ** (m - j) * binomial(m, j) * binomial(n - min(k - j, t), n - k)
        entries[m] = Fraction(binomial(k, m) * total, norm)
    return AVector(params, entries)


def schrijver_descriptor(params: SchemeParams) -> PseudoadjacencyDescriptor:
    n, k, t = params.n, params.k, params.t
    a = a_vector(params)
    coeffs = {}
    for i in range(t):
        m = k - i
        coeffs[m] = a[m] / (binomial(k, m) * binomial(n - k, m))
    return PseudoadjacencyDescriptor(params, SCHRIJVER, BasisVector("A", k, coeffs))


def _wilson_coefficient(params: SchemeParams, i: int) -> Fraction:
    n, k, t = params.n, params.k, params.t
    den = binomial(n - k - t + i, k - t)
    if den == 0:
        raise InvariantError(f"C({n - k - t + i},{k - t}) vanished for {params}")
    return Fraction((-1) ** (t - 1 - i) * binomial(k - 1 - i, k - t), den)


def wilson_descriptor(params: SchemeParams) -> PseudoadjacencyDescriptor:
    k, t = params.k, params.t
    coeffs = {k - i: _wilson_coefficient(params, i) for i in range(t)}
    return PseudoadjacencyDescriptor(params, WILSON, BasisVector("D", k, coeffs))


def descriptor(params: SchemeParams, label: str) -> PseudoadjacencyDescriptor:
    if label == SCHRIJVER:
        return schrijver_descriptor(params)
    if label == WILSON:
        return wilson_descriptor(params)
    raise DomainError(f"unknown matrix {label!r}; expected 'schrijver' or 'wilson'")


@dataclass(frozen=True)
class CoefficientIdentity:
    i: int
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def verify_coefficient_identity(params: SchemeParams, i: int) -> CoefficientIdentity:
    """Compare the ``D_{k-i}`` coefficient of Schrijver's matrix, summed term by term,
    with Wilson's closed form."""
    n, k, t = params.n, params.k, params.t
    if not 0 <= i < t:
        raise DomainError(f"i={i} outside 0..{t - 1}")
    a = a_vector(params)
    lhs = Fraction(0)
    for j in range(i, t):
        scale = a[k - j] / (binomial(k, k - j) * binomial(n - k, k - j))
        lhs += scale * (-1) ** (j - i) * binomial(k - i, k - j)
    return CoefficientIdentity(i, lhs, _wilson_coefficient(params, i))


@dataclass
class EqualityReport:
    params: SchemeParams
    mode: str
    equal: bool
    schrijver: BasisVector
    wilson: BasisVector
    mismatches: list[tuple[int, Fraction, Fraction]] = field(default_factory=list)
    first_entry_mismatch: tuple[int, int] | None = None


def verify_equality(params: SchemeParams, mode: str = "coefficients", cap: int | None = None) -> EqualityReport:
    """Check ``S(n,k,t) == Omega(n,k,t)`` exactly.

    ``coefficients`` converts Schrijver's vector to the inclusion basis;
    ``materialized`` compares the dense matrices entry by entry.
    """
    if mode not in ("coefficients", "materialized"):
        raise DomainError(f"unknown mode {mode!r}")
    s = schrijver_descriptor(params)
    w = wilson_descriptor(params)
    s_d = convert(s.coeffs, "D")
    mismatches = [
        (m, s_d[m], w.coeffs[m])
        for m in range(params.k + 1)
        if s_d[m] != w.coeffs[m]
    ]
    if mode == "coefficients":
        return EqualityReport(params, mode, not mismatches, s_d, w.coeffs, mismatches)
    diff = s.materialize(cap).first_difference(w.materialize(cap))
    return EqualityReport(params, mode, diff is None, s_d, w.coeffs, mismatches if diff else [], diff)


@dataclass(frozen=True)
class SupportReport:
    constant_row_sum: Fraction | None
    support_ok: bool
    diagonal_zero: bool

    @property
    def ok(self) -> bool:
        return self.constant_row_sum is not None and self.support_ok and self.diagonal_zero


def support_and_rowsum_check(
    params: SchemeParams, desc: PseudoadjacencyDescriptor | BasisVector, cap: int | None = None
) -> SupportReport:
    """Check the pseudoadjacency conditions on the dense matrix of ``desc``."""
    from .scheme import intersection_table

    vec = desc.coeffs if isinstance(desc, PseudoadjacencyDescriptor) else desc
    M = materialize(params, vec, cap=cap)
    table = intersection_table(params.n, params.k)
    t = params.t
    support_ok = all(
        x == 0 for row, srow in zip(M.rows, table) for x, s in zip(row, srow) if s >= t
    )
    diagonal_zero = all(M.rows[u][u] == 0 for u in range(M.N))
    sums = M.row_sums()
    constant = sums[0] if sums and all(x == sums[0] for x in sums) else None
    if not sums:
        constant = Fraction(0)
    return SupportReport(constant, support_ok, diagonal_zero)
