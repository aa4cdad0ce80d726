"""The Johnson scheme J(n, k).

Vertices are the k-subsets of ``{1..n}``, indexed by colexicographic rank.
Two bases of the Bose-Mesner algebra are supported: the distance matrices
``A_i`` (``|F & F'| == k - i``) and the inclusion matrices ``D_r`` with
entries ``C(k - |F & F'|, r)``.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import _kernels
from .errors import DomainError, ResourceError
from .exact import binomial

DEFAULT_MATERIALIZE_CAP = 1000

Subset = tuple[int, ...]


@dataclass(frozen=True)
class SchemeParams:
    """Validated triple fixing J(n, k) and the graph G(n, k, t).

    Requires ``0 < t < k < n`` and ``n >= 2k``; below ``2k`` some inverted
    binomials in Wilson's matrix vanish.
    """

    n: int
    k: int
    t: int

    def __post_init__(self) -> None:
        for name in ("n", "k", "t"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"{name} must be an integer, got {v!r}")
        if not 0 < self.t < self.k < self.n:
            raise DomainError(f"need 0 < t < k < n, got (n,k,t)=({self.n},{self.k},{self.t})")
        if self.n < 2 * self.k:
            raise DomainError(f"need n >= 2k, got n={self.n}, k={self.k}")

    @property
    def N(self) -> int:
        return binomial(self.n, self.k)

    @property
    def ekr_threshold(self) -> int:
        return (self.t + 1) * (self.k - self.t + 1)

    @property
    def in_ekr_range(self) -> bool:
        return self.n >= self.ekr_threshold

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.t)


def valid_triples(n_max: int, k_max: int, n_min: int = 1) -> list[SchemeParams]:
    """All valid (n, k, t) with ``n <= n_max`` and ``k <= k_max``, in lexicographic order."""
    out = []
    for n in range(max(n_min, 1), n_max + 1):
        for k in range(2, min(k_max, n // 2) + 1):
            for t in range(1, k):
                out.append(SchemeParams(n, k, t))
    return out


# -- ranking -----------------------------------------------------------------

def _check_nk(n: int, k: int) -> None:
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got n={n}, k={k}")


def rank_subset(F: Iterable[int], n: int, k: int) -> int:
    """Colex rank of a k-subset of ``{1..n}``."""
    _check_nk(n, k)
    elems = sorted(F)
    if len(elems) != k or len(set(elems)) != k:
        raise DomainError(f"expected {k} distinct elements, got {F!r}")
    if elems and (elems[0] < 1 or elems[-1] > n):
        raise DomainError(f"elements must lie in 1..{n}, got {F!r}")
    return sum(binomial(x - 1, i + 1) for i, x in enumerate(elems))


def unrank_subset(r: int, n: int, k: int) -> Subset:
    """Inverse of :func:`rank_subset`."""
    _check_nk(n, k)
    if not 0 <= r < binomial(n, k):
        raise DomainError(f"rank {r} out of range for C({n},{k})")
    out = []
    x = n
    for i in range(k, 0, -1):
        x -= 1
        while binomial(x, i) > r:
            x -= 1
        out.append(x + 1)
        r -= binomial(x, i)
    return tuple(reversed(out))


@lru_cache(maxsize=64)
def subsets(n: int, k: int) -> tuple[Subset, ...]:
    """All k-subsets of ``{1..n}`` in colex order, so ``subsets(n, k)[r]`` has rank ``r``."""
    _check_nk(n, k)

    # colex order: blocks with a smaller largest element come first
    def gen(top: int, need: int) -> list[Subset]:
        if need == 0:
            return [()]
        res = []
        for x in range(need, top + 1):
            res.extend(s + (x,) for s in gen(x - 1, need - 1))
        return res

    return tuple(gen(n, k))


def subset_mask(F: Iterable[int]) -> int:
    m = 0
    for x in F:
        m |= 1 << (x - 1)
    return m


@lru_cache(maxsize=16)
def _intersection_table(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    masks = [subset_mask(F) for F in subsets(n, k)]
    return tuple(tuple(row) for row in _kernels.intersection_sizes(masks))


def intersection_table(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """``|F_u & F_v|`` for every pair of ranks."""
    return _intersection_table(n, k)


# -- dense matrices ----------------------------------------------------------

class DenseRationalMatrix:
    """Square matrix of Fractions indexed by subset rank."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[Fraction]]):
        self.rows = [list(r) for r in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise DomainError("matrix must be square")

    @classmethod
    def identity(cls, n: int, scale: Fraction | int = 1) -> "DenseRationalMatrix":
        one, zero = Fraction(scale), Fraction(0)
        return cls([[one if u == v else zero for v in range(n)] for u in range(n)])

    @classmethod
    def from_function(cls, n: int, f: Callable[[int, int], Fraction]) -> "DenseRationalMatrix":
        return cls([[Fraction(f(u, v)) for v in range(n)] for u in range(n)])

    @property
    def N(self) -> int:
        return len(self.rows)

    def entry(self, u: int, v: int) -> Fraction:
        return self.rows[u][v]

    def __getitem__(self, uv: tuple[int, int]) -> Fraction:
        u, v = uv
        return self.rows[u][v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseRationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return f"DenseRationalMatrix(N={self.N})"

    def is_symmetric(self) -> bool:
        rows = self.rows
        n = len(rows)
        return all(rows[u][v] == rows[v][u] for u in range(n) for v in range(u + 1, n))

    def first_difference(self, other: "DenseRationalMatrix") -> tuple[int, int] | None:
        if self.N != other.N:
            raise DomainError("dimension mismatch")
        for u, (ra, rb) in enumerate(zip(self.rows, other.rows)):
            if ra != rb:
                for v, (x, y) in enumerate(zip(ra, rb)):
                    if x != y:
                        return (u, v)
        return None

    def shifted(self, diag: Fraction | int, sign: int = 1) -> "DenseRationalMatrix":
        """``diag * I + sign * self``."""
        d = Fraction(diag)
        rows = []
        for u, r in enumerate(self.rows):
            row = [x if sign == 1 else -x for x in r]
            row[u] = row[u] + d
            rows.append(row)
        return DenseRationalMatrix(rows)

    def row_sums(self) -> list[Fraction]:
        return [sum(r, Fraction(0)) for r in self.rows]

    def quadratic_form(self, v: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for u, r in enumerate(self.rows):
            if v[u]:
                total += v[u] * sum((x * y for x, y in zip(r, v) if y), Fraction(0))
        return total

    def scaled_integer_rows(self) -> tuple[list[list[int]], int]:
        """Integer matrix ``L * self`` with ``L > 0`` the lcm of all denominators."""
        from math import lcm

        L = 1
        for d in {x.denominator for r in self.rows for x in r}:
            L = lcm(L, d)
        return [[x.numerator * (L // x.denominator) for x in r] for r in self.rows], L

    def upper_nonzeros(self) -> list[tuple[int, int, Fraction]]:
        return [
            (u, v, r[v]) for u, r in enumerate(self.rows) for v in range(u, len(r)) if r[v] != 0
        ]


# -- basis vectors -----------------------------------------------------------

@dataclass
class BasisVector:
    """Coefficients over the ``A`` or ``D`` basis of J(n, k); missing indices are zero."""

    tag: str
    k: int
    coeffs: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.tag not in ("A", "D"):
            raise DomainError(f"basis tag must be 'A' or 'D', got {self.tag!r}")
        clean = {}
        for m, c in self.coeffs.items():
            if not 0 <= m <= self.k:
                raise DomainError(f"basis index {m} outside 0..{self.k}")
            clean[m] = Fraction(c)
        self.coeffs = clean

    def nonzero(self) -> dict[int, Fraction]:
        return {m: c for m, c in sorted(self.coeffs.items()) if c != 0}

    def __getitem__(self, m: int) -> Fraction:
        return self.coeffs.get(m, Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasisVector):
            return NotImplemented
        return (self.tag, self.k, self.nonzero()) == (other.tag, other.k, other.nonzero())

    def value_at(self, s: int) -> Fraction:
        """Matrix entry for a pair of k-sets meeting in ``s`` points."""
        if self.tag == "A":
            return self[self.k - s]
        return sum((c * binomial(self.k - s, r) for r, c in self.coeffs.items()), Fraction(0))

    def __str__(self) -> str:
        from .exact import format_rational

        items = sorted(self.coeffs.items(), reverse=True)
        return ", ".join(f"{self.tag}_{m}: {format_rational(c)}" for m, c in items) or "0"


def _check_index(i: int, k: int) -> None:
    if not 0 <= i <= k:
        raise DomainError(f"index {i} outside 0..{k}")


def a_basis_to_d(i: int, k: int) -> BasisVector:
    """``A_i = sum_{r=i}^{k} (-1)^(r-i) C(r, i) D_r``."""
    _check_index(i, k)
    return BasisVector("D", k, {r: Fraction((-1) ** (r - i) * binomial(r, i)) for r in range(i, k + 1)})


def d_basis_to_a(r: int, k: int) -> BasisVector:
    """``D_r = sum_{i=r}^{k} C(i, r) A_i``."""
    _check_index(r, k)
    return BasisVector("A", k, {i: Fraction(binomial(i, r)) for i in range(r, k + 1)})


def convert(vec: BasisVector, target: str) -> BasisVector:
    """Re-express ``vec`` over the ``target`` basis."""
    if target not in ("A", "D"):
        raise DomainError(f"basis tag must be 'A' or 'D', got {target!r}")
    if vec.tag == target:
        return BasisVector(target, vec.k, dict(vec.coeffs))
    step = a_basis_to_d if vec.tag == "A" else d_basis_to_a
    out: dict[int, Fraction] = {}
    for m, c in vec.coeffs.items():
        if c == 0:
            continue
        for idx, w in step(m, vec.k).coeffs.items():
            out[idx] = out.get(idx, Fraction(0)) + c * w
    return BasisVector(target, vec.k, {m: c for m, c in out.items() if c != 0})


# -- materialisation ---------------------------------------------------------

def _check_cap(N: int, cap: int | None) -> None:
    cap = DEFAULT_MATERIALIZE_CAP if cap is None else cap
    if N > cap:
        raise ResourceError(f"C(n,k) = {N} exceeds the materialisation cap {cap}")


def _from_table(n: int, k: int, values: Sequence[Fraction]) -> DenseRationalMatrix:
    table = intersection_table(n, k)
    m = DenseRationalMatrix.__new__(DenseRationalMatrix)
    m.rows = [[values[s] for s in row] for row in table]
    return m


def build_A(params: SchemeParams, i: int, cap: int | None = None) -> DenseRationalMatrix:
    """Distance matrix: entry 1 iff the two sets meet in ``k - i`` points."""
    n, k = params.n, params.k
    _check_index(i, k)
    _check_cap(binomial(n, k), cap)
    one, zero = Fraction(1), Fraction(0)
    return _from_table(n, k, [one if s == k - i else zero for s in range(k + 1)])


def build_D(params: SchemeParams, r: int, cap: int | None = None) -> DenseRationalMatrix:
    """Inclusion matrix with entries ``C(|F - F'|, r)``."""
    n, k = params.n, params.k
    _check_index(r, k)
    _check_cap(binomial(n, k), cap)
    return _from_table(n, k, [Fraction(binomial(k - s, r)) for s in range(k + 1)])


def materialize(params: SchemeParams, vec: BasisVector, cap: int | None = None) -> DenseRationalMatrix:
    """Dense matrix of ``vec``; each entry is evaluated from the pair's intersection size."""
    n, k = params.n, params.k
    if vec.k != k:
        raise DomainError(f"basis vector has k={vec.k}, scheme has k={k}")
    _check_cap(binomial(n, k), cap)
    return _from_table(n, k, [vec.value_at(s) for s in range(k + 1)])


# -- inner distribution ------------------------------------------------------

def _family_blocks(Y) -> list[Subset]:
    blocks = getattr(Y, "blocks", Y)
    return [tuple(sorted(b)) for b in blocks]


def inner_distribution(params: SchemeParams | tuple[int, int], Y) -> list[Fraction]:
    """``e_i`` = ordered pairs of ``Y`` at distance ``i``, divided by ``|Y|``."""
    if isinstance(params, SchemeParams):
        n, k = params.n, params.k
    else:
        n, k = params
    blocks = _family_blocks(Y)
    if not blocks:
        raise DomainError("inner distribution of an empty family")
    seen = set()
    for b in blocks:
        if len(b) != k or len(set(b)) != k or b[0] < 1 or b[-1] > n:
            raise DomainError(f"block {b} is not a {k}-subset of 1..{n}")
        if b in seen:
            raise DomainError(f"duplicate block {b}")
        seen.add(b)
    masks = [subset_mask(b) for b in blocks]
    counts = [0] * (k + 1)
    for a in masks:
        for b in masks:
            counts[k - (a & b).bit_count()] += 1
    size = len(blocks)
    return [Fraction(c, size) for c in counts]
