"""Set families over [n]: stars, Steiner systems and a brute-force
independence number for G(n, k, t)."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels
from .errors import DomainError, ResourceError
from .exact import binomial
from .pseudoadjacency import a_vector
from .scheme import SchemeParams, Subset, inner_distribution, rank_subset, subset_mask, subsets

DEFAULT_BRUTE_CAP = 40


@dataclass
class SetFamily:
    """Duplicate-free list of k-subsets of ``{1..n}``."""

    n: int
    k: int
    blocks: list[Subset] = field(default_factory=list)

    def __post_init__(self) -> None:
        clean = []
        seen = set()
        for b in self.blocks:
            b = tuple(sorted(b))
            if len(b) != self.k or len(set(b)) != self.k or (b and (b[0] < 1 or b[-1] > self.n)):
                raise DomainError(f"block {b} is not a {self.k}-subset of 1..{self.n}")
            if b in seen:
                raise DomainError(f"duplicate block {b}")
            seen.add(b)
            clean.append(b)
        self.blocks = clean

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def ranks(self) -> list[int]:
        return [rank_subset(b, self.n, self.k) for b in self.blocks]

    def inner_distribution(self) -> list[Fraction]:
        return inner_distribution((self.n, self.k), self)

    # -- text format --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"n={self.n} k={self.k}"]
        lines.extend(" ".join(map(str, b)) for b in self.blocks)
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "SetFamily":
        """Read the block format: ``#`` comments, an ``n=<int> k=<int>`` header,
        then one block per line as 1-based space-separated elements."""
        n = k = None
        blocks = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.fullmatch(r"n\s*=\s*(\d+)\s+k\s*=\s*(\d+)", line)
            if m:
                if n is not None:
                    raise DomainError(f"line {lineno}: second header")
                n, k = int(m.group(1)), int(m.group(2))
                continue
            if n is None:
                raise DomainError(f"line {lineno}: block before the 'n=<int> k=<int>' header")
            try:
                blocks.append(tuple(int(x) for x in line.split()))
            except ValueError:
                raise DomainError(f"line {lineno}: not a list of integers: {raw!r}") from None
        if n is None:
            raise DomainError("missing 'n=<int> k=<int>' header")
        return cls(n, k, blocks)

    @classmethod
    def read(cls, path) -> "SetFamily":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read())


def star_family(params: SchemeParams) -> SetFamily:
    """All k-sets containing ``{1..t}``."""
    n, k, t = params.n, params.k, params.t
    core = tuple(range(1, t + 1))
    rest = subsets(n - t, k - t)
    return SetFamily(n, k, [core + tuple(x + t for x in r) for r in rest])


def is_t_intersecting(F: SetFamily, t: int) -> bool:
    masks = [subset_mask(b) for b in F.blocks]
    return all((a & b).bit_count() >= t for a, b in itertools.combinations(masks, 2))


@dataclass(frozen=True)
class AlphaResult:
    params: SchemeParams
    alpha: int
    witness: SetFamily


def brute_alpha(params: SchemeParams, cap: int | None = None) -> AlphaResult:
    """Exact independence number of G(n, k, t) with one maximum t-intersecting family.

    Solved as maximum clique in the "meets in at least t points" graph.
    """
    cap = DEFAULT_BRUTE_CAP if cap is None else cap
    n, k, t = params.n, params.k, params.t
    N = binomial(n, k)
    if N > cap:
        raise ResourceError(
            f"C({n},{k}) = {N} vertices exceeds the brute-force cap {cap}; use the spectral (Hoffman) bound instead"
        )
    # the search branches on high labels first, so label rank r as N-1-r
    # to make it settle on low-rank families
    masks = [subset_mask(F) for F in reversed(subsets(n, k))]
    adj = []
    for u, a in enumerate(masks):
        bits = 0
        for v, b in enumerate(masks):
            if u != v and (a & b).bit_count() >= t:
                bits |= 1 << v
        adj.append(bits)
    clique = sorted(N - 1 - v for v in _kernels.max_clique(adj))
    family = SetFamily(n, k, [subsets(n, k)[r] for r in clique])
    return AlphaResult(params, len(clique), family)


# -- Steiner systems ---------------------------------------------------------

@dataclass(frozen=True)
class DesignRecord:
    name: str
    t: int
    n: int
    k: int
    lam: int
    family: SetFamily

    @property
    def params(self) -> SchemeParams:
        return SchemeParams(self.n, self.k, self.t)


def check_design(family: SetFamily, t: int, lam: int = 1) -> bool:
    """True iff every t-subset of the points lies in exactly ``lam`` blocks."""
    counts: dict[tuple[int, ...], int] = {}
    for b in family.blocks:
        for T in itertools.combinations(b, t):
            counts[T] = counts.get(T, 0) + 1
    if len(counts) != binomial(family.n, t):
        return False
    return all(c == lam for c in counts.values())


_DESIGNS = {
    "fano": (2, 7, 3, [(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 5, 6)]),
    # lines of the affine plane AG(2,3), point (x, y) labelled 3x + y + 1
    "sts9": (2, 9, 3, [
        (1, 2, 3), (4, 5, 6), (7, 8, 9),
        (1, 4, 7), (2, 5, 8), (3, 6, 9),
        (1, 5, 9), (2, 6, 7), (3, 4, 8),
        (1, 6, 8), (2, 4, 9), (3, 5, 7),
    ]),
}

DESIGN_NAMES = tuple(_DESIGNS)


def design_registry(name: str) -> DesignRecord:
    try:
        t, n, k, blocks = _DESIGNS[name]
    except KeyError:
        raise DomainError(f"unknown design {name!r}; known: {', '.join(DESIGN_NAMES)}") from None
    family = SetFamily(n, k, blocks)
    if not check_design(family, t):
        raise DomainError(f"registered design {name!r} fails the {t}-({n},{k},1) covering check")
    return DesignRecord(name, t, n, k, 1, family)


@dataclass(frozen=True)
class DesignConsistency:
    name: str
    params: SchemeParams
    inner_distribution: list[Fraction]
    a_entries: dict[int, Fraction]
    mismatches: list[int]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def design_consistency_check(record: DesignRecord) -> DesignConsistency:
    """Compare the a-vector with the design's measured inner distribution at indices ``k-t+1..k``."""
    params = record.params
    e = record.family.inner_distribution()
    a = a_vector(params).entries
    bad = [m for m in sorted(a, reverse=True) if a[m] != e[m]]
    return DesignConsistency(record.name, params, e, dict(a), bad)
