"""Exact rational arithmetic and binomial coefficients.

Rationals are :class:`fractions.Fraction`, which already keeps values in
lowest terms with a positive denominator and raises on division by zero.
"""
from __future__ import annotations

import re
import threading
from fractions import Fraction

from .errors import DomainError

Rational = Fraction

__all__ = [
    "Rational",
    "rational",
    "binomial",
    "BinomialTable",
    "format_rational",
    "parse_rational",
]


def rational(p: int, q: int = 1) -> Fraction:
    """Return ``p/q`` in lowest terms; ``q == 0`` is a :class:`DomainError`."""
    if q == 0:
        raise DomainError("zero denominator")
    return Fraction(int(p), int(q))


class BinomialTable:
    """Pascal triangle grown row by row on demand.

    Reads are lock-free; growth is serialised so that concurrent readers
    never see a half-built row.
    """

    def __init__(self) -> None:
        self._rows: list[list[int]] = [[1]]
        self._lock = threading.Lock()

    def _grow(self, m: int) -> None:
        with self._lock:
            rows = self._rows
            while len(rows) <= m:
                prev = rows[-1]
                row = [1]
                row.extend(prev[j - 1] + prev[j] for j in range(1, len(prev)))
                row.append(1)
                rows.append(row)

    def __call__(self, m: int, r: int) -> int:
        if m < 0:
            raise DomainError(f"binomial top must be nonnegative, got {m}")
        if r < 0 or r > m:
            return 0
        if m >= len(self._rows):
            self._grow(m)
        return self._rows[m][r]

    def __len__(self) -> int:
        return len(self._rows)


_TABLE = BinomialTable()


def binomial(m: int, r: int) -> int:
    """C(m, r) with C(m, r) = 0 outside 0 <= r <= m; negative ``m`` is rejected."""
    return _TABLE(m, r)


_RAT_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def format_rational(x: Fraction | int) -> str:
    """Serialise as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    """Inverse of :func:`format_rational`; rejects anything not in ``p`` or ``p/q`` form."""
    s = s.strip()
    if not _RAT_RE.match(s):
        raise DomainError(f"not a rational literal: {s!r}")
    return Fraction(s)
