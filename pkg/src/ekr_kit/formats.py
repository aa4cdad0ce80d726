"""Plain-text exchange format for exact symmetric matrices.

::

    rational-coo N N nnz
    row col p/q
    ...

One line per nonzero on or above the diagonal, 0-based colex ranks; the
lower triangle is implied by symmetry and ``nnz`` counts the listed lines.
"""
from __future__ import annotations

from fractions import Fraction
from typing import TextIO

from .errors import DomainError
from .exact import format_rational, parse_rational
from .scheme import DenseRationalMatrix

HEADER = "rational-coo"


def dump_coo(M: DenseRationalMatrix, fh: TextIO) -> int:
    entries = M.upper_nonzeros()
    fh.write(f"{HEADER} {M.N} {M.N} {len(entries)}\n")
    for u, v, x in entries:
        fh.write(f"{u} {v} {format_rational(x)}\n")
    return len(entries)


def dumps_coo(M: DenseRationalMatrix) -> str:
    import io

    buf = io.StringIO()
    dump_coo(M, buf)
    return buf.getvalue()


def loads_coo(text: str) -> DenseRationalMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DomainError("empty matrix file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != HEADER or not all(h.isdigit() for h in head[1:]):
        raise DomainError(f"bad header line: {lines[0]!r}")
    n, m, nnz = map(int, head[1:])
    if n != m:
        raise DomainError("matrix must be square")
    if len(lines) - 1 != nnz:
        raise DomainError(f"header announces {nnz} entries, found {len(lines) - 1}")
    zero = Fraction(0)
    rows = [[zero] * n for _ in range(n)]
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise DomainError(f"bad entry line: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise DomainError(f"bad entry line: {ln!r}") from None
        if not (0 <= u <= v < n):
            raise DomainError(f"entry ({u},{v}) outside the upper triangle of a {n}x{n} matrix")
        x = parse_rational(parts[2])
        rows[u][v] = x
        rows[v][u] = x
    return DenseRationalMatrix(rows)


def load_coo(path) -> DenseRationalMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads_coo(fh.read())
