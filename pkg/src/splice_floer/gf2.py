"""Linear algebra over GF(2) with Python ints as bitsets.

A vector over n unknowns is an int whose bit ``k`` is the coefficient of
unknown ``k``.  An affine equation additionally carries its right-hand side
in bit ``n`` (the "constant bit").
"""

from __future__ import annotations

from typing import Iterable


def lowest_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def parity(x: int) -> int:
    return x.bit_count() & 1


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Every stored row has a distinct pivot (its lowest set bit below
    ``nvars``) and no other stored row has that bit set.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: dict[int, int] = {}
        self.inconsistent = False

    def reduce(self, row: int) -> int:
        # stored rows are fully reduced, so one pass over the pivots suffices
        for p, r in self.rows.items():
            if (row >> p) & 1:
                row ^= r
        return row

    def add(self, row: int) -> bool:
        """Insert a row; return True if it increased the rank."""
        row = self.reduce(row)
        mask = (1 << self.nvars) - 1
        if not row & mask:
            if row:
                self.inconsistent = True
            return False
        p = lowest_bit(row & mask)
        for q, r in self.rows.items():
            if (r >> p) & 1:
                self.rows[q] = r ^ row
        self.rows[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def particular(self) -> int | None:
        if self.inconsistent:
            return None
        x = 0
        for p, r in self.rows.items():
            if (r >> self.nvars) & 1:
                x |= 1 << p
        return x

    def kernel(self) -> list[int]:
        """Basis of the homogeneous solution space, one vector per free unknown."""
        basis = []
        for f in range(self.nvars):
            if f in self.rows:
                continue
            v = 1 << f
            for p, r in self.rows.items():
                if (r >> f) & 1:
                    v |= 1 << p
            basis.append(v)
        return basis


def solve(equations: Iterable[int], nvars: int) -> tuple[int | None, list[int]]:
    """Solve an affine system; returns (particular solution or None, kernel basis)."""
    ech = Echelon(nvars)
    for eq in equations:
        ech.add(eq)
    return ech.particular(), ech.kernel()


def rank(vectors: Iterable[int], nbits: int) -> int:
    ech = Echelon(nbits)
    for v in vectors:
        ech.add(v)
    return ech.rank


def span_basis(vectors: Iterable[int], nbits: int) -> list[int]:
    """Reduced basis of the span, ordered by pivot position."""
    ech = Echelon(nbits)
    for v in vectors:
        ech.add(v)
    return [ech.rows[p] for p in sorted(ech.rows)]


def in_span(vec: int, ech: Echelon) -> bool:
    return ech.reduce(vec) == 0
