"""Polynomials over F2[U] and sparse matrices of them.

A polynomial is a frozenset of exponents: the zero polynomial is the empty
set and the unit is ``frozenset({0})``.  Matrices are sparse and stored by
column; entry ``(i, j)`` is the coefficient of basis element ``i`` in the
image of basis element ``j``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

UPoly = frozenset

ZERO: UPoly = frozenset()
ONE: UPoly = frozenset({0})


def mono(k: int) -> UPoly:
    if k < 0:
        raise ValueError(f"negative U-exponent {k}")
    return frozenset({k})


def padd(p: UPoly, q: UPoly) -> UPoly:
    return p ^ q


def pmul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ZERO
    out: set[int] = set()
    for a in p:
        for b in q:
            out ^= {a + b}
    return frozenset(out)


def pshift(p: UPoly, k: int) -> UPoly:
    return frozenset(a + k for a in p)


def format_poly(p: UPoly) -> str:
    if not p:
        return "0"
    return " + ".join(f"U^{k}" for k in sorted(p))


class UMatrix:
    """Sparse matrix over F2[U], treated as immutable once built."""

    __slots__ = ("nrows", "ncols", "_cols")

    def __init__(self, nrows: int, ncols: int,
                 entries: Mapping[tuple[int, int], UPoly] | Iterable[tuple[tuple[int, int], UPoly]] = ()):
        self.nrows = nrows
        self.ncols = ncols
        cols: list[dict[int, UPoly]] = [{} for _ in range(ncols)]
        items = entries.items() if isinstance(entries, Mapping) else entries
        for (i, j), p in items:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i}, {j}) outside {nrows}x{ncols}")
            p = cols[j].get(i, ZERO) ^ frozenset(p)
            if p:
                cols[j][i] = p
            else:
                cols[j].pop(i, None)
        self._cols = cols

    @classmethod
    def _from_cols(cls, nrows: int, cols: list[dict[int, UPoly]]) -> "UMatrix":
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = len(cols)
        m._cols = cols
        return m

    @classmethod
    def identity(cls, n: int) -> "UMatrix":
        return cls._from_cols(n, [{j: ONE} for j in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "UMatrix":
        return cls._from_cols(nrows, [{} for _ in range(ncols)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> UPoly:
        i, j = ij
        return self._cols[j].get(i, ZERO)

    def col(self, j: int) -> Mapping[int, UPoly]:
        return self._cols[j]

    def items(self) -> Iterator[tuple[tuple[int, int], UPoly]]:
        for j, c in enumerate(self._cols):
            for i in sorted(c):
                yield (i, j), c[i]

    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def is_zero(self) -> bool:
        return not any(self._cols)

    def rows(self) -> list[dict[int, UPoly]]:
        out: list[dict[int, UPoly]] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, p in c.items():
                out[i][j] = p
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.items())))

    def __add__(self, other: "UMatrix") -> "UMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        cols = [dict(c) for c in self._cols]
        for j, c in enumerate(other._cols):
            for i, p in c.items():
                q = cols[j].get(i, ZERO) ^ p
                if q:
                    cols[j][i] = q
                else:
                    del cols[j][i]
        return UMatrix._from_cols(self.nrows, cols)

    def __matmul__(self, other: "UMatrix") -> "UMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = []
        for c in other._cols:
            acc: dict[int, UPoly] = {}
            for k, q in c.items():
                for i, p in self._cols[k].items():
                    r = acc.get(i, ZERO) ^ pmul(p, q)
                    if r:
                        acc[i] = r
                    else:
                        acc.pop(i, None)
            cols.append(acc)
        return UMatrix._from_cols(self.nrows, cols)

    def transpose(self) -> "UMatrix":
        return UMatrix(self.ncols, self.nrows, (((j, i), p) for (i, j), p in self.items()))

    def submatrix(self, rows: list[int], cols: list[int]) -> "UMatrix":
        rpos = {r: a for a, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({rpos[i]: p for i, p in self._cols[j].items() if i in rpos})
        return UMatrix._from_cols(len(rows), out)

    def at_one(self) -> list[int]:
        """Columns of the matrix with U set to 1, as GF(2) bitsets over rows."""
        out = []
        for c in self._cols:
            v = 0
            for i, p in c.items():
                if len(p) & 1:
                    v |= 1 << i
            out.append(v)
        return out

    def __repr__(self) -> str:
        body = ", ".join(f"({i},{j}):{format_poly(p)}" for (i, j), p in self.items())
        return f"UMatrix({self.nrows}x{self.ncols}; {body})"


def kron(a: UMatrix, b: UMatrix) -> UMatrix:
    """Tensor product of matrices; index (i, k) maps to i * b.nrows + k."""
    entries = {}
    for (i, j), p in a.items():
        for (k, l), q in b.items():
            entries[(i * b.nrows + k, j * b.ncols + l)] = pmul(p, q)
    return UMatrix(a.nrows * b.nrows, a.ncols * b.ncols, entries)


def block_diag(*ms: UMatrix) -> UMatrix:
    entries = {}
    r0 = c0 = 0
    for m in ms:
        for (i, j), p in m.items():
            entries[(r0 + i, c0 + j)] = p
        r0 += m.nrows
        c0 += m.ncols
    return UMatrix(r0, c0, entries)
