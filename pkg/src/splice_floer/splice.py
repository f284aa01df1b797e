"""Gluing matrices of splices and their symmetry classification.

Matrices act on column vectors; the columns are the images of the meridian
and longitude.  In ``phi`` mode the target torus is written in the basis
(mu, -lambda), giving determinant -1; ``psi`` mode uses (mu, lambda) and has
determinant +1.  The two are related by left multiplication with
e = diag(1, -1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Mat = tuple[int, int, int, int]  # (a, b, c, d) for the matrix (a b; c d)

IDENTITY: Mat = (1, 0, 0, 1)
MINUS_ID: Mat = (-1, 0, 0, -1)
E: Mat = (1, 0, 0, -1)
H: Mat = (0, 1, -1, 0)
ANTIDIAG: Mat = (0, 1, 1, 0)


def mul(x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    p, q, r, s = y
    return (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)


def neg(x: Mat) -> Mat:
    return tuple(-v for v in x)


def det(x: Mat) -> int:
    return x[0] * x[3] - x[1] * x[2]


def t_mat(n: int) -> Mat:
    return (1, n, 0, 1)


def fmt_mat(x: Mat) -> str:
    return f"({x[0]} {x[1]}; {x[2]} {x[3]})"


@dataclass(frozen=True)
class GluingMatrix:
    a: int
    b: int
    c: int
    d: int
    basis: str = "phi"

    def __post_init__(self):
        if self.basis not in ("phi", "psi"):
            raise ValueError(f"basis must be 'phi' or 'psi', got {self.basis!r}")

    @classmethod
    def of(cls, m: Mat, basis: str = "phi") -> "GluingMatrix":
        return cls(*m, basis=basis)

    @property
    def entries(self) -> Mat:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> int:
        return det(self.entries)

    @property
    def is_valid(self) -> bool:
        return self.det == (-1 if self.basis == "phi" else 1)

    def __str__(self) -> str:
        return f"{fmt_mat(self.entries)} [{self.basis}]"


def convert_basis(m: GluingMatrix) -> GluingMatrix:
    return GluingMatrix.of(mul(E, m.entries), "psi" if m.basis == "phi" else "phi")


def as_psi(m: GluingMatrix) -> GluingMatrix:
    return m if m.basis == "psi" else convert_basis(m)


def as_phi(m: GluingMatrix) -> GluingMatrix:
    return m if m.basis == "phi" else convert_basis(m)


def phi_n(n: int, sign: int = 1) -> GluingMatrix:
    """The family (n, ±1; ±(1+n^2), n)."""
    return GluingMatrix(n, sign, sign * (1 + n * n), n, "phi")


def psi_n(n: int, sign: int = 1) -> GluingMatrix:
    return convert_basis(phi_n(n, sign))


def is_splice_homology_sphere(m: GluingMatrix) -> bool:
    """The mu-coefficient of psi(lambda) must be ±1."""
    return abs(as_psi(m).b) == 1


def classify_type1(m: GluingMatrix) -> tuple[int, int] | None:
    if not m.is_valid:
        return None
    a, b, c, d = as_phi(m).entries
    if a == d and b in (1, -1) and c == b * (1 + a * a):
        return a, b
    return None


def type1_by_square(m: GluingMatrix) -> bool:
    """Equivalent characterization: psi squares to -id and is a homology-sphere gluing."""
    return m.is_valid and mul(as_psi(m).entries, as_psi(m).entries) == MINUS_ID \
        and is_splice_homology_sphere(m)


def classify_type2(m: GluingMatrix) -> tuple[bool, str | None]:
    """(admissible, note); ±e is reported as a b1 = 1 splice."""
    p = as_phi(m).entries
    if p in (ANTIDIAG, neg(ANTIDIAG)):
        return True, None
    if p in (E, neg(E)):
        return False, "b1=1 splice"
    return False, None


def change_sign_identity(n: int) -> bool:
    return neg(phi_n(n, 1).entries) == phi_n(-n, -1).entries


# --------------------------------------------------------------------------
# generator words

@dataclass(frozen=True)
class Letter:
    kind: str  # "H" or "T"
    k: int = 0

    def matrix(self) -> Mat:
        return H if self.kind == "H" else t_mat(self.k)

    def __str__(self) -> str:
        return "H" if self.kind == "H" else f"T({self.k})"


LETTER_H = Letter("H")


def T(k: int) -> Letter:
    return Letter("T", k)


@dataclass(frozen=True)
class GeneratorWord:
    letters: tuple[Letter, ...] = ()

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @classmethod
    def parse(cls, text: str) -> "GeneratorWord":
        letters = []
        for tok in text.split():
            if tok == "H":
                letters.append(LETTER_H)
                continue
            m = re.fullmatch(r"T\((-?\d+)\)", tok)
            if not m:
                raise ValueError(f"bad word letter {tok!r}")
            letters.append(T(int(m.group(1))))
        return cls(tuple(letters))


def evaluate_word(w: GeneratorWord | Sequence[Letter], right_to_left: bool = False) -> GluingMatrix:
    letters = w.letters if isinstance(w, GeneratorWord) else tuple(w)
    if right_to_left:
        letters = letters[::-1]
    acc = IDENTITY
    for x in letters:
        acc = mul(acc, x.matrix())
    return GluingMatrix.of(acc, "psi")


def lemma_word(n: int) -> GeneratorWord:
    return GeneratorWord((LETTER_H, T(-n), LETTER_H, T(n), LETTER_H))


@dataclass(frozen=True)
class FactorizationReport:
    n: int
    word: GeneratorWord
    value: GluingMatrix
    target: GluingMatrix
    relation: str | None
    reverse_relation: str | None
    squares_to_minus_id: bool

    def lines(self) -> list[str]:
        return [
            f"word: {self.word}",
            f"left-to-right value: {fmt_mat(self.value.entries)}",
            f"target psi_{self.n}^+: {fmt_mat(self.target.entries)}",
            f"relation (left-to-right): {self.relation or 'none'}",
            f"relation (right-to-left): {self.reverse_relation or 'none'}",
            f"squares to -id: {self.squares_to_minus_id}",
        ]


RELATIONS = ("exact", "e-conjugation", "-id", "-e-conjugation")


def relation_between(x: Mat, y: Mat) -> str | None:
    """First relation in RELATIONS under which x matches y."""
    conj = mul(mul(E, y), E)
    for name, cand in zip(RELATIONS, (y, conj, neg(y), neg(conj))):
        if x == cand:
            return name
    return None


def lemma_factorization(n: int) -> FactorizationReport:
    w = lemma_word(n)
    value = evaluate_word(w)
    rev = evaluate_word(w, right_to_left=True)
    target = psi_n(n, 1)
    return FactorizationReport(
        n, w, value, target,
        relation_between(value.entries, target.entries),
        relation_between(rev.entries, target.entries),
        mul(value.entries, value.entries) == MINUS_ID,
    )


def _simplify(letters: list[Letter]) -> list[Letter]:
    """Drop T(0), merge adjacent T letters and cancel H^4."""
    out: list[Letter] = []
    for x in letters:
        if x.kind == "T":
            if out and out[-1].kind == "T":
                k = out.pop().k + x.k
                if k:
                    out.append(T(k))
            elif x.k:
                out.append(x)
        else:
            out.append(x)
            if len(out) >= 4 and all(y.kind == "H" for y in out[-4:]):
                del out[-4:]
    return out


def factorize(m: GluingMatrix) -> GeneratorWord:
    """Word in H and T(k) evaluating (left to right) exactly to the psi-mode matrix.

    Euclid on the first column: left multiplication by T(-q) subtracts q
    times the second row from the first, and left multiplication by H swaps
    the rows up to sign.  Once the lower-left entry vanishes the matrix is
    ±T(k); the sign is absorbed with H H = -id.  Inverting the prefix uses
    H^-1 = H H H and T(k)^-1 = T(-k).
    """
    if m.basis != "psi":
        raise ValueError("factorize expects a psi-mode matrix")
    if m.det != 1:
        raise ValueError(f"determinant {m.det}, expected 1")
    cur = m.entries
    prefix: list[Letter] = []  # prefix @ m is reduced
    while cur[2] != 0:
        a, c = cur[0], cur[2]
        if a != 0:
            q = a // c
            if q:
                prefix.insert(0, T(-q))
                cur = mul(t_mat(-q), cur)
        prefix.insert(0, LETTER_H)
        cur = mul(H, cur)
    s = cur[0]  # ±1
    core = [T(s * cur[1])]
    if s == -1:
        core = [LETTER_H, LETTER_H] + core
    inverse: list[Letter] = []
    for x in reversed(prefix):
        inverse += [LETTER_H] * 3 if x.kind == "H" else [T(-x.k)]
    return GeneratorWord(tuple(_simplify(inverse + core)))


def parse_matrix(text: str) -> Mat:
    """Parse ``a,b;c,d``."""
    rows = text.strip().split(";")
    if len(rows) != 2:
        raise ValueError(f"matrix must have two rows separated by ';': {text!r}")
    vals = []
    for r in rows:
        parts = r.split(",")
        if len(parts) != 2:
            raise ValueError(f"matrix row must have two entries: {r!r}")
        vals += [int(p) for p in parts]
    return tuple(vals)


def exhaustive_search(bound: int = 26, square: int = -1) -> set[Mat]:
    """phi-mode det -1 matrices with entries in [-bound, bound] that pass the
    homology-sphere test and whose psi-mode square is ``square`` times id.

    Vectorized over the last three entries for each value of the first.
    """
    import numpy as np

    r = np.arange(-bound, bound + 1)
    b, c, d = np.meshgrid(r, r, r, indexing="ij")
    b, c, d = b.ravel(), c.ravel(), d.ravel()
    found = set()
    for a in r:
        keep = (a * d - b * c) == -1
        # psi = e @ phi = (a b; -c -d); homology sphere iff |b| = 1
        keep &= np.abs(b) == 1
        pa, pb, pc, pd = a, b, -c, -d
        keep &= (pa * pa + pb * pc == square) & (pa * pb + pb * pd == 0)
        keep &= (pc * pa + pd * pc == 0) & (pc * pb + pd * pd == square)
        for bb, cc, dd in zip(b[keep], c[keep], d[keep]):
            found.add((int(a), int(bb), int(cc), int(dd)))
    return found


def expected_family(bound: int = 26) -> set[Mat]:
    return {phi_n(n, s).entries for n in range(-bound, bound + 1) for s in (1, -1)
            if 1 + n * n <= bound}
