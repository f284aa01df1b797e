"""Free graded chain complexes over F2[U].

Conventions: the differential has degree -1 and U has degree -2, so a
nonzero entry U^k at (i, j) requires ``gr(i) - 2k == gr(j) - 1``.  Gradings
are Fractions whose pairwise differences are integers.

A two-step summand F[U] -U^i-> F[U] is recorded as ``(top, i)`` where
``top`` is the grading of the generator ``a`` with ``da = U^i b``; the other
generator then sits in grading ``top + 2i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import gf2
from .errors import NotRankOne
from .upoly import ONE, UMatrix, UPoly, kron, block_diag, mono, pmul


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, eq=False)
class GradedComplex:
    ids: tuple[str, ...]
    gradings: tuple[Fraction, ...]
    differential: UMatrix
    name: str = "C"

    def __post_init__(self):
        object.__setattr__(self, "gradings", tuple(as_fraction(g) for g in self.gradings))
        n = len(self.ids)
        if len(self.gradings) != n or self.differential.shape != (n, n):
            raise ValueError("generator list and differential disagree in size")

    @classmethod
    def build(cls, gens: Iterable[tuple[str, object]],
              arrows: Iterable[tuple[str, str, object]] = (), name: str = "C") -> "GradedComplex":
        """Build from ``(id, grading)`` pairs and ``(source, target, exponents)`` arrows.

        ``exponents`` is an int or an iterable of ints.
        """
        gens = list(gens)
        ids = tuple(g for g, _ in gens)
        index = {g: k for k, g in enumerate(ids)}
        if len(index) != len(ids):
            raise ValueError("duplicate generator id")
        entries: dict[tuple[int, int], UPoly] = {}
        for src, tgt, exps in arrows:
            exps = [exps] if isinstance(exps, int) else list(exps)
            key = (index[tgt], index[src])
            entries[key] = entries.get(key, frozenset()) ^ frozenset(exps)
        return cls(ids, tuple(g for _, g in gens), UMatrix(len(ids), len(ids), entries), name)

    def __len__(self) -> int:
        return len(self.ids)

    def index(self, gen_id: str) -> int:
        return self.ids.index(gen_id)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedComplex):
            return NotImplemented
        return (self.ids, self.gradings, self.differential) == (other.ids, other.gradings, other.differential)

    def __hash__(self) -> int:
        return hash((self.ids, self.gradings))

    def renamed(self, name: str) -> "GradedComplex":
        return GradedComplex(self.ids, self.gradings, self.differential, name)

    def shifted(self, amount) -> "GradedComplex":
        amount = as_fraction(amount)
        return GradedComplex(self.ids, tuple(g + amount for g in self.gradings), self.differential, self.name)

    def arrows(self) -> list[tuple[str, str, UPoly]]:
        return [(self.ids[j], self.ids[i], p) for (i, j), p in self.differential.items()]


@dataclass(frozen=True)
class NormalForm:
    tower_grading: Fraction
    steps: tuple[tuple[Fraction, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tower_grading", as_fraction(self.tower_grading))
        object.__setattr__(self, "steps", tuple(sorted((as_fraction(t), int(i)) for t, i in self.steps)))

    def complex(self, name: str = "NF") -> GradedComplex:
        gens = [("t", self.tower_grading)]
        arrows = []
        for k, (top, length) in enumerate(self.steps, 1):
            gens.append((f"a{k}", top))
            gens.append((f"b{k}", top + 2 * length - 1))
            arrows.append((f"a{k}", f"b{k}", length))
        return GradedComplex.build(gens, arrows, name)

    def max_length(self) -> int:
        return max((i for _, i in self.steps), default=0)


def tower(d=0, gen_id: str = "x", name: str | None = None) -> GradedComplex:
    d = as_fraction(d)
    return GradedComplex((gen_id,), (d,), UMatrix.zero(1, 1), name or f"F[U]_{fmt_q(d)}")


def direct_sum(*cs: GradedComplex, name: str = "C") -> GradedComplex:
    ids: list[str] = []
    for c in cs:
        ids.extend(c.ids)
    if len(set(ids)) != len(ids):
        raise ValueError("direct sum needs distinct generator ids")
    gradings = tuple(g for c in cs for g in c.gradings)
    return GradedComplex(tuple(ids), gradings, block_diag(*(c.differential for c in cs)), name)


# --------------------------------------------------------------------------
# validation

def validate(c: GradedComplex) -> list[str]:
    out = []
    if len(set(c.ids)) != len(c.ids):
        out.append("duplicate generator ids")
    d = c.differential
    for (i, j), p in d.items():
        for k in sorted(p):
            if k < 0:
                out.append(f"entry {c.ids[j]} -> {c.ids[i]}: negative exponent {k}")
            elif c.gradings[i] - 2 * k != c.gradings[j] - 1:
                out.append(
                    f"homogeneity: entry {c.ids[j]} -> {c.ids[i]} U^{k} lands in grading "
                    f"{fmt_q(c.gradings[i] - 2 * k)}, expected {fmt_q(c.gradings[j] - 1)}")
    dd = d @ d
    for (i, j), p in dd.items():
        out.append(f"d^2 != 0: coefficient of {c.ids[i]} in d^2({c.ids[j]}) is nonzero")
    if c.gradings:
        g0 = c.gradings[0]
        for k, g in enumerate(c.gradings):
            if (g - g0).denominator != 1:
                out.append(f"grading coset: {c.ids[0]} and {c.ids[k]} differ by {fmt_q(g - g0)}")
    return out


def is_homogeneous_map(m: UMatrix, src: GradedComplex, tgt: GradedComplex, degree) -> bool:
    degree = as_fraction(degree)
    for (i, j), p in m.items():
        for k in p:
            if k < 0 or tgt.gradings[i] - 2 * k != src.gradings[j] + degree:
                return False
    return True


def is_chain_map(m: UMatrix, src: GradedComplex, tgt: GradedComplex) -> bool:
    return (tgt.differential @ m) == (m @ src.differential)


# --------------------------------------------------------------------------
# reduction

@dataclass(frozen=True, eq=False)
class Reduction:
    """Outcome of reducing C to tower-plus-steps form.

    ``incl: R -> C`` and ``proj: C -> R`` are chain maps with
    ``proj @ incl == id`` and ``incl @ proj + id == dK + Kd`` for
    ``K = homotopy``.  Generator 0 of ``reduced`` is the tower.
    """
    source: GradedComplex
    normal_form: NormalForm
    reduced: GradedComplex
    incl: UMatrix
    proj: UMatrix
    homotopy: UMatrix
    cancelled: tuple[tuple[int, int], ...] = field(default=())

    @property
    def tower_cycle(self) -> dict[int, UPoly]:
        """The tower generator written in the basis of the source complex."""
        return dict(self.incl.col(0))


class _Workspace:
    """Mutable copy of a differential under simultaneous basis change."""

    def __init__(self, d: UMatrix):
        n = d.nrows
        self.n = n
        self.cols = [dict(d.col(j)) for j in range(n)]
        self.rows = d.rows()
        self.p_cols = [{j: ONE} for j in range(n)]   # new basis in old coordinates
        self.q_rows = [{i: ONE} for i in range(n)]   # rows of the inverse change

    def _set(self, i, j, p):
        if p:
            self.cols[j][i] = p
            self.rows[i][j] = p
        else:
            self.cols[j].pop(i, None)
            self.rows[i].pop(j, None)

    def change(self, a: int, b: int, c: UPoly):
        """Replace basis element e_a by e_a + c e_b."""
        for i, p in list(self.cols[b].items()):
            self._set(i, a, self.cols[a].get(i, frozenset()) ^ pmul(p, c))
        for j, p in list(self.rows[a].items()):
            self._set(b, j, self.rows[b].get(j, frozenset()) ^ pmul(c, p))
        for i, p in list(self.p_cols[b].items()):
            q = self.p_cols[a].get(i, frozenset()) ^ pmul(p, c)
            if q:
                self.p_cols[a][i] = q
            else:
                self.p_cols[a].pop(i, None)
        for j, p in list(self.q_rows[a].items()):
            q = self.q_rows[b].get(j, frozenset()) ^ pmul(c, p)
            if q:
                self.q_rows[b][j] = q
            else:
                self.q_rows[b].pop(j, None)


def _exponent(p: UPoly) -> int:
    if len(p) != 1:
        raise ValueError("differential entry is not a monomial; validate the complex first")
    return next(iter(p))


def reduction(c: GradedComplex) -> Reduction:
    """Reduce C to one tower plus two-step pieces, tracking the equivalence.

    Each round pivots on the entry with the smallest U-exponent, ties broken
    by (row, column); unit pivots cancel, other pivots split off a step.
    """
    bad = validate(c)
    if bad:
        raise ValueError("invalid complex: " + "; ".join(bad[:3]))
    n = len(c)
    ws = _Workspace(c.differential)
    active = set(range(n))
    pairs: list[tuple[int, int, int]] = []   # (source j, target i, exponent k)
    while True:
        best = None
        for j in active:
            for i, p in ws.cols[j].items():
                key = (_exponent(p), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        k, i, j = best
        for l, p in list(ws.rows[i].items()):
            if l != j:
                ws.change(l, j, mono(_exponent(p) - k))
        for r, p in list(ws.cols[j].items()):
            if r != i:
                ws.change(i, r, mono(_exponent(p) - k))
        assert ws.rows[i] == {j: mono(k)} and ws.cols[j] == {i: mono(k)}
        assert not ws.cols[i] and not ws.rows[j]
        pairs.append((j, i, k))
        active -= {i, j}
    if len(active) != 1:
        raise NotRankOne(f"{c.name}: {len(active)} tower generators remain after reduction")
    (t,) = active
    steps = [(j, i, k) for j, i, k in pairs if k > 0]
    kept = [t]
    for j, i, _ in steps:
        kept += [j, i]
    nf = NormalForm(c.gradings[t], tuple((c.gradings[j], k) for j, i, k in steps))

    pos = {g: a for a, g in enumerate(kept)}
    red_entries = {}
    for j in kept:
        for i, p in ws.cols[j].items():
            red_entries[(pos[i], pos[j])] = p
    reduced = GradedComplex(tuple(c.ids[g] for g in kept), tuple(c.gradings[g] for g in kept),
                            UMatrix(len(kept), len(kept), red_entries), f"red({c.name})")
    incl = UMatrix._from_cols(n, [dict(ws.p_cols[g]) for g in kept])
    proj = UMatrix(len(kept), n, {(pos[g], j): p for g in kept for j, p in ws.q_rows[g].items()})
    pmat = UMatrix._from_cols(n, [dict(col) for col in ws.p_cols])
    qmat = UMatrix(n, n, {(i, j): p for i in range(n) for j, p in ws.q_rows[i].items()})
    h = UMatrix(n, n, {(j, i): ONE for j, i, k in pairs if k == 0})
    homotopy = pmat @ h @ qmat
    cancelled = tuple((j, i) for j, i, k in pairs if k == 0)
    return Reduction(c, nf, reduced, incl, proj, homotopy, cancelled)


def reduce(c: GradedComplex) -> tuple[NormalForm, GradedComplex]:
    r = reduction(c)
    return r.normal_form, r.reduced


def d_invariant(c: GradedComplex) -> Fraction:
    return reduction(c).normal_form.tower_grading


# --------------------------------------------------------------------------
# constructions

def tensor(c1: GradedComplex, c2: GradedComplex, name: str | None = None) -> GradedComplex:
    ids = tuple(f"{a}⊗{b}" for a in c1.ids for b in c2.ids)
    gradings = tuple(g + h for g in c1.gradings for h in c2.gradings)
    d = kron(c1.differential, UMatrix.identity(len(c2))) + kron(UMatrix.identity(len(c1)), c2.differential)
    return GradedComplex(ids, gradings, d, name or f"({c1.name}⊗{c2.name})")


def dual(c: GradedComplex, name: str | None = None) -> GradedComplex:
    return GradedComplex(tuple(f"{a}*" for a in c.ids), tuple(-g for g in c.gradings),
                         c.differential.transpose(), name or f"{c.name}*")


# --------------------------------------------------------------------------
# homology checks that do not go through the reduction

def localized_rank(c: GradedComplex) -> int:
    """Rank of U^{-1}H_*(C), computed from the complex with U set to 1."""
    cols = c.differential.at_one()
    return len(c) - 2 * gf2.rank(cols, len(c))


def truncated_homology(c: GradedComplex, bound: int) -> dict[Fraction, int]:
    """Graded F2-dimensions of H_*(C / U^bound)."""
    basis: dict[tuple[int, int], int] = {}
    by_grading: dict[Fraction, list[tuple[int, int]]] = {}
    for x in range(len(c)):
        for p in range(bound):
            g = c.gradings[x] - 2 * p
            by_grading.setdefault(g, []).append((x, p))
    for g, elems in by_grading.items():
        for k, e in enumerate(elems):
            basis[e] = k
    d = c.differential

    def rank_from(g: Fraction) -> int:
        src = by_grading.get(g, [])
        vecs = []
        for x, p in src:
            v = 0
            for i, poly in d.col(x).items():
                for k in poly:
                    if p + k < bound:
                        v ^= 1 << basis[(i, p + k)]
            vecs.append(v)
        return gf2.rank(vecs, len(by_grading.get(g - 1, [])))

    return {g: len(elems) - rank_from(g) - rank_from(g + 1)
            for g, elems in sorted(by_grading.items())
            if len(elems) - rank_from(g) - rank_from(g + 1)}


def step(top, length: int, a: str = "a", b: str = "b") -> GradedComplex:
    top = as_fraction(top)
    return GradedComplex.build([(a, top), (b, top + 2 * length - 1)], [(a, b, length)],
                               f"step({fmt_q(top)},{length})")

