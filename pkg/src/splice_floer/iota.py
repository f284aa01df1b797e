"""Iota-complexes: homotopy solving, local maps and the surgery cone.

Every map between complexes is homogeneous, so each matrix entry of an
unknown map is either 0 or the single monomial U^k whose exponent is forced
by the gradings.  Homotopy and local-map questions therefore become finite
linear systems over GF(2) with one bit per admissible entry.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import gf2
from .errors import (DegreeMismatch, HypothesisFailed, InvalidCone, InvalidInput,
                     NotRankOne, SearchBudgetExceeded)
from .fu_algebra import (GradedComplex, Reduction, as_fraction, dual, fmt_q, is_chain_map,
                         is_homogeneous_map, reduction, tensor, tower, validate)
from .upoly import ONE, UMatrix, kron, mono

DEFAULT_BUDGET = 24


def search_budget() -> int:
    raw = os.environ.get("SPLICE_FLOER_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True, eq=False)
class UMap:
    source: GradedComplex
    target: GradedComplex
    matrix: UMatrix
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "degree", as_fraction(self.degree))
        if self.matrix.shape != (len(self.target), len(self.source)):
            raise ValueError(f"map matrix has shape {self.matrix.shape}, expected "
                             f"{(len(self.target), len(self.source))}")

    def is_homogeneous(self) -> bool:
        return is_homogeneous_map(self.matrix, self.source, self.target, self.degree)

    def is_chain_map(self) -> bool:
        return is_chain_map(self.matrix, self.source, self.target)

    def __matmul__(self, other: "UMap") -> "UMap":
        return UMap(other.source, self.target, self.matrix @ other.matrix, self.degree + other.degree)


@dataclass(frozen=True)
class ConeData:
    a: GradedComplex
    b: GradedComplex
    v: UMap
    shift: Fraction


@dataclass(frozen=True, eq=False)
class IotaComplex:
    complex: GradedComplex
    iota: UMatrix
    cone: ConeData | None = field(default=None, compare=False)

    @property
    def iota_map(self) -> UMap:
        return UMap(self.complex, self.complex, self.iota)


def trivial(d=0) -> IotaComplex:
    """The rank-one model (F[U]_d, id)."""
    return IotaComplex(tower(d, "1"), UMatrix.identity(1))


# --------------------------------------------------------------------------
# the linear systems

class _System:
    """Unknown homogeneous maps plus linear equations in their entries."""

    def __init__(self):
        self.unknowns: list[tuple[str, int, int, int]] = []
        self.blocks: dict[str, tuple[int, int, GradedComplex, GradedComplex]] = {}
        self._eqs: dict[tuple, int] = {}
        self._const: set[tuple] = set()

    def add_block(self, tag, src: GradedComplex, tgt: GradedComplex, degree) -> None:
        start = len(self.unknowns)
        degree = as_fraction(degree)
        for j, gs in enumerate(src.gradings):
            for i, gt in enumerate(tgt.gradings):
                twice_k = gt - gs - degree
                if twice_k.denominator == 1 and twice_k >= 0 and twice_k.numerator % 2 == 0:
                    self.unknowns.append((tag, i, j, twice_k.numerator // 2))
        self.blocks[tag] = (start, len(self.unknowns), src, tgt)

    def term(self, eq, tag, left: UMatrix | None = None, right: UMatrix | None = None) -> None:
        """Add left @ X_tag @ right to equation family ``eq``; None means identity."""
        start, stop, _, _ = self.blocks[tag]
        right_rows = right.rows() if right is not None else None
        for u in range(start, stop):
            _, i, j, k = self.unknowns[u]
            lefts = [(i, 0)] if left is None else [(r, e) for r, p in left.col(i).items() for e in p]
            rights = [(j, 0)] if right is None else [(c, e) for c, p in right_rows[j].items() for e in p]
            for r, e1 in lefts:
                for c, e2 in rights:
                    key = (eq, r, c, e1 + k + e2)
                    self._eqs[key] = self._eqs.get(key, 0) ^ (1 << u)

    def constant(self, eq, m: UMatrix) -> None:
        for (i, j), p in m.items():
            for e in p:
                key = (eq, i, j, e)
                self._eqs.setdefault(key, 0)
                self._const ^= {key}

    def solve(self) -> tuple[int | None, list[int]]:
        n = len(self.unknowns)
        eqs = [bits | ((1 << n) if key in self._const else 0) for key, bits in self._eqs.items()]
        return gf2.solve(eqs, n)

    def matrix(self, tag, solution: int) -> UMatrix:
        start, stop, src, tgt = self.blocks[tag]
        entries = {}
        for u in range(start, stop):
            if (solution >> u) & 1:
                _, i, j, k = self.unknowns[u]
                entries[(i, j)] = mono(k)
        return UMatrix(len(tgt), len(src), entries)


# --------------------------------------------------------------------------
# homotopies

def homotopy_solve(f: UMap, g: UMap) -> UMap | None:
    """Find H of degree deg+1 with dH + Hd = f + g, or None if none exists."""
    if (len(f.source), len(f.target)) != (len(g.source), len(g.target)) or f.degree != g.degree:
        raise DegreeMismatch("maps differ in source, target or degree")
    if f.source.gradings != g.source.gradings or f.target.gradings != g.target.gradings:
        raise DegreeMismatch("maps have differently graded sources or targets")
    src, tgt = f.source, f.target
    sys = _System()
    sys.add_block("H", src, tgt, f.degree + 1)
    sys.term("eq", "H", left=tgt.differential)
    sys.term("eq", "H", right=src.differential)
    sys.constant("eq", f.matrix + g.matrix)
    sol, _ = sys.solve()
    if sol is None:
        return None
    return UMap(src, tgt, sys.matrix("H", sol), f.degree + 1)


def verify_iota(x: IotaComplex) -> tuple[list[str], UMap | None]:
    """Check the iota-complex axioms; returns (violations, homotopy iota^2 ~ id)."""
    c = x.complex
    out = validate(c)
    if out:
        return out, None
    if x.iota.shape != (len(c), len(c)):
        return ["iota has the wrong shape"], None
    if not is_homogeneous_map(x.iota, c, c, 0):
        out.append("iota is not grading-preserving")
    if not is_chain_map(x.iota, c, c):
        out.append("iota is not a chain map")
    witness = None
    if not out:
        sq = UMap(c, c, x.iota @ x.iota)
        witness = homotopy_solve(sq, UMap(c, c, UMatrix.identity(len(c))))
        if witness is None:
            out.append("iota^2 is not homotopic to the identity")
    try:
        reduction(c)
    except NotRankOne as exc:
        out.append(f"localization: {exc}")
    return out, (witness if not out else None)


# --------------------------------------------------------------------------
# local maps

def _tower_exponent(r1: Reduction, r2: Reduction) -> int | None:
    diff = r2.normal_form.tower_grading - r1.normal_form.tower_grading
    if diff.denominator != 1 or diff < 0 or diff.numerator % 2:
        return None
    return diff.numerator // 2


def _localizes(m: UMatrix, r1: Reduction, r2: Reduction) -> bool:
    """Does the map send tower to tower (an isomorphism after inverting U)?"""
    return bool((r2.proj @ m @ r1.incl)[0, 0])


def is_local_map(f: UMap, x1: IotaComplex, x2: IotaComplex) -> bool:
    if f.degree != 0:
        raise DegreeMismatch(f"local maps have degree 0, got {fmt_q(f.degree)}")
    if f.matrix.shape != (len(x2.complex), len(x1.complex)):
        raise DegreeMismatch("map does not go between the given complexes")
    c1, c2 = x1.complex, x2.complex
    if not is_homogeneous_map(f.matrix, c1, c2, 0) or not is_chain_map(f.matrix, c1, c2):
        return False
    lhs = UMap(c1, c2, x2.iota @ f.matrix)
    rhs = UMap(c1, c2, f.matrix @ x1.iota)
    if homotopy_solve(lhs, rhs) is None:
        return False
    return _localizes(f.matrix, reduction(c1), reduction(c2))


@dataclass(frozen=True, eq=False)
class LocalMapSpace:
    """Chain maps that are iota-homomorphisms, modulo nothing.

    ``basis`` spans the F-parts of all solutions (reduced echelon form,
    ordered by pivot); ``localization`` is the linear functional picking out
    the tower-to-tower coefficient.
    """
    system: _System
    basis: list[int]
    localization: int

    def candidates(self):
        """All maps in the space, in binary counting order over the basis."""
        for m in range(1 << len(self.basis)):
            v = 0
            for t, b in enumerate(self.basis):
                if (m >> t) & 1:
                    v ^= b
            yield v

    def to_map(self, bits: int) -> UMatrix:
        return self.system.matrix("F", bits)


def local_map_space(x1: IotaComplex, x2: IotaComplex) -> LocalMapSpace:
    c1, c2 = x1.complex, x2.complex
    sys = _System()
    sys.add_block("F", c1, c2, 0)
    n_f = len(sys.unknowns)
    sys.add_block("H", c1, c2, 1)
    sys.term("chain", "F", left=c2.differential)
    sys.term("chain", "F", right=c1.differential)
    sys.term("iota", "F", left=x2.iota)
    sys.term("iota", "F", right=x1.iota)
    sys.term("iota", "H", left=c2.differential)
    sys.term("iota", "H", right=c1.differential)
    _, kernel = sys.solve()
    mask = (1 << n_f) - 1
    basis = gf2.span_basis((v & mask for v in kernel), n_f)

    r1, r2 = reduction(c1), reduction(c2)
    phi = 0
    k0 = _tower_exponent(r1, r2)
    if k0 is not None:
        left = r2.proj
        right = r1.incl
        for u in range(n_f):
            _, i, j, k = sys.unknowns[u]
            coeff = 0
            for e1 in left[0, i]:
                for e2 in right[j, 0]:
                    if e1 + k + e2 == k0:
                        coeff ^= 1
            if coeff:
                phi |= 1 << u
    return LocalMapSpace(sys, basis, phi)


def find_local_map(x1: IotaComplex, x2: IotaComplex, budget: int | None = None) -> UMap | None:
    """Exhaustive search for a local map x1 -> x2.

    Candidates are the members of the solution space in binary counting
    order over its echelon basis; the first one that is an isomorphism after
    inverting U is returned.  Because that test is linear in the map, the
    first passing candidate is the basis vector of lowest index on which the
    localization functional is 1, and if the functional vanishes on the
    whole basis no candidate can pass; both facts let the enumeration stop
    without visiting every candidate.
    """
    budget = search_budget() if budget is None else budget
    space = local_map_space(x1, x2)
    if len(space.basis) > budget:
        raise SearchBudgetExceeded(
            f"solution space has dimension {len(space.basis)} > budget {budget}")
    for b in space.basis:
        if gf2.parity(b & space.localization):
            return UMap(x1.complex, x2.complex, space.to_map(b))
    return None


def is_locally_equivalent(x1: IotaComplex, x2: IotaComplex, budget: int | None = None) -> bool:
    return (find_local_map(x1, x2, budget) is not None
            and find_local_map(x2, x1, budget) is not None)


def is_locally_trivial(x: IotaComplex, budget: int | None = None) -> bool:
    return is_locally_equivalent(x, trivial(0), budget)


# --------------------------------------------------------------------------
# tensor and dual

def tensor_iota(x1: IotaComplex, x2: IotaComplex) -> IotaComplex:
    return IotaComplex(tensor(x1.complex, x2.complex), kron(x1.iota, x2.iota))


def dual_iota(x: IotaComplex) -> IotaComplex:
    return IotaComplex(dual(x.complex), x.iota.transpose())


# --------------------------------------------------------------------------
# the surgery mapping cone

def _assemble(row_sizes: list[int], col_sizes: list[int], blocks: dict[tuple[int, int], UMatrix]) -> UMatrix:
    r_off = [sum(row_sizes[:k]) for k in range(len(row_sizes))]
    c_off = [sum(col_sizes[:k]) for k in range(len(col_sizes))]
    entries = {}
    for (br, bc), m in blocks.items():
        for (i, j), p in m.items():
            entries[(r_off[br] + i, c_off[bc] + j)] = p
    return UMatrix(sum(row_sizes), sum(col_sizes), entries)


def surgery_cone(a: GradedComplex, b: GradedComplex, v: UMap, shift=0) -> IotaComplex:
    """Two copies of A mapping by v into B; iota swaps the copies and fixes B.

    A-generators keep their grading; a B-generator sits at its grading
    minus (1 + deg v).  Everything is then shifted by ``shift``.
    """
    shift = as_fraction(shift)
    if v.matrix.shape != (len(b), len(a)) or v.source.gradings != a.gradings or v.target.gradings != b.gradings:
        raise InvalidCone("v does not map A to B")
    if v.degree.denominator != 1 or v.degree.numerator % 2:
        raise InvalidCone(f"v must have even degree, got {fmt_q(v.degree)}")
    if not v.is_homogeneous():
        raise InvalidCone("v is not homogeneous of its stated degree")
    if not v.is_chain_map():
        raise InvalidCone("v is not a chain map")
    try:
        nf_b = reduction(b).normal_form
    except NotRankOne as exc:
        raise InvalidCone(f"B is not a single tower: {exc}") from exc
    if nf_b.steps:
        raise InvalidCone("B is not a single tower after reduction")
    na, nb = len(a), len(b)
    ids = tuple(f"L.{g}" for g in a.ids) + tuple(f"R.{g}" for g in a.ids) + tuple(f"B.{g}" for g in b.ids)
    b_off = -1 - v.degree
    gradings = (tuple(g + shift for g in a.gradings) * 2
                + tuple(g + b_off + shift for g in b.gradings))
    sizes = [na, na, nb]
    d = _assemble(sizes, sizes, {(0, 0): a.differential, (1, 1): a.differential,
                                 (2, 2): b.differential, (2, 0): v.matrix, (2, 1): v.matrix})
    ident_a = UMatrix.identity(na)
    iota = _assemble(sizes, sizes, {(0, 1): ident_a, (1, 0): ident_a, (2, 2): UMatrix.identity(nb)})
    cx = GradedComplex(ids, gradings, d, f"cone({a.name}->{b.name})")
    return IotaComplex(cx, iota, ConeData(a, b, v, shift))


@dataclass(frozen=True, eq=False)
class CorollaryResult:
    model: IotaComplex
    to_model: UMap
    to_model_homotopy: UMap
    from_model: UMap
    from_model_homotopy: UMap
    reduced_cone: IotaComplex
    basis_changes: tuple[tuple[str, int], ...]


def corollary_reduce(x: IotaComplex, d_a=0) -> CorollaryResult:
    """Show a surgery cone with d(A) = 0 is locally equivalent to (F[U]_shift, id).

    A is put in normal form and B replaced by its tower.  Each two-step
    generator a with v(a) = U^m y is replaced by a + U^m x, where x is the
    tower generator of A, after which the steps split off and the cone is
    visibly the three-generator cone on towers.  The explicit local maps are
    then carried back to the original cone through the reductions of A and B.
    """
    if x.cone is None:
        raise InvalidInput("corollary_reduce needs a complex built by surgery_cone")
    a, b, v, shift = x.cone.a, x.cone.b, x.cone.v, x.cone.shift
    ra, rb = reduction(a), reduction(b)
    if as_fraction(d_a) != ra.normal_form.tower_grading:
        raise HypothesisFailed(f"supplied d(A) = {fmt_q(as_fraction(d_a))} but the reduction gives "
                               f"{fmt_q(ra.normal_form.tower_grading)}")
    if ra.normal_form.tower_grading != 0:
        raise HypothesisFailed(f"d(A) = {fmt_q(ra.normal_form.tower_grading)} is not 0")
    ra_c, rb_c = ra.reduced, rb.reduced
    v_red = rb.proj @ v.matrix @ ra.incl
    if v_red[0, 0] != ONE:
        raise HypothesisFailed("v does not send the tower of A to a unit multiple of the tower of B")
    x_red = surgery_cone(ra_c, rb_c, UMap(ra_c, rb_c, v_red, v.degree), shift)

    na, nb = len(ra_c), len(rb_c)
    n_red = 2 * na + nb
    d = shift
    model = trivial(d)
    changes = []
    to_entries = {(0, 0): ONE}
    for s in range(1, na, 2):
        p = v_red[0, s]
        if p:
            m = next(iter(p))
            changes.append((ra_c.ids[s], m))
            to_entries[(0, s)] = mono(m)
    to_red = UMatrix(1, n_red, to_entries)
    y_index = 2 * na
    h_red = UMatrix(1, n_red, {(0, y_index): ONE})
    from_red = UMatrix(n_red, 1, {(0, 0): ONE, (na, 0): ONE})

    # cone maps induced by the reductions, corrected by the homotopies
    kappa = rb.proj @ v.matrix @ ra.homotopy
    kappa_back = rb.homotopy @ v.matrix @ ra.incl
    n_a, n_b = len(a), len(b)
    phi = _assemble([na, na, nb], [n_a, n_a, n_b],
                    {(0, 0): ra.proj, (1, 1): ra.proj, (2, 0): kappa, (2, 1): kappa, (2, 2): rb.proj})
    psi = _assemble([n_a, n_a, n_b], [na, na, nb],
                    {(0, 0): ra.incl, (1, 1): ra.incl, (2, 0): kappa_back, (2, 1): kappa_back,
                     (2, 2): rb.incl})

    cx = x.complex
    return CorollaryResult(
        model=model,
        to_model=UMap(cx, model.complex, to_red @ phi),
        to_model_homotopy=UMap(cx, model.complex, h_red @ phi, 1),
        from_model=UMap(model.complex, cx, psi @ from_red),
        from_model_homotopy=UMap(model.complex, cx, UMatrix.zero(len(cx), 1), 1),
        reduced_cone=x_red,
        basis_changes=tuple(changes),
    )
