"""Bigraded knot-like complexes over F2[U, V] and the large-surgery complexes.

A UV-polynomial is a frozenset of ``(a, b)`` exponent pairs.  U has
bigrading (-2, 0), V has (0, -2) and the differential has (-1, -1).  The
Alexander grading of a generator is ``(gr_w - gr_z) / 2``.

For ``s`` an integer, the one-variable complex A_s is the Alexander-grading-s
part of C, with U acting as the product UV.  Each generator x contributes
the single F[U]-generator U^max(0, A-s) V^max(0, s-A) x of Maslov grading
``gr_w(x) - 2 max(0, A(x) - s)``.  B is C with V set to 1, and v is the
inclusion A_s -> B, which sends the generator of x to U^max(0, A-s) x.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import gf2
from .errors import InvalidInput
from .fu_algebra import GradedComplex, as_fraction
from .iota import UMap
from .upoly import UMatrix

UVPoly = frozenset
UV_ONE: UVPoly = frozenset({(0, 0)})


def uvmul(p: UVPoly, q: UVPoly) -> UVPoly:
    out: set = set()
    for a, b in p:
        for c, d in q:
            out ^= {(a + c, b + d)}
    return frozenset(out)


def format_uv(p: UVPoly) -> str:
    if not p:
        return "0"
    return " + ".join(f"U^{a} V^{b}" for a, b in sorted(p))


def _matmul(x: Mapping, y: Mapping) -> dict:
    """Product of sparse {(row, col): UVPoly} matrices."""
    by_row: dict[int, list] = {}
    for (k, j), q in y.items():
        by_row.setdefault(k, []).append((j, q))
    out: dict = {}
    for (i, k), p in x.items():
        for j, q in by_row.get(k, ()):
            r = out.get((i, j), frozenset()) ^ uvmul(p, q)
            if r:
                out[(i, j)] = r
            else:
                out.pop((i, j), None)
    return out


@dataclass(frozen=True, eq=False)
class KnotLikeComplex:
    ids: tuple[str, ...]
    gr_w: tuple[Fraction, ...]
    gr_z: tuple[Fraction, ...]
    differential: Mapping[tuple[int, int], UVPoly]
    name: str = "K"

    def __post_init__(self):
        object.__setattr__(self, "gr_w", tuple(as_fraction(g) for g in self.gr_w))
        object.__setattr__(self, "gr_z", tuple(as_fraction(g) for g in self.gr_z))
        object.__setattr__(self, "differential",
                           {k: frozenset(v) for k, v in self.differential.items() if v})
        if not (len(self.ids) == len(self.gr_w) == len(self.gr_z)):
            raise ValueError("generator data have different lengths")

    @classmethod
    def build(cls, gens: Iterable[tuple[str, object, object]],
              arrows: Iterable[tuple[str, str, Iterable[tuple[int, int]]]] = (),
              name: str = "K") -> "KnotLikeComplex":
        gens = list(gens)
        ids = tuple(g[0] for g in gens)
        index = {g: k for k, g in enumerate(ids)}
        if len(index) != len(ids):
            raise ValueError("duplicate generator id")
        d: dict = {}
        for src, tgt, terms in arrows:
            key = (index[tgt], index[src])
            d[key] = d.get(key, frozenset()) ^ frozenset(tuple(t) for t in terms)
        return cls(ids, tuple(g[1] for g in gens), tuple(g[2] for g in gens), d, name)

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KnotLikeComplex):
            return NotImplemented
        return (self.ids, self.gr_w, self.gr_z, self.differential) == \
            (other.ids, other.gr_w, other.gr_z, other.differential)

    def alexander(self, i: int) -> Fraction:
        return (self.gr_w[i] - self.gr_z[i]) / 2

    def arrows(self) -> list[tuple[str, str, UVPoly]]:
        return [(self.ids[j], self.ids[i], p) for (i, j), p in sorted(self.differential.items(),
                                                                       key=lambda kv: (kv[0][1], kv[0][0]))]

    def at_one(self) -> list[int]:
        """Differential with U = V = 1, as column bitsets."""
        cols = [0] * len(self)
        for (i, j), p in self.differential.items():
            if len(p) & 1:
                cols[j] ^= 1 << i
        return cols

    def renamed(self, name: str) -> "KnotLikeComplex":
        return KnotLikeComplex(self.ids, self.gr_w, self.gr_z, self.differential, name)


# --------------------------------------------------------------------------
# validation

def localized_rank(c: KnotLikeComplex) -> int:
    return len(c) - 2 * gf2.rank(c.at_one(), len(c))


def validate_knotlike(c: KnotLikeComplex) -> list[str]:
    out = []
    for k, g in enumerate(c.ids):
        if c.alexander(k).denominator != 1:
            out.append(f"alexander: generator {g} has non-integral (gr_w - gr_z)/2")
    if len({(gw - c.gr_w[0]).denominator for gw in c.gr_w} | {1}) > 1:
        out.append("gradings: gr_w values do not lie in one coset of Q/Z")
    for (i, j), p in sorted(c.differential.items()):
        for a, b in sorted(p):
            if a < 0 or b < 0:
                out.append(f"bidegree: negative exponent in {c.ids[j]} -> {c.ids[i]}")
                continue
            if (c.gr_w[i] - 2 * a != c.gr_w[j] - 1) or (c.gr_z[i] - 2 * b != c.gr_z[j] - 1):
                out.append(f"bidegree: entry {c.ids[j]} -> {c.ids[i]} U^{a} V^{b} does not have "
                           f"bidegree (-1, -1)")
    if _matmul(c.differential, c.differential):
        out.append("differential: d^2 != 0")
    elif not out and localized_rank(c) != 1:
        out.append(f"localization: rank {localized_rank(c)} after inverting U and V, expected 1")
    return out


# --------------------------------------------------------------------------
# local triviality

def _nontrivial_class(d_cols: list[int], n: int, support: list[int]) -> bool:
    """Is there a cycle supported on ``support`` that is not a boundary?"""
    if not support:
        return False
    # unknowns: one bit per supported generator; equations: rows of d
    rows = [0] * n
    for pos, j in enumerate(support):
        col = d_cols[j]
        while col:
            i = gf2.lowest_bit(col)
            rows[i] |= 1 << pos
            col &= col - 1
    _, kernel = gf2.solve(rows, len(support))
    image = gf2.Echelon(n)
    for col in d_cols:
        image.add(col)
    for z in kernel:
        vec = 0
        for pos, j in enumerate(support):
            if (z >> pos) & 1:
                vec |= 1 << j
        if not gf2.in_span(vec, image):
            return True
    return False


def _transpose_cols(cols: list[int], n: int) -> list[int]:
    out = [0] * n
    for j, col in enumerate(cols):
        while col:
            i = gf2.lowest_bit(col)
            out[i] |= 1 << j
            col &= col - 1
    return out


def local_map_witnesses(c: KnotLikeComplex) -> tuple[bool, bool]:
    """Whether bigrading-preserving local maps F[U,V] -> C and C -> F[U,V] exist.

    A map F[U,V] -> C is the choice of a cycle in bidegree (0, 0), which is a
    combination of the elements U^(gr_w/2) V^(gr_z/2) x with both gradings of
    x even and nonnegative.  It is local exactly when the cycle survives in
    the homology of C with U = V = 1 (homogeneity makes that homology the
    localized homology).  Maps C -> F[U,V] are the dual question for cocycles
    supported on generators with both gradings even and nonpositive.
    """
    n = len(c)
    cols = c.at_one()

    def even(q: Fraction) -> bool:
        return q.denominator == 1 and q.numerator % 2 == 0

    up = [k for k in range(n) if even(c.gr_w[k]) and even(c.gr_z[k]) and c.gr_w[k] >= 0 and c.gr_z[k] >= 0]
    down = [k for k in range(n) if even(c.gr_w[k]) and even(c.gr_z[k]) and c.gr_w[k] <= 0 and c.gr_z[k] <= 0]
    into = _nontrivial_class(cols, n, up)
    out_of = _nontrivial_class(_transpose_cols(cols, n), n, down)
    return into, out_of


def is_locally_trivial_knotlike(c: KnotLikeComplex) -> bool:
    into, out_of = local_map_witnesses(c)
    return into and out_of


# --------------------------------------------------------------------------
# transforms

def tensor_knotlike(c1: KnotLikeComplex, c2: KnotLikeComplex, name: str | None = None) -> KnotLikeComplex:
    """Connected sum model: index (i, k) maps to i * len(c2) + k."""
    n2 = len(c2)
    ids, gw, gz = [], [], []
    for i, x in enumerate(c1.ids):
        for k, y in enumerate(c2.ids):
            ids.append(f"{x}⊗{y}")
            gw.append(c1.gr_w[i] + c2.gr_w[k])
            gz.append(c1.gr_z[i] + c2.gr_z[k])
    d: dict = {}
    for (i, j), p in c1.differential.items():
        for k in range(n2):
            d[(i * n2 + k, j * n2 + k)] = p
    for (k, l), p in c2.differential.items():
        for i in range(len(c1)):
            key = (i * n2 + k, i * n2 + l)
            d[key] = d.get(key, frozenset()) ^ p
    return KnotLikeComplex(tuple(ids), tuple(gw), tuple(gz), d, name or f"({c1.name}#{c2.name})")


def reverse(c: KnotLikeComplex) -> KnotLikeComplex:
    """String-orientation reversal: swap the two gradings and the two variables."""
    d = {k: frozenset((b, a) for a, b in p) for k, p in c.differential.items()}
    return KnotLikeComplex(c.ids, c.gr_z, c.gr_w, d, f"r{c.name}")


def mirror(c: KnotLikeComplex) -> KnotLikeComplex:
    """Mirror image: the dual complex."""
    d = {(j, i): p for (i, j), p in c.differential.items()}
    return KnotLikeComplex(tuple(f"{g}*" for g in c.ids), tuple(-g for g in c.gr_w),
                           tuple(-g for g in c.gr_z), d, f"m{c.name}")


# --------------------------------------------------------------------------
# the one-variable complexes

def _check(c: KnotLikeComplex) -> None:
    bad = validate_knotlike(c)
    if bad:
        raise InvalidInput("invalid knot-like complex: " + "; ".join(bad[:3]))


def _lift(c: KnotLikeComplex, s: int) -> list[int]:
    """U-exponent of the A_s generator of each x."""
    return [max(0, int(c.alexander(k)) - s) for k in range(len(c))]


def build_An(c: KnotLikeComplex, n: int) -> GradedComplex:
    if n <= 0:
        raise InvalidInput(f"n must be positive, got {n}")
    return build_As(c, n)


def build_As(c: KnotLikeComplex, s: int) -> GradedComplex:
    """A_s for any integer s (build_An restricts to the positive range)."""
    _check(c)
    lift = _lift(c, s)
    entries = {}
    for (i, j), p in c.differential.items():
        # a term U^a V^b y of dx contributes U^k y_s with lift_y = lift_x + a - k
        exps: set = set()
        for a, _ in p:
            exps ^= {lift[j] + a - lift[i]}
        if exps:
            entries[(i, j)] = frozenset(exps)
    gradings = tuple(c.gr_w[k] - 2 * lift[k] for k in range(len(c)))
    return GradedComplex(c.ids, gradings, UMatrix(len(c), len(c), entries), f"A{s}({c.name})")


def build_B(c: KnotLikeComplex) -> GradedComplex:
    _check(c)
    entries = {}
    for (i, j), p in c.differential.items():
        exps: set = set()
        for a, _ in p:
            exps ^= {a}
        if exps:
            entries[(i, j)] = frozenset(exps)
    return GradedComplex(c.ids, c.gr_w, UMatrix(len(c), len(c), entries), f"B({c.name})")


def v_map(c: KnotLikeComplex, n: int) -> UMap:
    a = build_An(c, n)
    b = build_B(c)
    lift = _lift(c, n)
    m = UMatrix(len(c), len(c), {(k, k): frozenset({lift[k]}) for k in range(len(c))})
    return UMap(a, b, m, 0)
