"""Framed-link surgery presentations, blow-ups and the handle cobordisms.

Companion knots (a knot K inside a homology sphere Y) are opaque labels.
All homological data treat them as null-homologous curves, which is exact
for linking matrices, so every computation here is linear algebra on the
symmetric linking matrix (framings on the diagonal).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .errors import InadmissibleWord, InvalidInput, NoClasp, NotBlowdownable, OutOfRange
from .splice import GeneratorWord, evaluate_word, is_splice_homology_sphere, lemma_word


@dataclass(frozen=True)
class SurgeryPresentation:
    labels: tuple[str, ...]
    companions: tuple[bool, ...]
    linking: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(self.companions) != n or len(self.linking) != n or any(len(r) != n for r in self.linking):
            raise InvalidInput("presentation data have inconsistent sizes")
        for i in range(n):
            for j in range(i):
                if self.linking[i][j] != self.linking[j][i]:
                    raise InvalidInput(f"linking matrix not symmetric at ({i}, {j})")

    @classmethod
    def from_lists(cls, labels, companions, linking) -> "SurgeryPresentation":
        return cls(tuple(labels), tuple(bool(c) for c in companions),
                   tuple(tuple(int(v) for v in row) for row in linking))

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def framings(self) -> tuple[int, ...]:
        return tuple(self.linking[i][i] for i in range(len(self)))

    @property
    def clasp_signs(self) -> tuple[int, ...]:
        """Sign of the linking number of each consecutive pair (0 if unlinked)."""
        return tuple((v > 0) - (v < 0) for v in
                     (self.linking[i][i + 1] for i in range(len(self) - 1)))

    def is_chain(self) -> bool:
        n = len(self)
        for i in range(n):
            for j in range(i + 1, n):
                v = abs(self.linking[i][j])
                if (j == i + 1 and v != 1) or (j > i + 1 and v != 0):
                    return False
        return True

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def relabeled(self, mapping: dict[str, str]) -> "SurgeryPresentation":
        return SurgeryPresentation(tuple(mapping.get(x, x) for x in self.labels), self.companions, self.linking)

    def up_to_clasp_signs(self) -> tuple:
        """Invariant under changing the orientation of individual components."""
        return self.labels, self.companions, tuple(tuple(abs(v) if i != j else v for j, v in enumerate(row))
                                                   for i, row in enumerate(self.linking))

    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.linking)


def h1_order(p: SurgeryPresentation) -> int:
    if not len(p):
        return 1
    return abs(int(p.matrix().det(method="bareiss")))


# --------------------------------------------------------------------------
# building from words

def presentation_from_word(w: GeneratorWord, k0_label: str = "K", k1_label: str = "mK") -> SurgeryPresentation:
    """Read the word right to left: start with k0 (framing 0); each H adds a
    0-framed unknot clasped once with the previous component; T(k) adds k to
    the framing of the newest component; finally the newest component is
    summed with k1 and takes its label."""
    if not is_splice_homology_sphere(evaluate_word(w)):
        raise InadmissibleWord(f"word {str(w) or '(empty)'} does not give a homology-sphere splice")
    framings = [0]
    for x in reversed(w.letters):
        if x.kind == "H":
            framings.append(0)
        else:
            framings[-1] += x.k
    n = len(framings)
    if n < 2:
        raise InadmissibleWord("word has no H letter")
    labels = [k0_label] + [f"U{k}" for k in range(1, n - 1)] + [k1_label]
    lk = [[0] * n for _ in range(n)]
    for i in range(n):
        lk[i][i] = framings[i]
        if i + 1 < n:
            lk[i][i + 1] = lk[i + 1][i] = 1
    return SurgeryPresentation.from_lists(labels, [True] + [False] * (n - 2) + [True], lk)


def figure_one(n: int, k0_label: str = "K", k1_label: str = "mK") -> SurgeryPresentation:
    return presentation_from_word(lemma_word(n), k0_label, k1_label)


# --------------------------------------------------------------------------
# moves

def _remove(p: SurgeryPresentation, j: int, eps: int) -> tuple[list, list, list]:
    keep = [i for i in range(len(p)) if i != j]
    lk = [[p.linking[a][b] - eps * p.linking[a][j] * p.linking[b][j] for b in keep] for a in keep]
    return [p.labels[i] for i in keep], [p.companions[i] for i in keep], lk


def blow_down(p: SurgeryPresentation, j: int) -> SurgeryPresentation:
    eps = p.linking[j][j]
    if p.companions[j]:
        raise NotBlowdownable(f"component {p.labels[j]} is a companion knot, not an unknot")
    if eps not in (1, -1):
        raise NotBlowdownable(f"component {p.labels[j]} has framing {eps}, not ±1")
    return SurgeryPresentation.from_lists(*_remove(p, j, eps))


def blow_up_clasp(p: SurgeryPresentation, i: int, k: int, sign: int, label: str | None = None) -> SurgeryPresentation:
    """Replace the clasp between i and k by a (-sign)-framed unknot E.

    E is inserted between i and k.  It links i once and links k so that
    blowing E back down restores lk(i, k); afterwards i and k are unlinked
    and their framings have changed by -sign.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be ±1")
    if abs(p.linking[i][k]) != 1 or i == k:
        raise NoClasp(f"components {p.labels[i]} and {p.labels[k]} do not form a clasp")
    eps = -sign
    lk_ik = p.linking[i][k]
    pos = max(i, k)  # new component sits between the two
    old = list(range(len(p)))
    order = old[:pos] + [None] + old[pos:]
    e_link = {i: 1, k: -eps * lk_ik}

    def entry(a, b):
        if a is None and b is None:
            return eps
        if a is None or b is None:
            return e_link.get(b if a is None else a, 0)
        v = p.linking[a][b]
        if a == b and a in (i, k):
            v += eps
        if {a, b} == {i, k}:
            v = 0
        return v

    labels = [p.labels[a] if a is not None else (label or _fresh(p.labels, "E")) for a in order]
    comps = [p.companions[a] if a is not None else False for a in order]
    lk = [[entry(a, b) for b in order] for a in order]
    return SurgeryPresentation.from_lists(labels, comps, lk)


def _fresh(labels: Sequence[str], stem: str) -> str:
    k = 1
    while f"{stem}{k}" in labels:
        k += 1
    return f"{stem}{k}"


def absorb_companion(p: SurgeryPresentation, j: int, new_label: str) -> SurgeryPresentation:
    """Absorb a ±1-framed companion K into the ambient homology sphere Y_{±1}(K).

    At the linking level this is the same rank-one update as a blow-down; the
    unique unknot linked with K becomes its dual knot, now the companion.
    """
    eps = p.linking[j][j]
    if not p.companions[j]:
        raise InvalidInput(f"{p.labels[j]} is not a companion")
    if eps not in (1, -1):
        raise InvalidInput(f"companion {p.labels[j]} has framing {eps}, not ±1")
    partners = [i for i in range(len(p)) if i != j and p.linking[i][j]]
    if len(partners) != 1 or p.companions[partners[0]]:
        raise InvalidInput("companion must be clasped with exactly one unknot")
    labels, comps, lk = _remove(p, j, eps)
    t = partners[0] - (partners[0] > j)
    labels[t] = new_label
    comps[t] = True
    return SurgeryPresentation.from_lists(labels, comps, lk)


def cancel_unknots(p: SurgeryPresentation, idx: Sequence[int]) -> SurgeryPresentation:
    """Remove unknots whose linking block is unimodular (e.g. a 0-framed Hopf pair)."""
    idx = list(idx)
    if any(p.companions[i] for i in idx):
        raise InvalidInput("only unknots can be cancelled")
    m = p.matrix()
    block = m.extract(idx, idx)
    if abs(block.det()) != 1:
        raise InvalidInput("linking block is not unimodular")
    keep = [i for i in range(len(p)) if i not in idx]
    schur = m.extract(keep, keep) - m.extract(keep, idx) * block.inv() * m.extract(idx, keep)
    return SurgeryPresentation.from_lists([p.labels[i] for i in keep], [p.companions[i] for i in keep],
                                          schur.tolist())


def shift_parameter(p: SurgeryPresentation, direction: int = 1, primes: str = "'") -> SurgeryPresentation:
    """The two-clasp blow-up taking the chain for n to the chain for n ± 1.

    Blow up the clasp at each companion so that the first companion gets
    framing ``direction`` and the last gets ``-direction``; absorbing the
    companions replaces them by their dual knots.
    """
    if direction not in (1, -1):
        raise ValueError("direction must be ±1")
    first, last = 0, len(p) - 1
    q = blow_up_clasp(p, first, first + 1, -direction, label="E0")
    last = len(q) - 1
    q = blow_up_clasp(q, last - 1, last, direction, label="E1")
    k0, k1 = q.labels[0], q.labels[-1]
    q = absorb_companion(q, 0, k0 + primes)
    q = absorb_companion(q, len(q) - 1, k1 + primes)
    return q


# --------------------------------------------------------------------------
# cobordisms

@dataclass(frozen=True)
class CobordismData:
    chi: int
    sigma: int
    b1: int
    b2_plus: int
    b2_minus: int
    even_form: bool
    grading_shift: Fraction
    form: tuple[tuple[int, ...], ...] = ()
    target: str = ""
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.grading_shift != Fraction(-2 * self.chi - 3 * self.sigma, 4):
            raise ValueError("grading shift disagrees with (-2 chi - 3 sigma)/4")
        if self.form and self.b2_plus + self.b2_minus > len(self.form):
            raise ValueError("b2 exceeds the rank of the intersection form")

    @property
    def negative_definite(self) -> bool:
        return self.b2_plus == 0 and self.b2_minus == len(self.form) and bool(self.form)

    def as_pairs(self) -> list[tuple[str, str]]:
        from .fu_algebra import fmt_q
        return [("chi", str(self.chi)), ("sigma", str(self.sigma)), ("b1", str(self.b1)),
                ("b2_plus", str(self.b2_plus)), ("b2_minus", str(self.b2_minus)),
                ("even_form", str(self.even_form).lower()),
                ("negative_definite", str(self.negative_definite).lower()),
                ("grading_shift", fmt_q(self.grading_shift)), ("target", self.target)]


def form_data(q: Sequence[Sequence[int]]) -> tuple[int, int, bool]:
    """(b2_plus, b2_minus, even) of a symmetric integer form."""
    if not q:
        return 0, 0, True
    ev = np.linalg.eigvalsh(np.array(q, dtype=float))
    tol = 1e-9
    return int((ev > tol).sum()), int((ev < -tol).sum()), all(q[i][i] % 2 == 0 for i in range(len(q)))


def cobordism_from_form(q, chi: int, b1: int = 0, target: str = "", notes=()) -> CobordismData:
    q = tuple(tuple(int(v) for v in row) for row in q)
    bp, bm, even = form_data(q)
    sigma = bp - bm
    return CobordismData(chi, sigma, b1, bp, bm, even, Fraction(-2 * chi - 3 * sigma, 4), q, target, tuple(notes))


def seifert_framing(p: SurgeryPresentation, linking: Sequence[int], diagram_framing: int) -> Fraction:
    """Framing of a new knot relative to its Seifert surface in the surgered manifold."""
    v = sympy.Matrix(linking)
    val = diagram_framing - (v.T * p.matrix().inv() * v)[0, 0]
    return Fraction(int(sympy.fraction(val)[0]), int(sympy.fraction(val)[1]))


def attach_handle(p: SurgeryPresentation, linking: Sequence[int], framing: int, label: str) -> SurgeryPresentation:
    n = len(p)
    lk = [list(row) + [linking[i]] for i, row in enumerate(p.linking)] + [list(linking) + [framing]]
    return SurgeryPresentation.from_lists(list(p.labels) + [label], list(p.companions) + [False], lk)


@dataclass(frozen=True)
class Derivation:
    steps: tuple[tuple[str, SurgeryPresentation], ...]
    handle_framing: Fraction
    target_h1: int


def type1_derivation() -> Derivation:
    """From the n = 0 chain to the 2-handle cobordism W.

    Cancel the two interior unknots (a 0-framed Hopf pair), leaving K and mK
    clasped with framing 0.  Blowing up that clasp gives K, U, mK all framed
    -1.  W attaches a 2-handle along a meridian of U with diagram framing -1.
    """
    steps = []
    p = figure_one(0)
    steps.append(("chain at n = 0", p))
    p = cancel_unknots(p, [1, 2])
    steps.append(("cancel the 0-framed Hopf pair", p))
    p = blow_up_clasp(p, 0, 1, 1, label="U")
    steps.append(("blow up the clasp with a -1 framed unknot", p))
    meridian = [0] * len(p)
    meridian[p.index("U")] = 1
    framing = seifert_framing(p, meridian, -1)
    w = attach_handle(p, meridian, -1, "M")
    steps.append(("2-handle on a meridian of U, diagram framing -1", w))
    return Derivation(tuple(steps), framing, h1_order(w))


def type1_cobordism(n: int = 0) -> CobordismData:
    d = type1_derivation()
    if d.handle_framing.denominator != 1:
        raise ValueError("handle framing is not integral")
    q = [[int(d.handle_framing)]]
    notes = (f"normalized from n = {n} to n = 0 by {abs(n)} two-clasp moves",
             f"handle Seifert framing {d.handle_framing}",
             f"|H1| of the far end: {d.target_h1}")
    return cobordism_from_form(q, chi=1, target="(-2)-surgery on K # -K, homology cobordant to RP3",
                               notes=notes)


def type1_filling() -> CobordismData:
    """W followed by the (-2) disk bundle over S^2 with a ball removed.

    The second homology is the unimodular overlattice of the two -2 classes,
    spanned by the glue vector (s1 + s2)/2 and s1.
    """
    w = type1_cobordism()
    s = w.form[0][0]
    glue_sq = Fraction(s + s, 4)
    glue_s1 = Fraction(s, 2)
    q = [[int(glue_sq), int(glue_s1)], [int(glue_s1), s]]
    return cobordism_from_form(q, chi=w.chi + 1, target="S3 (RP3 capped by the Euler number -2 disk bundle)",
                               notes=("composite of the type-1 cobordism and the punctured disk bundle",))


def type2_cobordism() -> CobordismData:
    w = type1_cobordism()
    return cobordism_from_form(w.form, chi=w.chi, target="(Y0#Y1)_{-2}(K0#K1)",
                               notes=("same handle picture with K0 and K1 in place of K and mK",))


# --------------------------------------------------------------------------
# lens space d-invariants

def lens_d(p: int, i: int) -> Fraction:
    """d(L(p, 1), i) by the closed form."""
    if p <= 0 or not 0 <= i < p:
        raise OutOfRange(f"need p > 0 and 0 <= i < p, got p={p}, i={i}")
    return Fraction((2 * i - p) ** 2 - p, 4 * p)


def lens_d_recursive(p: int, q: int, i: int) -> Fraction:
    """d(L(p, q), i) by the two-term recursion in (p, q)."""
    if p == 1:
        return Fraction(0)
    return Fraction((2 * i + 1 - p - q) ** 2, 4 * p * q) - Fraction(1, 4) - lens_d_recursive(q, p % q, i % q)


def lens_d_plumbing(p: int, i: int) -> Fraction:
    """d(L(p, 1), i) as minus the maximum of (K^2 + 1)/4 over characteristic
    covectors on the (-p) disk bundle lattice in the class of i."""
    best = None
    target = (2 * i - p) % (2 * p)
    for k in range(-3 * p, 3 * p + 1):
        if k % (2 * p) != target:
            continue
        val = Fraction(1, 4) - Fraction(k * k, 4 * p)
        best = val if best is None else max(best, val)
    return -best


def spin_restriction(shift: Fraction, p: int = 2) -> int:
    """Spin^c label on L(p,1) whose d-invariant lies in the grading coset ``shift`` + Z."""
    hits = [i for i in range(p) if (lens_d(p, i) - shift).denominator == 1]
    if len(hits) != 1:
        raise ValueError(f"grading coset does not pick out a unique structure: {hits}")
    return hits[0]
