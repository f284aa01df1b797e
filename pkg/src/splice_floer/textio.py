"""Line-oriented text formats for complexes, knot-like complexes and presentations.

Complex (an optional ``iota`` block makes it an iota-complex; without one
the involution is the identity)::

    complex RP3
    gen x 1/4
    d a -> b : U^2 + U^3
    iota x -> x : 1

Knot-like complex::

    knot T23
    kgen x0 0 -2
    kd x1 -> x0 : U^1 V^0

Surgery presentation (``lk`` takes indices or labels)::

    presentation fig1
    comp K framing=0 companion=1
    lk 0 1 1

A record ends at a blank line or end of file.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterator

from .errors import ParseError
from .fu_algebra import GradedComplex, fmt_q
from .iota import IotaComplex
from .kirby import SurgeryPresentation
from .knotlike import KnotLikeComplex
from .upoly import UMatrix

_ARROW = re.compile(r"^(\S+)\s*->\s*(\S+)\s*:\s*(.+)$")
_FACTOR = re.compile(r"^([UV])(?:\^(\d+))?$")


def _records(text: str) -> Iterator[list[tuple[int, str]]]:
    block: list[tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.strip() == "" and block:
                yield block
                block = []
            continue
        block.append((no, line))
    if block:
        yield block


def _fraction(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {tok!r}", no) from None


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad integer {tok!r}", no) from None


def _monomial(term: str, no: int, allow_v: bool) -> tuple[int, int]:
    a = b = 0
    factors = term.replace("*", " ").split()
    if factors == ["1"]:
        return 0, 0
    if not factors:
        raise ParseError("empty term", no)
    for f in factors:
        m = _FACTOR.match(f)
        if not m or (m.group(1) == "V" and not allow_v):
            raise ParseError(f"bad monomial factor {f!r}", no)
        e = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(1) == "U":
            a += e
        else:
            b += e
    return a, b


def _poly(text: str, no: int, allow_v: bool) -> frozenset:
    out: set = set()
    for term in text.split("+"):
        mon = _monomial(term.strip(), no, allow_v)
        out ^= {mon if allow_v else mon[0]}
    return frozenset(out)


def _arrow(rest: str, no: int):
    m = _ARROW.match(rest)
    if not m:
        raise ParseError("expected '<src> -> <tgt> : <terms>'", no)
    return m.group(1), m.group(2), m.group(3)


# --------------------------------------------------------------------------
# complexes

@dataclass
class _Builder:
    name: str
    ids: list
    index: dict

    def lookup(self, g: str, no: int) -> int:
        if g not in self.index:
            raise ParseError(f"unknown generator {g!r}", no)
        return self.index[g]

    def add_gen(self, g: str, no: int) -> None:
        if g in self.index:
            raise ParseError(f"duplicate generator {g!r}", no)
        self.index[g] = len(self.ids)
        self.ids.append(g)


def _parse_complex_record(block: list[tuple[int, str]]) -> IotaComplex:
    no, head = block[0]
    parts = head.split()
    if parts[0] != "complex":
        raise ParseError("expected 'complex <name>'", no)
    b = _Builder(parts[1] if len(parts) > 1 else "C", [], {})
    grads: list[Fraction] = []
    d: dict = {}
    iota: dict | None = None
    for no, line in block[1:]:
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "gen":
            toks = rest.split()
            if len(toks) != 2:
                raise ParseError("expected 'gen <id> <grading>'", no)
            b.add_gen(toks[0], no)
            grads.append(_fraction(toks[1], no))
        elif key in ("d", "iota"):
            src, tgt, terms = _arrow(rest, no)
            k = (b.lookup(tgt, no), b.lookup(src, no))
            target = d if key == "d" else (iota if iota is not None else {})
            if key == "iota":
                iota = target
            target[k] = target.get(k, frozenset()) ^ _poly(terms, no, allow_v=False)
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    n = len(b.ids)
    cx = GradedComplex(tuple(b.ids), tuple(grads), UMatrix(n, n, d), b.name)
    im = UMatrix.identity(n) if iota is None else UMatrix(n, n, iota)
    return IotaComplex(cx, im)


def parse_iota_complexes(text: str) -> list[IotaComplex]:
    out = [_parse_complex_record(b) for b in _records(text)]
    if not out:
        raise ParseError("no complex found", 1)
    return out


def parse_iota_complex(text: str) -> IotaComplex:
    return parse_iota_complexes(text)[0]


def parse_complex(text: str) -> GradedComplex:
    return parse_iota_complex(text).complex


def _terms(p: frozenset) -> str:
    return " + ".join(f"U^{k}" for k in sorted(p))


def format_complex(c: GradedComplex, iota: UMatrix | None = None) -> str:
    lines = [f"complex {c.name}"]
    lines += [f"gen {g} {fmt_q(q)}" for g, q in zip(c.ids, c.gradings)]
    for (i, j), p in c.differential.items():
        lines.append(f"d {c.ids[j]} -> {c.ids[i]} : {_terms(p)}")
    if iota is not None:
        for (i, j), p in iota.items():
            lines.append(f"iota {c.ids[j]} -> {c.ids[i]} : {_terms(p)}")
    return "\n".join(lines) + "\n"


def format_iota_complex(x: IotaComplex) -> str:
    return format_complex(x.complex, x.iota)


# --------------------------------------------------------------------------
# knot-like complexes

def _parse_knot_record(block: list[tuple[int, str]]) -> KnotLikeComplex:
    no, head = block[0]
    parts = head.split()
    if parts[0] != "knot":
        raise ParseError("expected 'knot <name>'", no)
    b = _Builder(parts[1] if len(parts) > 1 else "K", [], {})
    gw: list[Fraction] = []
    gz: list[Fraction] = []
    d: dict = {}
    for no, line in block[1:]:
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "kgen":
            toks = rest.split()
            if len(toks) != 3:
                raise ParseError("expected 'kgen <id> <gr_w> <gr_z>'", no)
            b.add_gen(toks[0], no)
            gw.append(_fraction(toks[1], no))
            gz.append(_fraction(toks[2], no))
        elif key == "kd":
            src, tgt, terms = _arrow(rest, no)
            k = (b.lookup(tgt, no), b.lookup(src, no))
            d[k] = d.get(k, frozenset()) ^ _poly(terms, no, allow_v=True)
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    return KnotLikeComplex(tuple(b.ids), tuple(gw), tuple(gz), d, b.name)


def parse_knot(text: str) -> KnotLikeComplex:
    recs = list(_records(text))
    if not recs:
        raise ParseError("no knot found", 1)
    return _parse_knot_record(recs[0])


def format_knot(c: KnotLikeComplex) -> str:
    lines = [f"knot {c.name}"]
    lines += [f"kgen {g} {fmt_q(w)} {fmt_q(z)}" for g, w, z in zip(c.ids, c.gr_w, c.gr_z)]
    for src, tgt, p in c.arrows():
        lines.append(f"kd {src} -> {tgt} : " + " + ".join(f"U^{a} V^{b}" for a, b in sorted(p)))
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# presentations

_COMP = re.compile(r"^(\S+)\s+framing=(-?\d+)\s+companion=([01])$")


def parse_presentation(text: str) -> SurgeryPresentation:
    recs = list(_records(text))
    if not recs:
        raise ParseError("no presentation found", 1)
    block = recs[0]
    if block[0][1].split()[0] == "presentation":
        block = block[1:]
    labels: list[str] = []
    comps: list[bool] = []
    framings: list[int] = []
    links: list[tuple[int, str, str, int]] = []
    for no, line in block:
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "comp":
            m = _COMP.match(rest)
            if not m:
                raise ParseError("expected 'comp <label> framing=<k> companion=<0|1>'", no)
            if m.group(1) in labels:
                raise ParseError(f"duplicate component {m.group(1)!r}", no)
            labels.append(m.group(1))
            framings.append(int(m.group(2)))
            comps.append(m.group(3) == "1")
        elif key == "lk":
            toks = rest.split()
            if len(toks) != 3:
                raise ParseError("expected 'lk <i> <j> <v>'", no)
            links.append((no, toks[0], toks[1], _int(toks[2], no)))
        else:
            raise ParseError(f"unknown keyword {key!r}", no)
    n = len(labels)
    lk = [[0] * n for _ in range(n)]
    for i in range(n):
        lk[i][i] = framings[i]

    def ref(tok: str, no: int) -> int:
        if tok in labels:
            return labels.index(tok)
        try:
            k = int(tok)
        except ValueError:
            raise ParseError(f"unknown component {tok!r}", no) from None
        if not 0 <= k < n:
            raise ParseError(f"component index {k} out of range", no)
        return k

    for no, a, b, v in links:
        i, j = ref(a, no), ref(b, no)
        if i == j:
            raise ParseError("use framing= for the diagonal", no)
        lk[i][j] = lk[j][i] = v
    return SurgeryPresentation.from_lists(labels, comps, lk)


def format_presentation(p: SurgeryPresentation) -> str:
    lines = ["presentation"]
    lines += [f"comp {x} framing={f} companion={int(c)}" for x, f, c in zip(p.labels, p.framings, p.companions)]
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p.linking[i][j]:
                lines.append(f"lk {i} {j} {p.linking[i][j]}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# bundled corpus

CORPUS = {"unknot": "unknot.knot", "trefoil": "trefoil.knot", "figure8": "figure8.knot"}


def data_text(filename: str) -> str:
    return resources.files("splice_floer").joinpath("data", filename).read_text(encoding="utf-8")


def corpus_knot(name: str) -> KnotLikeComplex:
    return parse_knot(data_text(CORPUS[name]))


def read_source(path: str) -> str:
    """Read a file; ``corpus:<name>`` refers to a bundled data file."""
    if path.startswith("corpus:"):
        name = path.split(":", 1)[1]
        return data_text(CORPUS.get(name, name))
    return Path(path).read_text(encoding="utf-8")
