"""Command-line front end.

Exit codes: 0 success, 2 a hypothesis or mathematical precondition failed,
3 the input could not be parsed, 4 the local-map search budget was exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import fu_algebra as fa
from . import iota as io_
from . import kirby, knotlike, splice, textio
from .upoly import format_poly
from .errors import (HypothesisFailed, NotType1, ParseError, SearchBudgetExceeded,
                     SpliceFloerError)

EXIT_OK, EXIT_HYPOTHESIS, EXIT_PARSE, EXIT_BUDGET = 0, 2, 3, 4

CONDITION = ("the local maps come from Floer cobordism maps, whose naturality is assumed, "
             "not computed")
VERDICT = "locally trivial (conditional)"


@dataclass
class Output:
    pairs: list[tuple[str, str]] = field(default_factory=list)
    text: str | None = None

    def add(self, key: str, value) -> None:
        self.pairs.append((key, str(value)))

    def render(self, machine: bool) -> str:
        if machine:
            return "".join(f"{k}={v}\n" for k, v in self.pairs)
        if self.text is not None:
            return self.text if self.text.endswith("\n") else self.text + "\n"
        return "".join(f"{k}: {v}\n" for k, v in self.pairs)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# input helpers

def _matrix(args) -> splice.GluingMatrix:
    try:
        m = splice.parse_matrix(args.matrix)
    except ValueError as exc:
        raise ParseError(f"--matrix: {exc}", 1) from None
    return splice.GluingMatrix.of(m, args.basis)


def _iota(path: str) -> io_.IotaComplex:
    return textio.parse_iota_complex(textio.read_source(path))


def _knot(path: str) -> knotlike.KnotLikeComplex:
    return textio.parse_knot(textio.read_source(path))


def _complex_pairs(out: Output, x: io_.IotaComplex) -> None:
    c = x.complex
    out.add("complex", c.name)
    for g, q in zip(c.ids, c.gradings):
        out.add("gen", f"{g} {fa.fmt_q(q)}")
    for src, tgt, p in c.arrows():
        out.add("d", f"{src} -> {tgt} : {format_poly(p)}")
    for (i, j), p in x.iota.items():
        out.add("iota", f"{c.ids[j]} -> {c.ids[i]} : {format_poly(p)}")


def _complex_output(x: io_.IotaComplex) -> Output:
    out = Output(text=textio.format_iota_complex(x))
    _complex_pairs(out, x)
    return out


def _map_lines(f: io_.UMap) -> list[str]:
    s, t = f.source, f.target
    return [f"{s.ids[j]} -> {t.ids[i]} : {format_poly(p)}" for (i, j), p in f.matrix.items()]


# --------------------------------------------------------------------------
# splice classification

def _type1_normalization(n: int, sign: int) -> tuple[int, list[str]]:
    """Path to n = 0: a sign change if needed, then |n| two-clasp moves, each checked."""
    steps = []
    if sign < 0:
        if not splice.change_sign_identity(-n):
            raise HypothesisFailed("sign-change identity failed")
        steps.append(f"sign change: phi_{n}^- = -phi_{-n}^+")
        n = -n
    k = n
    while k != 0:
        direction = -1 if k > 0 else 1
        moved = kirby.shift_parameter(kirby.figure_one(k), direction)
        expect = kirby.figure_one(k + direction, "K'", "mK'")
        if moved.up_to_clasp_signs() != expect.up_to_clasp_signs():
            raise HypothesisFailed(f"two-clasp move failed at n={k}")
        steps.append(f"two-clasp move: n={k} -> n={k + direction}")
        k += direction
    return n, steps


def cmd_classify(args) -> Output:
    m = _matrix(args)
    out = Output()
    parts = []
    if not m.is_valid:
        out.add("valid", "false")
        out.add("det", m.det)
        out.text = f"none: invalid gluing (det {m.det})\n"
        return out
    t1 = splice.classify_type1(m)
    t2, note = splice.classify_type2(m)
    out.add("homology_sphere", str(splice.is_splice_homology_sphere(m)).lower())
    if t1:
        n, s = t1
        parts.append(f"type1 n={n} sign={'+' if s > 0 else '-'}")
        out.add("type1", f"n={n} sign={'+' if s > 0 else '-'}")
    if t2:
        parts.append("type2 admissible")
        out.add("type2", "admissible")
    if not parts:
        parts.append(f"none: {note}" if note else "none")
        out.add("verdict", "none")
        if note:
            out.add("note", note)
    lines = ["; ".join(parts)]
    if t1:
        n0, steps = _type1_normalization(*t1)
        for s in steps:
            out.add("normalization", s)
        lines += [f"normalization: {s}" for s in steps] or ["normalization: already n=0"]
        out.add("moves", sum(1 for s in steps if s.startswith("two-clasp")))
    out.text = "\n".join(lines) + "\n"
    return out


def cmd_factorize(args) -> Output:
    m = splice.as_psi(_matrix(args))
    if not m.is_valid:
        raise HypothesisFailed(f"determinant {m.det}; not in SL2(Z)")
    w = splice.factorize(m)
    if splice.evaluate_word(w) != m:
        raise HypothesisFailed("factorization does not evaluate back to the matrix")
    out = Output(text=(str(w) or "(empty)") + "\n")
    out.add("word", str(w))
    out.add("length", len(w))
    return out


def cmd_word_check(args) -> Output:
    rep = splice.lemma_factorization(args.n)
    out = Output(text="\n".join(rep.lines()) + "\n")
    out.add("word", str(rep.word))
    out.add("value", splice.fmt_mat(rep.value.entries))
    out.add("target", splice.fmt_mat(rep.target.entries))
    out.add("relation", rep.relation or "none")
    out.add("reverse_relation", rep.reverse_relation or "none")
    out.add("squares_to_minus_id", str(rep.squares_to_minus_id).lower())
    return out


# --------------------------------------------------------------------------
# Kirby engine

def cmd_present(args) -> Output:
    if args.word is not None:
        try:
            w = splice.GeneratorWord.parse(args.word)
        except ValueError as exc:
            raise ParseError(str(exc), 1) from None
    else:
        w = splice.lemma_word(args.n)
    p = kirby.presentation_from_word(w)
    return _presentation_output(p, f"# word: {w}\n")


def _presentation_output(p: kirby.SurgeryPresentation, header: str = "") -> Output:
    out = Output(text=header + textio.format_presentation(p) + f"# |H1| = {kirby.h1_order(p)}\n")
    for x, f, c in zip(p.labels, p.framings, p.companions):
        out.add("comp", f"{x} framing={f} companion={int(c)}")
    out.add("framings", ",".join(str(f) for f in p.framings))
    out.add("h1_order", kirby.h1_order(p))
    return out


def cmd_blowdown(args) -> Output:
    p = textio.parse_presentation(textio.read_source(args.file))
    j = p.index(args.component) if args.component in p.labels else int(args.component)
    q = kirby.blow_down(p, j)
    if kirby.h1_order(q) != kirby.h1_order(p):
        raise HypothesisFailed("blow-down changed |H1|")
    return _presentation_output(q)


def cmd_cobordism(args) -> Output:
    data = {"type1": lambda: kirby.type1_cobordism(args.n), "filling": kirby.type1_filling,
            "type2": kirby.type2_cobordism}[args.kind]()
    out = Output()
    for k, v in data.as_pairs():
        out.add(k, v)
    out.add("form", ";".join(",".join(str(v) for v in row) for row in data.form))
    return out


def cmd_lens_d(args) -> Output:
    d = kirby.lens_d(args.p, args.i)
    out = Output(text=fa.fmt_q(d) + "\n")
    out.add("d", fa.fmt_q(d))
    return out


# --------------------------------------------------------------------------
# complexes

def cmd_reduce(args) -> Output:
    c = _iota(args.file).complex
    nf, red = fa.reduce(c)
    out = Output()
    out.add("tower", fa.fmt_q(nf.tower_grading))
    for top, length in nf.steps:
        out.add("step", f"{fa.fmt_q(top)},{length}")
    lines = [f"tower: {fa.fmt_q(nf.tower_grading)}"]
    lines += [f"step: top={fa.fmt_q(t)} length={l}" for t, l in nf.steps]
    out.text = "\n".join(lines) + "\n\n" + textio.format_complex(red)
    return out


def cmd_d_inv(args) -> Output:
    d = fa.d_invariant(_iota(args.file).complex)
    out = Output(text=fa.fmt_q(d) + "\n")
    out.add("d", fa.fmt_q(d))
    return out


def cmd_iota_verify(args) -> Output:
    x = _iota(args.file)
    bad, witness = io_.verify_iota(x)
    out = Output()
    out.add("violations", len(bad))
    for v in bad:
        out.add("violation", v)
    if witness is not None:
        for line in _map_lines(witness):
            out.add("homotopy", line)
    out.text = "ok\n" if not bad else "".join(f"violation: {v}\n" for v in bad)
    if bad:
        args._exit = EXIT_HYPOTHESIS
    return out


def cmd_local_map(args) -> Output:
    x1, x2 = _iota(args.source), _iota(args.target)
    f = io_.find_local_map(x1, x2, args.budget)
    out = Output()
    if f is None:
        out.add("found", "false")
        out.text = "none\n"
        return out
    out.add("found", "true")
    for line in _map_lines(f):
        out.add("map", line)
    out.text = "found\n" + "".join(f"map {line}\n" for line in _map_lines(f))
    return out


def cmd_tensor(args) -> Output:
    return _complex_output(io_.tensor_iota(_iota(args.first), _iota(args.second)))


def cmd_dual(args) -> Output:
    return _complex_output(io_.dual_iota(_iota(args.file)))


def cmd_cone(args) -> Output:
    k = _knot(args.knot)
    a, b, v = knotlike.build_An(k, args.n), knotlike.build_B(k), knotlike.v_map(k, args.n)
    x = io_.surgery_cone(a, b, v, kirby.lens_d(2 * args.n, args.n))
    return _complex_output(x)


def cmd_knot(args) -> Output:
    k = _knot(args.file)
    bad = knotlike.validate_knotlike(k)
    out = Output()
    out.add("violations", len(bad))
    for v in bad:
        out.add("violation", v)
    if bad:
        args._exit = EXIT_HYPOTHESIS
        return out
    out.add("locally_trivial", str(knotlike.is_locally_trivial_knotlike(k)).lower())
    for n in range(1, args.max_n + 1):
        out.add(f"d_A{n}", fa.fmt_q(fa.d_invariant(knotlike.build_An(k, n))))
    return out


# --------------------------------------------------------------------------
# end-to-end verdicts

def cmd_verdict_type1(args) -> Output:
    m = _matrix(args)
    t1 = splice.classify_type1(m) if m.is_valid else None
    if t1 is None:
        raise NotType1(f"{m} is not a type-1 gluing")
    out = Output()
    n, s = t1
    out.add("classification", f"type1 n={n} sign={'+' if s > 0 else '-'}")
    n0, steps = _type1_normalization(n, s)
    for step in steps:
        out.add("normalization", step)
    out.add("moves", sum(1 for x in steps if x.startswith("two-clasp")))
    cob = kirby.type1_cobordism(n0)
    for k, v in cob.as_pairs():
        out.add(f"cobordism.{k}", v)
    if not (cob.negative_definite and cob.even_form and cob.b1 == 0):
        raise HypothesisFailed("cobordism is not a negative definite Spin cobordism with b1 = 0")
    spin = kirby.spin_restriction(cob.grading_shift)
    d_target = kirby.lens_d(2, spin)
    out.add("spin_structure", f"[{spin}]")
    model = io_.trivial(d_target)
    out.add("model", f"(F[U]_{fa.fmt_q(fa.d_invariant(model.complex))}, id)")
    if io_.verify_iota(model)[0]:
        raise HypothesisFailed("model complex is not an iota-complex")
    # a local map Z -> model shifts grading by the cobordism shift; Z -> F[U]_{d - shift}
    landed = io_.trivial(d_target - cob.grading_shift)
    forward = io_.find_local_map(landed, io_.trivial(0))
    backward = io_.find_local_map(io_.dual_iota(landed), io_.trivial(0))
    if forward is None or backward is None:
        raise HypothesisFailed("grading bookkeeping does not land on the trivial class")
    out.add("witness.forward", f"local map (F[U]_{fa.fmt_q(d_target - cob.grading_shift)}, id) -> trivial")
    out.add("witness.backward", "dual of the forward map, using Z = -Z")
    out.add("verdict", VERDICT)
    out.add("condition", CONDITION)
    return out


def cmd_verdict_type2(args) -> Output:
    k0, k1 = _knot(args.knot0), _knot(args.knot1)
    out = Output()
    for label, k in (("knot0", k0), ("knot1", k1)):
        bad = knotlike.validate_knotlike(k)
        if bad:
            raise HypothesisFailed(f"{label} is not a knot-like complex: {bad[0]}")
        if not knotlike.is_locally_trivial_knotlike(k):
            raise HypothesisFailed(f"{label} not locally trivial")
        out.add(f"{label}.locally_trivial", "true")
    c = knotlike.tensor_knotlike(k0, knotlike.reverse(k1))
    a, b, v = knotlike.build_An(c, 1), knotlike.build_B(c), knotlike.v_map(c, 1)
    d_a = fa.d_invariant(a)
    out.add("d_A1", fa.fmt_q(d_a))
    if d_a != 0:
        raise HypothesisFailed(f"d(A1) = {fa.fmt_q(d_a)} is not 0")
    shift = kirby.lens_d(2, 1)
    x = io_.surgery_cone(a, b, v, shift)
    bad, _ = io_.verify_iota(x)
    if bad:
        raise HypothesisFailed(f"surgery cone is not an iota-complex: {bad[0]}")
    out.add("cone.generators", len(x.complex))
    out.add("cone.shift", fa.fmt_q(shift))
    res = io_.corollary_reduce(x, 0)
    d_model = fa.d_invariant(res.model.complex)
    out.add("cone.class", f"(F[U]_{fa.fmt_q(d_model)}, id)")
    if not (io_.is_local_map(res.to_model, x, res.model) and io_.is_local_map(res.from_model, res.model, x)):
        raise HypothesisFailed("corollary local maps failed verification")
    out.add("witness.to_model", "verified")
    out.add("witness.from_model", "verified")
    try:
        agree = (io_.find_local_map(x, res.model) is not None and io_.find_local_map(res.model, x) is not None)
        out.add("witness.search", "agrees" if agree else "disagrees")
        if not agree:
            raise HypothesisFailed("exhaustive search disagrees with the explicit reduction")
    except SearchBudgetExceeded:
        out.add("witness.search", "skipped (budget)")
    dual_model = io_.dual_iota(res.model)
    d_dual = fa.d_invariant(dual_model.complex)
    out.add("dual.class", f"(F[U]_{fa.fmt_q(d_dual)}, id)")
    cob = kirby.type2_cobordism()
    out.add("cobordism.grading_shift", fa.fmt_q(cob.grading_shift))
    out.add("cobordism.target", cob.target)
    final = d_dual - cob.grading_shift
    out.add("class", f"(F[U]_{fa.fmt_q(final)}, id)")
    if final != 0:
        raise HypothesisFailed(f"grading bookkeeping lands at {fa.fmt_q(final)}, not 0")
    if args.witness_dir:
        wd = Path(args.witness_dir)
        wd.mkdir(parents=True, exist_ok=True)
        (wd / "cone.cx").write_text(textio.format_iota_complex(x), encoding="utf-8")
        (wd / "model.cx").write_text(textio.format_iota_complex(res.model), encoding="utf-8")
        out.add("witness.files", f"{wd / 'cone.cx'} {wd / 'model.cx'}")
    out.add("verdict", VERDICT)
    out.add("condition", CONDITION)
    return out


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="splice-floer", description="Local equivalence computations for symmetric splices.")
    p.add_argument("--machine", action="store_true", help="emit key=value lines")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    def matrix_args(sp):
        sp.add_argument("--matrix", required=True, help="a,b;c,d")
        sp.add_argument("--basis", choices=("phi", "psi"), default="phi")

    sp = add("classify", help="classify a gluing matrix")
    matrix_args(sp)
    sp.set_defaults(func=cmd_classify)
    sp = add("verdict-type1", help="type-1 end-to-end verdict")
    matrix_args(sp)
    sp.set_defaults(func=cmd_verdict_type1)
    sp = add("verdict-type2", help="type-2 end-to-end verdict")
    sp.add_argument("--knot0", required=True)
    sp.add_argument("--knot1", required=True)
    sp.add_argument("--witness-dir")
    sp.set_defaults(func=cmd_verdict_type2)
    sp = add("factorize", help="factor a matrix into H and T letters")
    matrix_args(sp)
    sp.set_defaults(func=cmd_factorize)
    sp = add("word-check", help="compare H T(-n) H T(n) H with psi_n^+")
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_word_check)
    sp = add("present", help="surgery presentation from a word")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--word")
    sp.set_defaults(func=cmd_present)
    sp = add("blowdown", help="blow down a ±1-framed unknot")
    sp.add_argument("file")
    sp.add_argument("--component", required=True)
    sp.set_defaults(func=cmd_blowdown)
    sp = add("cobordism", help="handle cobordism data")
    sp.add_argument("--kind", choices=("type1", "filling", "type2"), default="type1")
    sp.add_argument("--n", type=int, default=0)
    sp.set_defaults(func=cmd_cobordism)
    sp = add("lens-d", help="d-invariant of L(p,1)")
    sp.add_argument("p", type=int)
    sp.add_argument("i", type=int)
    sp.set_defaults(func=cmd_lens_d)
    for name, func, help_ in (("reduce", cmd_reduce, "normal form"), ("d-inv", cmd_d_inv, "d-invariant"),
                              ("iota-verify", cmd_iota_verify, "check iota-complex axioms"),
                              ("dual", cmd_dual, "dual iota-complex")):
        sp = add(name, help=help_)
        sp.add_argument("file")
        sp.set_defaults(func=func)
    sp = add("local-map", help="search for a local map")
    sp.add_argument("source")
    sp.add_argument("target")
    sp.add_argument("--budget", type=int)
    sp.set_defaults(func=cmd_local_map)
    sp = add("tensor", help="tensor product of iota-complexes")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(func=cmd_tensor)
    sp = add("cone", help="surgery cone of a knot-like complex")
    sp.add_argument("knot")
    sp.add_argument("--n", type=int, default=1)
    sp.set_defaults(func=cmd_cone)
    sp = add("knot", help="validate a knot-like complex and report d(A_n)")
    sp.add_argument("file")
    sp.add_argument("--max-n", type=int, default=2)
    sp.set_defaults(func=cmd_knot)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args._exit = EXIT_OK
    try:
        out = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SearchBudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SpliceFloerError as exc:
        print(f"hypothesis failed: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sys.stdout.write(out.render(args.machine))
    return args._exit


if __name__ == "__main__":
    sys.exit(main())
