import itertools
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splice_floer import gf2
from splice_floer.errors import HypothesisFailed, InvalidCone, SearchBudgetExceeded
from splice_floer.fu_algebra import (GradedComplex, d_invariant, direct_sum, is_chain_map,
                                     reduction, step, tower)
from splice_floer.iota import (IotaComplex, UMap, corollary_reduce, dual_iota, find_local_map,
                               homotopy_solve, is_local_map, is_locally_equivalent,
                               is_locally_trivial, local_map_space, surgery_cone, tensor_iota,
                               trivial, verify_iota)
from splice_floer.upoly import ONE, UMatrix, mono

from conftest import scramble

S = direct_sum(tower(0, "x"), step(3, 2))


def ident(c):
    return UMap(c, c, UMatrix.identity(len(c)))


def zero(c, d=0):
    return UMap(c, c, UMatrix.zero(len(c), len(c)), d)


def admissible(src, tgt, degree):
    out = []
    for j, gs in enumerate(src.gradings):
        for i, gt in enumerate(tgt.gradings):
            tk = gt - gs - degree
            if tk.denominator == 1 and tk >= 0 and tk.numerator % 2 == 0:
                out.append((i, j, tk.numerator // 2))
    return out


def brute_local_maps(x1, x2):
    """Every degree-0 map x1 -> x2, tested one at a time (no linear-algebra shortcut)."""
    c1, c2 = x1.complex, x2.complex
    slots = admissible(c1, c2, 0)
    assert len(slots) <= 16, "oracle would be too slow"
    r1, r2 = reduction(c1), reduction(c2)
    found = []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        m = UMatrix(len(c2), len(c1), {(i, j): mono(k) for (i, j, k), b in zip(slots, bits) if b})
        if not is_chain_map(m, c1, c2):
            continue
        if not (r2.proj @ m @ r1.incl)[0, 0]:
            continue
        if homotopy_solve(UMap(c1, c2, x2.iota @ m), UMap(c1, c2, m @ x1.iota)) is None:
            continue
        found.append(m)
    return found


def tower_projection(a: GradedComplex, b: GradedComplex) -> UMap:
    """A -> B through the tower summand of A (B a single generator)."""
    ra = reduction(a)
    row = ra.proj.submatrix([0], list(range(len(a))))
    shift = (b.gradings[0] - ra.normal_form.tower_grading)
    k = shift.numerator // 2
    return UMap(a, b, UMatrix(1, 1, {(0, 0): mono(k)}) @ row, 0)


# --------------------------------------------------------------------------
# homotopies

def test_homotopy_trivial():
    h = homotopy_solve(ident(S), ident(S))
    assert h is not None and h.degree == 1


def test_homotopy_on_acyclic_pair():
    pair = GradedComplex.build([("a", 1), ("b", 0)], [("a", "b", 0)])
    h = homotopy_solve(ident(pair), zero(pair))
    assert h is not None
    d = pair.differential
    assert d @ h.matrix + h.matrix @ d == UMatrix.identity(2)


def test_identity_not_nullhomotopic():
    assert homotopy_solve(ident(S), zero(S)) is None


# --------------------------------------------------------------------------
# iota-complexes

def test_verify_iota_examples():
    assert verify_iota(trivial(0))[0] == []
    bad, _ = verify_iota(IotaComplex(tower(0), UMatrix.zero(1, 1)))
    assert any("iota^2" in v for v in bad)


def test_local_map_examples():
    t = trivial(0)
    assert is_local_map(UMap(t.complex, t.complex, UMatrix.identity(1)), t, t)
    assert not is_local_map(UMap(t.complex, t.complex, UMatrix.zero(1, 1)), t, t)
    assert find_local_map(t, t) is not None


def test_grading_obstruction_direction():
    # U * 1 is a local map F[U]_0 -> F[U]_2; nothing goes the other way
    t0, t2 = trivial(0), trivial(2)
    f = find_local_map(t0, t2)
    assert f is not None and f.matrix[0, 0] == mono(1)
    assert find_local_map(t2, t0) is None
    assert not is_locally_equivalent(t0, t2)


def test_locally_trivial_examples():
    assert is_locally_trivial(trivial(0))
    assert not is_locally_trivial(trivial(Fraction(1, 4)))
    x = tensor_iota(trivial(Fraction(1, 4)), trivial(Fraction(-1, 4)))
    assert d_invariant(x.complex) == 0 and is_locally_trivial(x)


def test_dual_of_rp3_model():
    x = dual_iota(trivial(Fraction(1, 4)))
    assert d_invariant(x.complex) == Fraction(-1, 4)
    assert verify_iota(x)[0] == []


def test_budget_cap(monkeypatch):
    x = IotaComplex(S, UMatrix.identity(3))
    with pytest.raises(SearchBudgetExceeded):
        find_local_map(x, x, budget=0)
    monkeypatch.setenv("SPLICE_FLOER_BUDGET", "0")
    with pytest.raises(SearchBudgetExceeded):
        find_local_map(x, x)
    monkeypatch.delenv("SPLICE_FLOER_BUDGET")
    assert find_local_map(x, x) is not None


def test_search_agrees_with_enumeration_on_steps():
    x = IotaComplex(S, UMatrix.identity(3))
    for a, b in [(x, trivial(0)), (trivial(0), x), (x, x), (x, trivial(2)), (trivial(2), x)]:
        found = find_local_map(a, b)
        brute = brute_local_maps(a, b)
        assert (found is not None) == bool(brute)
        if found is not None:
            assert is_local_map(found, a, b)


# --------------------------------------------------------------------------
# surgery cones

def test_unknot_cone():
    a, b = tower(0, "x"), tower(0, "y")
    x = surgery_cone(a, b, UMap(a, b, UMatrix.identity(1)), Fraction(-1, 4))
    assert len(x.complex) == 3 and verify_iota(x)[0] == []
    assert d_invariant(x.complex) == Fraction(-1, 4)
    res = corollary_reduce(x, 0)
    assert d_invariant(res.model.complex) == Fraction(-1, 4)
    assert d_invariant(dual_iota(res.model).complex) == Fraction(1, 4)


def test_zero_v_cone_has_rank_two():
    a, b = tower(0, "x"), tower(0, "y")
    x = surgery_cone(a, b, UMap(a, b, UMatrix.zero(1, 1)), 0)
    bad, _ = verify_iota(x)
    assert any(v.startswith("localization") for v in bad)


def test_cone_rejects_bad_input():
    a, b = tower(0, "x"), tower(0, "y")
    with pytest.raises(InvalidCone):
        surgery_cone(a, b, UMap(a, b, UMatrix.identity(1), 2), 0)  # not homogeneous of degree 2
    with pytest.raises(InvalidCone):
        surgery_cone(a, direct_sum(b, step(0, 1, "p", "q")), UMap(a, direct_sum(b, step(0, 1, "p", "q")),
                     UMatrix(3, 1, {(0, 0): ONE})), 0)
    with pytest.raises(InvalidCone):
        surgery_cone(a, b, UMap(a, b, UMatrix.identity(1), 1), 0)


def test_step_cone_and_corollary():
    b = tower(0, "y")
    v = tower_projection(S, b)
    x = surgery_cone(S, b, v, 0)
    assert verify_iota(x)[0] == []
    res = corollary_reduce(x, 0)
    assert d_invariant(res.model.complex) == 0
    assert is_local_map(res.to_model, x, res.model)
    assert is_local_map(res.from_model, res.model, x)
    assert find_local_map(x, trivial(0)) is not None
    assert find_local_map(trivial(0), x) is not None


def test_corollary_hypotheses():
    a, b = tower(2, "x"), tower(2, "y")
    x = surgery_cone(a, b, UMap(a, b, UMatrix.identity(1)), 0)
    with pytest.raises(HypothesisFailed):
        corollary_reduce(x, 2)
    a, b = tower(0, "x"), tower(0, "y")
    x = surgery_cone(a, b, UMap(a, b, UMatrix.identity(1)), 0)
    with pytest.raises(HypothesisFailed):
        corollary_reduce(x, 1)  # supplied value disagrees


def test_corollary_homotopy_witness():
    b = tower(0, "y")
    a = GradedComplex.build([("x", 0), ("a", -2), ("b", -1)], [("a", "b", 1)])
    v = UMap(a, b, UMatrix(1, 3, {(0, 0): ONE, (0, 1): mono(1)}))
    x = surgery_cone(a, b, v, 0)
    res = corollary_reduce(x, 0)
    assert res.basis_changes == (("a", 1),)
    f, h = res.to_model.matrix, res.to_model_homotopy.matrix
    # model has zero differential and identity involution
    assert f @ x.iota + f == h @ x.complex.differential


def _cone_from(a: GradedComplex, shift=0) -> IotaComplex:
    b = tower(0, "y")
    return surgery_cone(a, b, tower_projection(a, b), shift)


@st.composite
def zero_d_complexes(draw):
    steps = draw(st.lists(st.tuples(st.integers(-4, 4), st.integers(1, 2)), max_size=2))
    gens = [("x", 0)]
    arrows = []
    for k, (top, length) in enumerate(steps):
        gens += [(f"a{k}", top), (f"b{k}", top + 2 * length - 1)]
        arrows.append((f"a{k}", f"b{k}", length))
    c = GradedComplex.build(gens, arrows)
    ops = draw(st.lists(st.tuples(st.integers(0, 10), st.integers(0, 10)), max_size=8))
    return scramble(c, ops)


@settings(max_examples=25, deadline=None)
@given(zero_d_complexes())
def test_corollary_agrees_with_search(a):
    x = _cone_from(a)
    assert verify_iota(x)[0] == []
    res = corollary_reduce(x, 0)
    assert is_local_map(res.to_model, x, res.model)
    assert is_local_map(res.from_model, res.model, x)
    assert find_local_map(x, res.model) is not None
    assert find_local_map(res.model, x) is not None


@settings(max_examples=15, deadline=None)
@given(zero_d_complexes())
def test_group_inverse(a):
    x = _cone_from(a, Fraction(-1, 4))
    assert is_locally_trivial(tensor_iota(x, dual_iota(x)))


@settings(max_examples=15, deadline=None)
@given(zero_d_complexes(), st.randoms(use_true_random=False))
def test_homotopy_invariance_of_verdicts(a, rnd):
    x = _cone_from(a)
    c = x.complex
    slots = admissible(c, c, 1)
    h = UMatrix(len(c), len(c), {(i, j): mono(k) for i, j, k in slots if rnd.random() < 0.3})
    d = c.differential
    y = IotaComplex(c, x.iota + d @ h + h @ d)
    res = corollary_reduce(x, 0)
    assert is_local_map(res.to_model, y, res.model) == is_local_map(res.to_model, x, res.model)
    assert is_local_map(res.from_model, res.model, y) == is_local_map(res.from_model, res.model, x)


@settings(max_examples=15, deadline=None)
@given(zero_d_complexes(), zero_d_complexes())
def test_local_maps_compose(a1, a2):
    x1, x2 = _cone_from(a1), _cone_from(a2)
    r1, r2 = corollary_reduce(x1, 0), corollary_reduce(x2, 0)
    composite = r2.from_model @ r1.to_model
    assert is_local_map(composite, x1, x2)


def test_space_enumeration_matches_witness():
    x = _cone_from(S)
    space = local_map_space(x, trivial(0))
    first = None
    for bits in space.candidates():
        m = space.to_map(bits)
        if gf2.parity(bits & space.localization) and is_local_map(UMap(x.complex, tower(0, "1"), m), x, trivial(0)):
            first = m
            break
    assert first is not None
    assert find_local_map(x, trivial(0)).matrix == first


def test_search_time():
    x = _cone_from(S, Fraction(-1, 4))
    t = time.perf_counter()
    assert is_locally_trivial(tensor_iota(x, dual_iota(x)))
    assert time.perf_counter() - t < 5
