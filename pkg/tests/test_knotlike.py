from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splice_floer.errors import InvalidInput
from splice_floer.fu_algebra import NormalForm, d_invariant, reduce, validate
from splice_floer.iota import surgery_cone, verify_iota
from splice_floer.kirby import lens_d
from splice_floer.knotlike import (KnotLikeComplex, build_An, build_As, build_B, is_locally_trivial_knotlike,
                                   local_map_witnesses, mirror, reverse, tensor_knotlike, v_map,
                                   validate_knotlike)


def test_corpus_is_valid(unknot, trefoil, figure8):
    for c in (unknot, trefoil, figure8):
        assert validate_knotlike(c) == []


def test_odd_alexander_reported():
    c = KnotLikeComplex.build([("x", 0, 1)])
    assert any(v.startswith("alexander") for v in validate_knotlike(c))


def test_bad_bidegree_reported():
    c = KnotLikeComplex.build([("a", 0, 0), ("b", -1, -1), ("t", 0, 0)], [("a", "b", [(1, 0)])])
    assert any(v.startswith("bidegree") for v in validate_knotlike(c))


def test_local_triviality_corpus(unknot, trefoil, figure8):
    assert is_locally_trivial_knotlike(unknot)
    assert is_locally_trivial_knotlike(figure8)
    assert not is_locally_trivial_knotlike(trefoil)
    assert not is_locally_trivial_knotlike(mirror(trefoil))
    # the trefoil fails on opposite sides for the two chiralities
    assert local_map_witnesses(trefoil) == (False, True)
    assert local_map_witnesses(mirror(trefoil)) == (True, False)


def test_trefoil_minus_trefoil_is_trivial(trefoil):
    # concordance inverse is the reversed mirror
    assert is_locally_trivial_knotlike(tensor_knotlike(trefoil, reverse(mirror(trefoil))))


def test_unknot_one_variable_complexes(unknot):
    for n in (1, 2, 3):
        a, b = build_An(unknot, n), build_B(unknot)
        assert reduce(a)[0] == NormalForm(0) and reduce(b)[0] == NormalForm(0)
        assert v_map(unknot, n).matrix[0, 0] == frozenset({0})


def test_trefoil_d_values(trefoil):
    # hand computation: A_0 cancels x1 with x0 + x2 and keeps a tower at -2; A_1 keeps x0 at 0
    assert d_invariant(build_As(trefoil, 0)) == -2
    assert d_invariant(build_An(trefoil, 1)) == 0
    assert d_invariant(build_An(mirror(trefoil), 1)) == 0
    assert d_invariant(build_As(mirror(trefoil), 0)) == 0


def test_figure8_d_values(figure8):
    for n in (1, 2, 3, 4):
        assert d_invariant(build_An(figure8, n)) == 0


def test_reverse_and_mirror_are_involutions(trefoil, figure8):
    for c in (trefoil, figure8):
        assert reverse(reverse(c)).differential == c.differential
        assert reverse(reverse(c)).gr_w == c.gr_w
        mm = mirror(mirror(c))
        assert mm.gr_w == c.gr_w and mm.gr_z == c.gr_z and mm.differential == c.differential


def test_n_must_be_positive(unknot):
    with pytest.raises(InvalidInput):
        build_An(unknot, 0)


def _corpus():
    from splice_floer.textio import corpus_knot
    base = [corpus_knot(k) for k in ("unknot", "trefoil", "figure8")]
    return base + [mirror(base[1]), tensor_knotlike(base[2], base[1])]


@pytest.mark.parametrize("c", _corpus(), ids=lambda c: c.name)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cone_inputs(c, n):
    a, b, v = build_An(c, n), build_B(c), v_map(c, n)
    assert validate(a) == [] and validate(b) == []
    assert v.is_chain_map() and v.is_homogeneous()
    assert reduce(b)[0] == NormalForm(0)
    x = surgery_cone(a, b, v, lens_d(2 * n, n))
    assert verify_iota(x)[0] == []
    if is_locally_trivial_knotlike(c):
        assert d_invariant(a) == 0


@st.composite
def corpus_products(draw):
    cs = _corpus()[:4]
    picks = draw(st.lists(st.sampled_from(cs), min_size=1, max_size=2))
    out = picks[0]
    for p in picks[1:]:
        out = tensor_knotlike(out, p)
    return picks, out


@settings(max_examples=20, deadline=None)
@given(corpus_products())
def test_tensor_preserves_validity_and_triviality(data):
    picks, c = data
    assert validate_knotlike(c) == []
    if all(is_locally_trivial_knotlike(p) for p in picks):
        assert is_locally_trivial_knotlike(c)
