from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splice_floer.errors import InadmissibleWord, NoClasp, NotBlowdownable, OutOfRange
from splice_floer.kirby import (SurgeryPresentation, blow_down, blow_up_clasp, figure_one, h1_order,
                                lens_d, lens_d_plumbing, lens_d_recursive, presentation_from_word,
                                shift_parameter, spin_restriction, type1_cobordism, type1_derivation,
                                type1_filling, type2_cobordism)
from splice_floer.splice import GeneratorWord, factorize, psi_n


def test_recipe_chain():
    p = figure_one(0)
    assert p.labels == ("K", "U1", "U2", "mK")
    assert p.framings == (0, 0, 0, 0)
    assert p.is_chain() and p.companions == (True, False, False, True)
    assert figure_one(2).framings == (0, 2, -2, 0)


def test_five_component_reading_is_not_a_homology_sphere():
    # framings (0, n, 0, -n, 0) on a five-component chain
    lk = [[0] * 5 for _ in range(5)]
    for i in range(4):
        lk[i][i + 1] = lk[i + 1][i] = 1
    for n in range(-5, 6):
        lk[1][1], lk[3][3] = n, -n
        assert h1_order(SurgeryPresentation.from_lists("ABCDE", [1, 0, 0, 0, 1], lk)) == 0


@pytest.mark.parametrize("n", range(-10, 11))
def test_figure_one_is_homology_sphere(n):
    assert h1_order(figure_one(n)) == 1


def test_empty_word_inadmissible():
    with pytest.raises(InadmissibleWord):
        presentation_from_word(GeneratorWord(()))


def test_single_zero_framed_component():
    assert h1_order(SurgeryPresentation.from_lists(["U"], [False], [[0]])) == 0


def test_blow_down_isolated():
    p = SurgeryPresentation.from_lists(["A", "E"], [False, False], [[3, 0], [0, 1]])
    assert blow_down(p, 1) == SurgeryPresentation.from_lists(["A"], [False], [[3]])


def test_blow_down_errors():
    p = figure_one(1)
    with pytest.raises(NotBlowdownable):
        blow_down(p, 0)  # companion
    with pytest.raises(NotBlowdownable):
        blow_down(figure_one(2), 1)  # framing 2
    with pytest.raises(NoClasp):
        blow_up_clasp(p, 0, 2, 1)


@pytest.mark.parametrize("n", range(-4, 5))
@pytest.mark.parametrize("sign", [1, -1])
def test_blow_up_round_trip(n, sign):
    p = figure_one(n)
    for i in range(len(p) - 1):
        q = blow_up_clasp(p, i, i + 1, sign)
        assert q.linking[i][i + 2] == 0
        assert h1_order(q) == h1_order(p)
        assert blow_down(q, i + 1) == p


@pytest.mark.parametrize("n", range(-6, 7))
def test_two_clasp_move(n):
    up = shift_parameter(figure_one(n), 1)
    down = shift_parameter(figure_one(n), -1)
    assert up.up_to_clasp_signs() == figure_one(n + 1, "K'", "mK'").up_to_clasp_signs()
    assert down.up_to_clasp_signs() == figure_one(n - 1, "K'", "mK'").up_to_clasp_signs()
    assert h1_order(up) == h1_order(down) == 1


@st.composite
def presentations(draw):
    n = draw(st.integers(1, 5))
    lk = [[0] * n for _ in range(n)]
    for i in range(n):
        lk[i][i] = draw(st.integers(-3, 3))
        for j in range(i):
            lk[i][j] = lk[j][i] = draw(st.integers(-2, 2))
    return SurgeryPresentation.from_lists([f"C{i}" for i in range(n)], [False] * n, lk)


@settings(max_examples=60, deadline=None)
@given(presentations(), st.sampled_from([1, -1]))
def test_blow_down_preserves_h1(p, eps):
    # add a ±1-framed unknot linked arbitrarily, then blow it down
    n = len(p)
    lk = [list(r) + [(-1) ** i * (i % 2)] for i, r in enumerate(p.linking)]
    lk.append([(-1) ** i * (i % 2) for i in range(n)] + [eps])
    q = SurgeryPresentation.from_lists(list(p.labels) + ["E"], list(p.companions) + [False], lk)
    assert h1_order(blow_down(q, n)) == h1_order(q)


def test_words_from_factorize_are_admissible():
    for n in range(-5, 6):
        p = presentation_from_word(factorize(psi_n(n)))
        assert h1_order(p) == 1


def test_type1_derivation():
    d = type1_derivation()
    assert d.handle_framing == -2
    assert d.target_h1 == 2
    assert d.steps[2][1].framings == (-1, -1, -1)


def test_cobordism_numbers():
    w = type1_cobordism(0)
    assert (w.chi, w.sigma, w.b2_minus, w.b1, w.even_form) == (1, -1, 1, 0, True)
    assert w.grading_shift == Fraction(1, 4) and w.negative_definite
    f = type1_filling()
    assert (f.chi, f.sigma, f.b2_minus, f.b1) == (2, -2, 2, 0)
    assert f.negative_definite and not f.even_form
    assert f.grading_shift == Fraction(1, 2)
    t = type2_cobordism()
    assert (t.chi, t.sigma, t.b2_minus, t.b1, t.even_form) == (1, -1, 1, 0, True)
    assert t.grading_shift == Fraction(1, 4)
    assert t.target == "(Y0#Y1)_{-2}(K0#K1)"


def test_lens_d_examples():
    assert lens_d(2, 0) == Fraction(1, 4) and lens_d(2, 1) == Fraction(-1, 4)
    assert lens_d(1, 0) == 0
    assert all(lens_d(2 * n, n) == Fraction(-1, 4) for n in range(1, 11))
    with pytest.raises(OutOfRange):
        lens_d(2, 2)


def test_lens_d_oracles():
    for p in range(1, 31):
        for i in range(p):
            assert lens_d(p, i) == lens_d_recursive(p, 1, i) == lens_d_plumbing(p, i)


def test_lens_d_coset():
    assert lens_d(2, 0) + lens_d(2, 1) == 0
    assert spin_restriction(Fraction(1, 4)) == 0
    assert spin_restriction(Fraction(-1, 4)) == 1
