import itertools

import pytest
from hypothesis import given, strategies as st

from splice_floer.splice import (ANTIDIAG, MINUS_ID, GeneratorWord, GluingMatrix, H, T, LETTER_H,
                                 change_sign_identity, classify_type1, classify_type2, convert_basis,
                                 evaluate_word, exhaustive_search, expected_family, factorize, lemma_factorization,
                                 mul, is_splice_homology_sphere, phi_n, psi_n, type1_by_square)


def test_convert_basis_examples():
    assert convert_basis(phi_n(0)) == GluingMatrix(0, 1, -1, 0, "psi")
    assert convert_basis(GluingMatrix(2, 1, 5, 2)) == GluingMatrix(2, 1, -5, -2, "psi")
    m = GluingMatrix(3, -1, -10, 3)
    assert convert_basis(convert_basis(m)) == m


def test_convert_basis_maps_family():
    for n in range(-20, 21):
        assert convert_basis(phi_n(n)) == GluingMatrix(n, 1, -(1 + n * n), -n, "psi")


def test_homology_sphere_examples():
    assert is_splice_homology_sphere(psi_n(0))
    assert not is_splice_homology_sphere(GluingMatrix(1, 0, 0, 1, "psi"))
    assert not is_splice_homology_sphere(GluingMatrix(1, 2, 1, 3, "psi"))


def test_classify_type1_examples():
    assert classify_type1(GluingMatrix(0, 1, 1, 0)) == (0, 1)
    assert classify_type1(GluingMatrix(3, -1, -10, 3)) == (3, -1)
    assert classify_type1(GluingMatrix(2, 1, 4, 2)) is None


def test_classify_type2_examples():
    assert classify_type2(GluingMatrix(0, 1, 1, 0)) == (True, None)
    assert classify_type2(GluingMatrix(0, -1, -1, 0)) == (True, None)
    assert classify_type2(GluingMatrix(1, 0, 0, -1)) == (False, "b1=1 splice")
    assert classify_type2(GluingMatrix(-1, 0, 0, 1)) == (False, "b1=1 splice")


@pytest.mark.parametrize("n", range(-50, 51))
def test_family_classification(n):
    for s in (1, -1):
        assert classify_type1(phi_n(n, s)) == (n, s)
        assert type1_by_square(phi_n(n, s))
        q = psi_n(n, s).entries
        assert mul(q, q) == MINUS_ID


def test_exhaustive_search_small_range():
    # independent pure-Python enumeration on a smaller range
    bound = 6
    brute = set()
    for m in itertools.product(range(-bound, bound + 1), repeat=4):
        g = GluingMatrix.of(m)
        if g.is_valid and type1_by_square(g):
            brute.add(m)
    assert brute == exhaustive_search(bound) == expected_family(bound)


def test_no_phi_shape_squares_to_identity():
    assert exhaustive_search(26, square=1) == set()


def test_word_examples():
    assert evaluate_word(GeneratorWord((LETTER_H,))).entries == H
    assert evaluate_word(GeneratorWord((T(5),))).entries == (1, 5, 0, 1)
    assert evaluate_word(GeneratorWord((LETTER_H, LETTER_H))).entries == MINUS_ID


def test_word_parse_round_trip():
    w = GeneratorWord.parse("H T(-2) H T(2) H")
    assert str(w) == "H T(-2) H T(2) H"
    with pytest.raises(ValueError):
        GeneratorWord.parse("H X")


def test_lemma_factorization_relation():
    r0 = lemma_factorization(0)
    assert r0.value.entries == (0, -1, 1, 0)
    for n in range(-10, 11):
        r = lemma_factorization(n)
        assert r.squares_to_minus_id
        assert r.relation == "e-conjugation"
        assert r.value.entries == (n, -1, 1 + n * n, -n)
    assert lemma_factorization(1).reverse_relation == "-id"


def test_change_sign_identity():
    assert all(change_sign_identity(n) for n in range(-50, 51))


def test_factorize_examples():
    assert str(factorize(GluingMatrix(1, 0, 0, 1, "psi"))) == ""
    assert str(factorize(GluingMatrix.of(H, "psi"))) == "H"
    assert evaluate_word(factorize(psi_n(2))) == psi_n(2)


@st.composite
def sl2(draw):
    m = (1, 0, 0, 1)
    for _ in range(draw(st.integers(0, 8))):
        if draw(st.booleans()):
            m = mul(m, H)
        else:
            m = mul(m, (1, draw(st.integers(-6, 6)), 0, 1))
    return GluingMatrix.of(m, "psi")


@given(sl2())
def test_factorize_round_trip(m):
    assert evaluate_word(factorize(m)) == m


def test_factorize_round_trip_family():
    for n in range(-10, 11):
        for s in (1, -1):
            assert evaluate_word(factorize(psi_n(n, s))) == psi_n(n, s)
