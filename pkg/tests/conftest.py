from fractions import Fraction

import pytest
from hypothesis import strategies as st

from splice_floer.fu_algebra import GradedComplex, NormalForm
from splice_floer.textio import corpus_knot
from splice_floer.upoly import UMatrix, mono


def scramble(c: GradedComplex, ops) -> GradedComplex:
    """Apply homogeneous basis changes e_a <- e_a + U^k e_b.

    Each change P = I + U^k E_{b,a} is its own inverse over F2, so the new
    differential is P d P.
    """
    d = c.differential
    n = len(c)
    for a, b in ops:
        a, b = a % n, b % n
        if a == b:
            continue
        twice_k = c.gradings[b] - c.gradings[a]
        if twice_k.denominator != 1 or twice_k < 0 or twice_k.numerator % 2:
            continue
        p = UMatrix.identity(n) + UMatrix(n, n, {(b, a): mono(twice_k.numerator // 2)})
        d = p @ d @ p
    return GradedComplex(c.ids, c.gradings, d, c.name)


@st.composite
def normal_forms(draw, max_steps=3, max_len=3):
    d = draw(st.integers(-4, 4))
    steps = draw(st.lists(st.tuples(st.integers(-6, 6), st.integers(1, max_len)), max_size=max_steps))
    return NormalForm(Fraction(d), tuple((Fraction(t), i) for t, i in steps))


@st.composite
def scrambled_complexes(draw, max_steps=3, max_len=3):
    nf = draw(normal_forms(max_steps, max_len))
    c = nf.complex()
    ops = draw(st.lists(st.tuples(st.integers(0, 20), st.integers(0, 20)), max_size=12))
    return nf, scramble(c, ops)


@pytest.fixture(scope="session")
def unknot():
    return corpus_knot("unknot")


@pytest.fixture(scope="session")
def trefoil():
    return corpus_knot("trefoil")


@pytest.fixture(scope="session")
def figure8():
    return corpus_knot("figure8")
