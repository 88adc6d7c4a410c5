import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from torsiongrowth.fields import (
    QI,
    QSQRT_MINUS3,
    QuadField,
    RelQuadField,
    factor_int,
    quad_conj,
    rel_conj,
    same_square_class,
    sqrt_in_quad,
    sqrt_in_relquad,
    square_class_rep,
)

FIELDS = [QI, QSQRT_MINUS3, QuadField(5)]


def rationals(lo=-20, hi=20, den=8):
    return st.builds(mpq, st.integers(lo, hi), st.integers(1, den))


def quad_elems(K):
    return st.builds(lambda a, b: K.elem(a, b), rationals(), rationals())


@given(quad_elems(QI), quad_elems(QI), quad_elems(QI))
@settings(max_examples=60, deadline=None)
def test_field_axioms_qi(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not b.is_zero():
        assert (a / b) * b == a


@given(quad_elems(QSQRT_MINUS3), quad_elems(QSQRT_MINUS3))
@settings(max_examples=60, deadline=None)
def test_conj_is_automorphism(a, b):
    assert quad_conj(quad_conj(a)) == a
    assert quad_conj(a * b) == quad_conj(a) * quad_conj(b)
    assert quad_conj(a + b) == quad_conj(a) + quad_conj(b)
    assert (a * b).norm() == a.norm() * b.norm()


def test_quad_conj_examples():
    assert quad_conj(QI.elem(3, 2)) == QI.elem(3, -2)
    assert quad_conj(QI.elem(5)) == QI.elem(5)
    x = QSQRT_MINUS3.elem(1, 1)
    assert quad_conj(x) * x == QSQRT_MINUS3.elem(4)


def test_rel_conj_examples():
    L = RelQuadField(QI, QI.elem(2))
    one = L.elem(1)
    assert rel_conj(one) == one
    w = L.gen()
    assert rel_conj(w) == -w
    x = L.elem(QI.elem(3, 1), QI.elem(-2, 5))
    assert (x + rel_conj(x)).beta.is_zero()


def test_sqrt_in_quad_examples():
    r = sqrt_in_quad(QI.elem(0, 2))  # 2i
    assert r == QI.elem(1, 1)
    assert sqrt_in_quad(QI.elem(-1)) in (QI.gen(), -QI.gen())
    assert sqrt_in_quad(QI.elem(5)) is None


@given(quad_elems(QI) | quad_elems(QSQRT_MINUS3))
@settings(max_examples=80, deadline=None)
def test_sqrt_in_quad_roundtrip(x):
    sq = x * x
    r = sqrt_in_quad(sq)
    assert r is not None and r * r == sq
    got = sqrt_in_quad(x)
    if got is not None:
        assert got * got == x


def test_sqrt_in_relquad_examples():
    L = RelQuadField(QI, QI.elem(2))
    d_as_elem = L.coerce(QI.elem(2))
    r = sqrt_in_relquad(d_as_elem)
    assert r is not None and r * r == d_as_elem
    assert sqrt_in_relquad(L.elem(1)) == L.elem(1)
    x = L.coerce(QI.elem(0, -2))  # -2i = (1-i)^2
    r = sqrt_in_relquad(x)
    assert r is not None and r * r == x


@given(st.integers(-40, 40), st.integers(-40, 40), st.sampled_from([QI, QSQRT_MINUS3]))
@settings(max_examples=60, deadline=None)
def test_sqrt_in_relquad_roundtrip(a, b, K):
    d = K.elem(a, b)
    if d.is_zero() or sqrt_in_quad(d) is not None:
        return
    L = RelQuadField(K, d)
    x = L.elem(K.elem(a, -b), K.elem(b, 1))
    sq = x * x
    r = sqrt_in_relquad(sq)
    assert r is not None and r * r == sq


def test_relquadfield_rejects_squares():
    with pytest.raises(ValueError):
        RelQuadField(QI, QI.elem(4))
    with pytest.raises(ValueError):
        RelQuadField(QI, QI.elem(0, 2))  # 2i = (1+i)^2
    with pytest.raises(ValueError):
        RelQuadField(QSQRT_MINUS3, QSQRT_MINUS3.elem(-3))
    with pytest.raises(ValueError):
        RelQuadField(QI, QI.zero())


def test_square_class_examples():
    # 8 = 2^3 and 2 is i times a square in Q(i)
    assert square_class_rep(QI.elem(8)) == QI.gen()
    assert square_class_rep(QI.elem(1)) == QI.elem(1)
    rep = square_class_rep(QSQRT_MINUS3.elem(-3))
    assert same_square_class(QSQRT_MINUS3.elem(-3), rep)
    assert rep == QSQRT_MINUS3.elem(1)  # -3 is a square in Q(sqrt(-3))
    assert same_square_class(QI.elem(2), QI.gen())
    d = QI.elem(7)
    assert same_square_class(d, d)
    assert not same_square_class(QI.elem(-3), QI.elem(5))
    # -15 and 5 generate the same extension of Q(sqrt(-3))
    assert same_square_class(QSQRT_MINUS3.elem(-15), QSQRT_MINUS3.elem(5))


@given(st.integers(-60, 60), st.integers(-60, 60),
       st.sampled_from([QI, QSQRT_MINUS3]))
@settings(max_examples=80, deadline=None)
def test_square_class_rep_properties(a, b, K):
    d = K.elem(a, b)
    if d.is_zero():
        return
    rep = square_class_rep(d)
    assert same_square_class(d, rep)
    assert square_class_rep(rep) == rep


def test_square_class_rep_rejects_zero():
    with pytest.raises(ValueError):
        square_class_rep(QI.zero())
    with pytest.raises(ValueError):
        same_square_class(QI.zero(), QI.elem(3))


def test_factor_int():
    assert factor_int(2 * 2 * 3 * 49) == {2: 2, 3: 1, 7: 2}
    n = (10**9 + 7) * (10**9 + 9)
    assert factor_int(n) == {10**9 + 7: 1, 10**9 + 9: 1}


def test_real_quadratic_field_sqrt():
    K = QuadField(5)
    x = K.elem(1, 1)
    sq = x * x  # 6 + 2*sqrt(5)
    r = sqrt_in_quad(sq)
    assert r is not None and r * r == sq
    assert sqrt_in_quad(K.elem(5)) == K.gen() or sqrt_in_quad(K.elem(5)) == -K.gen()
    assert sqrt_in_quad(K.elem(2)) is None


def test_square_class_rep_restricted_to_cyclotomic():
    with pytest.raises(NotImplementedError):
        square_class_rep(QuadField(5).elem(2))
