from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from torsiongrowth.fields import QI, QQ, QSQRT_MINUS3
from torsiongrowth.polys import (
    FpField,
    Fp2Field,
    Poly,
    eval_poly,
    poly_gcd,
    quadratic_discriminant,
    resultant,
    squarefree_part,
)


def qpolys(max_deg=5, lo=-9, hi=9):
    return st.lists(st.integers(lo, hi), min_size=1, max_size=max_deg + 1).map(
        lambda cs: Poly(QQ, cs)
    )


def test_gcd_examples():
    f = Poly(QQ, [-1, 0, 1])       # x^2 - 1
    g = Poly(QQ, [1, -2, 1])       # (x-1)^2
    assert poly_gcd(f, g) == Poly(QQ, [-1, 1])
    h = Poly(QQ, [3, 6])
    assert poly_gcd(h, Poly.zero(QQ)) == h.monic()
    fk = Poly(QI, [1, 0, 1])
    assert poly_gcd(fk, fk) == fk.monic()


def test_squarefree_examples():
    f = Poly(QQ, [1, -1]) ** 2 * Poly(QQ, [2, 1])
    assert squarefree_part(f) == (Poly(QQ, [1, -1]) * Poly(QQ, [2, 1])).monic()
    assert squarefree_part(Poly(QQ, [0, 0, 0, 1])) == Poly.x(QQ)
    f = Poly(QQ, [1, 0, 1]) ** 2
    assert squarefree_part(f) == Poly(QQ, [1, 0, 1])
    with pytest.raises(ValueError):
        squarefree_part(Poly.zero(QQ))


def test_resultant_examples():
    # res(f, g) = lc(g)^deg f * prod f over roots of g
    assert resultant(Poly(QQ, [-2, 1]), Poly(QQ, [-3, 1])) == 1
    assert resultant(Poly(QQ, [1, 0, 1]), Poly(QQ, [-1, 1])) == 2
    assert resultant(Poly(QQ, [5, 1, 3]), Poly.one(QQ)) == 1


def test_eval_examples():
    f = Poly(QQ, [1, 0, 0, 1])  # x^3 + 1
    assert eval_poly(f, mpq(0)) == 1
    assert eval_poly(f, mpq(-1)) == 0
    assert eval_poly(Poly(QQ, [0, 12, 0, 0, 3]), mpq(1)) == 15


def test_quadratic_discriminant():
    assert quadratic_discriminant(Poly(QQ, [1, 0, 1])) == -4
    assert quadratic_discriminant(Poly(QQ, [-2, 0, 1])) == 8
    assert quadratic_discriminant(Poly(QQ, [1, 1, 1])) == -3
    with pytest.raises(ValueError):
        quadratic_discriminant(Poly(QQ, [1, 1]))


@given(qpolys(), qpolys(), st.integers(-10, 10))
@settings(max_examples=60, deadline=None)
def test_mul_eval_and_degree(f, g, x):
    x = mpq(x)
    prod = f * g
    assert prod.eval(x) == f.eval(x) * g.eval(x)
    if not (f.is_zero() or g.is_zero()):
        assert prod.degree == f.degree + g.degree


@given(qpolys(max_deg=4), qpolys(max_deg=4))
@settings(max_examples=40, deadline=None)
def test_resultant_vanishes_iff_common_factor(f, g):
    if f.is_zero() or g.is_zero() or (f.degree == 0 and g.degree == 0):
        return
    r = resultant(f, g)
    common = poly_gcd(f, g).degree > 0
    assert (r == 0) == common


@given(qpolys(max_deg=4), qpolys(max_deg=3))
@settings(max_examples=40, deadline=None)
def test_squarefree_part_is_squarefree(f, g):
    if f.is_zero() or g.is_zero():
        return
    h = f * f * g
    if h.degree < 1:
        return
    s = squarefree_part(h)
    assert poly_gcd(s, s.derivative()).degree == 0


def test_gcd_over_quadratic_field():
    K = QSQRT_MINUS3
    w = K.elem(mpq(-1, 2), mpq(1, 2))
    f = Poly(K, [-w, 1]) * Poly(K, [1, 1])
    g = Poly(K, [-w, 1]) * Poly(K, [3, 1])
    assert poly_gcd(f, g) == Poly(K, [-w, 1])


def test_fp_poly_arithmetic():
    F = FpField(7)
    f = Poly(F, [1, 0, 1])
    g = Poly(F, [6, 1])  # x - 1
    q, r = f.divmod(g)
    assert (q * g + r) == f
    assert f.eval(F.coerce(2)) == F.coerce(5)


def test_fp2_sqrt():
    F = Fp2Field(7, 3)  # 3 is a non-residue mod 7
    squares = 0
    for x in F.elements():
        r = F.sqrt(x)
        if r is not None:
            assert r * r == x
            squares += 1
    # 0 plus half of the 48 nonzero elements
    assert squares == 25
    assert F.sqrt(F.coerce(5)) is not None  # every F_p element is a square here
