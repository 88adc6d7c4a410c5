import random

import pytest
from gmpy2 import mpq

from torsiongrowth.factorize import (
    factor_over_quad,
    factor_over_rationals,
    low_degree_factors,
    roots_in_field,
    zp_factor_squarefree,
)
from torsiongrowth.fields import QI, QQ, QSQRT_MINUS3, RelQuadField
from torsiongrowth.polys import Poly, zp_from_list, zp_mul


def test_factor_over_q_examples():
    f = Poly(QQ, [-1, 0, 0, 0, 1])  # x^4 - 1
    fz = factor_over_rationals(f)
    degs = fz.degrees()
    assert degs == [1, 1, 2]
    assert fz.expand(QQ) == f

    f = Poly(QQ, [0, 12, 0, 0, 3])  # 3x(x^3 + 4)
    fz = factor_over_rationals(f)
    assert fz.unit == 3
    assert sorted(g.degree for g, _ in fz.factors) == [1, 3]
    assert fz.expand(QQ) == f

    f = Poly(QQ, [1, 0, 1])
    fz = factor_over_rationals(f)
    assert len(fz.factors) == 1 and fz.factors[0][0] == f


def test_factor_over_quad_examples():
    f = Poly(QI, [1, 0, 1])
    fz = factor_over_quad(f)
    assert sorted(g.degree for g, _ in fz.factors) == [1, 1]
    assert fz.expand(QI) == f

    f = Poly(QI, [-2, 0, 1])  # x^2 - 2 stays irreducible
    fz = factor_over_quad(f)
    assert [g.degree for g, _ in fz.factors] == [2]

    K = QSQRT_MINUS3
    f = Poly(K, [1, 1, 1])
    fz = factor_over_quad(f)
    roots = {-g.coeffs[0] for g, _ in fz.factors}
    assert roots == {K.elem(mpq(-1, 2), mpq(1, 2)), K.elem(mpq(-1, 2), mpq(-1, 2))}


def test_multiplicities():
    f = Poly(QQ, [1, 1]) ** 3 * Poly(QQ, [1, 0, 1]) ** 2
    fz = factor_over_rationals(f)
    assert sorted(m for _, m in fz.factors) == [2, 3]
    assert fz.expand(QQ) == f


def test_low_degree_factors_examples():
    f = Poly(QI, [0, 12, 0, 0, 3])  # 3x(x^3+4), no Qi-root of x^3+4
    out = low_degree_factors(f, 1)
    assert out == [Poly.x(QI)]

    f = Poly(QQ, [1, 0, 1]) * Poly(QQ, [1, 1, 0, 1])
    out = low_degree_factors(f, 2)
    assert out == [Poly(QQ, [1, 0, 1])]

    # an irreducible quintic has no low-degree factors
    f = Poly(QQ, [3, 0, 0, 0, 0, 1])
    assert low_degree_factors(f, 2) == []


def test_roots_in_field_examples():
    f = Poly(QI, [1, 0, 1])
    assert set(roots_in_field(f, QI)) == {QI.gen(), -QI.gen()}
    f = Poly(QI, [1, 0, 2, 0, 1])  # (x^2+1)^2
    assert set(roots_in_field(f, QI)) == {QI.gen(), -QI.gen()}
    f = Poly(QSQRT_MINUS3, [4, 0, 0, 1])
    assert roots_in_field(f, QSQRT_MINUS3) == []


def test_roots_in_relquad():
    K = QI
    L = RelQuadField(K, K.elem(2))
    f = Poly(L, [-2, 0, 1])  # roots +-sqrt(2)
    roots = roots_in_field(f, L)
    assert len(roots) == 2 and all(r * r == L.coerce(2) for r in roots)
    # x^2 - 3 has no roots in Qi(sqrt(2))
    f = Poly(L, [-3, 0, 1])
    assert roots_in_field(f, L) == []
    # mixed: (x^2 - 2)(x - i) over L
    f = Poly(L, [-2, 0, 1]) * Poly(L, [L.coerce(-K.gen()), L.one()])
    assert len(roots_in_field(f, L)) == 3


def _random_poly(rng, field, deg, coeff):
    cs = [coeff(rng) for _ in range(deg)] + [1]
    return Poly(field, cs)


def test_round_trip_over_q_small():
    rng = random.Random(7)
    for _ in range(40):
        f = Poly.one(QQ)
        for _ in range(rng.randint(1, 3)):
            f = f * _random_poly(rng, QQ, rng.randint(1, 4),
                                 lambda r: r.randint(-8, 8))
        fz = factor_over_rationals(f)
        assert fz.expand(QQ) == f


def test_round_trip_over_k_small():
    rng = random.Random(11)
    for K in (QI, QSQRT_MINUS3):
        for _ in range(15):
            f = Poly.one(K)
            for _ in range(rng.randint(1, 2)):
                f = f * _random_poly(
                    rng, K, rng.randint(1, 3),
                    lambda r: K.elem(r.randint(-5, 5), r.randint(-3, 3)),
                )
            fz = factor_over_quad(f)
            assert fz.expand(K) == f
            # every factor is irreducible: re-factoring is stable
            for g, _m in fz.factors:
                sub = factor_over_quad(g)
                assert len(sub.factors) == 1 and sub.factors[0][0] == g


def test_mod_p_degree_refinement():
    import gmpy2
    import numpy as np

    from torsiongrowth.polys import zp_deg, zp_gcd, zp_trim

    rng = random.Random(3)
    checked = 0
    while checked < 8:
        f = Poly.one(QQ)
        for _ in range(rng.randint(1, 3)):
            f = f * _random_poly(rng, QQ, rng.randint(1, 4),
                                 lambda r: r.randint(-6, 6))
        if f.degree < 2:
            continue
        fz = factor_over_rationals(f)
        ints = [int(c) for c in f.coeffs]
        factor_ints = []
        for g, mult in fz.factors:
            den = 1
            for c in g.coeffs:
                den = gmpy2.lcm(den, c.denominator)
            factor_ints.append(([int(c * den) for c in g.coeffs], mult, int(den)))
        good = 0
        p = 4
        while good < 5 and p < 300:
            p = int(gmpy2.next_prime(p))
            if ints[-1] % p == 0 or any(d % p == 0 for _, _, d in factor_ints):
                continue
            fp = zp_from_list(ints, p)
            dfp = zp_trim(np.array(
                [ints[i] % p * i % p for i in range(1, len(ints))],
                dtype=np.int64))
            if len(dfp) == 0 or zp_deg(zp_gcd(fp, dfp, p)) != 0:
                continue
            good += 1
            mod_degs = sorted(len(g) - 1 for g in zp_factor_squarefree(fp, p))
            refine = []
            for gi, mult, _d in factor_ints:
                degs = [len(h) - 1
                        for h in zp_factor_squarefree(zp_from_list(gi, p), p)]
                for _ in range(mult):
                    refine.extend(degs)
            assert sorted(refine) == mod_degs
        checked += 1


def test_low_degree_agrees_with_full():
    rng = random.Random(5)
    for K in (QI, QSQRT_MINUS3):
        for _ in range(10):
            f = Poly.one(K)
            for _ in range(rng.randint(2, 3)):
                f = f * _random_poly(
                    rng, K, rng.randint(1, 3),
                    lambda r: K.elem(r.randint(-4, 4), r.randint(-2, 2)),
                )
            full = {g for g, _ in factor_over_quad(f).factors if g.degree <= 2}
            low = set(low_degree_factors(f, 2))
            assert low == full


def test_zp_factor_squarefree():
    p = 13
    f = zp_mul(zp_from_list([1, 1], p), zp_from_list([2, 0, 1], p), p)
    f = zp_mul(f, zp_from_list([5, 1], p), p)
    facs = zp_factor_squarefree(f, p)
    assert sorted(len(g) - 1 for g in facs) in ([1, 1, 1, 1], [1, 1, 2])
    prod = zp_from_list([1], p)
    for g in facs:
        prod = zp_mul(prod, g, p)
    assert list(prod) == list(f)


def test_factor_rejects_zero():
    with pytest.raises(ValueError):
        factor_over_rationals(Poly.zero(QQ))
    with pytest.raises(ValueError):
        factor_over_quad(Poly.zero(QI))


def test_factor_budget_env(monkeypatch):
    monkeypatch.setenv("TORSION_FACTOR_BUDGET", "1")
    from torsiongrowth.fields import FactorBudgetError, factor_budget_from_env

    assert factor_budget_from_env() == 1
    # a polynomial with several modular factors needs more than one subset
    # trial; a fresh polynomial avoids the low-degree cache
    f = Poly(QQ, [7, 0, 1]) * Poly(QQ, [-11, 1]) * Poly(QQ, [13, 1, 1, 1])
    with pytest.raises(FactorBudgetError):
        factor_over_rationals(f)


def test_factor_over_real_quadratic_field():
    from torsiongrowth.fields import QuadField

    K = QuadField(5)
    f = Poly(K, [-5, 0, 1])  # x^2 - 5 splits
    fz = factor_over_quad(f)
    assert sorted(g.degree for g, _ in fz.factors) == [1, 1]
    assert fz.expand(K) == f
    f = Poly(K, [-2, 0, 1])  # x^2 - 2 stays irreducible
    assert [g.degree for g, _ in factor_over_quad(f).factors] == [2]
