"""Built-in quick property checks behind `torsion selftest`.

A trimmed, deterministic battery of the invariants the full pytest suite
exercises: field axioms, square-root round trips, factorization round trips,
division polynomials against brute-force torsion enumeration, and one fast
growth row per base field.
"""

from __future__ import annotations

import random
import time

from gmpy2 import mpq

from .curves import (
    ShortCurve,
    count_points_fq,
    curve_from_long,
    kubert_curve_7,
    order_of_point,
)
from .factorize import factor_over_quad, factor_over_rationals
from .fields import (
    QI,
    QQ,
    QSQRT_MINUS3,
    same_square_class,
    sqrt_in_quad,
    square_class_rep,
)
from .growth import growth_extensions
from .polys import FpField, Poly
from .torsion import torsion_over_quad


def _check_field_axioms(rng) -> None:
    for K in (QI, QSQRT_MINUS3):
        xs = [
            K.elem(mpq(rng.randint(-9, 9), rng.randint(1, 5)),
                   mpq(rng.randint(-9, 9), rng.randint(1, 5)))
            for _ in range(8)
        ]
        for a in xs:
            for b in xs:
                assert (a + b) * (a - b) == a * a - b * b
                assert (a * b).conj() == a.conj() * b.conj()
                assert (a * b).norm() == a.norm() * b.norm()
                if not b.is_zero():
                    assert (a / b) * b == a


def _check_sqrt_and_classes(rng) -> None:
    for K in (QI, QSQRT_MINUS3):
        for _ in range(25):
            x = K.elem(rng.randint(-20, 20), rng.randint(-20, 20))
            if x.is_zero():
                continue
            sq = x * x
            r = sqrt_in_quad(sq)
            assert r is not None and r * r == sq
            rep = square_class_rep(x)
            assert same_square_class(x, rep)
            assert square_class_rep(rep) == rep


def _check_factor_roundtrip(rng) -> None:
    for _ in range(10):
        f = Poly.one(QQ)
        for _ in range(rng.randint(1, 3)):
            deg = rng.randint(1, 3)
            f = f * Poly(QQ, [rng.randint(-5, 5) for _ in range(deg)] + [1])
        if f.degree == 0:
            continue
        fz = factor_over_rationals(f)
        assert fz.expand(QQ) == f
    K = QI
    for _ in range(5):
        f = Poly.one(K)
        for _ in range(rng.randint(1, 2)):
            deg = rng.randint(1, 2)
            f = f * Poly(K, [K.elem(rng.randint(-4, 4), rng.randint(-2, 2))
                             for _ in range(deg)] + [1])
        if f.degree == 0:
            continue
        fz = factor_over_quad(f)
        assert fz.expand(K) == f


def _check_division_polys(rng) -> None:
    checked = 0
    while checked < 3:
        p = rng.choice([5, 7, 11, 13])
        F = FpField(p)
        A, B = rng.randrange(p), rng.randrange(p)
        try:
            E = ShortCurve(F, A, B)
        except Exception:
            continue
        checked += 1
        # enumerate E(F_p)
        pts = []
        for x in range(p):
            for P in E.points_with_x(x):
                pts.append(P)
        for n in (2, 3, 4, 5):
            tors_x = set()
            for P in pts:
                if E.mul(n, P).inf:
                    tors_x.add(P.x.v)
            roots = set()
            poly = E.division_poly_x(n)
            for x in range(p):
                if poly.eval(F.coerce(x)).is_zero():
                    if E.points_with_x(x):
                        roots.add(x)
            if n % 2 == 0:
                cubic = E.two_division_poly()
                for x in range(p):
                    if cubic.eval(F.coerce(x)).is_zero() and E.points_with_x(x):
                        roots.add(x)
            assert roots == tors_x, (p, A, B, n)


def _check_counts() -> None:
    for p in (5, 11, 17, 23):
        if p % 3 == 2:
            E = curve_from_long(FpField(p), [0, 1])
            assert count_points_fq(E) == p + 1
    E7, P7 = kubert_curve_7(2)
    assert order_of_point(E7, P7, 10) == 7


def _check_growth() -> None:
    E = curve_from_long(QI, [1, 0, 1, -171, -874])
    assert torsion_over_quad(E).invariants == (1, 2)
    got = {r.group.invariants for r in growth_extensions(E)}
    assert (1, 6) in got and (2, 2) in got
    E = curve_from_long(QSQRT_MINUS3, [1, 0, 1, -76, 298])
    got = {r.group.invariants for r in growth_extensions(E)}
    assert (1, 15) in got


_CHECKS = [
    ("field axioms", _check_field_axioms, True),
    ("square roots and square classes", _check_sqrt_and_classes, True),
    ("factorization round trip", _check_factor_roundtrip, True),
    ("division polynomials vs enumeration", _check_division_polys, True),
    ("point-count laws and order-7 family", _check_counts, False),
    ("growth scan spot checks", _check_growth, False),
]


def run(verbose: bool = False) -> int:
    rng = random.Random(20260809)
    failures = 0
    for name, fn, needs_rng in _CHECKS:
        t0 = time.time()
        try:
            fn(rng) if needs_rng else fn()
            status = "ok"
        except AssertionError as exc:
            status = f"FAILED ({exc})"
            failures += 1
        if verbose:
            print(f"selftest: {name:<40} {status}  [{time.time() - t0:.2f}s]")
    if verbose:
        print("selftest:", "all checks passed" if failures == 0 else
              f"{failures} check(s) failed")
    return 1 if failures else 0
