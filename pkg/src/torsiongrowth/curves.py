"""Weierstrass models, affine point arithmetic, quadratic twists, division
polynomials, halving quartics, reduction at rational primes and naive point
counting over finite fields.

All torsion-facing group arithmetic runs on short models y^2 = x^3 + Ax + B;
long models are normalized on input and points are mapped back through the
recorded change of variables.  Reduction and counting work on the long model
directly so that residue characteristic 3 stays usable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpq, mpz

from .fields import QQ, QuadElem, QuadField, RelQuadField, _tonelli
from .polys import Fp2Elem, Fp2Field, FpField, Poly


class SingularCurveError(ValueError):
    """The Weierstrass model has vanishing discriminant."""


class BadReductionError(ValueError):
    """Reduction at this prime is not usable (bad model reduction, ramified
    prime, residue characteristic 2, or a denominator hits the prime)."""


class PointNotOnCurveError(ValueError):
    pass


class Point:
    """Affine point or the point at infinity; coordinates live in the curve's
    field or an extension of it."""

    __slots__ = ("x", "y", "inf")

    def __init__(self, x=None, y=None, inf: bool = False):
        self.x = x
        self.y = y
        self.inf = inf

    @classmethod
    def infinity(cls) -> "Point":
        return cls(inf=True)

    @property
    def is_infinity(self) -> bool:
        return self.inf

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.inf or other.inf:
            return self.inf and other.inf
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.inf:
            return hash("inf")
        return hash((self.x, self.y))

    def __repr__(self):
        if self.inf:
            return "O"
        return f"({self.x!r}, {self.y!r})"


INFINITY = Point.infinity()


class ShortCurve:
    """y^2 = x^3 + A x + B over a field of characteristic != 2, 3."""

    __slots__ = ("field", "A", "B", "_divpolys")

    def __init__(self, field, A, B):
        self.field = field
        self.A = field.coerce(A)
        self.B = field.coerce(B)
        if self.discriminant() == field.zero():
            raise SingularCurveError(f"singular short model [{A!r}, {B!r}]")
        self._divpolys = {}

    def discriminant(self):
        A, B = self.A, self.B
        return -16 * (4 * A * A * A + 27 * B * B)

    def j_invariant(self):
        c4 = -48 * self.A
        return (c4 * c4 * c4) / self.discriminant()

    def rhs(self, x):
        return (x * x + self.A) * x + self.B

    def contains(self, P: Point) -> bool:
        if P.inf:
            return True
        return P.y * P.y == self.rhs(P.x)

    def _require(self, P: Point):
        if not self.contains(P):
            raise PointNotOnCurveError(f"{P!r} not on {self!r}")

    def neg(self, P: Point) -> Point:
        if P.inf:
            return P
        return Point(P.x, -P.y)

    def add(self, P: Point, Q: Point) -> Point:
        if P.inf:
            self._require(Q)
            return Q
        if Q.inf:
            self._require(P)
            return P
        self._require(P)
        self._require(Q)
        return self._add_unchecked(P, Q)

    def _add_unchecked(self, P: Point, Q: Point) -> Point:
        if P.inf:
            return Q
        if Q.inf:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            lam = (3 * P.x * P.x + self.A) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam * lam - P.x - Q.x
        y3 = lam * (P.x - x3) - P.y
        return Point(x3, y3)

    def mul(self, n: int, P: Point) -> Point:
        self._require(P)
        if n < 0:
            n, P = -n, self.neg(P)
        R = INFINITY
        Q = P
        while n:
            if n & 1:
                R = self._add_unchecked(R, Q)
            Q = self._add_unchecked(Q, Q)
            n >>= 1
        return R

    def points_with_x(self, x) -> list[Point]:
        x = self.field.coerce(x)
        r = self.rhs(x)
        y = self.field.sqrt(r)
        if y is None:
            return []
        if y == self.field.zero():
            return [Point(x, y)]
        return [Point(x, y), Point(x, -y)]

    def base_change(self, new_field) -> "ShortCurve":
        return ShortCurve(new_field, new_field.coerce(self.A), new_field.coerce(self.B))

    def two_division_poly(self) -> Poly:
        return Poly(self.field, [self.B, self.A, 0, 1])

    def division_poly_x(self, n: int) -> Poly:
        """For odd n the full psi_n in x; for even n the x-part psi_n/psi_2.
        Roots are the x-coordinates of the nonzero n-torsion (for even n
        jointly with the roots of the 2-division cubic)."""
        if n < 1:
            raise ValueError("n must be positive")
        if n not in self._divpolys:
            self._divpolys[n] = self._compute_divpoly(n)
        return self._divpolys[n]

    def _compute_divpoly(self, n: int) -> Poly:
        field = self.field
        A, B = self.A, self.B
        x = Poly.x(field)
        R = Poly(field, [B, A, 0, 1])
        R2 = R * R
        half = field.coerce(mpq(1, 2))

        fcache: dict[int, Poly] = {}
        gcache: dict[int, Poly] = {}

        def f(m: int) -> Poly:
            # psi_m for odd m, as a polynomial in x
            if m in fcache:
                return fcache[m]
            if m == 1:
                v = Poly.one(field)
            elif m == 3:
                v = Poly(field, [-A * A, 12 * B, 6 * A, 0, 3])
            else:
                k = m // 2
                if k % 2 == 0:
                    v = R2 * g(k + 2) * g(k) ** 3 - f(k - 1) * f(k + 1) ** 3
                else:
                    v = f(k + 2) * f(k) ** 3 - R2 * g(k - 1) * g(k + 1) ** 3
            fcache[m] = v
            return v

        def g(m: int) -> Poly:
            # psi_m / y for even m, as a polynomial in x
            if m in gcache:
                return gcache[m]
            if m == 0:
                v = Poly.zero(field)
            elif m == 2:
                v = Poly.constant(field, 2)
            elif m == 4:
                v = Poly(
                    field,
                    [
                        -8 * B * B - A * A * A,
                        -4 * A * B,
                        -5 * A * A,
                        20 * B,
                        5 * A,
                        0,
                        1,
                    ],
                ) * field.coerce(4)
            else:
                k = m // 2
                if k % 2 == 0:
                    v = g(k) * (g(k + 2) * f(k - 1) ** 2 - g(k - 2) * f(k + 1) ** 2) * half
                else:
                    v = f(k) * (f(k + 2) * g(k - 1) ** 2 - f(k - 2) * g(k + 1) ** 2) * half
            gcache[m] = v
            return v

        if n % 2 == 1:
            return f(n)
        return g(n) * half

    def halving_quartic(self, P: Point) -> Poly:
        """Quartic whose roots are the x-coordinates of points Q with
        x(2Q) = x(P); callers must filter by the y-coordinate."""
        if P.inf:
            raise ValueError("halving quartic needs an affine point")
        A, B = self.A, self.B
        xP = P.x
        return Poly(
            self.field,
            [A * A - 4 * B * xP, -(8 * B + 4 * A * xP), -2 * A, -4 * xP, 1],
        )

    def __repr__(self):
        return f"ShortCurve[{self.A!r}, {self.B!r}] over {self.field!r}"


def quadratic_twist(E: ShortCurve, d) -> ShortCurve:
    """Normalized model [d^2 A, d^3 B] of the twist d y^2 = x^3 + A x + B."""
    d = E.field.coerce(d)
    if d == E.field.zero():
        raise ValueError("twist by zero")
    return ShortCurve(E.field, d * d * E.A, d * d * d * E.B)


def twist_transfer(P: Point, L: RelQuadField) -> Point:
    """Map a K-point of the normalized twist [d^2 A, d^3 B] to a point of
    [A, B] over L = K(sqrt(d)): (x, y) -> (x/d, (y/d^2) sqrt(d))."""
    d = L.d
    if P.inf:
        return INFINITY
    x = L.elem(P.x / d, 0)
    y = L.elem(0, P.y / (d * d))
    return Point(x, y)


@dataclass
class ShortMap:
    """Exact change of variables between a long model and its short model:
    X = 36 x + 3 b2,  Y = 216 y + 108 a1 x + 108 a3."""

    curve: "WeierstrassCurve"

    def forward(self, P: Point) -> Point:
        if P.inf:
            return INFINITY
        E = self.curve
        X = 36 * P.x + 3 * E.b2
        Y = 216 * P.y + 108 * (E.a1 * P.x + E.a3)
        return Point(X, Y)

    def backward(self, P: Point) -> Point:
        if P.inf:
            return INFINITY
        E = self.curve
        x = (P.x - 3 * E.b2) / 36
        y = (P.y - 108 * (E.a1 * x + E.a3)) / 216
        return Point(x, y)


class WeierstrassCurve:
    """Long model [a1, a2, a3, a4, a6] with derived invariants and, away from
    characteristic 2 and 3, the short model and its point maps."""

    __slots__ = ("field", "a1", "a2", "a3", "a4", "a6",
                 "b2", "b4", "b6", "b8", "c4", "c6", "disc", "_short")

    def __init__(self, field, a1, a2, a3, a4, a6):
        self.field = field
        self.a1 = field.coerce(a1)
        self.a2 = field.coerce(a2)
        self.a3 = field.coerce(a3)
        self.a4 = field.coerce(a4)
        self.a6 = field.coerce(a6)
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        self.b2 = a1 * a1 + 4 * a2
        self.b4 = 2 * a4 + a1 * a3
        self.b6 = a3 * a3 + 4 * a6
        self.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        self.c4 = self.b2 * self.b2 - 24 * self.b4
        self.c6 = -self.b2 ** 3 + 36 * self.b2 * self.b4 - 216 * self.b6
        self.disc = (
            -self.b2 * self.b2 * self.b8
            - 8 * self.b4 ** 3
            - 27 * self.b6 * self.b6
            + 9 * self.b2 * self.b4 * self.b6
        )
        if self.disc == field.zero():
            raise SingularCurveError(
                f"singular model [{a1!r},{a2!r},{a3!r},{a4!r},{a6!r}]"
            )
        self._short = None

    @property
    def j(self):
        return self.c4 ** 3 / self.disc

    def a_invariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def contains(self, P: Point) -> bool:
        if P.inf:
            return True
        x, y = P.x, P.y
        lhs = y * y + self.a1 * x * y + self.a3 * y
        rhs = ((x + self.a2) * x + self.a4) * x + self.a6
        return lhs == rhs

    def short_model(self) -> tuple[ShortCurve, ShortMap]:
        """Short model [-27 c4, -54 c6] with the exact point substitution."""
        if self.field.char() in (2, 3):
            raise ValueError("no short model in characteristic 2 or 3")
        if self._short is None:
            E = ShortCurve(self.field, -27 * self.c4, -54 * self.c6)
            self._short = (E, ShortMap(self))
        return self._short

    def add(self, P: Point, Q: Point) -> Point:
        E, m = self.short_model()
        for R in (P, Q):
            if not self.contains(R):
                raise PointNotOnCurveError(f"{R!r} not on the curve")
        return m.backward(E._add_unchecked(m.forward(P), m.forward(Q)))

    def neg(self, P: Point) -> Point:
        if P.inf:
            return P
        return Point(P.x, -P.y - self.a1 * P.x - self.a3)

    def mul(self, n: int, P: Point) -> Point:
        E, m = self.short_model()
        if not self.contains(P):
            raise PointNotOnCurveError(f"{P!r} not on the curve")
        return m.backward(E.mul(n, m.forward(P)))

    def __repr__(self):
        return (f"Curve[{self.a1!r},{self.a2!r},{self.a3!r},"
                f"{self.a4!r},{self.a6!r}] over {self.field!r}")


def curve_from_long(field, coeffs) -> WeierstrassCurve:
    """Build a curve from [a1,a2,a3,a4,a6]; a 2-tuple [a, b] is accepted as
    the short model [0,0,0,a,b]."""
    coeffs = list(coeffs)
    if len(coeffs) == 2:
        coeffs = [0, 0, 0, coeffs[0], coeffs[1]]
    if len(coeffs) != 5:
        raise ValueError("curve coefficients must be a 2-tuple or a 5-tuple")
    return WeierstrassCurve(field, *coeffs)


def to_short(E: WeierstrassCurve):
    """(A, B, change-of-variables) for the standard short model."""
    S, m = E.short_model()
    return S.A, S.B, m


def order_of_point(E, P: Point, bound: int) -> Optional[int]:
    """Least n <= bound with n P = O, or None."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if P.inf:
        return 1
    Q = P
    for n in range(2, bound + 1):
        Q = E.add(Q, P)
        if Q.inf:
            return n
    return None


# ---------------------------------------------------------------------------
# Reduction and point counting.
# ---------------------------------------------------------------------------


def reduce_at_prime(E: WeierstrassCurve, p: int) -> tuple[WeierstrassCurve, int]:
    """Reduce a curve over K = Q(sqrt(D)) at an odd unramified rational prime
    of good reduction.  Split primes land in F_p, inert primes in F_{p^2}."""
    K = E.field
    if not isinstance(K, QuadField):
        raise TypeError("reduce_at_prime expects a curve over a quadratic field")
    if p == 2:
        raise BadReductionError("residue characteristic 2 is not supported")
    if not gmpy2.is_prime(p):
        raise ValueError(f"{p} is not prime")
    D = K.D
    if D % p == 0:
        raise BadReductionError(f"{p} ramifies in {K!r}")
    for c in E.a_invariants():
        if c.a.denominator % p == 0 or c.b.denominator % p == 0:
            raise BadReductionError(f"coefficient denominator divisible by {p}")
    legendre = pow(D % p, (p - 1) // 2, p)
    if legendre == 1:
        field = FpField(p)
        r = _tonelli(D % p, p)

        def img(c: QuadElem):
            return field.coerce(
                (int(c.a.numerator) * pow(int(c.a.denominator), -1, p)
                 + int(c.b.numerator) * pow(int(c.b.denominator), -1, p) * r) % p
            )

        q = p
    else:
        field = Fp2Field(p, D % p)

        def img(c: QuadElem):
            av = int(c.a.numerator) * pow(int(c.a.denominator), -1, p) % p
            bv = int(c.b.numerator) * pow(int(c.b.denominator), -1, p) % p
            return Fp2Elem(av, bv, field)

        q = p * p
    try:
        Ered = WeierstrassCurve(field, *[img(c) for c in E.a_invariants()])
    except SingularCurveError as exc:
        raise BadReductionError(f"bad reduction at {p}") from exc
    return Ered, q


_COUNT_BUDGET = 1_000_000


def count_points_fq(E: WeierstrassCurve) -> int:
    """Exact |E(F_q)| by enumeration of x, counting the y-solutions of the
    (long-model) quadratic.  Enumeration budget: q <= 10^6."""
    field = E.field
    if isinstance(field, FpField):
        p = field.p
        if p > _COUNT_BUDGET:
            raise ValueError("enumeration budget exceeded")
        is_sq = bytearray(p)
        for y in range((p + 1) // 2 + 1):
            is_sq[y * y % p] = 1
        a1 = E.a1.v
        a2 = E.a2.v
        a3 = E.a3.v
        a4 = E.a4.v
        a6 = E.a6.v
        count = 1
        for x in range(p):
            # y^2 + (a1 x + a3) y = x^3 + a2 x^2 + a4 x + a6
            h = (a1 * x + a3) % p
            f = (((x + a2) * x + a4) * x + a6) % p
            dq = (h * h + 4 * f) % p
            if dq == 0:
                count += 1
            elif is_sq[dq]:
                count += 2
        return count
    if isinstance(field, Fp2Field):
        p = field.p
        q = p * p
        if q > _COUNT_BUDGET:
            raise ValueError("enumeration budget exceeded")
        mask = field._square_mask()
        enc = field._encode
        a1, a2, a3, a4, a6 = E.a_invariants()
        count = 1
        for x in field.elements():
            h = a1 * x + a3
            f = ((x + a2) * x + a4) * x + a6
            dq = h * h + 4 * f
            if dq.is_zero():
                count += 1
            elif mask[enc(dq)]:
                count += 2
        return count
    raise TypeError("count_points_fq expects a curve over F_p or F_{p^2}")


# ---------------------------------------------------------------------------
# The one-parameter family carrying a point of order 7 at (0, 0).
# ---------------------------------------------------------------------------


def kubert_curve_7(t) -> tuple[WeierstrassCurve, Point]:
    """Curve y^2 + (1-c) x y - b y = x^3 - b x^2 with b = t^3 - t^2 and
    c = t^2 - t; the marked point (0, 0) has order 7."""
    if isinstance(t, (int, mpz)):
        t = mpq(t)
    if isinstance(t, mpq):
        field = QQ
    elif isinstance(t, QuadElem):
        field = t.field
    else:
        raise TypeError("parameter must be rational or a quadratic element")
    if t == field.coerce(0) or t == field.coerce(1):
        raise SingularCurveError("parameter t in {0, 1} degenerates the family")
    b = t * t * t - t * t
    c = t * t - t
    E = WeierstrassCurve(field, 1 - c, -b, -b, 0, 0)
    P = Point(field.coerce(0), field.coerce(0))
    assert E.contains(P)
    return E, P


def integral_short_model(E: ShortCurve) -> tuple[ShortCurve, object]:
    """Scale [A, B] to [t^4 A, t^6 B] with integral coordinates; returns the
    scaled curve and t.  Points map by (x, y) -> (t^2 x, t^3 y)."""
    field = E.field
    if isinstance(field, QuadField):
        den = gmpy2.lcm(
            gmpy2.lcm(E.A.a.denominator, E.A.b.denominator),
            gmpy2.lcm(E.B.a.denominator, E.B.b.denominator),
        )
    else:
        den = gmpy2.lcm(E.A.denominator, E.B.denominator)
    t = field.coerce(mpq(den))
    if den == 1:
        return E, t
    return ShortCurve(field, t**4 * E.A, t**6 * E.B), t
