"""Dense univariate polynomial arithmetic over Q, quadratic fields, relative
quadratic extensions and prime finite fields.

A Poly stores its coefficients lowest-degree first together with a field tag
(one of RationalField, QuadField, RelQuadField, FpField, Fp2Field).  Gcds
over Q and quadratic fields run on cleared-denominator coefficients through
a subresultant pseudo-remainder sequence; everything else uses monic Euclid.

The module also holds the numpy-backed F_p[x] kernels (arrays of int64,
lowest degree first) that the factorization code builds on.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .fields import QuadField, RationalField, _tonelli


class FpField:
    """Prime field F_p; elements are FpElem."""

    __slots__ = ("p", "_sq")

    def __init__(self, p: int):
        self.p = p
        self._sq = None

    def zero(self):
        return FpElem(0, self)

    def one(self):
        return FpElem(1, self)

    def coerce(self, x):
        if isinstance(x, FpElem):
            if x.field.p != self.p:
                raise ValueError("mixed prime fields")
            return x
        if isinstance(x, (int, mpz)):
            return FpElem(int(x) % self.p, self)
        if isinstance(x, mpq):
            return FpElem(
                int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p,
                self,
            )
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def char(self):
        return self.p

    def order(self):
        return self.p

    def elements(self):
        return (FpElem(v, self) for v in range(self.p))

    def is_square(self, x) -> bool:
        v = self.coerce(x).v
        return v == 0 or pow(v, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, x):
        v = self.coerce(x).v
        if not self.is_square(v):
            return None
        return FpElem(_tonelli(v, self.p), self)

    def __eq__(self, other):
        return isinstance(other, FpField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class FpElem:
    __slots__ = ("v", "field")

    def __init__(self, v: int, field: FpField):
        self.v = v % field.p
        self.field = field

    def _c(self, other):
        if isinstance(other, FpElem):
            return other
        if isinstance(other, (int, mpz, mpq)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else FpElem(self.v + o.v, self.field)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else FpElem(self.v - o.v, self.field)

    def __rsub__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else o - self

    def __neg__(self):
        return FpElem(-self.v, self.field)

    def __mul__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else FpElem(self.v * o.v, self.field)

    __rmul__ = __mul__

    def inv(self):
        return FpElem(pow(self.v, -1, self.field.p), self.field)

    def __truediv__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else self * o.inv()

    def __rtruediv__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else o * self.inv()

    def __pow__(self, n):
        return FpElem(pow(self.v, n, self.field.p), self.field)

    def __eq__(self, o):
        if isinstance(o, FpElem):
            return self.field == o.field and self.v == o.v
        if isinstance(o, (int, mpz)):
            return self.v == int(o) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.field.p))

    def __bool__(self):
        return self.v != 0

    def is_zero(self):
        return self.v == 0

    def __repr__(self):
        return f"{self.v}"


class Fp2Field:
    """F_{p^2} = F_p[t]/(t^2 - nu) for a non-residue nu; elements Fp2Elem."""

    __slots__ = ("p", "nu", "_sqmask")

    def __init__(self, p: int, nu: int):
        self.p = p
        self.nu = nu % p
        if pow(self.nu, (p - 1) // 2, p) != p - 1:
            raise ValueError(f"{nu} is a residue mod {p}; t^2 - nu not irreducible")
        self._sqmask = None

    def zero(self):
        return Fp2Elem(0, 0, self)

    def one(self):
        return Fp2Elem(1, 0, self)

    def coerce(self, x):
        if isinstance(x, Fp2Elem):
            if x.field.p != self.p or x.field.nu != self.nu:
                raise ValueError("mixed quadratic finite fields")
            return x
        if isinstance(x, FpElem):
            if x.field.p != self.p:
                raise ValueError("mixed characteristics")
            return Fp2Elem(x.v, 0, self)
        if isinstance(x, (int, mpz)):
            return Fp2Elem(int(x) % self.p, 0, self)
        if isinstance(x, mpq):
            return Fp2Elem(
                int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p,
                0,
                self,
            )
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}^2")

    def char(self):
        return self.p

    def order(self):
        return self.p * self.p

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield Fp2Elem(a, b, self)

    def _encode(self, x: "Fp2Elem") -> int:
        return x.a * self.p + x.b

    def _square_mask(self) -> bytearray:
        if self._sqmask is None:
            q = self.p * self.p
            mask = bytearray(q)
            for y in self.elements():
                mask[self._encode(y * y)] = 1
            self._sqmask = mask
        return self._sqmask

    def is_square(self, x) -> bool:
        x = self.coerce(x)
        if x.is_zero():
            return True
        q = self.p * self.p
        return self._pow_elem(x, (q - 1) // 2) == self.one()

    def _pow_elem(self, x, n):
        r = self.one()
        while n:
            if n & 1:
                r = r * x
            x = x * x
            n >>= 1
        return r

    def sqrt(self, x) -> Optional["Fp2Elem"]:
        """Square root in F_{p^2}; brute search over the base-coefficient
        grid is avoided by the standard shifted-Tonelli tricks when x lies in
        F_p, otherwise a small search over candidates with matching norm."""
        x = self.coerce(x)
        if x.is_zero():
            return self.zero()
        if x.b == 0:
            fp = FpField(self.p)
            if fp.is_square(x.a):
                return Fp2Elem(_tonelli(x.a, self.p), 0, self)
            c = x.a * pow(self.nu, -1, self.p) % self.p
            if not fp.is_square(c):
                return None
            return Fp2Elem(0, _tonelli(c, self.p), self)
        # generic case: solve (u + v t)^2 = a + b t via the norm, as over
        # quadratic number fields but with Tonelli square roots
        p, nu = self.p, self.nu
        fp = FpField(p)
        n = (x.a * x.a - nu * x.b * x.b) % p
        if not fp.is_square(n):
            return None
        s = _tonelli(n, p)
        inv2 = pow(2, -1, p)
        for sign in (s, p - s):
            u2 = (x.a + sign) * inv2 % p
            if fp.is_square(u2):
                u = _tonelli(u2, p)
                if u != 0:
                    v = x.b * pow(2 * u, -1, p) % p
                    cand = Fp2Elem(u, v, self)
                    if cand * cand == x:
                        return cand
        return None

    def __eq__(self, other):
        return (
            isinstance(other, Fp2Field)
            and other.p == self.p
            and other.nu == self.nu
        )

    def __hash__(self):
        return hash(("Fp2", self.p, self.nu))

    def __repr__(self):
        return f"F_{self.p}^2"


class Fp2Elem:
    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int, field: Fp2Field):
        self.a = a % field.p
        self.b = b % field.p
        self.field = field

    def _c(self, other):
        if isinstance(other, Fp2Elem):
            return other
        if isinstance(other, (int, mpz, mpq, FpElem)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return Fp2Elem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return Fp2Elem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Fp2Elem(-self.a, -self.b, self.field)

    def __mul__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        p, nu = self.field.p, self.field.nu
        return Fp2Elem(
            (self.a * o.a + nu * self.b * o.b) % p,
            (self.a * o.b + self.b * o.a) % p,
            self.field,
        )

    __rmul__ = __mul__

    def inv(self):
        p, nu = self.field.p, self.field.nu
        n = (self.a * self.a - nu * self.b * self.b) % p
        ninv = pow(n, -1, p)
        return Fp2Elem(self.a * ninv, -self.b * ninv, self.field)

    def __truediv__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else self * o.inv()

    def __rtruediv__(self, o):
        o = self._c(o)
        return NotImplemented if o is NotImplemented else o * self.inv()

    def __pow__(self, n):
        return self.field._pow_elem(self, n)

    def __eq__(self, o):
        if isinstance(o, Fp2Elem):
            return self.field == o.field and self.a == o.a and self.b == o.b
        if isinstance(o, (int, mpz, FpElem)):
            o = self.field.coerce(o)
            return self.a == o.a and self.b == o.b
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.field.p, self.field.nu))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}t"


# ---------------------------------------------------------------------------
# Generic dense polynomials.
# ---------------------------------------------------------------------------


class Poly:
    """Dense univariate polynomial; coefficients lowest degree first."""

    __slots__ = ("coeffs", "field")

    def __init__(self, field, coeffs: Iterable):
        cs = [field.coerce(c) for c in coeffs]
        while cs and _is_zero_elem(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field

    @classmethod
    def zero(cls, field):
        return cls(field, [])

    @classmethod
    def one(cls, field):
        return cls(field, [1])

    @classmethod
    def x(cls, field):
        return cls(field, [0, 1])

    @classmethod
    def constant(cls, field, c):
        return cls(field, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.field))

    def __add__(self, other):
        other = self._coerce_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self[i] + other[i] for i in range(n)])

    def __sub__(self, other):
        other = self._coerce_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.field, [self[i] - other[i] for i in range(n)])

    def __neg__(self):
        return Poly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field.coerce(other)
            return Poly(self.field, [a * c for a in self.coeffs])
        other = self._coerce_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.field)
        zero = self.field.zero()
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero_elem(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce_poly(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        return Poly.constant(self.field, other)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree < other.degree:
            return Poly.zero(self.field), self
        inv_lc = _inv_elem(other.lc())
        rem = list(self.coeffs)
        dq = self.degree - other.degree
        quot = [self.field.zero()] * (dq + 1)
        oc = other.coeffs
        for k in range(dq, -1, -1):
            c = rem[other.degree + k] * inv_lc
            quot[k] = c
            if not _is_zero_elem(c):
                for j in range(other.degree + 1):
                    rem[k + j] = rem[k + j] - c * oc[j]
        return Poly(self.field, quot), Poly(self.field, rem[: other.degree])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("exact polynomial division has remainder")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = _inv_elem(self.lc())
        return Poly(self.field, [c * inv for c in self.coeffs])

    def eval(self, x):
        """Horner evaluation; x may live in an extension of the base field."""
        if self.is_zero():
            return x * 0 if not isinstance(x, (int, mpz)) else self.field.zero()
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(
            self.field,
            [self.coeffs[i] * i for i in range(1, len(self.coeffs))],
        )

    def compose(self, other: "Poly") -> "Poly":
        """self(other(x)) by Horner."""
        other = self._coerce_poly(other)
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.constant(self.field, c)
        return acc

    def shift(self, c) -> "Poly":
        """self(x + c)."""
        return self.compose(Poly(self.field, [c, 1]))

    def map_field(self, new_field, convert) -> "Poly":
        return Poly(new_field, [convert(c) for c in self.coeffs])

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not _is_zero_elem(c):
                terms.append(f"({c!r})*x^{i}" if i else f"({c!r})")
        return " + ".join(reversed(terms))


def _is_zero_elem(c) -> bool:
    if isinstance(c, (mpq, mpz, int)):
        return c == 0
    return c.is_zero()


def _inv_elem(c):
    if isinstance(c, mpq):
        return 1 / c
    return c.inv()


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd.  Over Q and quadratic fields the work runs on
    cleared-denominator coefficients through a subresultant PRS; elsewhere
    plain monic Euclid is used."""
    if f.field != g.field:
        raise ValueError("gcd of polynomials over different fields")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    if isinstance(f.field, (RationalField, QuadField)):
        return _subresultant_gcd(f, g)
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _clear_denoms(f: Poly) -> Poly:
    """Scale f by a rational so all coefficient entries are integers."""
    den = mpz(1)
    for c in f.coeffs:
        if isinstance(c, mpq):
            den = gmpy2.lcm(den, c.denominator)
        else:
            den = gmpy2.lcm(den, c.a.denominator)
            den = gmpy2.lcm(den, c.b.denominator)
    if den == 1:
        return f
    return f * f.field.coerce(mpq(den))


def _prem(f: Poly, g: Poly) -> Poly:
    """Pseudo-remainder: rem(lc(g)^(deg f - deg g + 1) * f, g) without any
    coefficient division."""
    field = f.field
    delta = f.degree - g.degree
    lcg = g.lc()
    rem = list(f.coeffs)
    gc = g.coeffs
    for k in range(delta, -1, -1):
        top = rem[g.degree + k]
        rem = [c * lcg for c in rem]
        if not _is_zero_elem(top):
            for j in range(g.degree + 1):
                rem[k + j] = rem[k + j] - top * gc[j]
    return Poly(field, rem[: g.degree])


def _subresultant_gcd(f: Poly, g: Poly) -> Poly:
    a, b = _clear_denoms(f), _clear_denoms(g)
    if a.degree < b.degree:
        a, b = b, a
    if b.degree == 0:
        return Poly.one(f.field)
    one = a.field.one()
    gg, h = one, one
    while True:
        delta = a.degree - b.degree
        r = _prem(a, b)
        if r.is_zero():
            return b.monic()
        if r.degree == 0:
            return Poly.one(f.field)
        divisor = gg * h**delta
        a, b = b, Poly(a.field, [c / divisor for c in r.coeffs])
        gg = a.lc()
        if delta >= 1:
            h = gg if delta == 1 else (gg**delta) / (h ** (delta - 1))


def squarefree_part(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f (char 0)."""
    if f.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if f.degree <= 1:
        return f.monic()
    if is_squarefree(f):
        return f.monic()
    g = poly_gcd(f, f.derivative())
    return f.exact_div(g).monic() if g.degree > 0 else f.monic()


def is_squarefree(f: Poly) -> bool:
    """Exact squarefreeness test; a coprimality certificate modulo a single
    good prime proves squarefreeness, with exact gcd as a fallback."""
    if f.degree <= 1:
        return True
    verdict = _sqf_probe(f)
    if verdict is True:
        return True
    return poly_gcd(f, f.derivative()).degree == 0


def _sqf_probe(f: Poly, tries: int = 12) -> Optional[bool]:
    """Try to certify gcd(f, f') = 1 by reduction mod p.  A coprime image
    with preserved degree proves disc(f) != 0, hence squarefreeness.
    Returns True on a certificate, None when every probed prime was
    inconclusive."""
    reduce_mod = _coeff_reducer(f)
    if reduce_mod is None:
        return None
    p = 1009
    for _ in range(tries):
        p = int(gmpy2.next_prime(p))
        cs = reduce_mod(p)
        if cs is None or cs[-1] % p == 0:
            continue
        fp = zp_from_list(cs, p)
        dfp = zp_trim(np.array(
            [int(cs[i]) * i % p for i in range(1, len(cs))], dtype=np.int64))
        if len(dfp) == 0:
            continue
        if zp_deg(zp_gcd(fp, dfp, p)) == 0:
            return True
    return None


def _coeff_reducer(f: Poly):
    """Build p -> list-of-int reducer for the coefficients of f, or None if
    the coefficient field has no cheap reduction to F_p."""
    field = f.field
    if isinstance(field, RationalField):
        pairs = [(int(c.numerator), int(c.denominator)) for c in f.coeffs]

        def reduce_q(p):
            out = []
            for n, d in pairs:
                if d % p == 0:
                    return None
                out.append(n * pow(d, -1, p) % p)
            return out

        return reduce_q
    if isinstance(field, QuadField):
        D = field.D
        coeffs = f.coeffs

        def reduce_k(p):
            if p == 2 or D % p == 0 or pow(D % p, (p - 1) // 2, p) != 1:
                return None
            r = _tonelli(D % p, p)
            out = []
            for c in coeffs:
                da, db = int(c.a.denominator), int(c.b.denominator)
                if da % p == 0 or db % p == 0:
                    return None
                av = int(c.a.numerator) * pow(da, -1, p)
                bv = int(c.b.numerator) * pow(db, -1, p)
                out.append((av + bv * r) % p)
            return out

        return reduce_k
    return None


def eval_poly(f: Poly, x):
    return f.eval(x)


def resultant(f: Poly, g: Poly):
    """Resultant with the convention res(f, g) = lc(g)^deg(f) * prod f(beta)
    over the roots beta of g, computed by a Euclidean remainder recursion."""
    if f.field != g.field:
        raise ValueError("resultant of polynomials over different fields")
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial")
    one = f.field.one()

    def rec(a: Poly, b: Poly):
        # res(a, b) = lc(b)^deg(a) * prod a(roots of b)
        if b.degree == 0:
            return b.lc() ** a.degree
        if a.degree == 0:
            return a.lc() ** b.degree
        if a.degree < b.degree:
            sign = one if (a.degree * b.degree) % 2 == 0 else -one
            return sign * rec(b, a)
        r = a % b
        if r.is_zero():
            return f.field.zero()
        return b.lc() ** (a.degree - r.degree) * rec(r, b)

    return rec(f, g)


def quadratic_discriminant(g: Poly):
    """b^2 - 4ac of a degree-2 polynomial; the splitting field of g over its
    coefficient field F is F(sqrt(disc))."""
    if g.degree != 2:
        raise ValueError("quadratic_discriminant needs a degree-2 polynomial")
    a, b, c = g.coeffs[2], g.coeffs[1], g.coeffs[0]
    return b * b - 4 * a * c


# ---------------------------------------------------------------------------
# F_p[x] kernels on numpy int64 arrays (lowest degree first).
# ---------------------------------------------------------------------------


def zp_trim(a: np.ndarray) -> np.ndarray:
    nz = np.nonzero(a)[0]
    if len(nz) == 0:
        return a[:0]
    return a[: nz[-1] + 1]


def zp_from_list(cs: Sequence[int], p: int) -> np.ndarray:
    return zp_trim(np.array([int(c) % p for c in cs], dtype=np.int64))


def zp_deg(a: np.ndarray) -> int:
    return len(a) - 1


def zp_mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 0 or len(b) == 0:
        return a[:0]
    return zp_trim(np.convolve(a, b) % p)


def zp_add(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] += b
    return zp_trim(out % p)


def zp_sub(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    n = max(len(a), len(b))
    out = np.zeros(n, dtype=np.int64)
    out[: len(a)] += a
    out[: len(b)] -= b
    return zp_trim(out % p)


def zp_divmod(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    if len(b) == 0:
        raise ZeroDivisionError
    if len(a) < len(b):
        return a[:0], a
    a = a.copy()
    inv = pow(int(b[-1]), -1, p)
    dq = len(a) - len(b)
    q = np.zeros(dq + 1, dtype=np.int64)
    for k in range(dq, -1, -1):
        c = a[len(b) - 1 + k] * inv % p
        q[k] = c
        if c:
            a[k : k + len(b)] = (a[k : k + len(b)] - c * b) % p
    return zp_trim(q), zp_trim(a[: len(b) - 1])


def zp_mod(a, b, p):
    return zp_divmod(a, b, p)[1]


def zp_monic(a: np.ndarray, p: int) -> np.ndarray:
    if len(a) == 0:
        return a
    inv = pow(int(a[-1]), -1, p)
    return (a * inv) % p


def zp_gcd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    while len(b):
        a, b = b, zp_mod(a, b, p)
    return zp_monic(a, p)


def zp_gcdext(a: np.ndarray, b: np.ndarray, p: int):
    """Extended gcd: returns (s, t, g) with s*a + t*b = g, g monic."""
    one = np.array([1], dtype=np.int64)
    zero = np.zeros(0, dtype=np.int64)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while len(r1):
        q, r = zp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, zp_sub(s0, zp_mul(q, s1, p), p)
        t0, t1 = t1, zp_sub(t0, zp_mul(q, t1, p), p)
    if len(r0) == 0:
        raise ZeroDivisionError("gcdext of zero polynomials")
    inv = pow(int(r0[-1]), -1, p)
    return zp_trim(s0 * inv % p), zp_trim(t0 * inv % p), zp_monic(r0, p)


class ZpModCtx:
    """Fast repeated reduction mod a fixed monic f in F_p[x] via a
    precomputed table of x^(deg f + j) mod f."""

    def __init__(self, f: np.ndarray, p: int):
        f = zp_monic(f, p)
        self.f = f
        self.p = p
        self.n = zp_deg(f)
        n = self.n
        # rows[j] = x^(n + j) mod f, for j in [0, n-1); a product of two
        # residues has degree <= 2n - 2, so n - 1 rows suffice
        rows = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        xn = (-f[:-1]) % p  # x^n mod f
        cur = xn.copy()
        for j in range(n - 1):
            rows[j] = cur
            top = cur[n - 1]
            shifted = np.zeros(n, dtype=np.int64)
            shifted[1:] = cur[: n - 1]
            cur = (shifted + top * xn) % p
        self.rows = rows

    def reduce(self, a: np.ndarray) -> np.ndarray:
        n, p = self.n, self.p
        if len(a) <= n:
            return zp_trim(a % p)
        high = a[n:] % p
        if len(high) > len(self.rows):
            # fall back to long division for very long inputs
            return zp_mod(a % p, self.f, p)
        low = np.zeros(n, dtype=np.int64)
        low[: min(n, len(a))] = a[:n] % p
        out = (low + high @ self.rows[: len(high)]) % p
        return zp_trim(out)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if len(a) == 0 or len(b) == 0:
            return a[:0]
        return self.reduce(np.convolve(a, b))

    def pow_x(self, e: int) -> np.ndarray:
        """x^e mod f by square and multiply."""
        result = np.array([1], dtype=np.int64)
        base = self.reduce(np.array([0, 1], dtype=np.int64))
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def pow_poly(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.array([1], dtype=np.int64)
        base = self.reduce(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result
