"""Exact arithmetic in Q, in quadratic fields K = Q(sqrt(D)), and in relative
quadratic extensions L = K(sqrt(d)).

Everything is exact: rationals are gmpy2.mpq (always reduced, positive
denominator), quadratic elements are pairs of rationals, and elements of a
relative extension are pairs of quadratic elements.  Square testing, square
roots and square-class canonicalization (modulo (K*)^2) live here as well.

Square-class canonicalization is only implemented for the two quadratic
cyclotomic fields D = -1, -3, whose rings of integers are PIDs; it factors
the element into canonical prime generators and keeps the primes of odd
exponent together with a unit-class representative (1 or i for Q(i), 1 or -1
for Q(sqrt(-3))).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Union

import gmpy2
from gmpy2 import mpq, mpz

Rational = mpq

_Scalar = Union[int, mpz, mpq]


class FactorBudgetError(RuntimeError):
    """Raised when an exact computation would exceed its factoring budget."""


def rat(n, d=1) -> mpq:
    return mpq(n, d)


def rat_sqrt(q) -> Optional[mpq]:
    """Exact square root of a rational, or None if it is not a square."""
    q = mpq(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    if not (gmpy2.is_square(num) and gmpy2.is_square(den)):
        return None
    return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))


def is_rat_square(q) -> bool:
    return rat_sqrt(q) is not None


def _squarefree_small(n: int) -> bool:
    # only used to validate field discriminants, |n| stays small
    n = abs(n)
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class RationalField:
    """Field tag for Q; elements are plain mpq."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def zero(self):
        return mpq(0)

    def one(self):
        return mpq(1)

    def coerce(self, x):
        if isinstance(x, (int, mpz, mpq)):
            return mpq(x)
        if isinstance(x, QuadElem) and x.b == 0:
            return mpq(x.a)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def sqrt(self, x):
        return rat_sqrt(x)

    def char(self):
        return 0

    def __repr__(self):
        return "Q"

    def __hash__(self):
        return hash("QQ")

    def __eq__(self, other):
        return isinstance(other, RationalField)


QQ = RationalField()


@dataclass(frozen=True)
class QuadField:
    """The quadratic field Q(sqrt(D)) for a squarefree integer D != 0, 1."""

    D: int

    def __post_init__(self):
        if self.D in (0, 1) or not _squarefree_small(self.D):
            raise ValueError(f"D must be squarefree and != 0, 1, got {self.D}")

    def elem(self, a, b=0) -> "QuadElem":
        return QuadElem(mpq(a), mpq(b), self)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def gen(self) -> "QuadElem":
        """sqrt(D) as a field element."""
        return self.elem(0, 1)

    def coerce(self, x) -> "QuadElem":
        if isinstance(x, QuadElem):
            if x.field != self:
                raise ValueError(f"element of {x.field} used in {self}")
            return x
        if isinstance(x, (int, mpz, mpq)):
            return self.elem(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def sqrt(self, x):
        return sqrt_in_quad(self.coerce(x))

    def char(self):
        return 0

    def __repr__(self):
        return f"Q(sqrt({self.D}))"


QI = QuadField(-1)
QSQRT_MINUS3 = QuadField(-3)


class QuadElem:
    """Element a + b*sqrt(D) of a quadratic field, with exact rational a, b."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a, b, field: QuadField):
        object.__setattr__(self, "a", mpq(a))
        object.__setattr__(self, "b", mpq(b))
        object.__setattr__(self, "field", field)

    def __setattr__(self, *args):
        raise AttributeError("QuadElem is immutable")

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.field != self.field:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, mpz, mpq)):
            return QuadElem(other, 0, self.field)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        D = self.field.D
        return QuadElem(
            self.a * o.a + D * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.field,
        )

    __rmul__ = __mul__

    def inv(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero quadratic element")
        return QuadElem(self.a / n, -self.b / n, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, mpz, mpq)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElem):
            return (
                self.field == other.field
                and self.a == other.a
                and self.b == other.b
            )
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.D))

    def __bool__(self):
        return not (self.a == 0 and self.b == 0)

    def conj(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.field)

    def norm(self) -> mpq:
        """Norm to Q: a^2 - D*b^2."""
        return self.a * self.a - self.field.D * self.b * self.b

    def trace(self) -> mpq:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*s{self.field.D}"
        return f"{self.a}{'+' if self.b > 0 else ''}{self.b}*s{self.field.D}"


def quad_conj(x: QuadElem) -> QuadElem:
    """Galois conjugate a + b*sqrt(D) -> a - b*sqrt(D)."""
    return x.conj()


@dataclass(frozen=True)
class RelQuadField:
    """Relative quadratic extension L = K(sqrt(d)) with d a non-square in K."""

    base: QuadField
    d: QuadElem

    def __post_init__(self):
        if self.d.field != self.base:
            raise ValueError("d must lie in the base field")
        if self.d.is_zero() or sqrt_in_quad(self.d) is not None:
            raise ValueError(f"d = {self.d!r} is a square in {self.base}; "
                             "the extension would be degenerate")

    def elem(self, alpha, beta=0) -> "RelQuadElem":
        return RelQuadElem(self.base.coerce(alpha), self.base.coerce(beta), self)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def gen(self) -> "RelQuadElem":
        """sqrt(d) as a field element."""
        return self.elem(0, 1)

    def coerce(self, x) -> "RelQuadElem":
        if isinstance(x, RelQuadElem):
            if x.field != self:
                raise ValueError("element of a different relative extension")
            return x
        if isinstance(x, (QuadElem, int, mpz, mpq)):
            return self.elem(self.base.coerce(x), self.base.zero())
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def sqrt(self, x):
        return sqrt_in_relquad(self.coerce(x))

    def char(self):
        return 0

    def __repr__(self):
        return f"{self.base}(sqrt({self.d!r}))"


class RelQuadElem:
    """Element alpha + beta*sqrt(d) of L = K(sqrt(d)), alpha, beta in K."""

    __slots__ = ("alpha", "beta", "field")

    def __init__(self, alpha: QuadElem, beta: QuadElem, field: RelQuadField):
        object.__setattr__(self, "alpha", field.base.coerce(alpha))
        object.__setattr__(self, "beta", field.base.coerce(beta))
        object.__setattr__(self, "field", field)

    def __setattr__(self, *args):
        raise AttributeError("RelQuadElem is immutable")

    def _coerce(self, other) -> "RelQuadElem":
        if isinstance(other, RelQuadElem):
            if other.field != self.field:
                raise ValueError("mixed relative extensions")
            return other
        if isinstance(other, (QuadElem, int, mpz, mpq)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RelQuadElem(self.alpha + o.alpha, self.beta + o.beta, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RelQuadElem(self.alpha - o.alpha, self.beta - o.beta, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RelQuadElem(-self.alpha, -self.beta, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.field.d
        return RelQuadElem(
            self.alpha * o.alpha + d * self.beta * o.beta,
            self.alpha * o.beta + self.beta * o.alpha,
            self.field,
        )

    __rmul__ = __mul__

    def rel_norm(self) -> QuadElem:
        """Norm to the base field K: alpha^2 - d*beta^2."""
        return self.alpha * self.alpha - self.field.d * self.beta * self.beta

    def inv(self) -> "RelQuadElem":
        n = self.rel_norm()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero element")
        ninv = n.inv()
        return RelQuadElem(self.alpha * ninv, -self.beta * ninv, self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, mpz, mpq, QuadElem)):
            return self.beta.is_zero() and self.alpha == other
        if isinstance(other, RelQuadElem):
            return (
                self.field == other.field
                and self.alpha == other.alpha
                and self.beta == other.beta
            )
        return NotImplemented

    def __hash__(self):
        if self.beta.is_zero():
            return hash(self.alpha)
        return hash((self.alpha, self.beta, self.field.d))

    def __bool__(self):
        return not self.is_zero()

    def conj(self) -> "RelQuadElem":
        return RelQuadElem(self.alpha, -self.beta, self.field)

    def is_zero(self) -> bool:
        return self.alpha.is_zero() and self.beta.is_zero()

    def in_base(self) -> bool:
        return self.beta.is_zero()

    def __repr__(self):
        if self.beta.is_zero():
            return repr(self.alpha)
        return f"({self.alpha!r})+({self.beta!r})*w"


def rel_conj(x: RelQuadElem) -> RelQuadElem:
    """The generator of Gal(L/K): sqrt(d) -> -sqrt(d)."""
    return x.conj()


def sqrt_in_quad(x: QuadElem) -> Optional[QuadElem]:
    """Square root of x in K = Q(sqrt(D)), or None if x is not a square.

    For x = a (b = 0): x is a square iff a or a/D is a rational square.
    Otherwise a root u + v*sqrt(D) satisfies 4u^4 - 4au^2 + Db^2 = 0, so
    u^2 = (a +- sqrt(a^2 - Db^2))/2 with everything rational.
    """
    F = x.field
    if x.is_zero():
        return F.zero()
    a, b = x.a, x.b
    if b == 0:
        r = rat_sqrt(a)
        if r is not None:
            return F.elem(r)
        r = rat_sqrt(a / F.D)
        if r is not None:
            return F.elem(0, r)
        return None
    s = rat_sqrt(a * a - F.D * b * b)
    if s is None:
        return None
    for sign in (s, -s):
        u = rat_sqrt((a + sign) / 2)
        if u is not None and u != 0:
            v = b / (2 * u)
            cand = F.elem(u, v)
            if cand * cand == x:
                return cand
    return None


def sqrt_in_relquad(x: RelQuadElem) -> Optional[RelQuadElem]:
    """Square root of x in L = K(sqrt(d)), or None if x is not a square.

    The b = 0 case reduces to square tests in K: x = alpha is a square in L
    iff alpha or alpha*d is a square in K (the latter giving a root that is a
    K-multiple of sqrt(d)).  The general case mirrors sqrt_in_quad with K as
    the ground field.
    """
    L = x.field
    K = L.base
    d = L.d
    if x.is_zero():
        return L.zero()
    alpha, beta = x.alpha, x.beta
    if beta.is_zero():
        r = sqrt_in_quad(alpha)
        if r is not None:
            return L.elem(r)
        t = sqrt_in_quad(alpha * d)
        if t is not None:
            return L.elem(K.zero(), t / d)
        return None
    s = sqrt_in_quad(alpha * alpha - d * beta * beta)
    if s is None:
        return None
    for sign in (s, -s):
        u = sqrt_in_quad((alpha + sign) / 2)
        if u is not None and not u.is_zero():
            v = beta / (2 * u)
            cand = L.elem(u, v)
            if cand * cand == x:
                return cand
    return None


def same_square_class(d1: QuadElem, d2: QuadElem) -> bool:
    """True iff K(sqrt(d1)) = K(sqrt(d2)), i.e. d1*d2 is a square in K."""
    if d1.is_zero() or d2.is_zero():
        raise ValueError("square classes are defined for nonzero elements")
    return sqrt_in_quad(d1 * d2) is not None


# ---------------------------------------------------------------------------
# Square-class canonicalization for D = -1, -3 (PID rings of integers).
# ---------------------------------------------------------------------------

_SMALL_PRIME_BOUND = 100_000
_small_prime_cache: list[int] = []


def _small_primes() -> list[int]:
    if not _small_prime_cache:
        bound = _SMALL_PRIME_BOUND
        sieve = bytearray([1]) * (bound + 1)
        sieve[0] = sieve[1] = 0
        for i in range(2, int(bound**0.5) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _small_prime_cache.extend(i for i, f in enumerate(sieve) if f)
    return _small_prime_cache


def _brent_rho(n: mpz, budget: int) -> Optional[mpz]:
    """Brent's cycle variant of Pollard rho; returns a nontrivial factor."""
    if n % 2 == 0:
        return mpz(2)
    seed = 1
    while budget > 0:
        y, c, m = mpz(2 + seed), mpz(1 + seed), 128
        g, r, q = mpz(1), 1, mpz(1)
        x = ys = y
        while g == 1 and budget > 0:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                cnt = min(m, r - k)
                for _ in range(cnt):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                budget -= cnt
                g = gmpy2.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = mpz(1)
            while g == 1:
                ys = (ys * ys + c) % n
                g = gmpy2.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        seed += 1
    return None


def factor_int(n, budget: int = 4_000_000) -> dict:
    """Factor |n| into primes.  Raises FactorBudgetError when the rho budget
    is exhausted on a stubborn composite."""
    n = abs(mpz(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict = {}
    for p in _small_primes():
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if gmpy2.is_prime(m):
            out[int(m)] = out.get(int(m), 0) + 1
            continue
        # reduce perfect powers before rho
        for e in (2, 3, 5):
            root, exact = gmpy2.iroot(m, e)
            if exact:
                stack.extend([root] * e)
                break
        else:
            g = _brent_rho(m, budget)
            if g is None:
                raise FactorBudgetError(f"integer factoring budget exceeded on {m}")
            stack.extend([g, m // g])
    return out


def _tonelli(n: int, p: int) -> int:
    """Square root of n modulo an odd prime p (n must be a residue)."""
    n %= p
    if n == 0:
        return 0
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def _cornacchia(dabs: int, p: int) -> tuple[int, int]:
    """Solve a^2 + dabs*b^2 = p for a prime p with -dabs a residue mod p."""
    r = _tonelli(-dabs % p, p)
    if r * 2 < p:
        r = p - r
    a, b = p, r
    limit = gmpy2.isqrt(p)
    while b > limit:
        a, b = b, a % b
    rem = p - b * b
    c, exact = gmpy2.t_divmod(rem, dabs)
    if exact != 0 or not gmpy2.is_square(c):
        raise ArithmeticError(f"cornacchia failed for p={p}")
    return int(b), int(gmpy2.isqrt(c))


def _units(F: QuadField) -> list[QuadElem]:
    if F.D == -1:
        i = F.gen()
        return [F.one(), i, -F.one(), -i]
    if F.D == -3:
        w = F.elem(mpq(-1, 2), mpq(1, 2))  # primitive cube root of unity
        u = [F.one(), w, w * w]
        return u + [-x for x in u]
    raise NotImplementedError("units only enumerated for D = -1, -3")


def _nontrivial_unit_class(F: QuadField) -> QuadElem:
    # units modulo squares: {1, i} for Q(i), {1, -1} for Q(sqrt(-3))
    return F.gen() if F.D == -1 else -F.one()


def _is_integral(x: QuadElem) -> bool:
    F = x.field
    if F.D % 4 == 1:
        u, v = 2 * x.a, 2 * x.b
        return u.denominator == 1 and v.denominator == 1 and (u - v) % 2 == 0
    return x.a.denominator == 1 and x.b.denominator == 1


def _canonical_associate(pi: QuadElem) -> QuadElem:
    """Pick the canonical generator among the associates of pi.

    Q(i): the associate with a > 0 and -a < b <= a.
    Q(sqrt(-3)): in doubled coordinates (u, v) = (2a, 2b), the associate
    with u > 0 and 0 <= v < u (the 60-degree sector at the positive axis).
    """
    F = pi.field
    for u in _units(F):
        c = pi * u
        if F.D == -1:
            if c.a > 0 and -c.a < c.b <= c.a:
                return c
        else:
            uu, vv = 2 * c.a, 2 * c.b
            if uu > 0 and 0 <= vv < uu:
                return c
    raise AssertionError(f"no canonical associate found for {pi!r}")


def _primes_above(p: int, F: QuadField) -> list[QuadElem]:
    """Canonical generators of the prime ideals of O_K above p (D = -1, -3)."""
    if F.D == -1:
        if p == 2:
            return [_canonical_associate(F.elem(1, 1))]
        if p % 4 == 3:
            return [F.elem(p)]
        a, b = _cornacchia(1, p)
        pi = _canonical_associate(F.elem(a, b))
        return sorted({pi, _canonical_associate(pi.conj())},
                      key=lambda e: (e.a, e.b))
    if F.D == -3:
        if p == 3:
            return [_canonical_associate(F.elem(0, 1))]
        if p % 3 == 2 or p == 2:
            return [F.elem(p)]
        a, b = _cornacchia(3, p)
        pi = _canonical_associate(F.elem(a, b))
        return sorted({pi, _canonical_associate(pi.conj())},
                      key=lambda e: (e.a, e.b))
    raise NotImplementedError("prime splitting only for D = -1, -3")


def _extract_exponent(x: QuadElem, pi: QuadElem) -> tuple[int, QuadElem]:
    e = 0
    while True:
        q = x / pi
        if not _is_integral(q):
            return e, x
        x = q
        e += 1


def square_class_rep(d: QuadElem, budget: int = 4_000_000) -> QuadElem:
    """Canonical representative of d modulo squares in K* (D = -1 or -3).

    Denominators are cleared by a square, the norm is factored, prime
    generators of odd exponent are kept (canonical associates, sorted by
    rational prime), and the unit part is normalized to {1, i} for Q(i) and
    {1, -1} for Q(sqrt(-3)).  Large square cofactors of the norm never need
    to be factored: the candidate representative is verified with an exact
    square test against d, and full factoring is escalated only when that
    verification fails.
    """
    F = d.field
    if d.is_zero():
        raise ValueError("square class of zero is undefined")
    if F.D not in (-1, -3):
        raise NotImplementedError("canonical square classes only for D = -1, -3")

    den = gmpy2.lcm(d.a.denominator, d.b.denominator)
    work = d * (den * den)
    if F.D % 4 == 1:
        work = work * 4  # force integer coordinates, 4 is a square
    norm = abs(mpz((work.norm())))

    found: dict[int, int] = {}
    for p in _small_primes():
        if p * p > norm:
            break
        while norm % p == 0:
            found[p] = found.get(p, 0) + 1
            norm //= p
    if norm > 1 and gmpy2.is_prime(norm):
        found[int(norm)] = found.get(int(norm), 0) + 1
        norm = mpz(1)

    def build_rep(prime_dict) -> Optional[QuadElem]:
        rep0 = F.one()
        for p in sorted(prime_dict):
            odd_here = []
            for pi in _primes_above(p, F):
                e, _ = _extract_exponent(work, pi)
                if e % 2 == 1:
                    odd_here.append(pi)
            if len(odd_here) == 2:
                # both primes above a split p: fold pi * conj(pi) into p
                rep0 = rep0 * p
            else:
                for pi in odd_here:
                    rep0 = rep0 * pi
        for cand in (rep0, rep0 * _nontrivial_unit_class(F)):
            if same_square_class(d, cand):
                return cand
        return None

    rep = build_rep(found)
    if rep is not None:
        return rep
    # the unfactored cofactor carries a nontrivial class: factor it fully
    extra = factor_int(norm, budget=budget)
    for p, e in extra.items():
        found[p] = found.get(p, 0) + e
    rep = build_rep(found)
    if rep is None:
        raise AssertionError("square-class canonicalization failed to verify")
    return rep


def factor_budget_from_env(default: int = 4_000_000) -> int:
    raw = os.environ.get("TORSION_FACTOR_BUDGET")
    if not raw:
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default
