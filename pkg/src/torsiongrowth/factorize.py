"""Irreducible factorization over Q and over quadratic fields, plus root
finding in Q, K = Q(sqrt(D)) and L = K(sqrt(d)).

The rational backend is the classic Zassenhaus scheme: factor mod a good
small prime (Cantor-Zassenhaus), Hensel-lift, then recombine modular factors
by subset search of increasing cardinality.  Factorization over K goes
through Trager's norm method: factor N(x) = f(x - s*alpha) * conj over Q and
map the rational factors back with gcds.

low_degree_factors implements the capped variant used by the growth
algorithm: only subsets whose degree sum stays below the cap are enumerated,
the Hensel precision is driven by a Fujiwara root bound instead of the full
Mignotte bound, and the exhausted subset search certifies that the cofactor
has no further factor below the cap.  This is what makes degree-126 division
polynomials tractable.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .fields import (
    FactorBudgetError,
    QQ,
    QuadField,
    RationalField,
    RelQuadField,
    factor_budget_from_env,
    sqrt_in_quad,
)
from .polys import (
    Poly,
    ZpModCtx,
    poly_gcd,
    quadratic_discriminant,
    squarefree_part,
    zp_deg,
    zp_from_list,
    zp_gcd,
    zp_gcdext,
    zp_monic,
    zp_mul,
    zp_sub,
    zp_trim,
)


@dataclass
class Factorization:
    """unit * prod(factor^mult) = input; factors monic irreducible."""

    unit: object
    factors: list  # list of (Poly, int)

    def expand(self, field) -> Poly:
        out = Poly.constant(field, self.unit)
        for g, m in self.factors:
            out = out * g**m
        return out

    def degrees(self) -> list[int]:
        out = []
        for g, m in self.factors:
            out.extend([g.degree] * m)
        return sorted(out)


# ---------------------------------------------------------------------------
# Integer polynomial helpers (lists of int, lowest degree first).
# ---------------------------------------------------------------------------


def _ip_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _ip_content(a: list):
    g = mpz(0)
    for c in a:
        g = gmpy2.gcd(g, c)
    return g if g else mpz(1)


def _ip_primitive(a: list) -> list:
    g = _ip_content(a)
    if a and a[-1] < 0:
        g = -g
    return [int(c // g) for c in a]


def _ip_trial_div(f: list, g: list) -> Optional[list]:
    """Exact division of integer polynomials, or None."""
    if not g:
        raise ZeroDivisionError
    if len(f) < len(g):
        return None
    rem = list(f)
    glc = g[-1]
    dq = len(f) - len(g)
    q = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        top = rem[len(g) - 1 + k]
        if top % glc != 0:
            return None
        c = top // glc
        q[k] = c
        if c:
            for j in range(len(g)):
                rem[k + j] -= c * g[j]
    if any(rem):
        return None
    return _ip_trim(q)


def _trunc_sym(a: list, m) -> list:
    half = m >> 1
    out = [int(((c % m) + m) % m) for c in a]
    return _ip_trim([c - m if c > half else c for c in out])


def _bits(n: int) -> int:
    return int(abs(mpz(n)).bit_length())


# ---------------------------------------------------------------------------
# Cantor-Zassenhaus over F_p.
# ---------------------------------------------------------------------------


def _zp_ddf(f: np.ndarray, p: int) -> list[tuple[np.ndarray, int]]:
    """Distinct-degree split of a monic squarefree f: list of (product, d)."""
    res = []
    ctx = ZpModCtx(f, p)
    x = np.array([0, 1], dtype=np.int64)
    w = ctx.pow_x(p)
    v = f
    i = 1
    while zp_deg(v) >= 2 * i:
        g = zp_gcd(v, zp_sub(w, x, p), p)
        if zp_deg(g) > 0:
            res.append((g, i))
            v = zp_monic(np.array(_np_divq(v, g, p), dtype=np.int64), p)
        i += 1
        w = ctx.pow_poly(w, p)
    if zp_deg(v) > 0:
        res.append((v, zp_deg(v)))
    return res


def _np_divq(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    from .polys import zp_divmod

    q, r = zp_divmod(a, b, p)
    assert len(r) == 0
    return q


def _zp_edf(h: np.ndarray, d: int, p: int, rng: random.Random) -> list[np.ndarray]:
    """Equal-degree splitting of a product of degree-d irreducibles."""
    n = zp_deg(h)
    if n == d:
        return [zp_monic(h, p)]
    e = (pow(p, d) - 1) // 2
    ctx = ZpModCtx(h, p)
    one = np.array([1], dtype=np.int64)
    while True:
        r = np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)
        r = zp_trim(r)
        if zp_deg(r) < 1:
            continue
        g = zp_gcd(h, r, p)
        if 0 < zp_deg(g) < n:
            pass
        else:
            s = zp_sub(ctx.pow_poly(r, e), one, p)
            g = zp_gcd(h, s, p)
            if not (0 < zp_deg(g) < n):
                continue
        other = zp_monic(np.array(_np_divq(h, g, p), dtype=np.int64), p)
        return _zp_edf(g, d, p, rng) + _zp_edf(other, d, p, rng)


def zp_factor_squarefree(f: np.ndarray, p: int, seed: int = 0) -> list[np.ndarray]:
    """Monic irreducible factors of a squarefree f over F_p."""
    rng = random.Random((seed * 0x9E3779B1) ^ p)
    out = []
    for prod, d in _zp_ddf(zp_monic(f, p), p):
        out.extend(_zp_edf(prod, d, p, rng))
    out.sort(key=lambda a: (len(a), tuple(int(c) for c in a)))
    return out


# ---------------------------------------------------------------------------
# Hensel lifting (integer polynomials, lowest degree first).
# ---------------------------------------------------------------------------


def _hensel_step(m, f, g, h, s, t):
    """One quadratic Hensel step: from f = g*h, s*g + t*h = 1 (mod m) with h
    monic to the same data mod m^2."""
    M = m * m

    def mul(a, b):
        return _trunc_sym(_ip_mul(a, b), M)

    def sub(a, b):
        n = max(len(a), len(b))
        return _ip_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])

    def add(a, b):
        n = max(len(a), len(b))
        return _ip_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def divmod_monic(a, bm):
        # bm monic; arithmetic mod M
        rem = list(a)
        if len(rem) < len(bm):
            return [], _trunc_sym(rem, M)
        dq = len(rem) - len(bm)
        q = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[len(bm) - 1 + k] % M
            q[k] = c
            if c:
                for j in range(len(bm)):
                    rem[k + j] -= c * bm[j]
        return _trunc_sym(q, M), _trunc_sym(rem[: len(bm) - 1], M)

    e = _trunc_sym(sub(f, _ip_mul(g, h)), M)
    q, r = divmod_monic(_ip_mul(s, e), h)
    u = add(_ip_mul(t, e), _ip_mul(q, g))
    G = _trunc_sym(add(g, u), M)
    H = _trunc_sym(add(h, r), M)
    b = _trunc_sym(sub(add(_ip_mul(s, G), _ip_mul(t, H)), [1]), M)
    c, d = divmod_monic(_ip_mul(s, b), H)
    S = _trunc_sym(sub(s, d), M)
    T = _trunc_sym(sub(t, add(_ip_mul(t, b), _ip_mul(c, G))), M)
    return G, H, S, T


def _hensel_lift(p: int, f: list, f_list: list[list], l: int) -> list[list]:
    """Lift monic pairwise-coprime factors of f (mod p) to factors mod p^l;
    recursive two-way split as in the standard multifactor scheme."""
    r = len(f_list)
    lc = f[-1]
    pl = pow(p, l)
    if r == 1:
        inv = pow(int(lc) % pl, -1, pl)
        return [_trunc_sym([c * inv for c in f], pl)]
    k = r // 2

    ga = zp_from_list([lc], p)
    for fi in f_list[:k]:
        ga = zp_mul(ga, zp_from_list(fi, p), p)
    ha = zp_from_list([1], p)
    for fi in f_list[k:]:
        ha = zp_mul(ha, zp_from_list(fi, p), p)
    sa, ta, gg = zp_gcdext(ga, ha, p)
    assert zp_deg(gg) == 0

    g = _trunc_sym([int(c) for c in ga], p)
    h = _trunc_sym([int(c) for c in ha], p)
    s = _trunc_sym([int(c) for c in sa], p)
    t = _trunc_sym([int(c) for c in ta], p)

    m = p
    while m < pl:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    return _hensel_lift(p, g, f_list[:k], l) + _hensel_lift(p, h, f_list[k:], l)


# ---------------------------------------------------------------------------
# Zassenhaus over Z with optional degree cap.
# ---------------------------------------------------------------------------


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise FactorBudgetError(
                f"factorization recombination budget exceeded ({self.limit})"
            )


def _fujiwara_root_bits(f: list) -> int:
    n = len(f) - 1
    lb = _bits(f[-1])
    best = 1
    for i in range(1, n + 1):
        c = f[n - i]
        if c:
            est = (_bits(c) - lb + 1 + i - 1) // i
            best = max(best, est)
    return best + 2


def _pick_modular_factorization(f: list, tries: int = 4):
    """Choose a good prime: f squarefree mod p, fewest modular factors."""
    n = len(f) - 1
    lc = f[-1]
    cands = []
    p = 3
    scanned = 0
    while len(cands) < tries and scanned < 120:
        p = int(gmpy2.next_prime(p))
        scanned += 1
        if lc % p == 0:
            continue
        fp = zp_from_list(f, p)
        if zp_deg(fp) != n:
            continue
        dfp = zp_trim(np.array([int(f[i]) % p * i % p for i in range(1, len(f))],
                               dtype=np.int64))
        if len(dfp) == 0 or zp_deg(zp_gcd(fp, dfp, p)) != 0:
            continue
        ddf = _zp_ddf(zp_monic(fp, p), p)
        count = sum(zp_deg(prod) // d for prod, d in ddf)
        cands.append((count, p, fp))
        if count <= 4:
            break
    if not cands:
        raise ArithmeticError("no good prime found for modular factorization")
    cands.sort(key=lambda t: (t[0], t[1]))
    return cands[0][1], cands[0][2]


def _zassenhaus(f: list, cap: Optional[int], budget: _Budget) -> tuple[list[list], list]:
    """Factor a primitive squarefree integer polynomial with nonzero constant
    term.  With cap=None returns (all irreducible factors, [1]);  with a cap
    returns (all irreducible factors of degree <= cap, cofactor).  The subset
    enumeration is exhaustive below the cap, which certifies the cofactor has
    no factor of degree <= cap."""
    n = len(f) - 1
    if n <= 0:
        return [], list(f)
    full = cap is None
    if n == 1:
        return [list(f)], [1]

    p, fp = _pick_modular_factorization(f)
    modular = zp_factor_squarefree(fp, p, seed=_ip_seed(f))
    if len(modular) == 1:
        if full or n <= cap:
            return [list(f)], [1]
        return [], list(f)

    lc = f[-1]
    if full:
        # Knuth-Cohen style Mignotte bound
        norm = gmpy2.isqrt(sum(mpz(c) * c for c in f)) + 1
        bound_bits = n + _bits(norm) + _bits(lc) + 2
    else:
        rb = _fujiwara_root_bits(f)
        bound_bits = cap * rb + cap + _bits(lc) + 4
    l = max(1, -(-(bound_bits + 1) // p.bit_length()))
    while pow(p, l).bit_length() <= bound_bits + 1:
        l += 1
    pl = pow(p, l)

    lifted = _hensel_lift(p, list(f), [[int(c) for c in m] for m in modular], l)
    degs = [len(g) - 1 for g in lifted]

    factors: list[list] = []
    active = list(range(len(lifted)))
    f_cur = list(f)
    lc_cur = f_cur[-1]

    def product_mod(idxs):
        out = [int(lc_cur) % pl]
        for i in idxs:
            out = [c % pl for c in _ip_mul(out, lifted[i])]
        return _trunc_sym(out, pl)

    s = 1
    while active and len(f_cur) - 1 > 0:
        deg_left = len(f_cur) - 1
        limit = deg_left if full else min(cap, deg_left)
        if full and 2 * s > len(active):
            break
        if s > min(len(active), limit):
            break
        found = None
        for combo in combinations(active, s):
            dsum = sum(degs[i] for i in combo)
            if dsum > limit:
                continue
            budget.spend()
            # quick necessary condition on the constant coefficient
            q = lc_cur
            for i in combo:
                q = q * lifted[i][0] % pl
            q = q - pl if q > pl // 2 else q
            if q != 0 and (lc_cur * f_cur[0]) % q != 0:
                continue
            cand = _ip_primitive(product_mod(combo))
            quot = _ip_trial_div(f_cur, cand)
            if quot is not None:
                found = (combo, cand, quot)
                break
        if found is None:
            s += 1
            continue
        combo, cand, quot = found
        factors.append(cand)
        for i in combo:
            active.remove(i)
        f_cur = _ip_primitive(quot)
        lc_cur = f_cur[-1]
        s = 1

    if full and len(f_cur) - 1 > 0:
        factors.append(f_cur)
        f_cur = [1]
    return factors, f_cur


def _ip_seed(f: list) -> int:
    h = 0
    for c in f:
        h = (h * 1000003 + int(c % (1 << 30))) & 0x7FFFFFFF
    return h


# ---------------------------------------------------------------------------
# Factorization over Q.
# ---------------------------------------------------------------------------


def _q_poly_to_int(f: Poly) -> tuple[list, mpq]:
    """f = scale * F with F a primitive integer polynomial; returns (F, scale)."""
    den = mpz(1)
    for c in f.coeffs:
        den = gmpy2.lcm(den, c.denominator)
    ints = [mpz(c * den) for c in f.coeffs]
    g = _ip_content(ints)
    if ints[-1] < 0:
        g = -g
    F = [int(c // g) for c in ints]
    return F, mpq(g, den)


def _yun_squarefree(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's squarefree decomposition (char 0): [(monic part, multiplicity)]."""
    parts = []
    g = poly_gcd(f, f.derivative())
    if g.degree == 0:
        return [(f.monic(), 1)]
    fm = f.monic()
    w = fm.exact_div(g)
    y = fm.derivative().exact_div(g)
    z = y - w.derivative()
    i = 1
    while w.degree > 0:
        a = poly_gcd(w, z)
        if a.degree > 0:
            parts.append((a.monic(), i))
        w = w.exact_div(a)
        z = z.exact_div(a) - w.derivative()
        i += 1
    return parts


def factor_over_rationals(f: Poly, budget: Optional[int] = None) -> Factorization:
    """Complete irreducible factorization over Q (squarefree split, modular
    factorization, Hensel lifting, Zassenhaus recombination)."""
    if not isinstance(f.field, RationalField):
        raise TypeError("factor_over_rationals expects a polynomial over Q")
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if f.degree == 0:
        return Factorization(f.lc(), [])
    bud = _Budget(budget if budget is not None else factor_budget_from_env())
    out = []
    for part, mult in _yun_squarefree(f):
        F, _ = _q_poly_to_int(part)
        v = 0
        while F and F[0] == 0:
            F.pop(0)
            v += 1
        if v:
            out.append((Poly.x(QQ), mult))
        if len(F) - 1 >= 1:
            facs, _ = _zassenhaus(F, None, bud)
            for g in facs:
                out.append((Poly(QQ, [mpq(c) for c in g]).monic(), mult))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return Factorization(f.lc(), out)


# ---------------------------------------------------------------------------
# Trager's method over K = Q(sqrt(D)).
# ---------------------------------------------------------------------------


def _quad_poly_parts(f: Poly) -> tuple[list, list]:
    """Integer coefficient lists (g0, g1) with f = g0 + g1*sqrt(D); the
    caller must pass a cleared-denominator polynomial."""
    g0, g1 = [], []
    for c in f.coeffs:
        assert c.a.denominator == 1 and c.b.denominator == 1
        g0.append(int(c.a))
        g1.append(int(c.b))
    return g0, g1


def _clear_quad_denoms(f: Poly) -> Poly:
    den = mpz(1)
    for c in f.coeffs:
        den = gmpy2.lcm(den, c.a.denominator)
        den = gmpy2.lcm(den, c.b.denominator)
    return f * f.field.coerce(mpq(den)) if den != 1 else f


def _trager_norm(f: Poly, s: int) -> tuple[Poly, list]:
    """(f_s, N) with f_s(x) = f(x - s*alpha) over K and N = Norm(f_s) as a
    primitive integer polynomial over Q."""
    K: QuadField = f.field
    alpha = K.gen()
    fi = _clear_quad_denoms(f)
    f_s = fi.shift(-s * alpha) if s else fi
    g0, g1 = _quad_poly_parts(f_s)
    n0 = _ip_mul(g0, g0)
    n1 = _ip_mul(g1, g1)
    size = max(len(n0), len(n1))
    N = [
        (n0[i] if i < len(n0) else 0) - K.D * (n1[i] if i < len(n1) else 0)
        for i in range(size)
    ]
    return f_s, _ip_primitive(_ip_trim(N))


def _int_poly_squarefree_probe(N: list, tries: int = 25) -> bool:
    p = 1009
    for _ in range(tries):
        p = int(gmpy2.next_prime(p))
        if N[-1] % p == 0:
            continue
        fp = zp_from_list(N, p)
        dfp = zp_trim(np.array([int(N[i]) % p * i % p for i in range(1, len(N))],
                               dtype=np.int64))
        if len(dfp) == 0:
            continue
        if zp_deg(zp_gcd(fp, dfp, p)) == 0:
            return True
    return False


def _choose_trager_shift(f: Poly) -> tuple[int, Poly, list]:
    for s in range(0, 40):
        f_s, N = _trager_norm(f, s)
        if _int_poly_squarefree_probe(N):
            return s, f_s, N
    raise ArithmeticError("no squarefree Trager shift found")


def _map_back(f_s: Poly, N_i: Poly) -> Poly:
    """gcd(f_s, N_i) over K for a monic rational factor N_i of the norm."""
    K = f_s.field
    NiK = N_i.map_field(K, K.coerce)
    r = f_s % NiK
    return poly_gcd(NiK, r)


def factor_over_quad(f: Poly, budget: Optional[int] = None) -> Factorization:
    """Complete irreducible factorization over K = Q(sqrt(D)) by Trager's
    norm method."""
    if not isinstance(f.field, QuadField):
        raise TypeError("factor_over_quad expects a polynomial over Q(sqrt(D))")
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    K = f.field
    if f.degree == 0:
        return Factorization(f.lc(), [])
    bud = _Budget(budget if budget is not None else factor_budget_from_env())
    out = []
    alpha = K.gen()
    for part, mult in _yun_squarefree(f):
        if part.degree == 0:
            continue
        s, f_s, N = _choose_trager_shift(part)
        v = 0
        while N and N[0] == 0:
            N.pop(0)
            v += 1
        pieces: list[list] = [[0, 1]] * v
        if len(N) - 1 >= 1:
            facs, _ = _zassenhaus(N, None, bud)
            pieces.extend(facs)
        for Ni in pieces:
            NiQ = Poly(QQ, [mpq(c) for c in Ni]).monic()
            g = _map_back(f_s, NiQ)
            if g.degree >= 1:
                out.append((g.shift(s * alpha).monic(), mult))
    out.sort(key=lambda t: (t[0].degree, _poly_sort_key(t[0])))
    return Factorization(f.lc(), out)


def _poly_sort_key(g: Poly):
    key = []
    for c in g.coeffs:
        if isinstance(c, mpq):
            key.append((c, mpq(0)))
        else:
            key.append((c.a, c.b))
    return tuple(key)


# ---------------------------------------------------------------------------
# Low-degree factors and root finding.
# ---------------------------------------------------------------------------

_lowdeg_cache: dict = {}


def low_degree_factors(f: Poly, maxdeg: int, budget: Optional[int] = None) -> list[Poly]:
    """All monic irreducible factors of degree <= maxdeg of f over Q or K.

    Complete by construction: every low-degree factor of f corresponds to a
    factor of the Trager norm of degree <= 2*maxdeg, and the capped subset
    search enumerates every candidate below the cap before giving up.
    """
    if maxdeg not in (1, 2):
        raise ValueError("maxdeg must be 1 or 2")
    if f.is_zero():
        raise ValueError("zero polynomial")
    key = (f.field, f.coeffs, maxdeg)
    hit = _lowdeg_cache.get(key)
    if hit is not None:
        return list(hit)
    bud = _Budget(budget if budget is not None else factor_budget_from_env())
    fs = squarefree_part(f)
    if isinstance(f.field, RationalField):
        out = _lowdeg_over_q(fs, maxdeg, bud)
    elif isinstance(f.field, QuadField):
        out = _lowdeg_over_k(fs, maxdeg, bud)
    else:
        raise TypeError("low_degree_factors expects Q or Q(sqrt(D)) coefficients")
    out.sort(key=lambda g: (g.degree, _poly_sort_key(g)))
    _lowdeg_cache[key] = tuple(out)
    return out


def _lowdeg_over_q(fs: Poly, maxdeg: int, bud: _Budget) -> list[Poly]:
    F, _ = _q_poly_to_int(fs)
    out = []
    if F and F[0] == 0:
        out.append(Poly.x(QQ))
        while F[0] == 0:
            F.pop(0)
    if len(F) - 1 >= 1:
        if len(F) - 1 <= maxdeg:
            facs, _ = _zassenhaus(F, None, bud)
        else:
            facs, _ = _zassenhaus(F, maxdeg, bud)
        for g in facs:
            if len(g) - 1 <= maxdeg:
                out.append(Poly(QQ, [mpq(c) for c in g]).monic())
    return out


def _lowdeg_over_k(fs: Poly, maxdeg: int, bud: _Budget) -> list[Poly]:
    K = fs.field
    alpha = K.gen()
    s, f_s, N = _choose_trager_shift(fs)
    out = []
    pieces: list[list] = []
    if N and N[0] == 0:
        pieces.append([0, 1])
        while N[0] == 0:
            N.pop(0)
    cap = 2 * maxdeg
    if len(N) - 1 >= 1:
        if len(N) - 1 <= cap:
            facs, _ = _zassenhaus(N, None, bud)
        else:
            facs, _ = _zassenhaus(N, cap, bud)
        pieces.extend(facs)
    for Ni in pieces:
        if len(Ni) - 1 > cap:
            continue
        NiQ = Poly(QQ, [mpq(c) for c in Ni]).monic()
        g = _map_back(f_s, NiQ)
        if 1 <= g.degree <= maxdeg:
            out.append(g.shift(s * alpha).monic())
    return out


def roots_in_field(f: Poly, field) -> list:
    """All roots of f lying in the given field (multiplicity stripped).

    Q and Q(sqrt(D)) go through low_degree_factors; for L = K(sqrt(d)) the
    norm-form product f * conj(f) over K is searched for K-roots and
    K-quadratic factors, and every candidate is tested in L directly.
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    if isinstance(field, RationalField):
        fq = f if isinstance(f.field, RationalField) else f.map_field(QQ, field.coerce)
        return sorted(
            (-g.coeffs[0] for g in low_degree_factors(fq, 1) if g.degree == 1),
            key=mpq,
        )
    if isinstance(field, QuadField):
        fk = f if f.field == field else f.map_field(field, field.coerce)
        roots = [-g.coeffs[0] for g in low_degree_factors(fk, 1) if g.degree == 1]
        roots.sort(key=lambda e: (e.a, e.b))
        return roots
    if isinstance(field, RelQuadField):
        return _roots_in_relquad(f, field)
    raise TypeError(f"unsupported field {field!r}")


def _roots_in_relquad(f: Poly, L: RelQuadField) -> list:
    K = L.base
    fL = f if f.field == L else f.map_field(L, L.coerce)
    fconj = Poly(L, [c.conj() for c in fL.coeffs])
    norm = fL * fconj
    assert all(c.beta.is_zero() for c in norm.coeffs)
    normK = Poly(K, [c.alpha for c in norm.coeffs])
    roots = []
    seen = set()

    def try_root(x):
        if x in seen:
            return
        if _is_zero_at(fL, x):
            seen.add(x)
            roots.append(x)

    for g in low_degree_factors(normK, 2):
        if g.degree == 1:
            try_root(L.coerce(-g.coeffs[0]))
        else:
            disc = quadratic_discriminant(g)
            if disc.is_zero():
                try_root(L.coerce(-g.coeffs[1] / 2))
                continue
            t = sqrt_in_quad(disc / L.d)
            if t is None:
                # the roots of g live in a different quadratic extension
                continue
            sqrt_disc = L.elem(K.zero(), t)
            b = L.coerce(g.coeffs[1])
            for sgn in (sqrt_disc, -sqrt_disc):
                try_root((-b + sgn) / 2)
    roots.sort(key=lambda e: (e.alpha.a, e.alpha.b, e.beta.a, e.beta.b))
    return roots


def _is_zero_at(f: Poly, x) -> bool:
    v = f.eval(x)
    if isinstance(v, (mpq, mpz, int)):
        return v == 0
    return v.is_zero()
