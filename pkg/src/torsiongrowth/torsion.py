"""Certified torsion subgroup computation.

E(K)_tor over K = Q(i) or Q(sqrt(-3)) is found constructively: reduction
modulo a dozen good primes bounds the order, division-polynomial root
searches locate every torsion point, and the group structure is certified by
enumerating the subgroup the found points generate.  E(L)_tor over a
quadratic extension L = K(sqrt(d)) is assembled from E(K)_tor and the twist
torsion through the Galois-trace decomposition (the quotient by the combined
group has exponent 2), then completed by solving halving quartics over L.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpz

from .curves import (
    INFINITY,
    BadReductionError,
    Point,
    ShortCurve,
    ShortMap,
    WeierstrassCurve,
    count_points_fq,
    integral_short_model,
    quadratic_twist,
    reduce_at_prime,
    twist_transfer,
)
from .factorize import low_degree_factors, roots_in_field
from .fields import (
    FactorBudgetError,
    QuadElem,
    QuadField,
    RelQuadElem,
    RelQuadField,
    sqrt_in_quad,
    sqrt_in_relquad,
    square_class_rep,
)
from .polys import Poly

# largest order of a p-power point over a quadratic cyclotomic field
# (no C_16, C_27, C_25, C_49 in the classification of torsion over K)
_MAX_PRIME_POWER_ORDER = {2: 3, 3: 2, 5: 1, 7: 1}


class InsufficientPrimesError(RuntimeError):
    """Not enough usable reduction primes below the enumeration budget."""


class TorsionInternalError(RuntimeError):
    """An internal certification step failed; indicates an arithmetic bug."""


@dataclass(frozen=True)
class TorsionGroup:
    """Invariant factors (m, n), m | n, with certified generator points."""

    invariants: tuple[int, int]
    generators: tuple[Point, ...] = ()

    @property
    def order(self) -> int:
        return self.invariants[0] * self.invariants[1]

    def is_trivial(self) -> bool:
        return self.order == 1

    def n_torsion_order(self, k: int) -> int:
        """|G[k]| for the abstract group C_m + C_n."""
        m, n = self.invariants
        return gmpy2.gcd(m, k) * gmpy2.gcd(n, k)

    def contains_group(self, other: "TorsionGroup") -> bool:
        m, n = self.invariants
        om, on = other.invariants
        return m % om == 0 and n % on == 0

    def label(self) -> str:
        m, n = self.invariants
        return f"C{n}" if m == 1 else f"C{m}xC{n}"

    def __repr__(self):
        return self.label()


def group_from_pair(a: int, b: int) -> TorsionGroup:
    """Abstract C_a + C_b normalized to invariant factors (no generators)."""
    if a < 1 or b < 1:
        raise ValueError("group orders must be positive")
    m, n = int(gmpy2.gcd(a, b)), int(gmpy2.lcm(a, b))
    return TorsionGroup((m, n))


@dataclass
class GaloisSplit:
    """Image of a point of E(L) under R -> (R + sR, phi(R - sR, 1/sqrt(d)))."""

    trace_point: Point  # on E over K
    twist_point: Point  # on the normalized twist E^d over K


# ---------------------------------------------------------------------------
# Normalization of input models.
# ---------------------------------------------------------------------------


@dataclass
class _Normalized:
    curve: WeierstrassCurve  # original long model over K
    short: ShortCurve  # short model of the long curve
    short_map: ShortMap
    work: ShortCurve  # integral scaled short model
    scale: object  # t with (x, y) -> (t^2 x, t^3 y) mapping short -> work

    def work_to_curve(self, P: Point) -> Point:
        if P.inf:
            return INFINITY
        t = self.scale
        Q = Point(P.x / (t * t), P.y / (t * t * t))
        return self.short_map.backward(Q)


def normalize_curve(E: WeierstrassCurve) -> _Normalized:
    if not isinstance(E.field, QuadField):
        raise TypeError("expected a curve over a quadratic field")
    S, m = E.short_model()
    W, t = integral_short_model(S)
    return _Normalized(E, S, m, W, t)


# ---------------------------------------------------------------------------
# Torsion order bound by reduction.
# ---------------------------------------------------------------------------


def _good_reduction_counts(W: ShortCurve, want: int):
    """Yield |E(F_q)| for good odd unramified primes, split primes first."""
    K: QuadField = W.field
    D = K.D
    produced = 0
    p = 3
    while produced < want and p < 100_000:
        p = int(gmpy2.next_prime(p))
        if D % p == 0:
            continue
        if pow(D % p, (p - 1) // 2, p) != 1:
            continue
        try:
            Ered, _q = reduce_at_prime(_as_long(W), p)
        except BadReductionError:
            continue
        produced += 1
        yield count_points_fq(Ered)
    if produced < want:
        # fall back to inert primes with F_{p^2} counting
        p = 3
        while produced < want and p < 997:
            p = int(gmpy2.next_prime(p))
            if D % p == 0 or pow(D % p, (p - 1) // 2, p) == 1:
                continue
            try:
                Ered, _q = reduce_at_prime(_as_long(W), p)
            except BadReductionError:
                continue
            produced += 1
            yield count_points_fq(Ered)
    if produced < want:
        raise InsufficientPrimesError(
            "could not find enough good reduction primes"
        )


def _as_long(W: ShortCurve) -> WeierstrassCurve:
    return WeierstrassCurve(W.field, 0, 0, 0, W.A, W.B)


def torsion_order_bound(E, primes: int = 12) -> int:
    """gcd of |E(F_q)| over at least `primes` good reduction primes; the
    torsion order divides the result."""
    if isinstance(E, WeierstrassCurve):
        W = normalize_curve(E).work
    else:
        W, _ = integral_short_model(E)
    g = mpz(0)
    for c in _good_reduction_counts(W, primes):
        g = gmpy2.gcd(g, c)
    return int(g)


def _shrunk_bound(W: ShortCurve, start: int = 12, limit: int = 40) -> int:
    """Bound by gcd, adding reduction primes until no prime factor > 7
    survives (or the prime budget runs out)."""
    g = mpz(0)
    produced = 0
    gen = _good_reduction_counts(W, limit)
    for c in gen:
        g = gmpy2.gcd(g, c)
        produced += 1
        if produced >= start and not _has_large_prime(g):
            break
    return int(g)


def _has_large_prime(g) -> bool:
    g = mpz(g)
    for p in (2, 3, 5, 7):
        while g % p == 0:
            g //= p
    return g > 1


# ---------------------------------------------------------------------------
# E(K)_tor.
# ---------------------------------------------------------------------------


def _k_points_with_x(W: ShortCurve, x: QuadElem) -> list[Point]:
    r = W.rhs(x)
    y = sqrt_in_quad(r)
    if y is None:
        return []
    if y.is_zero():
        return [Point(x, y)]
    return [Point(x, y), Point(x, -y)]


def _k_roots(poly: Poly, K: QuadField) -> list[QuadElem]:
    # degree <= 2 factor search shares its cache with the growth scan
    return [-g.coeffs[0] for g in low_degree_factors(poly, 2) if g.degree == 1]


def _p_part_points(W: ShortCurve, p: int, max_order_exp: int, bound_val: int) -> set[Point]:
    """All K-rational points of p-power order on W, by ascending
    division-polynomial root searches."""
    K = W.field
    pts: set[Point] = {INFINITY}
    cap = min(max_order_exp, bound_val)
    for k in range(1, cap + 1):
        if p == 2:
            poly = W.two_division_poly() if k == 1 else W.division_poly_x(2**k)
        else:
            poly = W.division_poly_x(p**k)
        found_new = False
        for x in _k_roots(poly, K):
            for P in _k_points_with_x(W, x):
                if P not in pts:
                    pts.add(P)
                    found_new = True
        if not found_new:
            break
        if len(pts) >= p**bound_val:
            break
    return pts


def _subgroup_closure(
    W: ShortCurve,
    gens: list[Point],
    start: Optional[set[Point]] = None,
    cap: int = 4096,
) -> set[Point]:
    G: set[Point] = set(start) if start else {INFINITY}
    for g in gens:
        if not W.contains(g):
            raise TorsionInternalError(f"generator {g!r} not on curve")
        if g in G:
            continue
        order = 1
        Q = g
        while not Q.inf:
            Q = W._add_unchecked(Q, g)
            order += 1
            if order > cap:
                raise TorsionInternalError("point order exceeds torsion cap")
        newG = set()
        for a in G:
            Q = a
            for _ in range(order):
                newG.add(Q)
                Q = W._add_unchecked(Q, g)
        G = newG
        if len(G) > cap:
            raise TorsionInternalError("subgroup closure exceeded cap")
    return G


def _point_key(P: Point):
    if P.inf:
        return (0,)
    def elem_key(e):
        if isinstance(e, QuadElem):
            return (e.a, e.b)
        if isinstance(e, RelQuadElem):
            return (e.alpha.a, e.alpha.b, e.beta.a, e.beta.b)
        return (e,)
    return (1,) + elem_key(P.x) + elem_key(P.y)


def _group_structure(W: ShortCurve, G: set[Point]) -> tuple[tuple[int, int], tuple[Point, ...]]:
    size = len(G)
    if size == 1:
        return (1, 1), ()
    orders: dict[Point, int] = {}
    for P in G:
        if P.inf:
            orders[P] = 1
            continue
        n = 1
        Q = P
        while not Q.inf:
            Q = W._add_unchecked(Q, P)
            n += 1
        orders[P] = n
    n = max(orders.values())
    if size % n != 0:
        raise TorsionInternalError("group order not divisible by exponent")
    m = size // n
    Pgen = min((P for P, o in orders.items() if o == n), key=_point_key)
    if m == 1:
        return (1, n), (Pgen,)
    cyc = set()
    Q = INFINITY
    for _ in range(n):
        cyc.add(Q)
        Q = W._add_unchecked(Q, Pgen)
    for Qgen in sorted((P for P, o in orders.items() if o == m), key=_point_key):
        # complement test: <Pgen> and <Qgen> intersect trivially
        R = INFINITY
        ok = True
        for _ in range(m):
            if not R.inf and R in cyc:
                ok = False
                break
            R = W._add_unchecked(R, Qgen)
        if ok:
            span = _subgroup_closure(W, [Pgen, Qgen])
            if len(span) == size:
                if n % m != 0:
                    raise TorsionInternalError("invariant factors do not divide")
                # generator orders follow the invariant factors (m, n)
                return (m, n), (Qgen, Pgen)
    raise TorsionInternalError("no generator pair found")


_torsion_cache: dict = {}


def _torsion_short(W: ShortCurve) -> tuple[TorsionGroup, set[Point]]:
    """Torsion of a curve given by an integral short model over K."""
    key = (W.field, W.A, W.B)
    hit = _torsion_cache.get(key)
    if hit is not None:
        return hit
    result = _torsion_short_uncached(W)
    _torsion_cache[key] = result
    return result


def _torsion_short_uncached(W: ShortCurve) -> tuple[TorsionGroup, set[Point]]:
    K: QuadField = W.field
    if K.D not in (-1, -3):
        raise ValueError("torsion computation supports Q(i) and Q(sqrt(-3)) only")
    bound = _shrunk_bound(W)
    all_points: list[Point] = []
    residual = mpz(bound)
    for p in (2, 3, 5, 7):
        v = 0
        while residual % p == 0:
            residual //= p
            v += 1
        if v == 0:
            continue
        pts = _p_part_points(W, p, _MAX_PRIME_POWER_ORDER[p], v)
        all_points.extend(P for P in pts if not P.inf)
    # a bound with a surviving large prime factor is almost surely an
    # artifact of too few reduction primes; certify constructively anyway
    q = 11
    while residual > 1:
        if residual % q == 0:
            while residual % q == 0:
                residual //= q
            for x in _k_roots(W.division_poly_x(q), K):
                all_points.extend(_k_points_with_x(W, x))
        q = int(gmpy2.next_prime(q))
    G = _subgroup_closure(W, all_points)
    invariants, gens = _group_structure(W, G)
    _check_najman(K, invariants)
    return TorsionGroup(invariants, gens), G


def _check_najman(K: QuadField, invariants: tuple[int, int]):
    from .growth import najman_groups

    if invariants not in najman_groups(K):
        raise TorsionInternalError(
            f"computed torsion {invariants} violates the known classification "
            f"over {K!r}"
        )


def torsion_over_quad(E: WeierstrassCurve) -> TorsionGroup:
    """Exact E(K)_tor with certified generators mapped back to the input
    model."""
    norm = normalize_curve(E)
    group, _pts = _torsion_short(norm.work)
    gens = tuple(norm.work_to_curve(P) for P in group.generators)
    for g in gens:
        if not E.contains(g):
            raise TorsionInternalError("generator does not map back to the model")
    return TorsionGroup(group.invariants, gens)


# ---------------------------------------------------------------------------
# The Galois splitting map on E(L).
# ---------------------------------------------------------------------------


def _conj_point(P: Point) -> Point:
    if P.inf:
        return P
    return Point(P.x.conj(), P.y.conj())


def galois_split(W: ShortCurve, L: RelQuadField, R: Point) -> GaloisSplit:
    """psi(R) = (R + sigma(R), phi(R - sigma(R), 1/sqrt(d))) with both
    components rational over K."""
    K = L.base
    d = L.d
    WL = W.base_change(L)
    if not WL.contains(R if R.inf else Point(L.coerce(R.x), L.coerce(R.y))):
        raise ValueError("point not on the curve over L")
    if R.inf:
        return GaloisSplit(INFINITY, INFINITY)
    RL = Point(L.coerce(R.x), L.coerce(R.y))
    sR = _conj_point(RL)
    trace = WL._add_unchecked(RL, sR)
    diff = WL._add_unchecked(RL, WL.neg(sR))
    if trace.inf:
        trace_K = INFINITY
    else:
        assert trace.x.beta.is_zero() and trace.y.beta.is_zero()
        trace_K = Point(trace.x.alpha, trace.y.alpha)
    if diff.inf:
        twist_K = INFINITY
    else:
        assert diff.x.beta.is_zero() and diff.y.alpha.is_zero()
        # (x, beta*sqrt(d)) on E maps to (d x, d^2 beta) on [d^2 A, d^3 B]
        twist_K = Point(d * diff.x.alpha, d * d * diff.y.beta)
    return GaloisSplit(trace_K, twist_K)


# ---------------------------------------------------------------------------
# E(L)_tor.
# ---------------------------------------------------------------------------


def _canonical_d(K: QuadField, d: QuadElem) -> QuadElem:
    try:
        return square_class_rep(d)
    except FactorBudgetError:
        den = gmpy2.lcm(d.a.denominator, d.b.denominator)
        return d * (den * den)


def _two_sylow(W, G: set[Point]) -> list[Point]:
    out = []
    for P in G:
        if P.inf:
            continue
        o = 1
        Q = P
        while not Q.inf:
            Q = W._add_unchecked(Q, P)
            o += 1
        if o & (o - 1) == 0:
            out.append(P)
    return out


def twist_torsion(E: WeierstrassCurve, d) -> TorsionGroup:
    """Abstract torsion group of the quadratic twist E^d over K."""
    norm = normalize_curve(E)
    d_can = _canonical_d(E.field, E.field.coerce(d))
    group, _ = _torsion_short(quadratic_twist(norm.work, d_can))
    return TorsionGroup(group.invariants)


def torsion_over_relquad(E: WeierstrassCurve, d) -> TorsionGroup:
    """Exact E(L)_tor for L = K(sqrt(d)), certified constructively."""
    norm = normalize_curve(E)
    d = E.field.coerce(d)
    group, _ = _relquad_torsion_short(norm.work, d)
    t = norm.scale
    gens = []
    for P in group.generators:
        Q = Point(P.x / (t * t), P.y / (t * t * t))
        gens.append(norm.short_map.backward(Q))
    return TorsionGroup(group.invariants, tuple(gens))


def _relquad_torsion_short(W: ShortCurve, d: QuadElem) -> tuple[TorsionGroup, set[Point]]:
    K: QuadField = W.field
    d_can = _canonical_d(K, d)
    L = RelQuadField(K, d_can)
    WL = W.base_change(L)

    base_group, base_pts = _torsion_short(W)
    Wd = quadratic_twist(W, d_can)
    twist_group, twist_pts = _torsion_short(Wd)

    gens: list[Point] = []
    for P in base_pts:
        if not P.inf:
            gens.append(Point(L.coerce(P.x), L.coerce(P.y)))
    for P in twist_pts:
        if not P.inf:
            gens.append(twist_transfer(P, L))
    G = _subgroup_closure(WL, gens)

    # complete E(L)[2] from the 2-division cubic
    cubic = W.two_division_poly()
    new_two = [Point(x, L.zero()) for x in roots_in_field(cubic, L)]
    new_two = [P for P in new_two if P not in G]
    if new_two:
        G = _subgroup_closure(WL, new_two, start=G)

    # halving closure: E(L)_tor / G has exponent <= 2, and the odd part of G
    # is already complete, so only 2-power elements need halving
    for _round in range(8):
        new_points = []
        for r in _two_sylow(WL, G):
            quartic = WL.halving_quartic(r)
            for x0 in roots_in_field(quartic, L):
                r0 = WL.rhs(x0)
                y0 = sqrt_in_relquad(r0)
                if y0 is None:
                    continue
                for cand in (Point(x0, y0), Point(x0, -y0)):
                    if cand not in G and WL.mul(2, cand) == r:
                        new_points.append(cand)
        if not new_points:
            break
        G = _subgroup_closure(WL, new_points, start=G)
    else:
        raise TorsionInternalError("halving closure failed to stabilize")

    invariants, group_gens = _group_structure(WL, G)
    _sanity_relquad(K, base_group, twist_group, invariants)
    return TorsionGroup(invariants, group_gens), G


def _nonzero(G):
    return (P for P in G if not P.inf)


def _sanity_relquad(K, base: TorsionGroup, twist: TorsionGroup,
                    inv_L: tuple[int, int]):
    TL = TorsionGroup(inv_L)
    # odd-order parts decompose as a direct sum over L
    for n in (3, 5, 7, 9):
        if TL.n_torsion_order(n) != base.n_torsion_order(n) * twist.n_torsion_order(n):
            raise TorsionInternalError(
                f"odd {n}-torsion fails the direct-sum decomposition"
            )
    # |E(L)| / |E(K)| divides |E^d(K)|
    if (TL.order % base.order) != 0 or (twist.order % (TL.order // base.order)) != 0:
        raise TorsionInternalError("quotient injection into the twist fails")
