"""Exhaustive point census over a finite field, with the H_0-orbit structure.

Points are enumerated fiber by fiber over [x_1 : x_2]: once those two
coordinates are fixed, every other coordinate is a k-th root of a known value,
so each fiber is a product of root sets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .aut import MonomialAut, h0_elements, h0_generators
from .curve import INF, CurveSpec, ProjectivePoint, _root_product, base_map, contains
from .errors import BudgetExceeded, UnsupportedFieldError, ValidationError
from .fields import FieldHandle, finite_field, prime_factors

DEFAULT_BUDGET = 10**8


def census_work(c: CurveSpec) -> int:
    return c.field.order**2 * c.k**c.n


def field_of_order(c: CurveSpec, q: int) -> FieldHandle:
    """The field GF(q) containing the curve's field."""
    p = c.field.p
    if not p:
        raise UnsupportedFieldError("point counts need a finite field")
    if prime_factors(q) != [p]:
        raise ValidationError(f"q = {q} is not a power of p = {p}", q=q, p=p)
    m = 0
    while p**m < q:
        m += 1
    if m % c.field.degree:
        raise ValidationError(
            f"GF({q}) does not contain {c.field!r}", q=q, field=c.field.to_json()
        )
    return c.field if m == c.field.degree else finite_field(p, m)


def base_points(F: FieldHandle):
    """P^1(F) as (anchor, parameter, value): [1 : t] for every t, then [0 : 1]."""
    for t in F.elements():
        yield 1, 2, t
    yield 2, 1, F.zero


def enumerate_points(c: CurveSpec, budget: int = DEFAULT_BUDGET) -> list[ProjectivePoint]:
    """All F-rational points, sorted lexicographically."""
    if not c.field.is_finite:
        raise UnsupportedFieldError("point enumeration needs a finite field")
    work = census_work(c)
    if work > budget:
        raise BudgetExceeded(f"census needs ~{work} operations > budget {budget}", work=work)
    pts = []
    for a, b, value in base_points(c.field):
        found, _ = _root_product(c, a, b, value)
        pts.extend(found)
    return sorted(set(pts), key=ProjectivePoint.key)


def weil_holds(N: int, q: int, g: int) -> bool:
    """|N - (q+1)| <= 2 g sqrt(q), checked in integers."""
    return (N - q - 1) ** 2 <= 4 * g * g * q


@dataclass
class PointCensus:
    curve_hash: str
    curve: CurveSpec
    points: list
    orbits: list  # lists of points
    fibers: dict  # base value key -> points
    fiber_histogram: dict
    fibers_are_orbits: bool
    stabilizers_cyclic: bool

    @property
    def q(self) -> int:
        return self.curve.field.order

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def orbit_sizes(self) -> dict:
        return dict(sorted(Counter(len(o) for o in self.orbits).items()))

    @property
    def orbit_sizes_ok(self) -> bool:
        c = self.curve
        return set(self.orbit_sizes) <= {c.k ** (c.n - 1), c.k**c.n}

    @property
    def weil(self) -> bool:
        return weil_holds(self.count, self.q, self.curve.genus)

    @property
    def passed(self) -> bool:
        return self.fibers_are_orbits and self.stabilizers_cyclic and self.orbit_sizes_ok and self.weil

    def to_json(self) -> dict:
        return {
            "schema": "gfermat/1",
            "curve": self.curve_hash,
            "q": self.q,
            "count": self.count,
            "orbit_sizes": {str(s): m for s, m in self.orbit_sizes.items()},
            "fiber_histogram": {str(s): m for s, m in sorted(self.fiber_histogram.items())},
            "fibers_are_orbits": self.fibers_are_orbits,
            "stabilizers_cyclic": self.stabilizers_cyclic,
            "orbit_sizes_ok": self.orbit_sizes_ok,
            "weil": self.weil,
            "passed": self.passed,
        }


def _orbit(P: ProjectivePoint, group) -> frozenset:
    return frozenset(h(P) for h in group)


def _cyclic_powers(c: CurveSpec) -> list[set]:
    out = []
    for phi in h0_generators(c):
        powers = set()
        x = phi
        for _ in range(c.k):
            powers.add(x)
            x = x.compose(phi)
        out.append(powers)
    return out


def orbit_decomposition(c: CurveSpec, points, curve_hash: str | None = None) -> PointCensus:
    """H_0-orbits, pi_0-fibers and point stabilizers of a point set."""
    if any(not contains(c, P) for P in points):
        raise ValidationError("orbit decomposition received a point off the curve")
    group = h0_elements(c)
    cyclic = _cyclic_powers(c)
    remaining = set(points)
    orbits = []
    for P in points:
        if P not in remaining:
            continue
        orb = _orbit(P, group)
        remaining -= orb
        orbits.append(sorted(orb, key=ProjectivePoint.key))
    fibers = {}
    for P in points:
        X = base_map(c, P)
        fibers.setdefault("inf" if X is INF else X.key(), []).append(P)
    orbit_sets = {frozenset(o) for o in orbits}
    fibers_are_orbits = all(frozenset(f) in orbit_sets for f in fibers.values())
    stab_ok = True
    for orb in orbits:
        P = orb[0]
        stab = {h for h in group if h(P) == P}
        if not any(stab <= pw for pw in cyclic):
            stab_ok = False
            break
    hist = Counter(len(f) for f in fibers.values())
    empty = c.field.order + 1 - len(fibers)
    if empty:
        hist[0] += empty
    return PointCensus(
        curve_hash or c.hash,
        c,
        list(points),
        orbits,
        fibers,
        dict(hist),
        fibers_are_orbits,
        stab_ok,
    )


def census(c: CurveSpec, q: int | None = None, budget: int = DEFAULT_BUDGET) -> PointCensus:
    """Count and decompose the GF(q)-rational points (q defaults to |F|)."""
    input_hash = c.hash
    if q is not None:
        c = c.over(field_of_order(c, q))
    pts = enumerate_points(c, budget)
    return orbit_decomposition(c, pts, input_hash)


def stabilizer(c: CurveSpec, P: ProjectivePoint) -> list[MonomialAut]:
    return [h for h in h0_elements(c) if h(P) == P]
