"""Local expansions of the embedding, Hermite invariants and Pluecker closure.

A chart at P writes every coordinate as a power series in a uniformizer z.
At a fixed point of phi_j the uniformizer is x_j itself (after scaling a
nonzero coordinate to 1) and the remaining coordinates are series in z^k with
closed-form coefficients. At any other point we use z = x_2/x_1 - P_2/P_1 and
expand k-th roots of the relations y_c = alpha y_1 + beta y_2.

Hermite invariants are the pivot columns of the coefficient matrix, i.e. the
orders of vanishing reachable by linear combinations of the coordinates.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .curve import (
    CurveSpec,
    ProjectivePoint,
    all_fixed_points,
    contains,
    random_point,
)
from .errors import (
    CharacteristicError,
    MissingRootsError,
    NotOnCurveError,
    PropertyViolation,
    ValidationError,
)
from .fields import (
    CYCLOTOMIC,
    FieldElement,
    FieldHandle,
    finite_field,
    is_prime,
    primitive_kth_root,
)
from .series import TruncatedSeries, binom_kinv, kth_root_series

DEFAULT_SAMPLES = 50


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GFERMAT_THREADS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    """Order-stable map, threaded when GFERMAT_THREADS > 1."""
    items = list(items)
    workers = _threads()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def default_truncation(c: CurveSpec) -> int:
    """deg D + 1 = k^(n-1) + 1 columns always hold every Hermite invariant."""
    return c.k ** (c.n - 1) + 1


# -- charts -----------------------------------------------------------------


@dataclass(frozen=True)
class LocalChart:
    curve: CurveSpec
    point: ProjectivePoint
    fixed_index: int | None  # j for a fixed chart of phi_j, None for generic
    anchor: int  # coordinate scaled to 1 (1-based)
    parameter: int  # coordinate whose shift is the uniformizer (1-based)
    roots: tuple  # fixed charts: the values rho of the other coordinates
    N: int
    series: tuple  # v_0 ... v_n

    @property
    def kind(self) -> str:
        return "generic" if self.fixed_index is None else f"fixed({self.fixed_index})"

    def residuals(self) -> list[TruncatedSeries]:
        out = []
        for f in self.curve.forms:
            acc = TruncatedSeries.constant(self.curve.field, 0, self.N)
            for coef, s in zip(f.coeffs, self.series):
                if coef:
                    acc = acc + (s ** self.curve.k) * coef
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "type": self.kind,
            "roots": [r.to_json() for r in self.roots],
            "N": self.N,
            "series": [s.to_json() for s in self.series],
        }


def _check_characteristic(F: FieldHandle, top: int, what: str):
    if F.p and F.p <= top:
        raise CharacteristicError(
            f"{what} needs p > {top}; got p = {F.p}", p=F.p, required_above=top
        )


def local_expansion(c: CurveSpec, P: ProjectivePoint, N: int | None = None) -> LocalChart:
    """Series expansion of the embedding at P, exact modulo z^N."""
    if N is None:
        N = default_truncation(c)
    if N < 2:
        raise ValidationError("truncation must be at least 2")
    if len(P) != c.dim or not contains(c, P):
        raise NotOnCurveError(f"{P!r} is not on the curve", point=P.to_json())
    zeros = P.zero_coordinates()
    if zeros:
        chart = _fixed_chart(c, P, zeros[0], N)
    else:
        chart = _generic_chart(c, P, N)
    bad = [i for i, r in enumerate(chart.residuals()) if not r.is_zero()]
    if bad:
        raise PropertyViolation(f"chart residual nonzero for forms {bad}", point=P.to_json())
    return chart


def _fixed_chart(c: CurveSpec, P: ProjectivePoint, j: int, N: int) -> LocalChart:
    F = c.field
    k = c.k
    _check_characteristic(F, (N - 1) // k, "the fixed-point expansion")
    a = 1 if j != 1 else 2
    coords = [x / P[a] for x in P.coords]
    top = (N - 1) // k
    binoms = [binom_kinv(F, k, i) for i in range(top + 1)]
    series = []
    roots = []
    for col in range(1, c.dim + 1):
        if col == a:
            series.append(TruncatedSeries.constant(F, 1, N))
        elif col == j:
            series.append(TruncatedSeries.variable(F, N))
        else:
            rho = coords[col - 1]
            roots.append(rho)
            _, beta = c.relation(col, a, j)
            # y_col = rho^k + beta z^k, so x_col = rho * (1 + w z^k)^(1/k)
            w = beta / rho**k
            out = [F.zero] * N
            wp = F.one
            for i in range(top + 1):
                out[i * k] = rho * wp * binoms[i]
                wp = wp * w
            series.append(TruncatedSeries(F, tuple(out), N))
    return LocalChart(
        c, ProjectivePoint.normalized(coords), j, a, j, tuple(roots), N, tuple(series)
    )


def _generic_chart(c: CurveSpec, P: ProjectivePoint, N: int) -> LocalChart:
    F = c.field
    k = c.k
    _check_characteristic(F, N - 1, "the generic expansion")
    coords = [x / P[1] for x in P.coords]
    x2 = TruncatedSeries.of(F, [coords[1], 1], N)
    y2 = x2**k
    series = [TruncatedSeries.constant(F, 1, N), x2]
    for col in range(3, c.dim + 1):
        rho = coords[col - 1]
        alpha, beta = c.relation(col, 1, 2)
        u = (y2 * beta + alpha) * (rho**k).inverse()
        series.append(kth_root_series(u, k) * rho)
    return LocalChart(c, ProjectivePoint.normalized(coords), None, 1, 2, (), N, tuple(series))


# -- Hermite invariants ------------------------------------------------------


@dataclass(frozen=True)
class HermiteData:
    point: ProjectivePoint
    h: tuple
    l_sequence: tuple | None  # fixed charts only: h_{j+2} / k
    N: int

    @property
    def b(self) -> tuple:
        return ramification_indices(self)

    @property
    def hyperosculating(self) -> bool:
        return self.h[-1] > len(self.h) - 1

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "h": list(self.h),
            "b": list(self.b),
            "l": None if self.l_sequence is None else list(self.l_sequence),
            "hyperosculating": self.hyperosculating,
        }


def pivot_orders(series, N: int) -> list[int]:
    rows = [list(s.coeffs[:N]) for s in series]
    return linalg.row_echelon(rows)[1]


def hermite_invariants(chart: LocalChart, retry: bool = True) -> HermiteData:
    c = chart.curve
    pivots = pivot_orders(chart.series, chart.N)
    if len(pivots) < c.dim:
        if retry:
            bigger = local_expansion(c, chart.point, 2 * chart.N)
            return hermite_invariants(bigger, retry=False)
        raise PropertyViolation(
            f"only {len(pivots)} pivots within {chart.N} columns", point=chart.point.to_json()
        )
    h = tuple(pivots)
    if h[0] != 0 or h[-1] > c.k ** (c.n - 1):
        raise PropertyViolation(f"Hermite invariants {h} out of range", point=chart.point.to_json())
    l_seq = None
    if chart.fixed_index is not None and all(x % c.k == 0 for x in h[2:]):
        l_seq = tuple(x // c.k for x in h[2:])
    return HermiteData(chart.point, h, l_seq, chart.N)


def ramification_indices(hd: HermiteData) -> tuple:
    """b_s(P) = h_{s+1} - h_s - 1 for s = 0 .. n-1."""
    return tuple(hd.h[s + 1] - hd.h[s] - 1 for s in range(len(hd.h) - 1))


def hermite_at(c: CurveSpec, P: ProjectivePoint, N: int | None = None) -> HermiteData:
    return hermite_invariants(local_expansion(c, P, N))


def expected_fixed_h(c: CurveSpec) -> tuple:
    """(0, 1, k, 2k, ..., (n-1)k)."""
    return (0, 1) + tuple(c.k * i for i in range(1, c.n))


def expected_fixed_b(c: CurveSpec) -> tuple:
    return (0, c.k - 2) + (c.k - 1,) * (c.n - 2)


# -- large-characteristic regime ----------------------------------------------


def _reduce_scalar(x: Fraction, Fp: FieldHandle):
    if x.denominator % Fp.p == 0:
        return None
    return Fp(x)


def _reduce_element(x: FieldElement, Fp: FieldHandle, zeta):
    acc = Fp.zero
    power = Fp.one
    for coef in x.coeffs:
        r = _reduce_scalar(Fraction(coef), Fp)
        if r is None:
            return None
        acc = acc + r * power
        if zeta is not None:
            power = power * zeta
    return acc


def reduce_to_large_characteristic(c: CurveSpec, search: int = 10_000) -> CurveSpec:
    """Same (k, n, lambda) reduced modulo the smallest admissible p > k^(n-1).

    For cyclotomic fields the prime also satisfies p = 1 mod K so that zeta_K
    maps to the canonical primitive K-th root in GF(p).
    """
    F = c.field
    if F.is_finite:
        return c
    bound = c.k ** (c.n - 1)
    K = F.k if F.kind == CYCLOTOMIC else None
    for p in range(bound + 1, bound + 1 + search):
        if not is_prime(p):
            continue
        if K is not None and (p - 1) % K != 0:
            continue
        Fp = finite_field(p)
        zeta = primitive_kth_root(Fp, K) if K is not None else None
        lams = [_reduce_element(lam, Fp, zeta) for lam in c.lambdas]
        if any(x is None for x in lams):
            continue
        try:
            return CurveSpec(c.k, c.n, Fp, tuple(lams))
        except ValidationError:
            continue
    raise CharacteristicError(f"no admissible prime above {bound} within the search window")


def _prepare(c: CurveSpec, max_degree=None) -> CurveSpec:
    c.require_hyperbolic()
    c = reduce_to_large_characteristic(c)
    bound = c.k ** (c.n - 1)
    if c.field.p <= bound:
        raise CharacteristicError(
            f"osculation needs p > k^(n-1) = {bound}; got p = {c.field.p}",
            p=c.field.p,
            required_above=bound,
        )
    return c.with_fixed_point_roots(max_degree=max_degree)


# -- survey ------------------------------------------------------------------


@dataclass
class SurveyReport:
    curve_hash: str
    curve: CurveSpec  # the curve actually used (reduced and extended)
    fixed: list  # HermiteData per point of F(H_0)
    samples: list  # HermiteData at random non-fixed points
    counterexamples: list

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "schema": "gfermat/1",
            "curve": self.curve_hash,
            "field": self.curve.field.to_json(),
            "fixed_points": [hd.to_json() for hd in self.fixed],
            "fixed_count": len(self.fixed),
            "samples": [hd.to_json() for hd in self.samples],
            "sample_count": len(self.samples),
            "counterexamples": self.counterexamples,
            "passed": self.passed,
        }


def seed_from_hash(curve_hash: str) -> int:
    return int(curve_hash[:16], 16)


def fixed_point_hermite(c: CurveSpec, N: int | None = None) -> list[HermiteData]:
    return _pmap(lambda P: hermite_at(c, P, N), all_fixed_points(c))


def hyperosc_survey(
    c: CurveSpec,
    samples: int = DEFAULT_SAMPLES,
    seed: int | None = None,
    N: int | None = None,
    max_degree=None,
) -> SurveyReport:
    """Hermite data at all of F(H_0) plus ``samples`` random non-fixed points."""
    input_hash = c.hash
    cc = _prepare(c, max_degree)
    rng = random.Random(seed_from_hash(input_hash) if seed is None else seed)
    fixed = fixed_point_hermite(cc, N)
    pts = []
    seen = set()
    try:
        for _ in range(samples * 20):
            if len(pts) == samples:
                break
            P = random_point(cc, rng, exclude_fixed=True)
            if P not in seen:
                seen.add(P)
                pts.append(P)
    except MissingRootsError:
        pass
    sampled = _pmap(lambda P: hermite_at(cc, P, N), pts)
    bad = []
    for hd in fixed:
        if not hd.hyperosculating:
            bad.append({"point": hd.point.to_json(), "expected": "hyperosculating", "h": list(hd.h)})
    for hd in sampled:
        if hd.hyperosculating:
            bad.append({"point": hd.point.to_json(), "expected": "classical", "h": list(hd.h)})
    if len(sampled) < samples:
        bad.append({"expected": f"{samples} samples", "found": len(sampled)})
    return SurveyReport(input_hash, cc, fixed, sampled, bad)


# -- Pluecker closure ----------------------------------------------------------


@dataclass
class PlueckerReport:
    curve_hash: str
    field: FieldHandle
    k: int
    n: int
    genus: int
    b_totals: tuple
    b_targets: tuple
    d: tuple
    identity_lhs: int
    identity_rhs: int

    @property
    def closure(self) -> bool:
        return self.d[-1] == 0

    @property
    def identity_holds(self) -> bool:
        return self.identity_lhs == self.identity_rhs

    @property
    def passed(self) -> bool:
        return self.closure and self.identity_holds

    def to_json(self) -> dict:
        return {
            "schema": "gfermat/1",
            "curve": self.curve_hash,
            "field": self.field.to_json(),
            "genus": self.genus,
            "b": list(self.b_totals),
            "b_targets": list(self.b_targets),
            "d": list(self.d),
            "closure": self.closure,
            "identity": {"lhs": self.identity_lhs, "rhs": self.identity_rhs},
            "passed": self.passed,
        }


def pluecker_recurrence(b_totals, g: int, d0: int) -> tuple:
    """d_{s+1} = 2 d_s - d_{s-1} + (2g - 2) - b_s from d_{-1} = 0 and d_0."""
    d = [0, d0]
    for bs in b_totals:
        d.append(2 * d[-1] - d[-2] + (2 * g - 2) - bs)
    return tuple(d[1:])


def pluecker_targets(k: int, n: int) -> tuple:
    base = (n + 1) * k ** (n - 1)
    return (0, base * (k - 2)) + (base * (k - 1),) * (n - 2)


def pluecker_from_hermite(c: CurveSpec, data, curve_hash: str | None = None) -> PlueckerReport:
    n, k, g = c.n, c.k, c.genus
    totals = [0] * n
    for hd in data:
        for s, bs in enumerate(hd.b):
            totals[s] += bs
    d = pluecker_recurrence(totals, g, k ** (n - 1))
    lhs = sum((n - l) * bl for l, bl in enumerate(totals))
    rhs = n * (n + 1) * (g - 1) + (n + 1) * k ** (n - 1)
    return PlueckerReport(
        curve_hash or c.hash, c.field, k, n, g, tuple(totals), pluecker_targets(k, n), d, lhs, rhs
    )


def pluecker_solve(c: CurveSpec, N: int | None = None, max_degree=None) -> PlueckerReport:
    """Totals of b_s over F(H_0), then the Pluecker recurrence and totals identity."""
    input_hash = c.hash
    cc = _prepare(c, max_degree)
    return pluecker_from_hermite(cc, fixed_point_hermite(cc, N), input_hash)
