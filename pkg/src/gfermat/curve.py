"""The curve C^k(lambda_1, ..., lambda_{n-2}) in P^n as a complete intersection.

Coordinates are 1-based ``x_1 ... x_{n+1}`` in the public API (0-based in
Python sequences). The defining forms are

    f_i = lamhat_i * x_1^k + x_2^k + x_{3+i}^k,   i = 0 .. n-2,

with ``lamhat_0 = 1`` and ``lamhat_i = lambda_i``. Writing ``y_j = x_j^k``,
every point of the curve has ``y`` proportional to ``(l_1(v), ..., l_{n+1}(v))``
where ``v`` is the homogeneous base value and ``l_j`` is the linear form on P^1
vanishing at the j-th branch value (``l_1 = X_1``, ``l_2 = -X_0``,
``l_{3+i} = X_0 - lamhat_i X_1``). All coordinate relations used below are
derived from these forms.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property

from . import linalg
from .errors import (
    CharacteristicError,
    DegenerateCurveError,
    MissingRootsError,
    NotOnCurveError,
    ValidationError,
)
from .fields import (
    FieldElement,
    FieldHandle,
    embed,
    extend_for_roots,
    has_kth_root,
    kth_roots,
    make_field,
)


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "inf"

    def to_json(self):
        return "inf"

    def key(self):
        return ()

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def p1_vector(value, F):
    """Homogeneous coordinates (X_0, X_1) of a point of P^1 (``INF`` -> (1, 0))."""
    if value is INF:
        return (F.one, F.zero)
    return (F(value), F.one)


def p1_value(vec):
    x0, x1 = vec
    if x1.is_zero():
        if x0.is_zero():
            raise ValidationError("(0, 0) is not a point of P^1")
        return INF
    return x0 / x1


def p1_json(value):
    return "inf" if value is INF else value.to_json()


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of P^n normalized so its first nonzero coordinate is 1."""

    coords: tuple

    @classmethod
    def normalized(cls, coords) -> ProjectivePoint:
        coords = tuple(coords)
        lead = next((c for c in coords if c), None)
        if lead is None:
            raise ValidationError("the zero vector is not a projective point")
        if not lead.is_one():
            inv = lead.inverse()
            coords = tuple(c * inv for c in coords)
        return cls(coords)

    def __getitem__(self, j):
        """1-based coordinate access."""
        return self.coords[j - 1]

    def __len__(self):
        return len(self.coords)

    def zero_coordinates(self) -> list[int]:
        return [j + 1 for j, c in enumerate(self.coords) if c.is_zero()]

    def key(self):
        return tuple(c.key() for c in self.coords)

    def to_json(self):
        return [c.to_json() for c in self.coords]

    def __repr__(self):
        return "[" + " : ".join(repr(c) for c in self.coords) + "]"


@dataclass(frozen=True)
class KthPowerForm:
    """A form sum_j coeffs[j] * x_{j+1}^k (diagonal in the k-th powers)."""

    k: int
    coeffs: tuple

    def __call__(self, point) -> FieldElement:
        coords = point.coords if isinstance(point, ProjectivePoint) else point
        acc = self.coeffs[0].field.zero
        for c, x in zip(self.coeffs, coords):
            if c and x:
                acc = acc + c * x**self.k
        return acc

    def monomials(self) -> dict:
        """As a polynomial: exponent tuple -> coefficient."""
        m = len(self.coeffs)
        out = {}
        for j, c in enumerate(self.coeffs):
            if c:
                e = [0] * m
                e[j] = self.k
                out[tuple(e)] = c
        return out

    def __str__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mon = f"x{j + 1}^{self.k}"
            terms.append(mon if c.is_one() else f"({c!r})*{mon}")
        return " + ".join(terms)


@dataclass(frozen=True)
class CurveSpec:
    k: int
    n: int
    field: FieldHandle
    lambdas: tuple

    def __post_init__(self):
        k, n, F = self.k, self.n, self.field
        if k < 2 or n < 2:
            raise ValidationError("need k >= 2 and n >= 2", k=k, n=n)
        if len(self.lambdas) != n - 2:
            raise ValidationError(f"expected {n - 2} lambdas, got {len(self.lambdas)}")
        if F.p and math.gcd(k, F.p) != 1:
            raise CharacteristicError(f"gcd(k, p) must be 1 (k={k}, p={F.p})", k=k, p=F.p)
        for lam in self.lambdas:
            if lam.field != F:
                raise ValidationError("lambda does not belong to the curve field")
            if lam.is_zero() or lam.is_one():
                raise ValidationError(f"lambda={lam!r} must avoid 0 and 1")
        if len(set(self.lambdas)) != len(self.lambdas):
            raise ValidationError("lambdas must be pairwise distinct")

    # -- derived data -----------------------------------------------------

    @property
    def dim(self) -> int:
        """Number of homogeneous coordinates, n + 1."""
        return self.n + 1

    @cached_property
    def lambda_hat(self) -> tuple:
        return (self.field.one,) + tuple(self.lambdas)

    @cached_property
    def forms(self) -> tuple:
        F = self.field
        out = []
        for i, lam in enumerate(self.lambda_hat):
            coeffs = [F.zero] * self.dim
            coeffs[0] = lam
            coeffs[1] = F.one
            coeffs[2 + i] = F.one
            out.append(KthPowerForm(self.k, tuple(coeffs)))
        return tuple(out)

    @cached_property
    def branch_forms(self) -> tuple:
        """Linear forms (e0, e1) on P^1, one per coordinate: y_j = c * l_j(v)."""
        F = self.field
        out = [(F.zero, F.one), (-F.one, F.zero)]
        for lam in self.lambda_hat:
            out.append((F.one, -lam))
        return tuple(out)

    def relation(self, c: int, a: int, b: int):
        """(alpha, beta) with y_c = alpha * y_a + beta * y_b on the curve (1-based)."""
        la, lb, lc = (self.branch_forms[j - 1] for j in (a, b, c))
        return linalg.solve_2x2(la[0], lb[0], la[1], lb[1], lc[0], lc[1])

    @cached_property
    def genus(self) -> int:
        return genus_kn(self.k, self.n)

    @property
    def is_hyperbolic(self) -> bool:
        return (self.k - 1) * (self.n - 1) > 2

    def require_hyperbolic(self):
        if not self.is_hyperbolic:
            raise DegenerateCurveError(
                f"(k-1)(n-1) = {(self.k - 1) * (self.n - 1)} <= 2: genus {self.genus} curve",
                k=self.k,
                n=self.n,
            )

    # -- field changes -----------------------------------------------------

    def over(self, F: FieldHandle) -> CurveSpec:
        if F == self.field:
            return self
        return CurveSpec(self.k, self.n, F, tuple(embed(lam, F) for lam in self.lambdas))

    def fixed_point_requirements(self) -> list:
        """(element, k) pairs whose k-th roots are the fixed-point coordinates."""
        reqs = [(self.field.one, self.k)]
        for j in range(1, self.dim + 1):
            a = 1 if j != 1 else 2
            for c in range(1, self.dim + 1):
                if c in (a, j):
                    continue
                alpha, _ = self.relation(c, a, j)
                reqs.append((alpha, self.k))
        return reqs

    def with_fixed_point_roots(self, extra=(), max_degree: int | None = None) -> CurveSpec:
        """Same curve over the smallest extension holding F(H_0) and zeta_k."""
        kw = {} if max_degree is None else {"max_degree": max_degree}
        F = extend_for_roots(self.field, self.fixed_point_requirements() + list(extra), **kw)
        return self.over(F)

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "field": self.field.to_json(),
            "lambdas": [lam.to_json() for lam in self.lambdas],
        }

    @classmethod
    def from_json(cls, data: dict) -> CurveSpec:
        try:
            F = make_field(data["field"])
            return new_curve(int(data["k"]), int(data["n"]), data.get("lambdas", []), F)
        except KeyError as exc:
            raise ValidationError(f"curve spec missing key {exc}") from None

    @cached_property
    def hash(self) -> str:
        return curve_hash(self.to_json())

    def __repr__(self):
        return f"C^{self.k}({', '.join(map(repr, self.lambdas))}) in P^{self.n} over {self.field!r}"


def curve_hash(spec_json: dict) -> str:
    canon = json.dumps(spec_json, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def new_curve(k: int, n: int, lambdas, field) -> CurveSpec:
    F = make_field(field)
    return CurveSpec(k, n, F, tuple(F(lam) for lam in lambdas))


def genus_kn(k: int, n: int) -> int:
    twice = k ** (n - 1) * ((n - 1) * (k - 1) - 2)
    assert twice % 2 == 0
    return 1 + twice // 2


def riemann_hurwitz_genus(k: int, n: int) -> int:
    """Genus from a degree k^n cover of P^1 with n+1 fibers of k^(n-1) points."""
    chi = -2 * k**n + (n + 1) * k ** (n - 1) * (k - 1)
    assert chi % 2 == 0
    return (chi + 2) // 2


def canonical_degree(c: CurveSpec) -> int:
    return ((c.n - 1) * (c.k - 1) - 2) * c.k ** (c.n - 1)


def genus(c: CurveSpec) -> int:
    return c.genus


def contains(c: CurveSpec, P: ProjectivePoint) -> bool:
    if len(P) != c.dim:
        return False
    return all(f(P).is_zero() for f in c.forms)


def jacobian(c: CurveSpec, P: ProjectivePoint):
    """(n-1) x (n+1) matrix of gradients of the defining forms at P."""
    k = c.k
    powers = [x ** (k - 1) * k for x in P.coords]
    F = c.field
    rows = []
    for i, lam in enumerate(c.lambda_hat):
        row = [F.zero] * c.dim
        row[0] = lam * powers[0]
        row[1] = powers[1]
        row[2 + i] = powers[2 + i]
        rows.append(row)
    return rows


def jacobian_rank_at(c: CurveSpec, P: ProjectivePoint) -> int:
    if not contains(c, P):
        raise NotOnCurveError(f"{P!r} is not on the curve", point=P.to_json())
    return linalg.rank(jacobian(c, P))


def _root_product(c: CurveSpec, a: int, b: int, b_value: FieldElement):
    """Points with x_a = 1 and x_b = b_value, all other coordinates solved.

    Returns (points, missing) where ``missing`` lists (element, k) with no root.
    """
    F = c.field
    k = c.k
    yb = b_value**k
    options = []
    missing = []
    for j in range(1, c.dim + 1):
        if j == a:
            options.append([F.one])
        elif j == b:
            options.append([b_value])
        else:
            alpha, beta = c.relation(j, a, b)
            target = alpha + beta * yb
            roots = kth_roots(target, k)
            if not roots:
                missing.append((target, k))
            options.append(roots)
    if missing:
        return [], missing
    return [ProjectivePoint.normalized(xs) for xs in itertools.product(*options)], []


def fixed_points(c: CurveSpec, j: int) -> list[ProjectivePoint]:
    """Fix(phi_j) = {x_j = 0} on the curve, sorted; exactly k^(n-1) points."""
    if not 1 <= j <= c.dim:
        raise ValidationError(f"coordinate index {j} out of range 1..{c.dim}")
    a = 1 if j != 1 else 2
    pts, missing = _root_product(c, a, j, c.field.zero)
    if missing:
        raise MissingRootsError(
            f"fixed points of phi_{j} need k-th roots outside {c.field!r}", required=missing, j=j
        )
    pts = sorted(set(pts), key=ProjectivePoint.key)
    assert len(pts) == c.k ** (c.n - 1)
    return pts


def all_fixed_points(c: CurveSpec) -> list[ProjectivePoint]:
    """F(H_0) ordered by fixed coordinate index, then lexicographically."""
    out = []
    for j in range(1, c.dim + 1):
        out.extend(fixed_points(c, j))
    return out


def base_map(c: CurveSpec, P: ProjectivePoint):
    """X = -x_2^k / x_1^k, or ``INF`` when x_1 = 0."""
    if not contains(c, P):
        raise NotOnCurveError(f"{P!r} is not on the curve", point=P.to_json())
    x1, x2 = P.coords[0], P.coords[1]
    if x1.is_zero():
        return INF
    return -(x2**c.k) / x1**c.k


def branch_values(c: CurveSpec) -> list:
    return [INF, c.field.zero, c.field.one] + list(c.lambdas)


def random_point(c: CurveSpec, rng, exclude_fixed: bool = True, tries: int = 10_000):
    """Random point with x_1 = 1 and all coordinates nonzero (if ``exclude_fixed``)."""
    F = c.field
    for _ in range(tries):
        x2 = F.random_element(rng, nonzero=exclude_fixed)
        coords = [F.one, x2]
        ok = True
        for lam in c.lambda_hat:
            target = -lam - x2**c.k
            if exclude_fixed and target.is_zero():
                ok = False
                break
            if not has_kth_root(target, c.k):
                ok = False
                break
            roots = kth_roots(target, c.k)
            coords.append(roots[rng.randrange(len(roots))])
        if ok:
            return ProjectivePoint.normalized(coords)
    raise MissingRootsError(f"no random point found over {F!r} after {tries} tries")
