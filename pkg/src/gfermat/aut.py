"""Linear automorphisms of the curve: H_0, the Moebius stabilizer G_0, lifts, checks.

A linear automorphism acts on points by ``P -> A P``. For monomial matrices
we use :class:`MonomialAut`, where row ``r`` carries its single nonzero entry
``scalars[r]`` in column ``perm[r]`` (both 0-based).

The group L of monomial automorphisms sits in the exact sequence
1 -> H_0 -> L -> G_0 -> 1, where G_0 is the group of Moebius maps preserving the
branch values. L is produced by lifting every element of G_0; an independent
brute-force search over coordinate permutations (:func:`monomial_search`)
serves as a cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from . import linalg
from .curve import INF, CurveSpec, ProjectivePoint, branch_values, p1_value, p1_vector
from .errors import (
    BudgetExceeded,
    MissingRootsError,
    PropertyViolation,
    UnsupportedFieldError,
    ValidationError,
)
from .fields import (
    FieldElement,
    FieldHandle,
    MAX_EXTENSION_DEGREE,
    extend_for_roots,
    kth_roots,
    primitive_kth_root,
)

# -- Moebius maps ------------------------------------------------------------


def _normalize_entries(entries):
    lead = next((x for x in entries if x), None)
    if lead is None:
        raise ValidationError("zero matrix")
    if not lead.is_one():
        inv = lead.inverse()
        entries = [x * inv for x in entries]
    return tuple(entries)


@dataclass(frozen=True)
class MoebiusMap:
    """Element of PGL_2, stored as ((a, b), (c, d)) with first nonzero entry 1.

    Acts by X -> (a X + b) / (c X + d) on homogeneous vectors (X_0, X_1).
    """

    matrix: tuple

    @classmethod
    def from_entries(cls, a, b, c, d) -> MoebiusMap:
        if (a * d - b * c).is_zero():
            raise ValidationError("singular Moebius matrix")
        a, b, c, d = _normalize_entries([a, b, c, d])
        return cls(((a, b), (c, d)))

    @classmethod
    def identity(cls, F: FieldHandle) -> MoebiusMap:
        return cls.from_entries(F.one, F.zero, F.zero, F.one)

    @classmethod
    def from_images(cls, a, b, c, F: FieldHandle) -> MoebiusMap:
        """The unique map sending (inf, 0, 1) to (a, b, c)."""
        va, vb, vc = (p1_vector(v, F) for v in (a, b, c))
        alpha, beta = linalg.solve_2x2(va[0], vb[0], va[1], vb[1], vc[0], vc[1])
        return cls.from_entries(alpha * va[0], beta * vb[0], alpha * va[1], beta * vb[1])

    @property
    def field(self) -> FieldHandle:
        return self.matrix[0][0].field

    def apply_vector(self, v):
        (a, b), (c, d) = self.matrix
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def __call__(self, value):
        return p1_value(self.apply_vector(p1_vector(value, self.field)))

    def compose(self, other: MoebiusMap) -> MoebiusMap:
        """self o other."""
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        return MoebiusMap.from_entries(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self) -> MoebiusMap:
        (a, b), (c, d) = self.matrix
        return MoebiusMap.from_entries(d, -b, -c, a)

    def is_identity(self) -> bool:
        (a, b), (c, d) = self.matrix
        return b.is_zero() and c.is_zero() and a == d

    def key(self):
        return tuple(x.key() for row in self.matrix for x in row)

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.matrix]

    def __repr__(self):
        (a, b), (c, d) = self.matrix
        return f"X -> ({a!r} X + {b!r}) / ({c!r} X + {d!r})"


def moebius_stabilizer(branch, F: FieldHandle | None = None) -> list[MoebiusMap]:
    """All T in PGL_2(F) with T(S) = S, for S = ``branch`` (contains inf, 0, 1).

    Enumerates ordered triples of S as images of (inf, 0, 1); sorted output.
    """
    branch = list(branch)
    if F is None:
        F = next(v.field for v in branch if v is not INF)
    S = set(branch)
    if len(S) != len(branch):
        raise ValidationError("branch values must be distinct")
    if not {INF, F.zero, F.one} <= S:
        raise ValidationError("branch values must contain inf, 0 and 1")
    out = []
    for a, b, c in itertools.permutations(branch, 3):
        T = MoebiusMap.from_images(a, b, c, F)
        if all(T(s) in S for s in branch):
            out.append(T)
    return sorted(set(out), key=MoebiusMap.key)


def branch_permutation(T: MoebiusMap, branch) -> list[int]:
    """perm[j] = index of T(branch[j])."""
    index = {v: i for i, v in enumerate(branch)}
    return [index[T(v)] for v in branch]


# -- monomial automorphisms ---------------------------------------------------


@dataclass(frozen=True)
class MonomialAut:
    perm: tuple
    scalars: tuple
    certificate: tuple | None = field(default=None, compare=False)

    @classmethod
    def normalized(cls, perm, scalars, certificate=None) -> MonomialAut:
        scalars = list(scalars)
        if any(s.is_zero() for s in scalars):
            raise ValidationError("monomial scalars must be nonzero")
        if not scalars[0].is_one():
            inv = scalars[0].inverse()
            scalars = [s * inv for s in scalars]
        return cls(tuple(perm), tuple(scalars), certificate)

    @classmethod
    def from_matrix(cls, A) -> MonomialAut | None:
        """The monomial automorphism with matrix A, or None if A is not monomial."""
        perm, scalars = [], []
        for row in A:
            nz = [j for j, x in enumerate(row) if x]
            if len(nz) != 1:
                return None
            perm.append(nz[0])
            scalars.append(row[nz[0]])
        if sorted(perm) != list(range(len(A))):
            return None
        return cls.normalized(perm, scalars)

    @property
    def field(self) -> FieldHandle:
        return self.scalars[0].field

    @property
    def size(self) -> int:
        return len(self.perm)

    def matrix(self):
        F = self.field
        m = self.size
        rows = [[F.zero] * m for _ in range(m)]
        for r, (c, s) in enumerate(zip(self.perm, self.scalars)):
            rows[r][c] = s
        return rows

    def __call__(self, P: ProjectivePoint) -> ProjectivePoint:
        return ProjectivePoint.normalized(
            s * P.coords[c] for c, s in zip(self.perm, self.scalars)
        )

    def compose(self, other: MonomialAut) -> MonomialAut:
        """self . other (apply ``other`` first)."""
        perm = [other.perm[self.perm[r]] for r in range(self.size)]
        scalars = [self.scalars[r] * other.scalars[self.perm[r]] for r in range(self.size)]
        return MonomialAut.normalized(perm, scalars)

    def inverse(self) -> MonomialAut:
        perm = [0] * self.size
        scalars = [None] * self.size
        for r, (c, s) in enumerate(zip(self.perm, self.scalars)):
            perm[c] = r
            scalars[c] = s.inverse()
        return MonomialAut.normalized(perm, scalars)

    def conjugate(self, other: MonomialAut) -> MonomialAut:
        """self . other . self^-1"""
        return self.compose(other).compose(self.inverse())

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.size)) and all(s.is_one() for s in self.scalars)

    def with_certificate(self, cert) -> MonomialAut:
        return MonomialAut(self.perm, self.scalars, cert)

    def key(self):
        return (self.perm, tuple(s.key() for s in self.scalars))

    def to_json(self) -> dict:
        out = {
            "perm": [c + 1 for c in self.perm],
            "scalars": [s.to_json() for s in self.scalars],
        }
        if self.certificate is not None:
            out["certificate"] = linalg.matrix_to_json(self.certificate)
        return out

    def __repr__(self):
        return f"MonomialAut(perm={[c + 1 for c in self.perm]}, scalars={list(self.scalars)})"


def _zeta(c: CurveSpec) -> FieldElement:
    try:
        return primitive_kth_root(c.field, c.k)
    except MissingRootsError as exc:
        raise MissingRootsError(
            f"H_0 needs a primitive {c.k}-th root of unity in {c.field!r}",
            required=[(c.field.one, c.k)],
        ) from exc


def h0_generators(c: CurveSpec) -> list[MonomialAut]:
    """phi_1 ... phi_{n+1}: multiply the j-th coordinate by zeta_k."""
    w = _zeta(c)
    F = c.field
    ident = tuple(range(c.dim))
    gens = []
    for j in range(c.dim):
        sc = [F.one] * c.dim
        sc[j] = w
        gens.append(MonomialAut.normalized(ident, sc))
    return gens


def h0_elements(c: CurveSpec) -> list[MonomialAut]:
    """All k^n elements of H_0 (diagonal, first entry normalized to 1)."""
    w = _zeta(c)
    powers = [w**e for e in range(c.k)]
    ident = tuple(range(c.dim))
    F = c.field
    out = []
    for exps in itertools.product(range(c.k), repeat=c.n):
        out.append(MonomialAut(ident, (F.one,) + tuple(powers[e] for e in exps)))
    return out


def h0_exponents(c: CurveSpec, A: MonomialAut) -> tuple | None:
    """Exponent vector (e_1 = 0, e_2, ..., e_{n+1}) of A in H_0, or None."""
    if A.perm != tuple(range(c.dim)):
        return None
    w = _zeta(c)
    powers = {w**e: e for e in range(c.k)}
    exps = []
    for s in A.scalars:
        if s not in powers:
            return None
        exps.append(powers[s])
    return tuple(exps)


def in_h0(c: CurveSpec, A: MonomialAut) -> bool:
    return h0_exponents(c, A) is not None


# -- the linear-automorphism condition ------------------------------------


def _poly_mul(a: dict, b: dict) -> dict:
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = ca * cb
            if e in out:
                out[e] = out[e] + v
            else:
                out[e] = v
    return {e: v for e, v in out.items() if v}


def _linear_power(row, k: int) -> dict:
    m = len(row)
    lin = {}
    for j, a in enumerate(row):
        if a:
            e = [0] * m
            e[j] = 1
            lin[tuple(e)] = a
    result = lin
    for _ in range(k - 1):
        result = _poly_mul(result, lin)
    return result


def _poly_add_scaled(acc: dict, poly: dict, c: FieldElement):
    for e, v in poly.items():
        w = v * c
        acc[e] = acc[e] + w if e in acc else w


def compose_forms(c: CurveSpec, A) -> list[dict]:
    """The polynomials f_i(A x), fully expanded."""
    powers = {}
    out = []
    for f in c.forms:
        acc = {}
        for r, coeff in enumerate(f.coeffs):
            if coeff.is_zero():
                continue
            if r not in powers:
                powers[r] = _linear_power(A[r], c.k)
            _poly_add_scaled(acc, powers[r], coeff)
        out.append({e: v for e, v in acc.items() if v})
    return out


def is_linear_automorphism(c: CurveSpec, A):
    """Span certificate g with f_i(A x) = sum_v g[v][i] f_v, or None.

    Exact coefficient matching on the fully expanded polynomials, so every
    cross term must cancel.
    """
    m = c.dim
    if len(A) != m or any(len(row) != m for row in A):
        raise ValidationError(f"expected a {m}x{m} matrix")
    if not linalg.is_invertible(A):
        raise ValidationError("matrix is singular")
    F = c.field
    composed = compose_forms(c, A)
    form_polys = [f.monomials() for f in c.forms]
    cert = [[F.zero] * (c.n - 1) for _ in range(c.n - 1)]
    for i, poly in enumerate(composed):
        acc = {}
        for v in range(c.n - 1):
            e = [0] * m
            e[2 + v] = c.k
            g = poly.get(tuple(e), F.zero)
            cert[v][i] = g
            if g:
                _poly_add_scaled(acc, form_polys[v], g)
        acc = {e: x for e, x in acc.items() if x}
        if acc != poly:
            return None
    return tuple(tuple(row) for row in cert)


def certify(c: CurveSpec, A: MonomialAut) -> MonomialAut:
    cert = is_linear_automorphism(c, A.matrix())
    if cert is None:
        raise PropertyViolation(f"{A!r} does not preserve the curve")
    return A.with_certificate(cert)


# -- lifting G_0 ----------------------------------------------------------


def _lift_data(c: CurveSpec, T: MoebiusMap):
    """(perm, t) with t_r = s_r^k for any lift of T (t_0 = 1)."""
    branch = branch_values(c)
    index = {v: i for i, v in enumerate(branch)}
    Tinv = T.inverse()
    perm = []
    for b in branch:
        pre = Tinv(b)
        if pre not in index:
            raise ValidationError(f"{T!r} does not preserve the branch values")
        perm.append(index[pre])
    (a, b), (cc, d) = T.matrix
    ratios = []
    for r, (e0, e1) in enumerate(c.branch_forms):
        # l_r o M as a row vector
        g0, g1 = e0 * a + e1 * cc, e0 * b + e1 * d
        h0, h1 = c.branch_forms[perm[r]]
        if not (g0 * h1 - g1 * h0).is_zero():
            raise PropertyViolation("branch forms are not proportional")
        ratios.append(g0 / h0 if h0 else g1 / h1)
    t = [x / ratios[0] for x in ratios]
    return perm, t


def lift_requirements(c: CurveSpec, T: MoebiusMap) -> list:
    _, t = _lift_data(c, T)
    return [(x, c.k) for x in t]


def lift_moebius(c: CurveSpec, T: MoebiusMap) -> list[MonomialAut]:
    """All k^n monomial lifts A of T (pi o A = T o pi), each certified, sorted."""
    perm, t = _lift_data(c, T)
    options = [[c.field.one]]
    missing = []
    for x in t[1:]:
        roots = kth_roots(x, c.k)
        if not roots:
            missing.append((x, c.k))
        options.append(roots)
    if missing:
        raise MissingRootsError(
            f"lifting {T!r} needs k-th roots outside {c.field!r}", required=missing
        )
    lifts = [
        certify(c, MonomialAut.normalized(perm, scalars))
        for scalars in itertools.product(*options)
    ]
    return sorted(lifts, key=MonomialAut.key)


def induced_moebius(c: CurveSpec, A) -> MoebiusMap:
    """The map T with pi o A = T o pi, computed from the entries of monomial A."""
    if isinstance(A, MonomialAut):
        A = A.matrix()
    if MonomialAut.from_matrix(A) is None:
        raise ValidationError("induced Moebius map needs a monomial matrix")
    k = c.k
    F = c.field
    num = [F.zero, F.zero]
    den = [F.zero, F.zero]
    for nu, (e0, e1) in enumerate(c.branch_forms):
        a2, a1 = A[1][nu] ** k, A[0][nu] ** k
        num[0] -= a2 * e0
        num[1] -= a2 * e1
        den[0] += a1 * e0
        den[1] += a1 * e1
    return MoebiusMap.from_entries(num[0], num[1], den[0], den[1])


# -- the full monomial group -------------------------------------------------


def is_power_of(x: int, p: int) -> bool:
    if p < 2 or x < 1:
        return False
    while x % p == 0:
        x //= p
    return x == 1


@dataclass
class AutReport:
    curve_hash: str
    curve: CurveSpec  # over the field actually used (possibly extended)
    g0: list
    g0_permutations: list
    lifts: list
    L_order: int
    h0_normal: bool
    closure_ok: bool
    qform_applicable: bool
    coprime_k_n1: bool

    @property
    def g0_order(self) -> int:
        return len(self.g0)

    def to_json(self) -> dict:
        return {
            "schema": "gfermat/1",
            "curve": self.curve_hash,
            "field": self.curve.field.to_json(),
            "g0": [
                {"matrix": T.to_json(), "branch_permutation": perm}
                for T, perm in zip(self.g0, self.g0_permutations)
            ],
            "g0_order": self.g0_order,
            "lifts": [A.to_json() for A in self.lifts],
            "L_order": self.L_order,
            "h0_normal": self.h0_normal,
            "closure_ok": self.closure_ok,
            "qform_applicable": self.qform_applicable,
            "gcd_k_n_plus_1_is_1": self.coprime_k_n1,
        }


def _rooted_curve(c: CurveSpec, max_degree: int) -> CurveSpec:
    """Extend a finite field until zeta_k and every lift of every T in G_0 exist."""
    if not c.field.is_finite:
        return c
    F = extend_for_roots(c.field, [(c.field.one, c.k)], max_degree=max_degree)
    c = c.over(F)
    reqs = []
    for T in moebius_stabilizer(branch_values(c), c.field):
        reqs.extend(lift_requirements(c, T))
    return c.over(extend_for_roots(c.field, reqs, max_degree=max_degree))


def full_linear_group(c: CurveSpec, max_degree: int = MAX_EXTENSION_DEGREE) -> AutReport:
    """G_0, one designated lift per element, and |L| = k^n |G_0|."""
    c.require_hyperbolic()
    input_hash = c.hash
    c = _rooted_curve(c, max_degree)
    branch = branch_values(c)
    g0 = moebius_stabilizer(branch, c.field)
    lifts = {}
    for T in g0:
        lifts[T] = lift_moebius(c, T)[0]
    closure_ok = _check_closure(c, g0, lifts)
    perms = [branch_permutation(T, branch) for T in g0]
    p = c.field.p
    report = AutReport(
        curve_hash=input_hash,
        curve=c,
        g0=g0,
        g0_permutations=perms,
        lifts=[lifts[T] for T in g0],
        L_order=c.k**c.n * len(g0),
        h0_normal=False,
        closure_ok=closure_ok,
        qform_applicable=bool(p) and is_power_of(c.k - 1, p),
        coprime_k_n1=math.gcd(c.k, c.n + 1) == 1,
    )
    report.h0_normal = normality_check(report)
    return report


def _check_closure(c, g0, lifts) -> bool:
    """Products of designated lifts are certified and lie over the product in G_0."""
    g0_set = set(g0)
    for T1, T2 in itertools.product(g0, repeat=2):
        T12 = T1.compose(T2)
        if T12 not in g0_set:
            return False
        prod = lifts[T1].compose(lifts[T2])
        if is_linear_automorphism(c, prod.matrix()) is None:
            return False
        if induced_moebius(c, prod) != T12:
            return False
        if not in_h0(c, prod.compose(lifts[T12].inverse())):
            return False
    return True


def normality_check(report: AutReport) -> bool:
    """True iff A phi_j A^-1 lies in H_0 for every lift A and generator phi_j."""
    c = report.curve
    gens = h0_generators(c)
    return all(in_h0(c, A.conjugate(phi)) for A in report.lifts for phi in gens)


def conjugate_generator(c: CurveSpec, A: MonomialAut, j: int):
    """(j', e) with A phi_j A^-1 = phi_{j'}^e (1-based), or None."""
    gens = h0_generators(c)
    target = A.conjugate(gens[j - 1])
    for jj, phi in enumerate(gens, start=1):
        power = phi
        for e in range(1, c.k):
            if power == target:
                return jj, e
            power = power.compose(phi)
    return None


def monomial_search(c: CurveSpec, budget: int = 10**6) -> list[MonomialAut]:
    """Brute-force oracle: every monomial automorphism defined over ``c.field``.

    For each coordinate permutation solve the linear conditions on the k-th
    powers of the scalars, then try every choice of k-th roots and certify by
    full polynomial expansion. Does not use G_0.
    """
    work = math.factorial(c.dim) * c.k**c.n
    if work > budget:
        raise BudgetExceeded(f"monomial search needs {work} candidates > {budget}", work=work)
    F = c.field
    # two points spanning the line of k-th powers
    line_pts = [[e0 for e0, _ in c.branch_forms], [e1 for _, e1 in c.branch_forms]]
    found = []
    for perm in itertools.permutations(range(c.dim)):
        rows = []
        for f in c.forms:
            for w in line_pts:
                rows.append([coef * w[perm[r]] for r, coef in enumerate(f.coeffs)])
        basis = linalg.nullspace(rows, c.dim, F)
        if not basis:
            continue
        if len(basis) > 1:
            raise PropertyViolation("positive-dimensional family of monomial automorphisms")
        t = basis[0]
        if any(x.is_zero() for x in t):
            continue
        t = [x / t[0] for x in t]
        options = [[F.one]] + [kth_roots(x, c.k) for x in t[1:]]
        for scalars in itertools.product(*options):
            A = MonomialAut.normalized(perm, scalars)
            cert = is_linear_automorphism(c, A.matrix())
            if cert is not None:
                found.append(A.with_certificate(cert))
    return sorted(found, key=MonomialAut.key)


# -- the q-form condition (k - 1 = q = p^h) -----------------------------------


@dataclass
class QFormCertificate:
    q: int
    sigmas: list
    B: list  # B[i][nu][mu], 0-based
    b: list  # b[i][mu]
    passed: bool
    first_violation: dict | None

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "sigmas": [[x.to_json() for x in s] for s in self.sigmas],
            "B": [linalg.matrix_to_json(Bi) for Bi in self.B],
            "b": linalg.matrix_to_json(self.b),
            "passed": self.passed,
            "first_violation": self.first_violation,
        }


def qform_check(c: CurveSpec, A) -> QFormCertificate:
    """Test A^t Sigma_i A^(q) = sum_mu b[i][mu] Sigma_mu entrywise.

    ``A^(q)`` is the entrywise q-th power. For q = 1 (k = 2) the monomials
    x_v x_mu and x_mu x_v coincide, so the off-diagonal test is applied to
    B[v][mu] + B[mu][v].
    """
    F = c.field
    p = F.p
    if isinstance(A, MonomialAut):
        A = A.matrix()
    if not p or not is_power_of(c.k - 1, p):
        raise UnsupportedFieldError(
            f"k - 1 = {c.k - 1} is not a power of the characteristic {p}", k=c.k, p=p
        )
    q = c.k - 1
    m = c.dim
    Aq = [[x**q for x in row] for row in A]
    sigmas = []
    for f in c.forms:
        sigmas.append(list(f.coeffs))
    B = []
    for sig in sigmas:
        Bi = [[F.zero] * m for _ in range(m)]
        for r, s in enumerate(sig):
            if s.is_zero():
                continue
            for nu in range(m):
                a = A[r][nu]
                if a.is_zero():
                    continue
                for mu in range(m):
                    Bi[nu][mu] = Bi[nu][mu] + s * a * Aq[r][mu]
        B.append(Bi)
    lam = c.lambda_hat
    b = [[B[i][mu + 2][mu + 2] for mu in range(c.n - 1)] for i in range(c.n - 1)]
    violation = None
    for i, Bi in enumerate(B):
        for nu in range(m):
            for mu in range(m):
                if nu == mu:
                    continue
                val = Bi[nu][mu] + Bi[mu][nu] if q == 1 else Bi[nu][mu]
                if q == 1 and mu < nu:
                    continue
                if val:
                    violation = {"i": i, "nu": nu + 1, "mu": mu + 1, "reason": "off-diagonal"}
                    break
            if violation:
                break
        if violation:
            break
        if sum((x for x in b[i]), F.zero) != Bi[1][1]:
            violation = {"i": i, "nu": 2, "mu": 2, "reason": "compatibility: sum b = B_22"}
            break
        if sum((lm * x for lm, x in zip(lam, b[i])), F.zero) != Bi[0][0]:
            violation = {"i": i, "nu": 1, "mu": 1, "reason": "compatibility: sum lambda b = B_11"}
            break
    return QFormCertificate(
        q=q,
        sigmas=sigmas,
        B=B,
        b=b,
        passed=violation is None,
        first_violation=violation,
    )
