"""Exact arithmetic in Q, Q(zeta_k), GF(p) and GF(p^m).

A field is described by an immutable :class:`FieldHandle`; its elements are
:class:`FieldElement` values holding a canonical coefficient tuple in the
power basis of the defining modulus (length equal to the field degree).
Coefficients are Python ints reduced mod p in positive characteristic, and
:class:`fractions.Fraction` in characteristic zero.

Ordering conventions are fixed so that every choice made by this module is
reproducible: elements compare by their low-to-high coefficient tuple, and the
default modulus of GF(p^m) is the first monic irreducible polynomial in the
lexicographic order of its low-to-high coefficient vector.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache

from .errors import (
    CharacteristicError,
    FieldMismatchError,
    MissingRootsError,
    ReducibleModulusError,
    UnsupportedFieldError,
    ValidationError,
)

RATIONALS = "rationals"
CYCLOTOMIC = "cyclotomic"
PRIME = "prime"
EXTENSION = "extension"
KINDS = (RATIONALS, CYCLOTOMIC, PRIME, EXTENSION)

MAX_EXTENSION_DEGREE = 24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in (2, 3, 5, 7, 11, 13):
        if n % d == 0:
            return n == d
    d = 17
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- coefficient-level helpers (base ring is Z/p or Q) ---------------------


def _bnorm(c, p):
    return c % p if p else Fraction(c)


def _binv(c, p):
    if p:
        return pow(c, -1, p)
    return 1 / Fraction(c)


def _ctrim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _cdivmod(a, b, p):
    a = _ctrim(a)
    b = _ctrim(b)
    inv = _binv(b[-1], p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = _bnorm(a[-1] * inv, p)
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = _bnorm(a[shift + i] - c * bi, p)
        a = _ctrim(a)
    return q, a


def _cmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [_bnorm(c, p) for c in out]


def _cinverse_mod(a, mod, p):
    """Inverse of polynomial ``a`` modulo ``mod`` via extended Euclid."""
    r0, r1 = _ctrim(mod), _ctrim(a)
    s0, s1 = [], [_bnorm(1, p)]
    while r1:
        q, r = _cdivmod(r0, r1, p)
        qs = _cmul(q, s1, p)
        n = max(len(s0), len(qs))
        s_new = [
            _bnorm((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0), p)
            for i in range(n)
        ]
        r0, r1 = r1, r
        s0, s1 = s1, _ctrim(s_new)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (modulus not irreducible?)")
    inv = _binv(r0[0], p)
    return [_bnorm(c * inv, p) for c in s0]


@dataclass(frozen=True)
class FieldHandle:
    """An exact field.

    ``modulus`` is the monic defining polynomial (low-to-high integer
    coefficients) for extension and cyclotomic kinds, ``None`` otherwise.
    ``k`` is the cyclotomic order for ``cyclotomic`` fields.
    """

    kind: str
    p: int = 0
    modulus: tuple | None = None
    k: int | None = None

    # -- structure ---------------------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p

    @cached_property
    def degree(self) -> int:
        return len(self.modulus) - 1 if self.modulus is not None else 1

    @property
    def is_finite(self) -> bool:
        return self.p > 0

    @cached_property
    def order(self) -> int | None:
        return self.p**self.degree if self.p else None

    @cached_property
    def _hash(self):
        return hash((self.kind, self.p, self.modulus, self.k))

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.kind == RATIONALS:
            return "QQ"
        if self.kind == CYCLOTOMIC:
            return f"QQ(zeta_{self.k})"
        if self.kind == PRIME:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.degree})"

    # -- element construction ------------------------------------------------

    def _make(self, coeffs) -> FieldElement:
        return FieldElement(self, tuple(coeffs))

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.field.degree == 1 and value.field.p == self.p and (
                self.p or value.field.kind in (RATIONALS, CYCLOTOMIC)
            ):
                return self(value.coeffs[0])
            raise FieldMismatchError(
                f"cannot coerce element of {value.field!r} into {self!r}"
            )
        if isinstance(value, (list, tuple)):
            if len(value) > self.degree:
                raise ValidationError(
                    f"coefficient vector of length {len(value)} exceeds degree {self.degree}"
                )
            coeffs = [_bnorm(_parse_scalar(c, self.p), self.p) for c in value]
            coeffs += [_bnorm(0, self.p)] * (self.degree - len(coeffs))
            return self._make(coeffs)
        c = _bnorm(_parse_scalar(value, self.p), self.p)
        return self._make([c] + [_bnorm(0, self.p)] * (self.degree - 1))

    @cached_property
    def zero(self) -> FieldElement:
        return self(0)

    @cached_property
    def one(self) -> FieldElement:
        return self(1)

    @cached_property
    def gen(self) -> FieldElement:
        """Class of ``x`` modulo the defining polynomial (zeta for cyclotomic)."""
        if self.degree == 1:
            if self.kind == CYCLOTOMIC:
                return self(-self.modulus[0])
            return self.one
        return self([0, 1])

    def elements(self):
        """All elements in lexicographic order of their coefficient vector."""
        if not self.p:
            raise UnsupportedFieldError("cannot enumerate an infinite field")
        for coeffs in itertools.product(range(self.p), repeat=self.degree):
            yield self._make(coeffs)

    def random_element(self, rng: random.Random, nonzero: bool = False) -> FieldElement:
        while True:
            if self.p:
                x = self._make(rng.randrange(self.p) for _ in range(self.degree))
            else:
                x = self._make(
                    Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(self.degree)
                )
            if not (nonzero and x.is_zero()):
                return x

    # -- raw arithmetic on coefficient tuples -------------------------------

    def _add(self, a, b):
        p = self.p
        if p:
            return tuple((x + y) % p for x, y in zip(a, b))
        return tuple(x + y for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.p
        if p:
            return tuple((x - y) % p for x, y in zip(a, b))
        return tuple(x - y for x, y in zip(a, b))

    def _neg(self, a):
        p = self.p
        if p:
            return tuple((-x) % p for x in a)
        return tuple(-x for x in a)

    def _mul(self, a, b):
        p = self.p
        d = self.degree
        if d == 1:
            return ((a[0] * b[0]) % p,) if p else (a[0] * b[0],)
        r = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    r[i + j] += x * y
        mod = self.modulus
        for i in range(2 * d - 2, d - 1, -1):
            c = r[i]
            if c:
                base = i - d
                for j in range(d):
                    r[base + j] -= c * mod[j]
        if p:
            return tuple(c % p for c in r[:d])
        return tuple(r[:d])

    def _inv(self, a):
        if not any(a):
            raise ZeroDivisionError(f"division by zero in {self!r}")
        if self.degree == 1:
            return (_binv(a[0], self.p),)
        inv = _cinverse_mod(list(a), list(self.modulus), self.p)
        inv += [_bnorm(0, self.p)] * (self.degree - len(inv))
        return tuple(inv)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == RATIONALS:
            return {"kind": RATIONALS, "p": 0}
        if self.kind == CYCLOTOMIC:
            return {"kind": CYCLOTOMIC, "p": 0, "k": self.k}
        if self.kind == PRIME:
            return {"kind": PRIME, "p": self.p}
        return {"kind": EXTENSION, "p": self.p, "modulus": list(self.modulus)}


def _parse_scalar(c, p):
    if isinstance(c, bool):
        raise ValidationError("booleans are not field coefficients")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        if p:
            return c.numerator * pow(c.denominator, -1, p)
        return c
    if isinstance(c, str):
        f = Fraction(c)
        return _parse_scalar(f, p)
    raise ValidationError(f"unsupported coefficient {c!r}")


class FieldElement:
    """Immutable element of a :class:`FieldHandle`."""

    __slots__ = ("field", "coeffs", "_h")

    def __init__(self, field: FieldHandle, coeffs: tuple):
        self.field = field
        self.coeffs = coeffs
        self._h = None

    def _other(self, other) -> tuple:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError(
                    f"mixed fields: {self.field!r} and {other.field!r}"
                )
            return other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field(other).coeffs
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._add(self.coeffs, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._sub(self.coeffs, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._sub(b, self.coeffs))

    def __neg__(self):
        return FieldElement(self.field, self.field._neg(self.coeffs))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._mul(self.coeffs, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._mul(self.coeffs, self.field._inv(b)))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field._mul(b, self.field._inv(self.coeffs)))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field._inv(self.coeffs))

    def __pow__(self, e: int):
        F = self.field
        if e < 0:
            base = F._inv(self.coeffs)
            e = -e
        else:
            base = self.coeffs
        if F.p:
            # exponents only matter modulo the multiplicative group order
            if any(base) and e >= F.order:
                e = (e - 1) % (F.order - 1) + 1
        result = F.one.coeffs
        while e:
            if e & 1:
                result = F._mul(result, base)
            e >>= 1
            if e:
                base = F._mul(base, base)
        return FieldElement(F, result)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs == self.field.one.coeffs

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.coeffs == other.coeffs and (
                other.field is self.field or other.field == self.field
            )
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.coeffs == self.field(other).coeffs
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.field, self.coeffs))
        return self._h

    def key(self) -> tuple:
        """Sort key: the low-to-high coefficient vector."""
        return self.coeffs

    def __lt__(self, other):
        return self.key() < other.key()

    def is_rational(self) -> bool:
        """True if the element lies in the prime subfield."""
        return not any(self.coeffs[1:])

    def to_json(self) -> list:
        return [_scalar_json(c) for c in self.coeffs]

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.coeffs[0])
        var = "z" if self.field.kind == CYCLOTOMIC else "a"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            if not mon:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"


def _scalar_json(c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return c.numerator
        return f"{c.numerator}/{c.denominator}"
    return c


def element_from_json(F: FieldHandle, value) -> FieldElement:
    return F(value)


# -- polynomials with field-element coefficients -----------------------------


def _ptrim(a):
    a = list(a)
    while a and a[-1].is_zero():
        a.pop()
    return a


def _pdivmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    zero = b[0].field.zero
    q = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        shift = len(a) - len(b)
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = a[shift + i] - c * bi
        a = _ptrim(a)
    return q, a


def _pmul(a, b):
    if not a or not b:
        return []
    zero = a[0].field.zero
    out = [zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
    return _ptrim(out)


def _pmod(a, m):
    return _pdivmod(a, m)[1]


def _ppowmod(base, e, m):
    F = m[0].field
    result = [F.one]
    base = _pmod(base, m)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base), m)
        e >>= 1
        if e:
            base = _pmod(_pmul(base, base), m)
    return result


def _psub(a, b):
    F = (a or b)[0].field
    n = max(len(a), len(b))
    return _ptrim(
        [(a[i] if i < len(a) else F.zero) - (b[i] if i < len(b) else F.zero) for i in range(n)]
    )


def _pgcd(a, b):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b)
    if a:
        inv = a[-1].inverse()
        a = [c * inv for c in a]
    return a


def _monic(a):
    inv = a[-1].inverse()
    return [c * inv for c in a]


def poly_roots(coeffs) -> list[FieldElement]:
    """Distinct roots in a finite field of the polynomial ``coeffs`` (low-to-high).

    Cantor-Zassenhaus equal-degree splitting restricted to linear factors. The
    splitting uses a fixed-seed generator and the output is sorted, so the
    result is deterministic.
    """
    f = _ptrim(coeffs)
    if not f:
        raise ValueError("the zero polynomial has every element as a root")
    F = f[0].field
    if not F.is_finite:
        raise UnsupportedFieldError("poly_roots needs a finite field")
    roots = []
    if f[0].is_zero():
        roots.append(F.zero)
        while f and f[0].is_zero():
            f = f[1:]
    if len(f) <= 1:
        return sorted(roots, key=FieldElement.key)
    f = _monic(f)
    q = F.order
    x = [F.zero, F.one]
    xq = _ppowmod(x, q, f)
    g = _pgcd(f, _psub(xq, x))
    rng = random.Random(0x5EED)
    stack = [g]
    while stack:
        g = stack.pop()
        d = len(g) - 1
        if d <= 0:
            continue
        if d == 1:
            roots.append(-g[0] / g[1])
            continue
        while True:
            delta = F.random_element(rng)
            if q % 2:
                t = _ppowmod([delta, F.one], (q - 1) // 2, g)
                t = _psub(t, [F.one])
            else:
                w = _pmod([F.zero, delta], g)
                t = w
                for _ in range(F.degree - 1):
                    w = _pmod(_pmul(w, w), g)
                    t = _psub(t, [-c for c in w])
            h = _pgcd(g, t)
            if 0 < len(h) - 1 < d:
                stack.append(h)
                stack.append(_pdivmod(g, h)[0])
                break
    return sorted(set(roots), key=FieldElement.key)


# -- irreducibility and field construction -----------------------------------


def _is_irreducible_mod_p(mod: tuple, p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    m = len(mod) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    Fp = _prime(p)
    f = [Fp(c) for c in mod]
    x = [Fp.zero, Fp.one]

    def x_pow_p_iter(times):
        w = x
        for _ in range(times):
            w = _ppowmod(w, p, f)
        return w

    if _psub(x_pow_p_iter(m), x):
        return False
    for r in prime_factors(m):
        w = x_pow_p_iter(m // r)
        if len(_pgcd(f, _psub(w, x))) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def _prime(p: int) -> FieldHandle:
    return FieldHandle(PRIME, p)


@lru_cache(maxsize=None)
def smallest_irreducible(p: int, m: int) -> tuple:
    """First monic irreducible of degree ``m`` over GF(p), lexicographic low-to-high."""
    for low in itertools.product(range(p), repeat=m):
        if low[0] == 0:
            continue
        mod = tuple(low) + (1,)
        if _is_irreducible_mod_p(mod, p):
            return mod
    raise AssertionError("unreachable: irreducibles exist in every degree")


def finite_field(p: int, m: int = 1) -> FieldHandle:
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime")
    if m == 1:
        return _prime(p)
    return FieldHandle(EXTENSION, p, smallest_irreducible(p, m))


def cyclotomic_polynomial(K: int) -> tuple:
    from sympy import Symbol
    from sympy.polys.specialpolys import cyclotomic_poly

    coeffs = cyclotomic_poly(K, Symbol("x"), polys=True).all_coeffs()
    return tuple(int(c) for c in reversed(coeffs))


def make_field(descriptor) -> FieldHandle:
    """Build a field from a descriptor dict (or return a handle unchanged).

    Accepted descriptors: ``{"kind": "rationals"}``, ``{"kind": "prime", "p": p}``,
    ``{"kind": "extension", "p": p, "modulus": [...]}`` or ``{"kind":
    "extension", "p": p, "degree": m}``, ``{"kind": "cyclotomic", "k": K}``.
    """
    if isinstance(descriptor, FieldHandle):
        return descriptor
    if not isinstance(descriptor, dict) or "kind" not in descriptor:
        raise ValidationError("field descriptor must be an object with a 'kind'")
    kind = descriptor["kind"]
    if kind == RATIONALS:
        return FieldHandle(RATIONALS)
    if kind == CYCLOTOMIC:
        K = int(descriptor.get("k", 0))
        if K < 1:
            raise ValidationError("cyclotomic field needs k >= 1")
        return FieldHandle(CYCLOTOMIC, 0, cyclotomic_polynomial(K), K)
    p = int(descriptor.get("p", 0))
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime", p=p)
    if kind == PRIME:
        return _prime(p)
    if kind == EXTENSION:
        if descriptor.get("modulus") is not None:
            mod = tuple(int(c) % p for c in descriptor["modulus"])
            if not mod or mod[-1] != 1:
                raise ValidationError("extension modulus must be monic (low-to-high)")
            if len(mod) == 2:
                return _prime(p)
            if not _is_irreducible_mod_p(mod, p):
                raise ReducibleModulusError(
                    f"modulus {list(mod)} is reducible over GF({p})", modulus=list(mod)
                )
            return FieldHandle(EXTENSION, p, mod)
        m = int(descriptor.get("degree", 1))
        if m < 1:
            raise ValidationError("extension degree must be >= 1")
        return finite_field(p, m)
    raise ValidationError(f"unknown field kind {kind!r}")


# -- roots of unity and k-th roots -------------------------------------------


def _check_coprime(F: FieldHandle, k: int):
    if k < 1:
        raise ValidationError("k must be positive")
    if F.p and k % F.p == 0:
        raise CharacteristicError(f"k={k} is divisible by the characteristic {F.p}")


def multiplicative_order_is(w: FieldElement, k: int) -> bool:
    if not (w**k).is_one():
        return False
    return all(not (w ** (k // r)).is_one() for r in prime_factors(k))


def primitive_kth_root(F: FieldHandle, k: int) -> FieldElement:
    """Deterministic primitive k-th root of unity in ``F``.

    Finite fields: the smallest (by coefficient vector) element of exact order
    k. Cyclotomic fields: the canonical power of the generator.
    """
    _check_coprime(F, k)
    if F.p:
        if (F.order - 1) % k:
            raise MissingRootsError(
                f"{F!r} has no primitive {k}-th root of unity", required=[(F.one, k)], k=k
            )
        cands = [w for w in kth_roots(F.one, k) if multiplicative_order_is(w, k)]
        return min(cands, key=FieldElement.key)
    if k == 1:
        return F.one
    if F.kind == RATIONALS or F.degree == 1:
        if F.kind == CYCLOTOMIC and F.k in (1, 2) and k == 2:
            return F(-1)
        if k == 2:
            return F(-1)
        raise MissingRootsError(f"{F!r} has no primitive {k}-th root of unity", k=k)
    K = F.k
    big = K if K % 2 == 0 else 2 * K
    if big % k:
        raise MissingRootsError(f"{F!r} has no primitive {k}-th root of unity", k=k)
    zeta_big = F.gen if K % 2 == 0 else -(F.gen ** ((K + 1) // 2))
    return zeta_big ** (big // k)


def _rational_kth_roots(a: Fraction, k: int) -> list[Fraction]:
    from sympy import integer_nthroot

    if a == 0:
        return [Fraction(0)]
    if a < 0 and k % 2 == 0:
        return []
    num, den = abs(a.numerator), a.denominator
    rn, en = integer_nthroot(num, k)
    rd, ed = integer_nthroot(den, k)
    if not (en and ed):
        return []
    r = Fraction(int(rn), int(rd))
    if a < 0:
        return [-r]
    return sorted({r, -r}) if k % 2 == 0 else [r]


def _cyclotomic_kth_roots(a: FieldElement, k: int) -> list[FieldElement]:
    import sympy as sp

    F = a.field
    dom = sp.QQ.algebraic_field(sp.exp(2 * sp.pi * sp.I / F.k))
    mod = [int(c) for c in reversed(dom.mod.to_list())]
    if tuple(mod) != F.modulus:
        raise UnsupportedFieldError("sympy generator minimal polynomial is not Phi_k")
    x = sp.Symbol("x")
    a_anp = dom([sp.QQ(c.numerator, c.denominator) for c in reversed(a.coeffs)])
    poly = sp.Poly.from_list([dom.one] + [dom.zero] * (k - 1) + [-a_anp], x, domain=dom)
    roots = []
    for fac, _mult in poly.factor_list()[1]:
        if fac.degree() != 1:
            continue
        lead, const = fac.rep.to_list()
        r = -(const / lead)
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(r.to_list())]
        root = F(coeffs)
        if root**k != a:
            raise AssertionError("number-field root failed exact verification")
        roots.append(root)
    return sorted(set(roots), key=FieldElement.key)


def kth_roots(a: FieldElement, k: int) -> list[FieldElement]:
    """All x in the field of ``a`` with x**k == a, sorted by coefficient vector."""
    F = a.field
    _check_coprime(F, k)
    if a.is_zero():
        return [F.zero]
    if k == 1:
        return [a]
    if F.p:
        return poly_roots([-a] + [F.zero] * (k - 1) + [F.one])
    if F.degree == 1:
        return [F(r) for r in _rational_kth_roots(a.coeffs[0], k)]
    return _cyclotomic_kth_roots(a, k)


def has_kth_root(a: FieldElement, k: int) -> bool:
    F = a.field
    if a.is_zero():
        return True
    if F.p:
        g = math.gcd(k, F.order - 1)
        return (a ** ((F.order - 1) // g)).is_one()
    return bool(kth_roots(a, k))


def extend_for_roots(F: FieldHandle, required, max_degree: int = MAX_EXTENSION_DEGREE) -> FieldHandle:
    """Smallest GF(p^m), m a multiple of deg F, holding the requested k-th roots.

    ``required`` is an iterable of ``(element, k)`` pairs. The resulting field
    also contains the k-th roots of unity for each requested k.
    """
    if not F.is_finite:
        raise UnsupportedFieldError(
            "root adjunction over characteristic-0 fields is not supported"
        )
    reqs = [(F(a), int(k)) for a, k in required]
    for a, k in reqs:
        _check_coprime(F, k)
    p, d = F.p, F.degree
    group = F.order - 1
    m = d
    while m <= max_degree:
        Q = p**m
        ok = True
        for a, k in reqs:
            if (Q - 1) % k:
                ok = False
                break
            if a.is_zero():
                continue
            e = ((Q - 1) // k) % group
            if not (a**e).is_one():
                ok = False
                break
        if ok:
            return F if m == d else finite_field(p, m)
        m += d
    raise MissingRootsError(
        f"no extension of {F!r} of degree <= {max_degree} contains the requested roots",
        required=reqs,
        max_degree=max_degree,
    )


@lru_cache(maxsize=None)
def _generator_image(source: FieldHandle, target: FieldHandle) -> FieldElement:
    lifted = [target(c) for c in source.modulus]
    roots = poly_roots(lifted)
    if not roots:
        raise FieldMismatchError(f"{source!r} does not embed into {target!r}")
    return roots[0]


def embed(x: FieldElement, target: FieldHandle) -> FieldElement:
    """Canonical image of ``x`` in a finite extension ``target``.

    For an extension source the generator goes to the smallest root of its
    modulus in ``target``, fixed once per (source, target) pair.
    """
    source = x.field
    if source == target:
        return x
    if source.degree == 1:
        if source.p != target.p:
            raise FieldMismatchError(f"{source!r} does not embed into {target!r}")
        return target(x.coeffs[0])
    if source.p != target.p or not source.p or target.degree % source.degree:
        raise FieldMismatchError(f"{source!r} does not embed into {target!r}")
    g = _generator_image(source, target)
    acc = target.zero
    power = target.one
    for c in x.coeffs:
        if c:
            acc = acc + power * c
        power = power * g
    return acc
