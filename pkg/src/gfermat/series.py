"""Truncated power series over an exact field.

A :class:`TruncatedSeries` stores ``c_0 ... c_{N-1}``; coefficients of
``z^N`` and beyond are unknown (not zero). Binary operations keep the smaller
truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CharacteristicError, FieldMismatchError, ValidationError
from .fields import FieldElement, FieldHandle


@dataclass(frozen=True)
class TruncatedSeries:
    field: FieldHandle
    coeffs: tuple
    # truncation order: exponents >= N are unknown
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError("truncation order must be >= 1")
        if len(self.coeffs) != self.N:
            raise ValidationError("coefficient count must equal the truncation order")

    @classmethod
    def of(cls, F: FieldHandle, coeffs, N: int | None = None) -> TruncatedSeries:
        """Series with the given leading coefficients, zero-extended up to ``N``."""
        vals = [F(c) for c in coeffs]
        if N is None:
            N = max(len(vals), 1)
        vals = vals[:N] + [F.zero] * (N - len(vals))
        return cls(F, tuple(vals), N)

    @classmethod
    def constant(cls, F: FieldHandle, c, N: int) -> TruncatedSeries:
        return cls.of(F, [c], N)

    @classmethod
    def variable(cls, F: FieldHandle, N: int) -> TruncatedSeries:
        return cls.of(F, [0, 1], N)

    def _check(self, other):
        if other.field != self.field:
            raise FieldMismatchError(f"mixed fields {self.field!r} and {other.field!r}")

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(self.field, other, self.N)

    def truncate(self, N: int) -> TruncatedSeries:
        if N > self.N:
            raise ValidationError("cannot raise the truncation order of a series")
        return TruncatedSeries(self.field, self.coeffs[:N], N)

    def __add__(self, other):
        other = self._lift(other)
        N = min(self.N, other.N)
        return TruncatedSeries(
            self.field, tuple(a + b for a, b in zip(self.coeffs[:N], other.coeffs[:N])), N
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.field, tuple(-c for c in self.coeffs), self.N)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            c = self.field(other)
            return TruncatedSeries(self.field, tuple(c * a for a in self.coeffs), self.N)
        other = self._lift(other)
        N = min(self.N, other.N)
        zero = self.field.zero
        out = [zero] * N
        a, b = self.coeffs, other.coeffs
        for i in range(N):
            ai = a[i]
            if ai:
                for j in range(N - i):
                    bj = b[j]
                    if bj:
                        out[i + j] = out[i + j] + ai * bj
        return TruncatedSeries(self.field, tuple(out), N)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValidationError("negative powers of series are not supported")
        result = TruncatedSeries.constant(self.field, 1, self.N)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def substitute_power(self, k: int) -> TruncatedSeries:
        """Replace z by z^k; the result is known up to (but excluding) z^(N*k)."""
        if k < 1:
            raise ValidationError("substitution exponent must be >= 1")
        N = self.N * k
        zero = self.field.zero
        out = [zero] * N
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return TruncatedSeries(self.field, tuple(out), N)

    def order(self) -> int | None:
        """Index of the first nonzero coefficient; ``None`` means order >= N."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def is_zero(self) -> bool:
        return self.order() is None

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        N = min(self.N, other.N)
        return self.field == other.field and self.coeffs[:N] == other.coeffs[:N]

    __hash__ = None

    def to_json(self) -> list:
        return [c.to_json() for c in self.coeffs]


def _require_small_index(F: FieldHandle, k: int, top: int):
    if F.p and k % F.p == 0:
        raise CharacteristicError(f"k={k} is not invertible in characteristic {F.p}")
    if F.p and F.p <= top:
        raise CharacteristicError(
            f"binomial coefficients of 1/{k} up to index {top} need p > {top}; got p={F.p}",
            p=F.p,
            index=top,
        )


def binom_kinv(F: FieldHandle, k: int, i: int) -> FieldElement:
    """Generalized binomial C(1/k, i) = (1 / (i! k^i)) * prod_{v=1}^{i-1} (1 - k v)."""
    if i < 0:
        raise ValidationError("binomial index must be non-negative")
    _require_small_index(F, k, i)
    num = F.one
    for v in range(1, i):
        num = num * F(1 - k * v)
    den = F.one
    for v in range(1, i + 1):
        den = den * F(v * k)
    return num / den


def kth_root_series(u: TruncatedSeries, k: int) -> TruncatedSeries:
    """The series s with s(0) = 1 and s^k = u, for u(0) = 1.

    Evaluates sum_i C(1/k, i) t^i with t = u - 1, which has order >= 1, so the
    sum is finite modulo z^N.
    """
    F = u.field
    if not u.coeffs[0].is_one():
        raise ValidationError("k-th root series needs constant term 1")
    N = u.N
    _require_small_index(F, k, N - 1)
    t = u - 1
    result = TruncatedSeries.constant(F, 1, N)
    power = TruncatedSeries.constant(F, 1, N)
    for i in range(1, N):
        power = power * t
        if power.is_zero():
            break
        result = result + power * binom_kinv(F, k, i)
    return result
