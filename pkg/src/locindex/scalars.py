"""Coefficient fields.

Two realizations are used throughout the package:

* ``"rational"`` -- exact arithmetic. Real rationals are plain
  :class:`fractions.Fraction`; anything involving ``i`` or roots of unity is a
  :class:`Cyclotomic`, an element of ``Q(zeta_n)`` stored in the power basis.
  Gaussian rationals are the special case ``n = 4``.
* ``"float"`` -- double precision complex numbers in numpy arrays.

Exact matrices are numpy arrays of ``dtype=object``.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

from .errors import ValidationError

SCALAR_KINDS = ("rational", "float")


def check_kind(kind):
    if kind not in SCALAR_KINDS:
        raise ValidationError(f"unknown scalar kind {kind!r}; expected one of {SCALAR_KINDS}")
    return kind


# --------------------------------------------------------------------------
# cyclotomic fields

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _poly_exact_div(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1] // lead
        out[k] = c
        for i, di in enumerate(den):
            num[k + i] -= c * di
    assert not any(num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def euler_phi(n):
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _units(n):
    return tuple(k for k in range(1, n + 1) if math.gcd(k, n) == 1)


def _reduce(poly, n):
    """Reduce a coefficient list modulo Phi_n (in place on a copy)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    poly = list(poly)
    for k in range(len(poly) - 1, deg - 1, -1):
        c = poly[k]
        if c:
            base = k - deg
            for i in range(deg):
                if phi[i]:
                    poly[base + i] -= c * phi[i]
        poly[k] = 0
    poly = poly[:deg] + [Fraction(0)] * max(0, deg - len(poly))
    return tuple(Fraction(c) for c in poly)


def _make(n, coeffs):
    """Build a field element, demoting to Fraction when it is rational."""
    if all(c == 0 for c in coeffs[1:]):
        return Fraction(coeffs[0]) if coeffs else Fraction(0)
    return Cyclotomic._raw(n, coeffs)


class Cyclotomic:
    """Exact element of ``Q(zeta_n)``, ``zeta_n = exp(2*pi*i/n)``.

    Arithmetic with ints, Fractions and elements of other cyclotomic fields is
    supported (operands are lifted to the compositum). Results that happen to
    be rational come back as :class:`Fraction`.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs):
        self.order = int(order)
        self.coeffs = _reduce([Fraction(c) for c in coeffs], self.order)

    @classmethod
    def _raw(cls, order, coeffs):
        obj = object.__new__(cls)
        obj.order = order
        obj.coeffs = tuple(coeffs)
        return obj

    # -- construction helpers
    @staticmethod
    def root_of_unity(n, k=1):
        n = int(n)
        k %= n
        if n <= 2 or (2 * k) % n == 0:
            return Fraction(1 if k == 0 else -1)
        poly = [Fraction(0)] * (k + 1)
        poly[k] = Fraction(1)
        return _make(n, _reduce(poly, n))

    # -- field embedding
    def lift(self, m):
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError(f"Q(zeta_{self.order}) does not embed in Q(zeta_{m})")
        step = m // self.order
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for j, c in enumerate(self.coeffs):
            poly[j * step] = c
        return Cyclotomic._raw(m, _reduce(poly, m))

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self, other
            m = math.lcm(self.order, other.order)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            coeffs = [Fraction(other)] + [Fraction(0)] * (len(self.coeffs) - 1)
            return self, Cyclotomic._raw(self.order, tuple(coeffs))
        return None, None

    # -- arithmetic
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _make(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return _make(self.order, tuple(-c for c in self.coeffs))

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _make(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Fraction(0)
            return _make(self.order, tuple(c * other for c in self.coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return _make(a.order, _reduce(prod, a.order))

    __rmul__ = __mul__

    def galois(self, k):
        """Automorphism zeta -> zeta**k (k coprime to the order)."""
        n = self.order
        poly = [Fraction(0)] * n
        for j, c in enumerate(self.coeffs):
            poly[(j * k) % n] += c
        return _make(n, _reduce(poly, n))

    def conjugate(self):
        return self.galois(-1)

    def norm(self):
        prod = Fraction(1)
        for k in _units(self.order):
            prod = prod * self.galois(k)
        return Fraction(prod)

    def inverse(self):
        others = Fraction(1)
        for k in _units(self.order):
            if k != 1:
                others = others * self.galois(k)
        nrm = self * others
        if not isinstance(nrm, Fraction):  # pragma: no cover - field theory guarantees this
            raise ArithmeticError("norm is not rational")
        if nrm == 0:
            raise ZeroDivisionError("inverse of zero")
        return others * (1 / nrm) if isinstance(others, Cyclotomic) else Fraction(others) / nrm

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = Fraction(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- comparison / conversion
    def __eq__(self, other):
        if isinstance(other, float):
            return False
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        z = complex(self)
        return hash((round(z.real, 9), round(z.imag, 9)))

    def __bool__(self):
        return any(self.coeffs)

    def __complex__(self):
        n = self.order
        return sum((complex(c) * cmath.exp(2j * math.pi * j / n) for j, c in enumerate(self.coeffs)), 0j)

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z{self.order}^{j}")
        return " + ".join(terms) if terms else "0"


# --------------------------------------------------------------------------
# generic helpers

def gaussian(re, im=0):
    """Exact Gaussian rational ``re + i*im``."""
    re, im = Fraction(re), Fraction(im)
    if im == 0:
        return re
    return Cyclotomic(4, [re, im])


def parse_exact(value):
    """Parse a JSON-ish scalar: int, "p/q" string, float (rationalized), or [re, im]."""
    if isinstance(value, (Fraction, Cyclotomic)):
        return value
    if isinstance(value, bool):
        raise ValidationError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise ValidationError(f"cannot parse scalar {value!r}") from exc
    if isinstance(value, complex):
        return gaussian(parse_exact(value.real), parse_exact(value.imag))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return gaussian(parse_exact(value[0]), parse_exact(value[1]))
    raise ValidationError(f"cannot parse scalar {value!r}")


def to_complex(x):
    return complex(x)


def conj(x):
    if isinstance(x, Cyclotomic):
        return x.conjugate()
    if isinstance(x, (int, Fraction)):
        return x
    return np.conj(x)


def is_zero(x):
    if isinstance(x, (Fraction, int, Cyclotomic)):
        return not x
    return x == 0


def exact_zeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def exact_eye(n):
    out = exact_zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def as_exact_array(data):
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        flat[i] = parse_exact(v)
    return arr


def zeros(shape, kind):
    return exact_zeros(shape) if kind == "rational" else np.zeros(shape, dtype=complex)


def eye(n, kind):
    return exact_eye(n) if kind == "rational" else np.eye(n, dtype=complex)


def convert(arr, kind):
    """Convert an exact array to ``kind`` (float conversion only goes one way)."""
    if kind == "rational":
        if arr.dtype != object:
            raise ValidationError("cannot convert a floating array to exact scalars")
        return arr
    if arr.dtype == object:
        return np.vectorize(complex, otypes=[complex])(arr) if arr.size else np.zeros(arr.shape, complex)
    return arr.astype(complex)


def array_is_zero(arr, kind, atol=1e-9):
    if kind == "rational":
        return all(is_zero(v) for v in np.asarray(arr, dtype=object).reshape(-1))
    return bool(np.all(np.abs(arr) <= atol))


def arrays_equal(a, b, kind, atol=1e-9):
    if a.shape != b.shape:
        return False
    return array_is_zero(a - b, kind, atol)


def max_abs(arr):
    if arr.size == 0:
        return 0.0
    return float(max(abs(complex(v)) for v in np.asarray(arr).reshape(-1)))


def format_scalar(x):
    """Canonical JSON form: exact values as strings, floats via repr."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    if isinstance(x, Cyclotomic):
        return repr(x)
    z = complex(x)
    if z.imag == 0:
        return float(repr(z.real)) if math.isfinite(z.real) else str(z.real)
    return [float(repr(z.real)), float(repr(z.imag))]
