"""Exact arithmetic kernel: rationals, dense polynomials and truncated series.

Rationals are :class:`fractions.Fraction`. :class:`Poly` is a dense
univariate polynomial with rational coefficients. :class:`Series` is a
truncated power series whose coefficients are either rationals or
:class:`Poly` instances, which covers both the fugacity expansions
(coefficients are polynomials in the spectral parameter) and the
expansions in the matrix-ansatz parameter (rational coefficients).

Everything here is immutable and exact; no floats are involved.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

from .errors import (
    DomainError,
    NonInvertibleSeriesError,
    PreconditionError,
    SolverInconsistencyError,
)

Rational = Fraction
Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats and decimal strings are refused so exactness cannot leak.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise PreconditionError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise PreconditionError(f"rational must be given as 'p/q', got {value!r}")
        num, sep, den = text.partition("/")
        try:
            p = int(num)
            q = int(den) if sep else 1
        except ValueError:
            raise PreconditionError(f"rational must be given as 'p/q', got {value!r}") from None
        if q == 0:
            raise PreconditionError(f"zero denominator in {value!r}")
        return Fraction(p, q)
    raise PreconditionError(f"not a rational: {value!r}")


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


class Poly:
    """Dense polynomial in one variable with Fraction coefficients.

    ``coeffs[k]`` is the coefficient of ``x**k``; trailing zeros are
    trimmed so the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        # coeffs already Fractions; only trims
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def constant(cls, value) -> "Poly":
        return cls((value,))

    @classmethod
    def monomial(cls, k: int, value=1) -> "Poly":
        return cls([0] * k + [value])

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return _ZERO

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*x")
            else:
                terms.append(f"{c}*x^{k}")
        return " + ".join(terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, v in enumerate(b):
            out[k] += v
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-v for v in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly._raw([])
            return Poly._raw([v * other for v in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([])
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("polynomial division by zero")
            inv = 1 / Fraction(other)
            return Poly._raw([v * inv for v in self.coeffs])
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative polynomial power")
        result = Poly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, point):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def shift(self, c) -> "Poly":
        """Return ``p(x + c)`` (Taylor coefficients at ``c``)."""
        c = as_rational(c)
        out = list(self.coeffs)
        n = len(out)
        # repeated synthetic division
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                out[j] += c * out[j + 1]
        return Poly._raw(out)

    def truncate(self, n: int) -> "Poly":
        """Drop every term of degree above ``n``."""
        return Poly._raw(list(self.coeffs[: n + 1]))

    def mul_xk(self, k: int) -> "Poly":
        if not self.coeffs:
            return self
        return Poly._raw([_ZERO] * k + list(self.coeffs))

    def reverse(self, m: int) -> "Poly":
        return poly_reverse(self, m)

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self / self.coeffs[-1]

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree()
        lead = other.coeffs[-1]
        quot = [_ZERO] * max(0, len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            coef = rem[k] / lead
            if coef == 0:
                continue
            quot[k - dq] = coef
            for j, v in enumerate(other.coeffs):
                rem[k - dq + j] -= coef * v
        return Poly._raw(quot), Poly._raw(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]


def poly_reverse(p: Poly, m: int) -> Poly:
    """``x**m * p(1/x)``, zero padded so that the result has degree <= m."""
    if m < 0:
        raise PreconditionError("reversal length must be nonnegative")
    if p.degree() > m:
        raise PreconditionError(f"degree {p.degree()} exceeds reversal length {m}")
    c = list(p.coeffs) + [_ZERO] * (m + 1 - len(p.coeffs))
    return Poly._raw(c[::-1])


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor over the rationals."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, (a % b).monic()
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: factors ``f_i`` (monic, squarefree, coprime) with
    ``p = lead * prod f_i**i``. Returns ``[(f_i, i), ...]`` for nonconstant f_i.
    """
    if p.degree() < 1:
        return []
    out = []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


class Series:
    """Truncated power series ``sum_{k<=order} coeffs[k] * t**k``.

    Coefficients are Fractions or :class:`Poly`. Binary operations
    truncate to the smaller order and never extend silently.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if len(coeffs) == 0:
            raise PreconditionError("a series needs at least one coefficient")
        self.coeffs = tuple(
            c if isinstance(c, Poly) else as_rational(c) for c in coeffs
        )

    @classmethod
    def _raw(cls, coeffs) -> "Series":
        obj = cls.__new__(cls)
        obj.coeffs = tuple(coeffs)
        return obj

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int, like=_ZERO) -> "Series":
        z = like * 0
        return cls._raw([z] * (order + 1))

    @classmethod
    def one(cls, order: int, like=_ZERO) -> "Series":
        z = like * 0
        return cls._raw([z + 1] + [z] * order)

    @classmethod
    def variable(cls, order: int) -> "Series":
        c = [_ZERO] * (order + 1)
        if order >= 1:
            c[1] = _ONE
        return cls._raw(c)

    @classmethod
    def exp_scaled(cls, order: int, scale=1) -> "Series":
        """Formal expansion of ``exp(scale * t)``."""
        s = as_rational(scale)
        return cls._raw([s**k / math.factorial(k) for k in range(order + 1)])

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"Series({list(self.coeffs)!r})"

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise PreconditionError("cannot extend a truncated series")
        return Series._raw(self.coeffs[: order + 1])

    def map(self, fn) -> "Series":
        return Series._raw([fn(c) for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, Series):
            n = min(len(self), len(other))
            return Series._raw([self.coeffs[k] + other.coeffs[k] for k in range(n)])
        if isinstance(other, (int, Fraction, Poly)):
            return Series._raw((self.coeffs[0] + other,) + self.coeffs[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Series._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            n = min(len(self), len(other))
            a, b = self.coeffs, other.coeffs
            out = []
            for k in range(n):
                acc = a[0] * b[k]
                for i in range(1, k + 1):
                    acc = acc + a[i] * b[k - i]
                out.append(acc)
            return Series._raw(out)
        if isinstance(other, (int, Fraction, Poly)):
            return Series._raw([c * other for c in self.coeffs])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            inv = 1 / Fraction(other)
            return Series._raw([c * inv for c in self.coeffs])
        if isinstance(other, Series):
            return self * series_inverse(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return series_inverse(self) ** (-n)
        result = Series.one(self.order, self.coeffs[0])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "Series":
        """Derivative in the series variable; order drops by one."""
        if self.order == 0:
            raise PreconditionError("derivative of an order-0 series")
        return Series._raw([k * self.coeffs[k] for k in range(1, len(self))])

    def __call__(self, point):
        """Evaluate the truncated sum at a scalar point."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc


MuSeries = Series
BSeries = Series


def _is_one(c) -> bool:
    return c == 1


def _is_zero(c) -> bool:
    return c == 0


def series_inverse(s: Series) -> Series:
    """Multiplicative inverse; the constant term must be an invertible rational."""
    c0 = s.coeffs[0]
    if isinstance(c0, Poly):
        if c0.degree() != 0:
            raise DomainError("constant term must be a nonzero rational")
        c0 = c0[0]
    if c0 == 0:
        raise DomainError("series with zero constant term is not invertible")
    inv0 = 1 / c0
    out = [s.coeffs[0] * 0 + inv0]
    for k in range(1, len(s)):
        acc = s.coeffs[1] * out[k - 1]
        for i in range(2, k + 1):
            acc = acc + s.coeffs[i] * out[k - i]
        out.append(-acc * inv0)
    return Series._raw(out)


def series_log(s: Series) -> Series:
    """Truncated logarithm of a series with constant term 1."""
    if not _is_one(s.coeffs[0]):
        raise DomainError("series_log needs constant term 1")
    a = s.coeffs
    out = [a[0] * 0]
    for n in range(1, len(a)):
        acc = a[n] * n
        for k in range(1, n):
            acc = acc - out[k] * a[n - k] * k
        out.append(acc / n)
    return Series._raw(out)


def series_exp(s: Series) -> Series:
    """Truncated exponential of a series with zero constant term."""
    if not _is_zero(s.coeffs[0]):
        raise DomainError("series_exp needs constant term 0")
    a = s.coeffs
    out = [a[0] * 0 + 1]
    for n in range(1, len(a)):
        acc = a[1] * out[n - 1]
        for k in range(2, n + 1):
            acc = acc + a[k] * out[n - k] * k
        out.append(acc / n)
    return Series._raw(out)


def series_compose(outer: Series, inner: Series) -> Series:
    """``outer(inner(t))``; inner must have zero constant term."""
    if not _is_zero(inner.coeffs[0]):
        raise DomainError("inner series must have zero constant term")
    order = min(outer.order, inner.order)
    inner = inner.truncate(order)
    result = Series.zero(order, inner.coeffs[0]) + outer.coeffs[order]
    for k in range(order - 1, -1, -1):
        result = result * inner + outer.coeffs[k]
    return result


def series_reversion(s: Series) -> Series:
    """Compositional inverse by Lagrange inversion.

    ``[y^n] t = (1/n) [w^(n-1)] (w / s(w))^n``.
    """
    if s.coeffs[0] != 0:
        raise NonInvertibleSeriesError("series to revert must have zero constant term")
    K = s.order
    if K < 1:
        raise NonInvertibleSeriesError("series to revert needs order >= 1")
    if s.coeffs[1] == 0:
        raise NonInvertibleSeriesError("zero linear coefficient; series is not invertible")
    # s(w)/w, truncated to order K-1
    phi = series_inverse(Series._raw(s.coeffs[1:]))
    out = [_ZERO]
    power = Series.one(K - 1)
    for n in range(1, K + 1):
        power = power * phi
        out.append(power.coeffs[n - 1] / n)
    return Series._raw(out)


def solve_exact(columns: Sequence[Poly], rhs: Poly, n_equations: int, what: str = "system"):
    """Solve ``sum_i x_i * columns[i] == rhs`` by coefficient matching.

    Equations are the coefficients of ``t**0 .. t**(n_equations-1)``. The
    system may be overdetermined; it must have full column rank and every
    leftover equation must vanish, otherwise SolverInconsistencyError.
    """
    n = len(columns)
    rows = [
        [col[e] for col in columns] + [rhs[e]]
        for e in range(n_equations)
    ]
    for col in columns:
        if col.degree() >= n_equations:
            raise PreconditionError(f"{what}: column degree exceeds equation count")
    if rhs.degree() >= n_equations:
        raise PreconditionError(f"{what}: right-hand side degree exceeds equation count")
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            raise SolverInconsistencyError(f"{what}: rank deficient at unknown {c}")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                ri = rows[i]
                rr = rows[r]
                rows[i] = [ri[k] - f * rr[k] for k in range(n + 1)]
        pivots.append(r)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][n] != 0:
            raise SolverInconsistencyError(
                f"{what}: leftover equation {i} has residual {rows[i][n]}"
            )
    return [rows[i][n] for i in range(n)]


# JSON encoding: Fraction -> "p/q", Poly -> list, Series -> list of those.

def encode_rational(q) -> str:
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def encode(obj):
    if isinstance(obj, (Fraction, int)) and not isinstance(obj, bool):
        return encode_rational(obj)
    if isinstance(obj, Poly):
        return [encode_rational(c) for c in obj.coeffs]
    if isinstance(obj, Series):
        return [encode(c) for c in obj.coeffs]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode_rational(text) -> Fraction:
    return as_rational(text)


def decode_poly(data) -> Poly:
    return Poly(as_rational(v) for v in data)


def decode_series(data) -> Series:
    return Series(
        [decode_poly(c) if isinstance(c, list) else as_rational(c) for c in data]
    )
