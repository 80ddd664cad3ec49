"""Conserved-charge eigenvalues as series in the matrix-ansatz parameter B.

The Bethe roots of the equivalent relation are written ``ubar = 1 - w``
with ``w = z / Delta`` and ``Delta^(L+2) = e^mu``. They are the roots near
the base points ``{1, 1+a, 1+b}`` of

    p(w) = G(w) - c w^(2L+2) (2 - w)^2,
    G(w) = (1-w)^L (1+a-w)(1+b-w)(1+a-a w)(1+b-b w),

with ``c = A Delta^(L+2)`` and ``B = -A (-Delta)^(L+2) = (-1)^(L+1) c``.
Sums of analytic functions over those roots are contour integrals of
``h p'/p``; expanding ``log p`` in powers of c and integrating by parts
turns the n-th term into ``(c^n / n) Res h'(w) f(w)^n`` with
``f = w^(2L+2) (2-w)^2 / G``. Residues are exact Laurent coefficients.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Literal

from .algebra import Poly, Series, as_rational, binomial, series_compose, series_reversion
from .errors import DomainError, PreconditionError


@dataclass(frozen=True)
class ChargeSeries:
    L: int
    r: int
    terms: Series
    provenance: Literal["closed-form", "residue-extraction"]


def i_r_closed(L: int, r: int, K: int) -> ChargeSeries:
    """Closed a = b = 0 series of the r-th charge, valid for 1 <= r <= 2L+1."""
    if L < 0:
        raise PreconditionError("L must be nonnegative")
    if not 1 <= r <= 2 * L + 1:
        raise DomainError(f"closed form holds for 1 <= r <= {2 * L + 1}, got r = {r}")
    if K < 1:
        raise PreconditionError("K must be >= 1")
    coeffs = [Fraction(0)]
    for k in range(1, K + 1):
        pref = Fraction(
            factorial(2 * k) * factorial(2 * k * (L + 1) - r - 1),
            k * factorial(k * (L + 2) - 1),
        )
        inner = sum(
            (Fraction(binomial(r - 1, 2 * p) * (-1) ** p,
                      factorial(k - p) * factorial(k * (L + 1) - r + p))
             for p in range((r - 1) // 2 + 1)
             if p <= k and k * (L + 1) - r + p >= 0),   # 1/n! = 0 for n < 0
            Fraction(0),
        )
        coeffs.append(-Fraction(r, 2) * pref * inner)
    return ChargeSeries(L, r, Series(coeffs), "closed-form")


def mu_closed(L: int, K: int) -> Series:
    """Closed a = b = 0 series of mu in powers of B."""
    if L < 0:
        raise PreconditionError("L must be nonnegative")
    if K < 1:
        raise PreconditionError("K must be >= 1")
    coeffs = [Fraction(0)]
    for k in range(1, K + 1):
        num = factorial(2 * k) * factorial(2 * k * (L + 1))
        den = 2 * k * factorial(k * (L + 1)) * factorial(k * (L + 2)) * factorial(k)
        coeffs.append(-Fraction(num, den))
    return Series(coeffs)


@dataclass(frozen=True)
class ResidueContext:
    """Pole data for the scaled Bethe polynomial at fixed (L, a, b).

    ``poles`` maps each distinct enclosed base point to ``(m, F)`` where
    ``G(w0 + t) = t^m * Gtilde(t)`` and ``F(t) = N(w0+t) / Gtilde(t)`` is
    kept as a truncated Taylor polynomial, N being w^(2L+2)(2-w)^2.
    """

    L: int
    a: Fraction
    b: Fraction
    K: int
    poles: tuple

    @property
    def c_to_b_sign(self) -> int:
        """``c = sign * B`` with ``sign = (-1)^(L+1)``."""
        return -1 if self.L % 2 == 0 else 1

    def to_b_series(self, c_coeffs: list) -> Series:
        s = self.c_to_b_sign
        return Series([v * s**n for n, v in enumerate(c_coeffs)])


def _taylor_inverse(p: Poly, order: int) -> Poly:
    if p[0] == 0:
        raise DomainError("cannot invert a series with zero constant term")
    inv = [1 / p[0]]
    for k in range(1, order + 1):
        acc = sum((p[i] * inv[k - i] for i in range(1, min(k, p.degree()) + 1)), Fraction(0))
        inv.append(-acc / p[0])
    return Poly(inv)


def make_context(L: int, a=0, b=0, K: int = 1) -> ResidueContext:
    a, b = as_rational(a), as_rational(b)
    if a == -1 or b == -1:
        raise DomainError("a = -1 or b = -1 puts a base point at the origin")
    if a * b == 1:
        # 1+a meets the excluded zero (1+b)/b of G; the residue sum can no
        # longer tell the Bethe root from its excluded partner
        raise DomainError("a*b = 1: enclosed and excluded base points coincide; use the T-Q route")
    if L < 0 or K < 1:
        raise PreconditionError("need L >= 0 and K >= 1")
    G = (Poly((1, -1)) ** L) * Poly((1 + a, -1)) * Poly((1 + b, -1)) \
        * Poly((1 + a, -a)) * Poly((1 + b, -b))
    N = (Poly.monomial(2 * L + 2)) * (Poly((2, -1)) ** 2)
    points = []
    for w0 in (Fraction(1), 1 + a, 1 + b):
        if w0 not in points:
            points.append(w0)
    poles = []
    for w0 in points:
        Gs = G.shift(w0)
        m = next(k for k in range(len(Gs)) if Gs[k] != 0)
        Gt = Poly(Gs.coeffs[m:])
        depth = K * m   # highest Laurent index ever needed
        F = (N.shift(w0) * _taylor_inverse(Gt, depth)).truncate(depth)
        poles.append((w0, m, F))
    return ResidueContext(L, a, b, K, tuple(poles))


def _residue_sum(ctx: ResidueContext, hprime) -> list[Fraction]:
    """``[0, s_1, ..., s_K]`` with ``s_n = (1/n) sum_poles Res h'(w) f(w)^n``.

    ``hprime(w0, depth)`` returns the Taylor polynomial of h' at w0.
    """
    out = [Fraction(0)] * (ctx.K + 1)
    for w0, m, F in ctx.poles:
        if m == 0:
            continue
        depth = ctx.K * m
        hp = hprime(w0, depth)
        power = Poly((1,))
        for n in range(1, ctx.K + 1):
            power = (power * F).truncate(depth)
            need = n * m - 1
            # coefficient of t^(nm-1) in hp * F^n
            res = sum((hp[i] * power[need - i] for i in range(need + 1)), Fraction(0))
            out[n] += res / n
    return out


def _power_taylor(w0: Fraction, exponent: int, depth: int) -> Poly:
    """Taylor polynomial of ``w^exponent`` at w0 (any integer exponent)."""
    coeffs = []
    fall = Fraction(1)
    for k in range(depth + 1):
        coeffs.append(fall * w0 ** (exponent - k) / factorial(k))
        fall *= exponent - k
    return Poly(coeffs)


def residue_series(ctx: ResidueContext, r: int, K: int | None = None) -> ChargeSeries:
    """r-th charge eigenvalue in powers of B by exact residue extraction."""
    K = ctx.K if K is None else K
    if K != ctx.K:
        ctx = make_context(ctx.L, ctx.a, ctx.b, K)
    if r < 1:
        raise PreconditionError("r must be >= 1")
    if r > 2 * ctx.L + 1:
        warnings.warn(
            f"r = {r} > 2L+1: the root-sum representation of the charge is not established here",
            stacklevel=2,
        )
    # h(w) = (w^-r - 1)/2, h'(w) = -(r/2) w^(-r-1)
    def hprime(w0, depth):
        return _power_taylor(w0, -r - 1, depth) * Fraction(-r, 2)

    return ChargeSeries(ctx.L, r, ctx.to_b_series(_residue_sum(ctx, hprime)), "residue-extraction")


def mu_constraint_series(ctx: ResidueContext, K: int | None = None) -> Series:
    """mu as a series in B from the product constraint on the Bethe roots.

    ``prod z_k = (1+a)(1+b)`` together with ``sum ln z_k = mu + sum ln w_k``
    and ``sum ln w_k = ln((1+a)(1+b)) + residue terms`` gives
    ``mu = -(residue terms of ln w)``.
    """
    K = ctx.K if K is None else K
    if K != ctx.K:
        ctx = make_context(ctx.L, ctx.a, ctx.b, K)

    def hprime(w0, depth):
        return _power_taylor(w0, -1, depth)

    return -ctx.to_b_series(_residue_sum(ctx, hprime))


def lambda_mu_composed(L: int, a=0, b=0, order: int = 4, r: int = 1) -> Series:
    """Charge eigenvalue as a mu-series by reverting mu(B).

    Uses the closed forms when a = b = 0 and r <= 2L+1, residue extraction
    otherwise.
    """
    a, b = as_rational(a), as_rational(b)
    if order < 1:
        raise PreconditionError("order must be >= 1")
    if a == 0 and b == 0 and r <= 2 * L + 1:
        mu_b = mu_closed(L, order)
        charge = i_r_closed(L, r, order).terms
    else:
        ctx = make_context(L, a, b, order)
        mu_b = mu_constraint_series(ctx)
        charge = residue_series(ctx, r).terms
    b_of_mu = series_reversion(mu_b)
    return series_compose(charge, b_of_mu)
