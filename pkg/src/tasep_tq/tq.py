"""Perturbative solution of the two T-Q relations of the open TASEP.

Both relations are multiplied through by ``D(x) = (1 + a x)(1 + b x)`` so
that every unknown is a polynomial. The eigenvalue is carried as its
numerator ``S(x) = D(x) Lambda(x)``, expanded in the fugacity ``mu``, and
``e^{+-mu}`` enter only through their formal expansions.

Original relation::

    S Q = x^(L+1) (x + b)(1 + a x) rev_L(Q) - (x - 1)^(2L) (x^2 - 1)(a x + e^mu)

Equivalent relation::

    S Qbar = D x^L (x + a)(x + b) e^(-mu) + Qbar(0) (1 - x)^(2L+2) (x + 1)^2 e^mu

At every order the unknown corrections enter linearly with a fixed
operator, and the overdetermined system is solved exactly with a
consistency check on the leftover equations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .algebra import (
    Poly,
    Series,
    as_rational,
    binomial,
    poly_reverse,
    series_log,
    solve_exact,
)
from .errors import DomainError, OrderError, PreconditionError
from .operators import ModelParams

Flavor = Literal["original", "equivalent"]


@dataclass(frozen=True)
class TQSolution:
    """Order-by-order solution of one T-Q relation.

    ``lam[j]`` is the numerator ``S^(j)`` of the mu^j coefficient of
    Lambda(x); the denominator is ``params.denominator()``. ``q[j]`` is the
    mu^j coefficient of Q (original) or Qbar (equivalent).
    """

    params: ModelParams
    order: int
    lam: Series
    q: Series
    flavor: Flavor

    @property
    def denominator(self) -> Poly:
        return self.params.denominator()

    def lambda_at(self, x, mu):
        """Truncated Lambda(x) at numeric ``mu`` (exact if both are rational)."""
        d = self.denominator(x)
        return sum(self.lam[j](x) * mu**j for j in range(self.order + 1)) / d

    def q_at_mu(self, mu) -> list:
        """Coefficients of the truncated Q polynomial at numeric ``mu``."""
        deg = max(p.degree() for p in self.q)
        return [sum(self.q[j][k] * mu**j for j in range(self.order + 1)) for k in range(deg + 1)]


def q0_closed(L: int, b) -> Poly:
    """Closed form of the mu = 0 Q-polynomial, normalised to Q(0) = 1."""
    if L < 0:
        raise PreconditionError("L must be nonnegative")
    b = as_rational(b)
    coeffs = []
    for k in range(L + 1):
        inner = sum(
            (b ** (k - p) * Fraction(L - p + 1, 2 * L - p + 2) * binomial(2 * L + 1, p)
             for p in range(k + 1)),
            Fraction(0),
        )
        coeffs.append(2 * (-1) ** k * inner)
    return Poly(coeffs)


def _inv_factorial(j: int) -> Fraction:
    return Fraction(1, math.factorial(j))


def solve_tq_original(params: ModelParams, order: int) -> TQSolution:
    L, a, b = params.L, params.a, params.b
    if L < 1:
        raise PreconditionError("original T-Q relation needs L >= 1")
    if order < 0:
        raise OrderError("order must be >= 0")
    D = params.denominator()
    twist = Poly.monomial(L + 1) * Poly((b, 1)) * Poly((1, a))
    bulk = (Poly((-1, 1)) ** (2 * L)) * Poly((-1, 0, 1))
    n_eq = 2 * L + 4

    # order 0: Lambda = 1, Q(0) = 1, unknowns q_1..q_L
    def q_column(k):
        return D.mul_xk(k) - twist * poly_reverse(Poly.monomial(k), L)

    cols = [q_column(k) for k in range(1, L + 1)]
    rhs0 = -(bulk * Poly((1, a))) - q_column(0)
    sol = solve_exact(cols, rhs0, n_eq, "original T-Q order 0")
    q0 = Poly([1] + sol)
    S = [D]
    Q = [q0]

    cols = [q_column(k) for k in range(1, L + 1)] + [q0.mul_xk(k) for k in range(1, L + 3)]
    for j in range(1, order + 1):
        ell0 = _inv_factorial(j)
        rhs = -(bulk * ell0) - q0 * ell0
        for i in range(1, j):
            rhs = rhs - S[i] * Q[j - i]
        sol = solve_exact(cols, rhs, n_eq, f"original T-Q order {j}")
        Q.append(Poly([0] + sol[:L]))
        S.append(Poly([ell0] + sol[L:]))
    return TQSolution(params, order, Series(S), Series(Q), "original")


def solve_tq_equivalent(params: ModelParams, order: int) -> TQSolution:
    L, a, b = params.L, params.a, params.b
    if L < 0:
        raise PreconditionError("L must be nonnegative")
    if L == 0 and a * b != 0:
        raise DomainError("equivalent T-Q relation at L = 0 is unsupported when a*b != 0")
    if order < 0:
        raise OrderError("order must be >= 0")
    D = params.denominator()
    top = Poly.monomial(L) * Poly((a, 1)) * Poly((b, 1))   # x^L (x+a)(x+b)
    boundary = (Poly((1, -1)) ** (2 * L + 2)) * (Poly((1, 1)) ** 2)
    n_eq = 2 * L + 5
    qb0 = top
    S = [D]
    Q = [qb0]
    # order-0 consistency: D*top == D*top + qb0(0)*boundary needs qb0(0) == 0
    if qb0[0] != 0:
        raise DomainError("order-0 equivalent relation is inconsistent")

    cols = [D.mul_xk(k) - (boundary if k == 0 else 0) for k in range(0, L + 2)]
    cols += [qb0.mul_xk(k) for k in range(1, L + 3)]
    for j in range(1, order + 1):
        ell0 = _inv_factorial(j)
        rhs = D * top * Fraction((-1) ** j, math.factorial(j)) - qb0 * ell0
        for i in range(0, j):
            if Q[i][0] != 0:
                rhs = rhs + boundary * (Q[i][0] * _inv_factorial(j - i))
        for i in range(1, j):
            rhs = rhs - S[i] * Q[j - i]
        sol = solve_exact(cols, rhs, n_eq, f"equivalent T-Q order {j}")
        Q.append(Poly(sol[: L + 2]))
        S.append(Poly([ell0] + sol[L + 2 :]))
    return TQSolution(params, order, Series(S), Series(Q), "equivalent")


@dataclass(frozen=True)
class EquivalenceReport:
    agreement: bool
    order: int
    first_discrepancy: tuple[int, int] | None  # (mu order, power of x)

    def to_json(self) -> dict:
        return {
            "agreement": self.agreement,
            "order": self.order,
            "first_discrepancy": (
                None if self.first_discrepancy is None
                else {"mu_order": self.first_discrepancy[0], "x_power": self.first_discrepancy[1]}
            ),
        }


def compare_lambda(s1: TQSolution, s2: TQSolution) -> EquivalenceReport:
    n = min(s1.order, s2.order)
    for j in range(n + 1):
        p, q = s1.lam[j], s2.lam[j]
        if p != q:
            k = next(k for k in range(max(len(p), len(q))) if p[k] != q[k])
            return EquivalenceReport(False, n, (j, k))
    return EquivalenceReport(True, n, None)


def check_equivalence(params: ModelParams, order: int) -> EquivalenceReport:
    return compare_lambda(solve_tq_original(params, order), solve_tq_equivalent(params, order))


def lambda_of_mu(sol: TQSolution) -> Series:
    """``lambda(mu) = -1/2 dLambda/dx`` at x = 1, as an exact mu-series."""
    D = sol.denominator
    d1, dd1 = D(1), D.derivative()(1)
    out = []
    for S in sol.lam:
        val = (S.derivative()(1) * d1 - S(1) * dd1) / (d1 * d1)
        out.append(-val / 2)
    return Series(out)


def lambda_taylor_at_one(sol: TQSolution, r: int) -> Series:
    """mu-series whose coefficients are Taylor polynomials (in h = x - 1,
    truncated at h^r) of Lambda(1 + h)."""
    D = sol.denominator.shift(1)
    inv = [1 / D[0]]
    for k in range(1, r + 1):
        acc = sum((D[i] * inv[k - i] for i in range(1, min(k, D.degree()) + 1)), Fraction(0))
        inv.append(-acc / D[0])
    inv_poly = Poly(inv)
    return Series([(S.shift(1) * inv_poly).truncate(r) for S in sol.lam])


def charge_from_lambda(sol: TQSolution, r: int) -> Series:
    """Eigenvalue of the r-th conserved charge as an exact mu-series."""
    if r < 1:
        raise OrderError("charge index must be >= 1")
    log = series_log(lambda_taylor_at_one(sol, r))
    factor = Fraction((-1) ** r * r, 2)   # (-1)^r/(2 (r-1)!) * r!
    return Series([c[r] * factor for c in log])


# ---------------------------------------------------------------------------
# Bethe equations

@dataclass(frozen=True)
class BetheRootSet:
    roots: tuple[complex, ...]
    flavor: Flavor
    residuals: tuple[float, ...] = ()

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else float("nan")


def _log_sum(factors: Sequence[complex]) -> complex:
    total = 0j
    for f in factors:
        if f == 0:
            raise ZeroDivisionError
        total += cmath.log(f)
    return total


def _wrapped(z: complex) -> float:
    imag = (z.imag + math.pi) % (2 * math.pi) - math.pi
    return abs(complex(z.real, imag))


def bethe_residual(roots: BetheRootSet, params: ModelParams, mu: float) -> BetheRootSet:
    """Per-root defect ``|log LHS - log RHS|`` (phase wrapped) of the Bethe
    equations; ``inf`` flags a root where a factor vanishes exactly."""
    us = [complex(u) for u in roots.roots]
    if not us:
        raise PreconditionError("no roots given")
    L, a, b = params.L, float(params.a), float(params.b)
    emu = math.exp(mu)
    out = []
    if roots.flavor == "original":
        if len(us) != L:
            raise PreconditionError(f"original flavor needs {L} roots, got {len(us)}")
        for u in us:
            try:
                lhs = _log_sum([a * u + emu] + [u - 1] * (2 * L) + [u * u - 1])
                rhs = _log_sum([u] * (L + 1) + [a * u + 1, u + b] + [u - 1 / v for v in us])
                out.append(_wrapped(lhs - rhs))
            except ZeroDivisionError:
                out.append(math.inf)
    else:
        if len(us) != L + 2:
            raise PreconditionError(f"equivalent flavor needs {L + 2} roots, got {len(us)}")
        sign = -1.0 if L % 2 == 0 else 1.0   # (-1)^(L+1)
        for u in us:
            try:
                lhs = _log_sum([u] * L + [u + b, u + a, a * u + 1, b * u + 1])
                rhs = _log_sum(
                    [complex(sign), complex(math.exp(2 * mu))]
                    + [1 - u] * (2 * L + 2) + [u + 1] * 2 + list(us)
                )
                out.append(_wrapped(lhs - rhs))
            except ZeroDivisionError:
                out.append(math.inf)
    return BetheRootSet(tuple(us), roots.flavor, tuple(out))


# ---------------------------------------------------------------------------
# Exact small-size solutions, as generators of mu-series

def _e(order: int, scale) -> Series:
    return Series.exp_scaled(order, scale)


def fixture_l0(order: int) -> dict[str, Series]:
    """Exact a = b = 0, L = 0 solution expanded to ``order``."""
    one = Series.one(order, Poly((0,)))
    y = Poly((-1, 0, 1))                         # x^2 - 1
    em = _e(order, 1).map(Poly.constant)
    lam = one - (em - 1) * y
    qbar = _e(order, -1).map(Poly.constant) - 1 + Poly.monomial(2)
    return {"lambda": lam, "q": one, "qbar": qbar}


def fixture_l1(order: int) -> dict[str, Series]:
    """Exact a = b = 0, L = 1 solution expanded to ``order``."""
    one = Series.one(order, Poly((0,)))
    y = Poly((-1, 0, 1))
    h = _e(order, Fraction(1, 2)).map(Poly.constant)
    hm = _e(order, Fraction(-1, 2)).map(Poly.constant)
    em = _e(order, -1).map(Poly.constant)
    x = Poly.x()
    lam = one + (h - 1) * (h * x - h - 1) * y
    q = one - x - hm * x
    qbar = one * (y * Poly((-1, 1))) + em * x + hm * y
    return {"lambda": lam, "q": q, "qbar": qbar}
