"""Floating-point oracles: polynomial roots, Perron eigenvalue, small spectra.

Roots come from Aberth-Ehrlich iteration in double precision on a rescaled
polynomial, followed by Newton polishing where ``p/p'`` is evaluated
exactly (Gaussian-integer Horner on the binary expansion of the iterate).
Spectra go through an exact characteristic polynomial and its squarefree
decomposition, so exact multiplicities never reach the float stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int

from .algebra import Poly, as_rational, squarefree_decomposition
from .errors import ConvergenceError, PreconditionError, SizeLimitError

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class RootReport:
    roots: np.ndarray          # complex128
    residuals: np.ndarray      # |p(root) / p'(root)| / |root|
    pairing: np.ndarray        # index of the conjugate partner
    iterations: int

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0

    def is_conjugate_closed(self, tol: float = 1e-8) -> bool:
        r = self.roots
        for i, j in enumerate(self.pairing):
            if j < 0 or abs(r[j] - r[i].conjugate()) > tol * max(1.0, abs(r[i])):
                return False
        return True


def _integer_coeffs(p: Poly) -> list:
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [mpz(int(c * den)) for c in p.coeffs]


def _int_derivative(ints: list) -> list:
    return [k * c for k, c in enumerate(ints)][1:]


def _dyadic(z: complex) -> tuple[int, int, int]:
    """Write z exactly as (X + iY) / 2**e."""
    re = Fraction(z.real)
    im = Fraction(z.imag)
    e = max(re.denominator, im.denominator).bit_length() - 1
    scale = 1 << e
    return int(re * scale), int(im * scale), e


def _exact_newton_step(ints: list, dints: list, z: complex) -> complex:
    """``p(z)/p'(z)`` evaluated exactly at the binary value of z, rounded once.

    Double-precision Horner is useless for the high-degree Q-polynomials,
    whose roots have monomial-basis condition numbers far beyond 1e16.
    """
    X, Y, e = _dyadic(z)
    X, Y = mpz(X), mpz(Y)

    def horner(cs):
        n = len(cs) - 1
        ar, ai = cs[n], mpz(0)
        for m in range(1, n + 1):
            ar, ai = ar * X - ai * Y, ar * Y + ai * X
            ar += cs[n - m] << (e * m)
        return ar, ai, n

    pr, pi_, n = horner(ints)
    qr, qi, nd = horner(dints)
    # p(z) = (pr + i pi)/2^(e n), p'(z) = (qr + i qi)/2^(e nd)
    den = int((qr * qr + qi * qi) << (e * (n - nd)))
    if den == 0:
        return complex(math.inf, 0.0)
    try:
        return complex(int(pr * qr + pi_ * qi) / den, int(pi_ * qr - pr * qi) / den)
    except OverflowError:
        return complex(math.inf, 0.0)


def _pair_conjugates(roots: np.ndarray, tol: float) -> np.ndarray:
    n = len(roots)
    pairing = np.full(n, -1, dtype=int)
    free = set(range(n))
    for i in range(n):
        if i not in free:
            continue
        if abs(roots[i].imag) <= tol * max(1.0, abs(roots[i])):
            pairing[i] = i
            free.discard(i)
            continue
        target = roots[i].conjugate()
        cands = [j for j in free if j != i]
        if not cands:
            continue
        j = min(cands, key=lambda k: abs(roots[k] - target))
        pairing[i], pairing[j] = j, i
        free.discard(i)
        free.discard(j)
    return pairing


def _log_abs(q: Fraction) -> float:
    if q == 0:
        return -math.inf
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def _circle_start(p: Poly) -> np.ndarray:
    """Initial points on a circle whose radius is the geometric mean root modulus."""
    n = p.degree()
    radius = math.exp((_log_abs(p.coeffs[0]) - _log_abs(p.coeffs[-1])) / n)
    return radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))


def aberth_roots(p: Poly, tol: float = DEFAULT_TOL, max_iter: int = 500) -> RootReport:
    """All complex roots of ``p`` by Aberth-Ehrlich simultaneous iteration.

    Iterates are complex doubles; each Newton ratio is computed exactly and
    the Aberth correction in double precision. Roots are frozen once their
    relative step drops below ``tol``.
    """
    n = p.degree()
    if n < 1:
        raise PreconditionError("root finding needs degree >= 1")
    if p.coeffs[0] == 0:
        k = next(i for i, c in enumerate(p.coeffs) if c != 0)
        zeros = np.zeros(k, dtype=complex)
        if n - k == 0:
            return _report(p, zeros, 0)
        inner = aberth_roots(Poly(p.coeffs[k:]), tol, max_iter)
        return _report(p, np.concatenate([zeros, inner.roots]), inner.iterations)
    if n == 1:
        return _report(p, np.array([complex(-p.coeffs[0] / p.coeffs[1])]), 0)

    ints = _integer_coeffs(p)
    dints = _int_derivative(ints)
    z = _circle_start(p)
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.nonzero(active)[0]
        ratio = np.array([_exact_newton_step(ints, dints, complex(z[k])) for k in idx])
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = 1.0
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / diff
            inv[np.arange(len(idx)), idx] = 0.0
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        bad = ~np.isfinite(step)
        if bad.any():
            step[bad] = 1e-3 * np.maximum(np.abs(z[idx][bad]), 1e-3) * (1 + 1j)
        z[idx] = z[idx] - step
        done = np.abs(step) <= tol * np.maximum(np.abs(z[idx]), 1e-300)
        active[idx[done]] = False
        if not active.any():
            break
    report = _report(p, z, it, ints, dints)
    if active.any():
        raise ConvergenceError(
            f"Aberth iteration left {int(active.sum())} roots unconverged after {max_iter} steps",
            best=report,
        )
    return report


def _report(p: Poly, roots: np.ndarray, it: int, ints=None, dints=None) -> RootReport:
    ints = ints if ints is not None else _integer_coeffs(p)
    dints = dints if dints is not None else _int_derivative(ints)
    res = []
    for r in roots:
        step = _exact_newton_step(ints, dints, complex(r))
        res.append(abs(step) / abs(r) if r != 0 else abs(step))
    roots = np.asarray(roots, dtype=complex)
    return RootReport(roots, np.array(res), _pair_conjugates(roots, 1e-8), it)


def perron_eigenvalue(m: np.ndarray, tol: float = 1e-15, max_iter: int = 200_000) -> float:
    """Eigenvalue of largest real part of a Metzler matrix by shifted power iteration."""
    a = np.array(m, dtype=float)
    n = a.shape[0]
    off = a - np.diag(np.diag(a))
    if (off < 0).any():
        raise PreconditionError("perron_eigenvalue needs nonnegative off-diagonal entries")
    # the extra unit keeps the shifted matrix aperiodic
    c = float(np.max(np.abs(np.diag(a)))) + 1.0 if n else 0.0
    shifted = a + c * np.eye(n)
    v = np.ones(n) / n
    est = 0.0
    for it in range(max_iter):
        w = shifted @ v
        norm = w.sum()
        if norm == 0:
            return -c
        w /= norm
        if it % 16 == 15:
            new = float((shifted @ w).sum())
            if abs(new - est) <= tol * max(1.0, abs(new)) and np.abs(w - v).max() <= 1e-14:
                return new - c
            est = new
        v = w
    raise ConvergenceError("power iteration did not converge; spectral gap too small", best=est - c)


def charpoly_exact(m: np.ndarray) -> Poly:
    """Characteristic polynomial ``det(x I - m)`` by Faddeev-LeVerrier.

    The matrix is scaled to integers first so all intermediate work is in
    exact integer arithmetic.
    """
    n = m.shape[0]
    if n > 64:
        raise SizeLimitError("exact characteristic polynomial limited to dim <= 64")
    entries = [as_rational(v) for v in m.flat]
    d = 1
    for q in entries:
        d = d * q.denominator // math.gcd(d, q.denominator)
    A = np.array([int(q * d) for q in entries], dtype=object).reshape(n, n)
    coeffs = [0] * (n + 1)      # coeffs[k] multiplies x^k
    coeffs[n] = 1
    Mk = np.zeros((n, n), dtype=object)
    eye = np.identity(n, dtype=int).astype(object)
    for k in range(1, n + 1):
        Mk = A.dot(Mk) + coeffs[n - k + 1] * eye
        tr = int(np.trace(A.dot(Mk)))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier coefficient")
        coeffs[n - k] = -tr // k
    # det(xI - A) = d^n det(x/d I - m)
    return Poly(Fraction(c, d ** (n - k)) for k, c in enumerate(coeffs))


def spectrum_via_charpoly(m: np.ndarray, tol: float = DEFAULT_TOL) -> list[complex]:
    """Eigenvalues (with multiplicity) from the exact characteristic polynomial."""
    if m.shape[0] > 64:
        raise SizeLimitError("spectrum_via_charpoly limited to dim <= 64")
    cp = charpoly_exact(m)
    out = []
    for factor, mult in squarefree_decomposition(cp):
        roots = aberth_roots(factor, tol).roots
        for r in roots:
            out.extend([complex(r)] * mult)
    return sorted(out, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


def nearest_distance(value: complex, spectrum) -> float:
    return min(abs(value - z) for z in spectrum)
