"""Generator, transfer matrices and conserved charges of the open TASEP.

Basis: configurations of ``L`` sites encoded in binary with site 1 as the
most significant bit, 0 = empty and 1 = occupied. Matrices act on column
vectors of probabilities, so ``M[i, j]`` is the rate ``j -> i``.

Exact matrices are numpy object arrays holding Fractions. A matrix whose
entries are polynomials in ``x`` is stored as a stack of coefficient
matrices (``stack[k]`` multiplies ``x**k``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .algebra import Poly, as_rational
from .errors import (
    InvalidEvaluationPoint,
    OrderError,
    PreconditionError,
    SizeLimitError,
)

MAX_POLY_SITES = 6
MAX_EVAL_SITES = 12


@dataclass(frozen=True)
class ModelParams:
    """Boundary parameters ``a = 1/alpha - 1``, ``b = 1/beta - 1`` and ``g = e^mu``."""

    L: int
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    g: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        object.__setattr__(self, "g", as_rational(self.g))
        if self.L < 0:
            raise PreconditionError("L must be nonnegative")
        if self.a < 0 or self.b < 0:
            raise PreconditionError("a and b must be >= 0")
        if self.g <= 0:
            raise PreconditionError("g = e^mu must be positive")

    @property
    def alpha(self) -> Fraction:
        return 1 / (1 + self.a)

    @property
    def beta(self) -> Fraction:
        return 1 / (1 + self.b)

    @property
    def dim(self) -> int:
        return 2**self.L

    def denominator(self) -> Poly:
        """``(1 + a x)(1 + b x)``."""
        return Poly((1, self.a)) * Poly((1, self.b))


@dataclass(frozen=True)
class OperatorPoly:
    """Matrix with polynomial entries over a shared scalar denominator."""

    stack: np.ndarray  # shape (deg + 1, dim, dim), Fractions
    denom: Poly = field(default_factory=lambda: Poly((1,)))

    @property
    def dim(self) -> int:
        return self.stack.shape[1]

    @property
    def degree(self) -> int:
        return self.stack.shape[0] - 1

    def entry(self, i: int, j: int) -> Poly:
        return Poly(self.stack[:, i, j])

    def numerator_at(self, x) -> np.ndarray:
        x = as_rational(x)
        acc = _zeros(self.dim)
        for k in range(self.degree, -1, -1):
            acc = acc * x + self.stack[k]
        return acc

    def evaluate(self, x) -> np.ndarray:
        x = as_rational(x)
        d = self.denom(x)
        if d == 0:
            raise InvalidEvaluationPoint(f"denominator vanishes at x = {x}")
        return self.numerator_at(x) / d

    def derivative(self) -> "OperatorPoly":
        """Derivative of the numerator only (denominator kept)."""
        if self.degree == 0:
            return OperatorPoly(_zeros(self.dim)[None], self.denom)
        k = np.arange(1, self.degree + 1, dtype=object)
        return OperatorPoly(self.stack[1:] * k[:, None, None], self.denom)

    def taylor_at(self, point, order: int) -> list[np.ndarray]:
        """Taylor coefficient matrices of numerator/denominator at ``point``."""
        point = as_rational(point)
        n_shift = _shift_stack(self.stack, point)
        dser = self.denom.shift(point)
        if dser[0] == 0:
            raise InvalidEvaluationPoint(f"denominator vanishes at x = {point}")
        # 1/denominator as a power series around point
        inv = [1 / dser[0]]
        for k in range(1, order + 1):
            acc = sum((dser[i] * inv[k - i] for i in range(1, min(k, dser.degree()) + 1)), Fraction(0))
            inv.append(-acc / dser[0])
        out = []
        for k in range(order + 1):
            acc = _zeros(self.dim)
            for i in range(min(k, n_shift.shape[0] - 1) + 1):
                acc = acc + n_shift[i] * inv[k - i]
            out.append(acc)
        return out


def _zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.full((n, n if m is None else m), Fraction(0), dtype=object)


def identity(n: int) -> np.ndarray:
    out = _zeros(n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def _shift_stack(stack: np.ndarray, c: Fraction) -> np.ndarray:
    out = [s.copy() for s in stack]
    n = len(out)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + c * out[j + 1]
    return np.array(out, dtype=object) if n else stack


# ---------------------------------------------------------------------------
# Markov generator

def build_markov(params: ModelParams) -> OperatorPoly:
    """Deformed Markov generator ``M(mu)``, a constant OperatorPoly."""
    return OperatorPoly(markov_matrix(params)[None], Poly((1,)))


def markov_matrix(params: ModelParams) -> np.ndarray:
    L = params.L
    if L < 1:
        raise PreconditionError("the generator needs L >= 1")
    if L > MAX_EVAL_SITES:
        raise SizeLimitError(f"L = {L} exceeds the dense limit {MAX_EVAL_SITES}")
    alpha, beta, g = params.alpha, params.beta, params.g
    n = 2**L
    m = _zeros(n)
    top = 1 << (L - 1)
    for c in range(n):
        if not c & top:
            m[c | top, c] += alpha * g
            m[c, c] -= alpha
        for k in range(L - 1):
            src = 1 << (L - 1 - k)
            dst = src >> 1
            if c & src and not c & dst:
                m[c ^ src ^ dst, c] += 1
                m[c, c] -= 1
        if c & 1:
            m[c ^ 1, c] += beta
            m[c, c] -= beta
    return m


# ---------------------------------------------------------------------------
# Local factors. Entries are Polys in x; 2-site factors are indexed by
# 2*first + second.

def _r_local(sign: int = 1) -> dict:
    x = Poly((0, sign))
    return {
        (0, 0): Poly((1,)),
        (1, 2): x,
        (2, 1): Poly((1,)),
        (2, 2): Poly((1,)) - x,
        (3, 3): Poly((1,)),
    }


def _k_local(params: ModelParams) -> dict:
    a, g = params.a, params.g
    return {
        (0, 0): Poly((0, a, 1)),       # (a + x) x
        (1, 0): Poly((g, 0, -g)),      # g (1 - x^2)
        (1, 1): Poly((1, a)),          # 1 + a x
    }


def _ktilde_local(params: ModelParams) -> dict:
    return {
        (0, 0): Poly((1,)),
        (0, 1): Poly((1,)),
        (1, 1): Poly((0, params.b)),   # b x
    }


def _right_multiply(stack: np.ndarray, local: dict, bits: tuple[int, ...]) -> np.ndarray:
    """``stack @ F`` for a factor acting on the qubits at ``bits`` (first
    factor first). Uses column gathers instead of dense products."""
    deg_f = max(p.degree() for p in local.values())
    deg, dim, _ = stack.shape
    out = np.full((deg + deg_f, dim, dim), 0, dtype=object)
    cols = np.arange(dim)
    nb = len(bits)

    def local_index(j):
        idx = 0
        for b in bits:
            idx = (idx << 1) | ((j >> b) & 1)
        return idx

    loc = np.array([local_index(j) for j in cols])
    for (il, jl), poly in local.items():
        J = cols[loc == jl]
        I = J.copy()
        for pos, b in enumerate(bits):
            shift = nb - 1 - pos
            bi = (il >> shift) & 1
            bj = (jl >> shift) & 1
            I = I + ((bi - bj) << b)
        block = stack[:, :, I]
        for e, coef in enumerate(poly.coeffs):
            if coef == 0:
                continue
            out[e : e + deg, :, J] += block * coef
    return out


def _trim(stack: np.ndarray) -> np.ndarray:
    while stack.shape[0] > 1 and all(v == 0 for v in stack[-1].flat):
        stack = stack[:-1]
    return stack


def _evaluate_local(local: dict, x) -> dict:
    return {k: Poly((p(x),)) for k, p in local.items()}


def _transfer_stack(params: ModelParams, x=None) -> np.ndarray:
    """Numerator of t(x) as a coefficient stack; at a point if ``x`` given."""
    L = params.L
    dim = 2**L
    aux = L  # aux qubit is the most significant bit of the extended index
    r = _r_local()
    kt = _ktilde_local(params)
    k = _k_local(params)
    if x is not None:
        r, kt, k = (_evaluate_local(f, x) for f in (r, kt, k))
    stack = identity(2 * dim)[None]
    stack = _right_multiply(stack, kt, (aux,))
    for site in range(L, 0, -1):           # R_{0L} ... R_{01}
        stack = _right_multiply(stack, r, (aux, L - site))
    stack = _right_multiply(stack, k, (aux,))
    for site in range(1, L + 1):           # R_{10} ... R_{L0}
        stack = _right_multiply(stack, r, (L - site, aux))
    traced = stack[:, :dim, :dim] + stack[:, dim:, dim:]
    return _trim(_fractions(traced))


def _fractions(arr: np.ndarray) -> np.ndarray:
    return np.vectorize(Fraction, otypes=[object])(arr)


def build_transfer(params: ModelParams) -> OperatorPoly:
    """Transfer matrix t(x) with exact polynomial numerator entries."""
    if params.L < 1:
        raise PreconditionError("the transfer matrix needs L >= 1")
    if params.L > MAX_POLY_SITES:
        raise SizeLimitError(f"L = {params.L} exceeds the polynomial limit {MAX_POLY_SITES}")
    return OperatorPoly(_transfer_stack(params), params.denominator())


def transfer_at(params: ModelParams, x) -> np.ndarray:
    """Exact rational matrix t(x) at a single rational point."""
    x = as_rational(x)
    if params.L < 1:
        raise PreconditionError("the transfer matrix needs L >= 1")
    if params.L > MAX_EVAL_SITES:
        raise SizeLimitError(f"L = {params.L} exceeds the dense limit {MAX_EVAL_SITES}")
    d = params.denominator()(x)
    if d == 0:
        raise InvalidEvaluationPoint(f"denominator vanishes at x = {x}")
    return _transfer_stack(params, x)[0] / d


def check_commutativity(params: ModelParams, x, y):
    """Return ``(commutes, max_abs_defect)`` for ``[t(x), t(y)]``."""
    tx = transfer_at(params, x)
    ty = transfer_at(params, y)
    comm = tx.dot(ty) - ty.dot(tx)
    defect = max((abs(v) for v in comm.flat), default=Fraction(0))
    return defect == 0, Fraction(defect)


def matrix_log_coefficients(taylor: list[np.ndarray], order: int) -> list[np.ndarray]:
    """Coefficients of ``log(I + X(h))`` where ``taylor[k]`` multiplies h^k
    and ``taylor[0]`` is the identity."""
    dim = taylor[0].shape[0]
    if any(v != 0 for v in (taylor[0] - identity(dim)).flat):
        raise PreconditionError("matrix logarithm needs the identity at h = 0")
    X = [_zeros(dim)] + [taylor[k] for k in range(1, order + 1)]
    result = [_zeros(dim) for _ in range(order + 1)]
    power = X
    for n in range(1, order + 1):
        sign = Fraction((-1) ** (n + 1), n)
        for k in range(order + 1):
            if n <= k:
                result[k] = result[k] + power[k] * sign
        if n < order:
            nxt = [_zeros(dim) for _ in range(order + 1)]
            for i in range(n, order + 1):
                for j in range(1, order + 1 - i):
                    nxt[i + j] = nxt[i + j] + power[i].dot(X[j])
            power = nxt
    return result


def higher_charge(params: ModelParams, r: int, transfer: OperatorPoly | None = None) -> np.ndarray:
    """Exact conserved charge ``H^(r) = (-1)^r/(2 (r-1)!) d^r/dx^r ln t(x)`` at x=1."""
    if r < 1:
        raise OrderError("charge index must be >= 1")
    t = transfer if transfer is not None else build_transfer(params)
    taylor = t.taylor_at(1, r)
    logc = matrix_log_coefficients(taylor, r)
    # d^r/dx^r at 1 is r! times the h^r coefficient
    return logc[r] * Fraction((-1) ** r * factorial(r), 2 * factorial(r - 1))


# ---------------------------------------------------------------------------
# Quasi-periodic reformulation

def build_twisted_periodic(L: int, g, x) -> np.ndarray:
    """Twisted periodic transfer matrix on ``2L+4`` sites at a rational x.

    ``tr_0(Z_0 R_{0,n}(-x) R_{0,n-1}(-x) R_{0,n-2}(x) ... R_{01}(x))`` with
    ``Z = diag(1/g, g)`` and ``n = 2L + 4``.
    """
    g = as_rational(g)
    x = as_rational(x)
    n = 2 * L + 4
    if L < 0:
        raise PreconditionError("L must be nonnegative")
    if n > 8:
        raise SizeLimitError("twisted periodic matrix limited to 2L+4 <= 8 sites")
    dim = 2**n
    aux = n
    z = {(0, 0): Poly((1 / g,)), (1, 1): Poly((g,))}
    plus = _evaluate_local(_r_local(), x)
    minus = _evaluate_local(_r_local(), -x)
    stack = identity(2 * dim)[None]
    stack = _right_multiply(stack, z, (aux,))
    for site in range(n, 0, -1):
        local = minus if site > n - 2 else plus
        stack = _right_multiply(stack, local, (aux, n - site))
    traced = stack[0, :dim, :dim] + stack[0, dim:, dim:]
    return _fractions(traced)


def particle_sector(matrix: np.ndarray, n_sites: int, n_particles: int) -> tuple[np.ndarray, list[int]]:
    """Restrict to configurations with exactly ``n_particles`` particles."""
    idx = [c for c in range(2**n_sites) if bin(c).count("1") == n_particles]
    return matrix[np.ix_(idx, idx)], idx


def is_block_diagonal_in_particle_number(matrix: np.ndarray, n_sites: int) -> bool:
    counts = [bin(c).count("1") for c in range(2**n_sites)]
    for i, j in zip(*np.nonzero(matrix != 0)):
        if counts[i] != counts[j]:
            return False
    return True


def to_json_matrix(matrix: np.ndarray) -> list[list[str]]:
    from .algebra import encode_rational
    return [[encode_rational(v) for v in row] for row in matrix]
