import math
import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tasep_tq.algebra import Poly
from tasep_tq.errors import ConvergenceError, PreconditionError, SizeLimitError
from tasep_tq.numerics import (
    aberth_roots,
    charpoly_exact,
    nearest_distance,
    perron_eigenvalue,
    spectrum_via_charpoly,
)
from tasep_tq.operators import ModelParams, identity, markov_matrix, transfer_at
from tasep_tq.tq import q0_closed


def test_aberth_small_examples():
    rep = aberth_roots(Poly([1, 0, 1]))
    assert sorted(rep.roots, key=lambda z: z.imag) == pytest.approx([-1j, 1j], abs=1e-14)
    assert aberth_roots(q0_closed(1, 0)).roots == pytest.approx([0.5])
    rep = aberth_roots(Poly([0, 0, -2, 1]))   # zero roots are stripped first
    assert sorted(rep.roots.real) == pytest.approx([0, 0, 2])


def test_aberth_multiple_root_still_converges():
    rep = aberth_roots(Poly.from_roots([1, 1, 2]), tol=1e-10)
    assert len(rep.roots) == 3


def test_aberth_reports_best_iterate_on_failure():
    with pytest.raises(ConvergenceError) as info:
        aberth_roots(Poly.from_roots(list(range(1, 25))), max_iter=2)
    assert info.value.best is not None and len(info.value.best.roots) == 24
    with pytest.raises(PreconditionError):
        aberth_roots(Poly([3]))


def test_perron_examples():
    for L in (1, 4, 10):
        assert abs(perron_eigenvalue(markov_matrix(ModelParams(L)))) < 1e-12
    g = F(math.exp(0.1))
    assert perron_eigenvalue(markov_matrix(ModelParams(1, 0, 0, g))) == pytest.approx(math.exp(0.05) - 1, rel=1e-12)
    with pytest.raises(PreconditionError):
        perron_eigenvalue(np.array([[0, -1], [1, 0]]))


def test_charpoly_and_spectrum():
    assert charpoly_exact(identity(2)) == Poly([1, -2, 1])
    assert spectrum_via_charpoly(identity(2)) == [1, 1]
    eigs = spectrum_via_charpoly(transfer_at(ModelParams(3, F(1, 2), F(1, 3), 2), 1))
    assert len(eigs) == 8 and all(abs(z - 1) < 1e-14 for z in eigs)
    with pytest.raises(SizeLimitError):
        charpoly_exact(np.identity(65, dtype=object))


def test_spectrum_locates_series_eigenvalue():
    from tasep_tq.tq import solve_tq_original
    g = F(math.exp(0.1))
    p = ModelParams(4)
    eigs = spectrum_via_charpoly(transfer_at(ModelParams(4, 0, 0, g), F(1, 2)))
    lam = float(solve_tq_original(p, 12).lambda_at(F(1, 2), F(1, 10)))
    assert nearest_distance(lam, eigs) < 1e-9


# invariants, also run by the acceptance suite

def _separated_roots(rng: random.Random, degree: int):
    """Rational roots on a grid, closed under conjugation, pairwise >= 1/4 apart."""
    roots = []
    while len(roots) < degree:
        re = F(rng.randint(-12, 12), 4)
        if degree - len(roots) >= 2 and rng.random() < 0.6:
            im = F(rng.randint(1, 12), 4)
            cand = [complex(re, im), complex(re, -im)]
        else:
            cand = [complex(re, 0)]
        if all(abs(c - r) >= 0.25 for c in cand for r in roots):
            roots.extend(cand)
    return roots


def _poly_from_complex_roots(roots):
    p = Poly([1])
    for z in roots:
        if z.imag > 0:
            re, im = F(z.real), F(z.imag)
            p = p * Poly([re * re + im * im, -2 * re, 1])
        elif z.imag == 0:
            p = p * Poly([-F(z.real), 1])
    return p


@settings(max_examples=50)
@given(st.integers(0, 2**32), st.integers(1, 30))
def test_prop_aberth_round_trip(seed, degree):
    rng = random.Random(seed)
    roots = _separated_roots(rng, degree)
    rep = aberth_roots(_poly_from_complex_roots(roots))
    assert len(rep.roots) == degree
    for z in roots:
        assert nearest_distance(z, rep.roots) < 1e-9 * max(1, abs(z))
    assert rep.is_conjugate_closed()


def test_prop_perron_monotone_in_g():
    for L in range(1, 7):
        values = [perron_eigenvalue(markov_matrix(ModelParams(L, 0, F(1, 2), g)))
                  for g in (1, F(21, 20), F(11, 10), F(6, 5))]
        assert all(x <= y + 1e-14 for x, y in zip(values, values[1:]))


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_prop_spectrum_conjugation_symmetric(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 7)
    m = np.array([[F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)] for _ in range(n)], dtype=object)
    eigs = spectrum_via_charpoly(m)
    assert len(eigs) == n
    for z in eigs:
        assert nearest_distance(z.conjugate(), eigs) < 1e-8 * max(1, abs(z))
