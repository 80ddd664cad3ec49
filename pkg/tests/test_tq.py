import math
from fractions import Fraction as F

import pytest

from tasep_tq.algebra import Poly, Series
from tasep_tq.errors import DomainError, OrderError
from tasep_tq.numerics import aberth_roots, perron_eigenvalue
from tasep_tq.operators import ModelParams, markov_matrix
from tasep_tq.tq import (
    BetheRootSet,
    bethe_residual,
    charge_from_lambda,
    check_equivalence,
    fixture_l0,
    fixture_l1,
    lambda_of_mu,
    q0_closed,
    solve_tq_equivalent,
    solve_tq_original,
)
from tasep_tq.charges import lambda_mu_composed

CASES = [(1, 0, 0), (2, 0, 0), (3, F(1, 2), F(1, 3)), (4, 2, F(1, 5)), (2, 0, F(3, 4))]


def test_q0_closed_examples():
    assert q0_closed(0, F(4, 5)) == Poly([1])
    assert q0_closed(1, 0) == Poly([1, -2])
    assert q0_closed(2, 0) == Poly([1, -4, 5])


@pytest.mark.parametrize("L,a,b", CASES)
def test_order_zero(L, a, b):
    p = ModelParams(L, a, b)
    sol = solve_tq_original(p, 0)
    assert sol.lam[0] == p.denominator()       # Lambda = 1
    assert sol.q[0] == q0_closed(L, b)
    eq = solve_tq_equivalent(p, 0)
    assert eq.lam[0] == p.denominator()
    assert eq.q[0] == Poly.monomial(L) * Poly([a, 1]) * Poly([b, 1])


def test_l1_matches_closed_solution():
    sol = solve_tq_original(ModelParams(1), 4)
    assert sol.lam == fixture_l1(4)["lambda"]
    assert sol.q == fixture_l1(4)["q"]


def test_equivalent_fixtures():
    for L, fix in ((0, fixture_l0), (1, fixture_l1)):
        sol = solve_tq_equivalent(ModelParams(L), 5)
        assert sol.lam == fix(5)["lambda"]
        assert sol.q == fix(5)["qbar"]


def test_equivalent_l0_with_boundaries_is_unsupported():
    with pytest.raises(DomainError):
        solve_tq_equivalent(ModelParams(0, 1, 2), 2)


def test_lambda_of_mu_examples():
    assert lambda_of_mu(solve_tq_original(ModelParams(1), 4)) == Series.exp_scaled(4, F(1, 2)) - 1
    assert lambda_of_mu(solve_tq_equivalent(ModelParams(0), 4)) == Series.exp_scaled(4) - 1
    assert lambda_of_mu(solve_tq_original(ModelParams(2), 2))[1] == F(2, 5)


def test_charge_from_lambda():
    sol = solve_tq_original(ModelParams(1), 5)
    assert charge_from_lambda(sol, 1) == lambda_of_mu(sol)
    assert charge_from_lambda(sol, 2) == lambda_mu_composed(1, order=5, r=2)
    for r in (1, 2, 3):
        assert charge_from_lambda(sol, r)[0] == 0
    with pytest.raises(OrderError):
        charge_from_lambda(sol, 0)


def test_equivalence_small():
    assert check_equivalence(ModelParams(2, F(1, 2), F(1, 3)), 3).agreement
    assert check_equivalence(ModelParams(1), 8).agreement


def test_bethe_residuals():
    p = ModelParams(6, 0, F(4, 5))
    rep = aberth_roots(q0_closed(6, F(4, 5)))
    res = bethe_residual(BetheRootSet(tuple(rep.roots), "original"), p, 0.0)
    assert res.max_residual < 1e-8
    one = bethe_residual(BetheRootSet((0.5,), "original"), ModelParams(1), 0.0)
    assert one.max_residual < 1e-15
    r = 1 / math.sqrt(2)
    eq = bethe_residual(BetheRootSet((r, -r), "equivalent"), ModelParams(0), math.log(2))
    assert eq.max_residual < 1e-14


def test_bethe_residual_flags_singular_root():
    res = bethe_residual(BetheRootSet((0.0,), "original"), ModelParams(1), 0.0)
    assert math.isinf(res.max_residual)


# invariants, also run by the acceptance suite

def test_prop_lambda_at_zero_and_one():
    for L, a, b in CASES:
        p = ModelParams(L, a, b)
        for sol in (solve_tq_original(p, 5), solve_tq_equivalent(p, 5)):
            for j, S in enumerate(sol.lam):
                assert S(0) == F(1, math.factorial(j))
                assert S(1) == ((1 + a) * (1 + b) if j == 0 else 0)


def test_prop_qbar_at_one():
    for L, a, b in CASES:
        sol = solve_tq_equivalent(ModelParams(L, a, b), 5)
        for j, Q in enumerate(sol.q):
            assert Q(1) == (1 + a) * (1 + b) * F((-1) ** j, math.factorial(j))


def test_prop_equivalence():
    for L, a, b in CASES:
        assert check_equivalence(ModelParams(L, a, b), 4).agreement


def test_prop_lambda_matches_perron():
    for L, a, b in CASES:
        lam = lambda_of_mu(solve_tq_original(ModelParams(L, a, b), 10))
        mu = F(1, 20)
        series = float(sum(c * mu**j for j, c in enumerate(lam)))
        perron = perron_eigenvalue(markov_matrix(ModelParams(L, a, b, F(math.exp(mu)))))
        assert abs(series - perron) <= 1e-9 * abs(perron)
