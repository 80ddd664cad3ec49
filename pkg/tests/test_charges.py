import math
from fractions import Fraction as F

import pytest

from tasep_tq.algebra import Series, series_compose, series_reversion
from tasep_tq.charges import (
    i_r_closed,
    lambda_mu_composed,
    make_context,
    mu_closed,
    mu_constraint_series,
    residue_series,
)
from tasep_tq.errors import DomainError
from tasep_tq.numerics import perron_eigenvalue
from tasep_tq.operators import ModelParams, markov_matrix
from tasep_tq.tq import charge_from_lambda, lambda_of_mu, solve_tq_original


def test_i_r_closed_examples():
    assert i_r_closed(1, 1, 2).terms == Series([0, -1, -3])
    assert i_r_closed(2, 1, 1).terms == Series([0, -2])
    assert i_r_closed(0, 1, 2).terms == Series([0, -1, -1])
    with pytest.raises(DomainError):
        i_r_closed(1, 4, 2)


def test_mu_closed_examples():
    assert mu_closed(1, 2) == Series([0, -2, -7])
    assert mu_closed(2, 1) == Series([0, -5])
    assert mu_closed(0, 2) == Series([0, -1, F(-3, 2)])


def test_composition_examples():
    assert lambda_mu_composed(1, order=2) == Series([0, F(1, 2), F(1, 8)])
    assert lambda_mu_composed(0, order=2) == Series([0, 1, F(1, 2)])
    assert lambda_mu_composed(2, order=1) == Series([0, F(2, 5)])


def test_residue_matches_closed_examples():
    assert residue_series(make_context(1, K=2), 1).terms == Series([0, -1, -3])
    assert residue_series(make_context(2, K=1), 3).terms == i_r_closed(2, 3, 1).terms
    assert mu_constraint_series(make_context(1, K=2)) == Series([0, -2, -7])
    assert mu_constraint_series(make_context(0, K=2)) == Series([0, -1, F(-3, 2)])


def test_degenerate_context_has_single_pole():
    ctx = make_context(3, K=2)
    assert len(ctx.poles) == 1 and ctx.poles[0][1] == 5
    assert len(make_context(3, F(1, 2), F(1, 2), K=1).poles) == 2
    assert len(make_context(3, F(1, 2), F(1, 3), K=1).poles) == 3


def test_invalid_boundary_parameter():
    with pytest.raises(DomainError):
        make_context(2, -1, 0)
    for a, b in ((1, 1), (2, F(1, 2))):
        with pytest.raises(DomainError):
            make_context(2, a, b)


def test_sign_convention_by_parity():
    assert make_context(1).c_to_b_sign == 1
    assert make_context(2).c_to_b_sign == -1


def test_residue_beyond_range_warns():
    with pytest.warns(UserWarning):
        residue_series(make_context(1, K=1), 4)


GENERAL = [
    (1, F(1, 2), F(1, 3)),
    (2, F(1, 2), F(1, 3)),
    (2, 1, 0),
    (2, F(1, 2), F(1, 2)),
    (3, 0, F(2, 3)),
    (2, F(99, 100), F(101, 100)),   # next to the excluded line a*b = 1
]


@pytest.mark.parametrize("L,a,b", GENERAL)
def test_general_boundaries_match_tq(L, a, b):
    tq_series = lambda_of_mu(solve_tq_original(ModelParams(L, a, b), 4))
    assert lambda_mu_composed(L, a, b, order=4) == tq_series


def test_general_boundaries_higher_charges_match_tq():
    sol = solve_tq_original(ModelParams(2, F(1, 2), F(1, 3)), 4)
    for r in range(1, 6):
        assert lambda_mu_composed(2, F(1, 2), F(1, 3), order=4, r=r) == charge_from_lambda(sol, r)


# invariants, also run by the acceptance suite

def test_prop_oracle_triangle():
    for L in range(0, 7):
        K = 8
        ctx = make_context(L, K=K)
        mu_b = mu_closed(L, K)
        assert mu_constraint_series(ctx) == mu_b
        b_of_mu = series_reversion(mu_b)
        sol = solve_tq_original(ModelParams(L), K) if L >= 1 else None
        for r in range(1, 2 * L + 2):
            closed = i_r_closed(L, r, K).terms
            assert residue_series(ctx, r).terms == closed
            if sol is not None:
                assert charge_from_lambda(sol, r) == series_compose(closed, b_of_mu)


def test_prop_constraint_is_invertible():
    for L, a, b in [(0, 0, 0), (2, 0, 0), (2, F(1, 2), F(1, 3)), (4, 3, 1)]:
        mu_b = mu_constraint_series(make_context(L, a, b, 4))
        assert mu_b[0] == 0 and mu_b[1] != 0


def test_prop_residue_lambda_matches_perron():
    for L, a, b in [(1, 0, 0), (3, 0, 0), (2, F(1, 2), F(1, 3))]:
        ctx = make_context(L, a, b, 10)
        lam = series_compose(residue_series(ctx, 1).terms, series_reversion(mu_constraint_series(ctx)))
        for mu in (F(1, 20), F(1, 10)):
            value = float(sum(c * mu**j for j, c in enumerate(lam)))
            perron = perron_eigenvalue(markov_matrix(ModelParams(L, a, b, F(math.exp(mu)))))
            # first dropped term bounds the truncation error
            assert abs(value - perron) <= max(1e-12, 10 * float(mu) ** 11) * abs(perron) + 1e-15
