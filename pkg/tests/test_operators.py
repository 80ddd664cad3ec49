import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tasep_tq.algebra import Poly
from tasep_tq.errors import InvalidEvaluationPoint, OrderError, PreconditionError, SizeLimitError
from tasep_tq.operators import (
    ModelParams,
    build_markov,
    build_transfer,
    build_twisted_periodic,
    check_commutativity,
    higher_charge,
    identity,
    is_block_diagonal_in_particle_number,
    markov_matrix,
    particle_sector,
    to_json_matrix,
    transfer_at,
)

PARAMS = [
    ModelParams(1),
    ModelParams(2, F(1, 2), F(1, 3), 2),
    ModelParams(3, F(1, 2), F(1, 3), 2),
    ModelParams(3, 0, 0, F(3, 2)),
    ModelParams(4, F(2), F(1, 5), F(7, 3)),
]


def _eq(m1, m2):
    return bool((m1 == m2).all())


def test_markov_l1():
    g = F(5, 3)
    m = markov_matrix(ModelParams(1, 0, 0, g))
    assert _eq(m, np.array([[-1, 1], [g, -1]], dtype=object))
    assert build_markov(ModelParams(2)).dim == 4


def test_markov_rejects_empty_chain():
    with pytest.raises(PreconditionError):
        markov_matrix(ModelParams(0))


def test_model_params_validation():
    assert ModelParams(2, F(1, 2)).alpha == F(2, 3)
    with pytest.raises(PreconditionError):
        ModelParams(2, -1)
    with pytest.raises(PreconditionError):
        ModelParams(2, 0, 0, 0)


@pytest.mark.parametrize("p", PARAMS)
def test_transfer_at_one_is_identity_and_generates_markov(p):
    t = build_transfer(p)
    t0, t1 = t.taylor_at(1, 1)
    assert _eq(t0, identity(p.dim))
    assert _eq(t1 * F(-1, 2), markov_matrix(p))


def test_transfer_denominator_and_degree():
    p = ModelParams(3, F(1, 2), F(1, 3), 2)
    t = build_transfer(p)
    assert t.denom == Poly([1, F(1, 2)]) * Poly([1, F(1, 3)])
    assert t.degree <= 2 * p.L + 3


def test_commutativity_examples():
    assert check_commutativity(ModelParams(1), F(1, 3), F(2, 5))[0]
    assert check_commutativity(ModelParams(3, F(1, 2), F(1, 3), 2), F(1, 7), F(3, 5))[0]
    assert check_commutativity(ModelParams(2, 1, 1, 3), F(2, 9), F(2, 9))[0]


def test_pole_is_rejected():
    with pytest.raises(InvalidEvaluationPoint):
        transfer_at(ModelParams(2, F(1, 2)), -2)


def test_size_caps():
    with pytest.raises(SizeLimitError):
        build_transfer(ModelParams(7))
    with pytest.raises(SizeLimitError):
        build_twisted_periodic(3, 1, 0)


def test_charges_h1_and_commutation():
    p = ModelParams(3, 0, 0, 2)
    t = build_transfer(p)
    h1, h2, h3 = (higher_charge(p, r, t) for r in (1, 2, 3))
    m = markov_matrix(p)
    assert _eq(h1, m)
    assert _eq(h2.dot(h3), h3.dot(h2))
    for h in (h2, h3):
        assert _eq(h.dot(m), m.dot(h))
    with pytest.raises(OrderError):
        higher_charge(p, 0, t)


def test_twisted_periodic_block_structure():
    m = build_twisted_periodic(0, 1, 0)
    assert is_block_diagonal_in_particle_number(m, 4)
    m = build_twisted_periodic(1, F(3, 2), F(1, 3))
    assert is_block_diagonal_in_particle_number(m, 6)
    sector, idx = particle_sector(m, 6, 3)
    assert sector.shape == (20, 20) and len(idx) == 20


def test_json_matrix():
    assert to_json_matrix(identity(2)) == [["1/1", "0/1"], ["0/1", "1/1"]]


# invariants, also run by the acceptance suite

def test_prop_transfer_identities():
    for p in PARAMS:
        t = build_transfer(p)
        t0, t1 = t.taylor_at(1, 1)
        assert _eq(t0, identity(p.dim)) and _eq(t1 * F(-1, 2), markov_matrix(p))


def test_prop_commutativity_random_pairs():
    rng = random.Random(2024)
    for p in PARAMS[:4]:
        for _ in range(20):
            x = F(rng.randint(0, 30), rng.randint(1, 30))
            y = F(rng.randint(0, 30), rng.randint(1, 30))
            ok, defect = check_commutativity(p, x, y)
            assert ok and defect == 0


@settings(max_examples=30)
@given(st.integers(1, 5), st.fractions(0, 3, max_denominator=9),
       st.fractions(0, 3, max_denominator=9), st.fractions(F(1, 4), 4, max_denominator=9))
def test_prop_column_sums_vanish_iff_g_is_one(L, a, b, g):
    m = markov_matrix(ModelParams(L, a, b, g))
    sums = m.sum(axis=0)
    assert all(s == 0 for s in sums) == (g == 1)


def test_prop_no_hidden_poles():
    # numerator / declared denominator equals the pointwise product of local factors
    rng = random.Random(7)
    for p in PARAMS[:4]:
        t = build_transfer(p)
        for _ in range(3):
            x = F(rng.randint(1, 40), rng.randint(1, 40))
            assert _eq(t.evaluate(x), transfer_at(p, x))


def test_prop_charges_commute():
    for L in range(1, 5):
        p = ModelParams(L, F(1, 2), F(1, 3), 2) if L < 4 else ModelParams(L, 0, 0, 2)
        t = build_transfer(p)
        hs = [higher_charge(p, r, t) for r in (1, 2, 3)]
        assert _eq(hs[0], markov_matrix(p))
        for i in range(3):
            for j in range(i + 1, 3):
                assert _eq(hs[i].dot(hs[j]), hs[j].dot(hs[i]))
