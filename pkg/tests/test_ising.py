import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import logsumexp

from latsent.graph import from_edge_list, make_complete, make_ring, make_star, make_topology
from latsent.ising import (ModelParams, SizeGuardError, codes_to_spins, edge_sum, energy,
                           log_conditional_prob, log_conditional_table, log_partition,
                           log_Z_brute, log_Z_complete, log_Z_ring, log_Z_star, spins_to_code)

from conftest import all_spins, oracle_log_z

# exact values computed with mpmath at 30 digits
RING3_THETA1 = 3.74663763026587881768868  # log(2e^3 + 6/e)
K2_THETA1_H1 = 3.05349044970593350827145  # log(e^3 + 3/e)
STAR3 = 3.67832121781069114089539  # theta=1, h=0.5
FIELD_ONLY_N3 = 2.43978506255466850214699  # 3 log(2 cosh 0.5)


def test_edge_sum_examples():
    assert edge_sum([1, 1, 1], make_ring(3)) == 3
    assert edge_sum([1, -1, -1], make_star(3)) == -2
    assert edge_sum([1, -1, 1, -1], make_ring(4)) == -4


def test_edge_sum_length_mismatch():
    with pytest.raises(ValueError):
        edge_sum([1, 1], make_ring(3))


def test_energy_examples():
    g = make_ring(3)
    assert energy([1, 1, 1], 1, g, ModelParams(1, 0.5, 0)) == pytest.approx(4.5)
    for x in all_spins(3):
        assert energy(x, 1, g, ModelParams(0, 0, 0.3)) == 0
    p = ModelParams(0.7, 0.4, 0)
    x = [1, -1, -1]
    field = 0.4 * -1
    assert energy(x, -1, g, p) == pytest.approx(energy(x, 1, g, p) - 2 * field)


def test_params_reject_negative():
    with pytest.raises(ValueError):
        ModelParams(-0.1, 0, 0)
    with pytest.raises(ValueError):
        ModelParams(0, float("nan"), 0)


def test_brute_examples():
    for g in (make_ring(3), make_star(3), from_edge_list("0 1\n1 2")):
        assert log_Z_brute(g, 0.0, 0.5) == pytest.approx(FIELD_ONLY_N3, abs=1e-13)
    assert log_Z_brute(make_ring(3), 1.0, 0.0) == pytest.approx(RING3_THETA1, abs=1e-13)
    assert log_Z_brute(make_complete(2), 1.0, 1.0) == pytest.approx(K2_THETA1_H1, abs=1e-13)


@pytest.mark.parametrize("g", [make_ring(5), make_star(4), make_complete(5),
                               from_edge_list("n 6\n0 1\n1 2\n4 5")])
@pytest.mark.parametrize("theta,h", [(0.3, -0.8), (1.1, 0.2), (0.0, 1.5)])
def test_brute_against_itertools_oracle(g, theta, h):
    assert log_Z_brute(g, theta, h) == pytest.approx(oracle_log_z(g, theta, h), rel=1e-13)


def test_brute_guard():
    with pytest.raises(SizeGuardError):
        log_Z_brute(make_ring(25), 1.0, 0.0)


def test_closed_form_examples():
    assert log_Z_complete(2, 1.0, 1.0) == pytest.approx(K2_THETA1_H1, abs=1e-13)
    assert log_Z_complete(1, 0.7, 0.3) == pytest.approx(math.log(2 * math.cosh(0.3)), abs=1e-14)
    assert log_Z_ring(3, 1.0, 0.0) == pytest.approx(RING3_THETA1, abs=1e-13)
    assert log_Z_star(3, 1.0, 0.5) == pytest.approx(STAR3, abs=1e-13)


@pytest.mark.parametrize("n", [3, 4, 7, 12])
@pytest.mark.parametrize("h", [0.0, 0.4, -1.3])
def test_closed_forms_at_zero_coupling(n, h):
    expect = n * math.log(2 * math.cosh(h))
    for fn in (log_Z_complete, log_Z_ring, log_Z_star):
        assert fn(n, 0.0, h) == pytest.approx(expect, rel=1e-13)


@pytest.mark.parametrize("n", [3, 6, 9])
@pytest.mark.parametrize("theta", [0.2, 1.0, 2.5])
def test_zero_field_simplifications(n, theta):
    ring = math.log((2 * math.cosh(theta)) ** n + (2 * math.sinh(theta)) ** n)
    assert log_Z_ring(n, theta, 0.0) == pytest.approx(ring, rel=1e-13)
    star = math.log(2 * (2 * math.cosh(theta)) ** (n - 1))
    assert log_Z_star(n, theta, 0.0) == pytest.approx(star, rel=1e-13)


def _star_binomial_sums(n, theta, h):
    """The star partition function written as two binomial sums over leaf counts."""
    u, v = math.exp(theta), math.exp(h)
    s1 = sum(math.comb(n - 1, m) * (u * v) ** (-2 * m) for m in range(n))
    s2 = sum(math.comb(n - 1, k) * (u / v) ** (-2 * k) for k in range(n))
    return math.log(u ** (n - 1) * (v ** n * s1 + v ** (-n) * s2))


@pytest.mark.parametrize("n", [2, 3, 8, 15])
@pytest.mark.parametrize("theta,h", [(0.5, 0.5), (1.2, -0.3), (0.1, 1.0)])
def test_star_simplification_matches_binomial_sums(n, theta, h):
    assert log_Z_star(n, theta, h) == pytest.approx(_star_binomial_sums(n, theta, h), rel=1e-12)


@pytest.mark.parametrize("tag", ["complete", "star", "ring"])
def test_closed_vs_brute_sample(tag):
    g = make_topology(tag, 9)
    for theta in (0.25, 2.0):
        for h in (-1.0, 0.5):
            closed = log_partition(g, theta, h, method="closed")
            assert abs(closed - log_Z_brute(g, theta, h)) <= 1e-10 * abs(closed)


def test_closed_forms_vectorise_over_field():
    hs = np.linspace(-1, 1, 5)
    for fn in (log_Z_complete, log_Z_ring, log_Z_star):
        vec = fn(6, 0.5, hs)
        assert vec.shape == (5,)
        np.testing.assert_allclose(vec, [fn(6, 0.5, h) for h in hs], rtol=1e-14)


def test_brute_vectorises_over_field():
    g = make_ring(6)
    hs = np.array([-0.5, 0.0, 0.5])
    np.testing.assert_allclose(log_Z_brute(g, 0.5, hs), [log_Z_brute(g, 0.5, h) for h in hs])


@pytest.mark.parametrize("tag", ["complete", "star", "ring"])
def test_field_symmetry(tag):
    g = make_topology(tag, 8)
    for h in (0.3, 1.7):
        assert log_partition(g, 0.6, h) == pytest.approx(log_partition(g, 0.6, -h), rel=1e-13)
        assert log_Z_brute(g, 0.6, h) == pytest.approx(log_Z_brute(g, 0.6, -h), rel=1e-13)


@pytest.mark.parametrize("tag", ["complete", "star", "ring"])
def test_monotone_in_theta_and_abs_field(tag):
    thetas = np.linspace(0, 3, 31)
    zs = [log_partition(make_topology(tag, 10), t, 0.4) for t in thetas]
    assert np.all(np.diff(zs) >= -1e-12)
    hs = np.linspace(0, 3, 31)
    zh = log_partition(make_topology(tag, 10), 0.8, hs)
    assert np.all(np.diff(zh) >= -1e-12)


def test_large_n_log_domain():
    v = log_Z_complete(10_000, 1.0, 1.0)
    assert math.isfinite(v)
    # dominated by the all-aligned state
    assert v == pytest.approx(0.5 * (10_000 ** 2 - 10_000) + 10_000, rel=1e-12)
    assert math.isfinite(log_Z_ring(10_000, 3.0, 2.0))
    assert math.isfinite(log_Z_star(10_000, 3.0, 2.0))


def test_conditional_prob_examples():
    g1 = make_complete(1)
    p = ModelParams(0.0, 0.5, 0.0)
    assert math.exp(log_conditional_prob([1], 1, g1, p)) == pytest.approx(0.731058578630004879, abs=1e-15)
    g3 = make_ring(3)
    p3 = ModelParams(1.0, 0.0, 0.0)
    assert math.exp(log_conditional_prob([1, 1, 1], 1, g3, p3)) == pytest.approx(0.473957496913757802, abs=1e-15)


def test_conditional_factorises_at_zero_coupling():
    g = make_ring(4)
    p = ModelParams(0.0, 0.7, 0.0)
    single = [math.exp(0.7 * s) / (2 * math.cosh(0.7)) for s in (1, -1)]
    for x in all_spins(4):
        expect = math.prod(single[0] if v > 0 else single[1] for v in x)
        assert math.exp(log_conditional_prob(x, 1, g, p)) == pytest.approx(expect, rel=1e-13)


@pytest.mark.parametrize("g", [make_ring(12), make_star(11), from_edge_list("n 10\n0 1\n1 2\n5 9")])
@pytest.mark.parametrize("t", [1, -1])
def test_normalisation(g, t):
    p = ModelParams(0.6, 0.3, 0.0)
    table = log_conditional_table(g, p, t)
    assert abs(np.exp(table).sum() - 1.0) <= 1e-12
    # table and pointwise function agree
    for code in (0, 5, (1 << g.n) - 1):
        x = codes_to_spins(code, g.n)
        assert table[code] == pytest.approx(log_conditional_prob(x, t, g, p), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=20))
def test_code_round_trip(x):
    assert codes_to_spins(spins_to_code(x), len(x)).tolist() == x


def test_log_partition_dispatch():
    g = from_edge_list("0 1\n1 2")
    assert log_partition(g, 0.5, 0.1) == log_Z_brute(g, 0.5, 0.1)
    with pytest.raises(ValueError):
        log_partition(g, 0.5, 0.1, method="closed")
    h = np.array([0.2])
    assert logsumexp([0.0]) == 0.0 and log_partition(make_ring(5), 0.5, h).shape == (1,)
