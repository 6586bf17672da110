import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pushpull.dynamics import (EpidemicParams, InfectionProfile, find_equilibrium, integrate,
                               monte_carlo, step)
from pushpull.errors import ParameterError, PreconditionError
from pushpull.graph import Graph, generate

from conftest import edgeless, path, star, two_node


def reference_step(g, p, i):
    """Node-by-node loop over in-neighbours, straight from the update rule."""
    dense = g.dense()
    out = np.empty(g.n)
    for v in range(g.n):
        prod = 1.0
        for u in range(g.n):
            if dense[v, u]:
                prod *= 1 - p.gamma * i[u]
        out[v] = (1 - (1 - p.alpha) * prod) * (1 - i[v]) + (1 - p.beta) * i[v]
    return out


params = st.builds(EpidemicParams, st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))


def test_params_validation():
    with pytest.raises(ParameterError):
        EpidemicParams(1.2, 0.5, 0.1)
    with pytest.raises(ParameterError):
        EpidemicParams(0.1, float("nan"), 0.1)
    assert EpidemicParams(0.3, 0.8, 0.1).nu == pytest.approx(0.2)


def test_two_node_step_by_hand():
    p = EpidemicParams(0.5, 0.5, 0.5)
    nxt, detail = step(two_node(), p, InfectionProfile(np.array([0.5, 0.4])))
    a = (1 - 0.5 * (1 - 0.5 * 0.4)) * 0.5 + 0.5 * 0.5
    b = (1 - 0.5 * (1 - 0.5 * 0.5)) * 0.6 + 0.5 * 0.4
    assert nxt.i == pytest.approx([a, b], abs=1e-15)
    assert nxt.t == 1
    assert detail.delta == pytest.approx([0.2, 0.25])


def test_star_step_matches_loop():
    p = EpidemicParams(0.1, 0.3, 0.2)
    i = np.array([0.9, 0.1, 0.2, 0.3, 0.0])
    nxt, _ = step(star(), p, InfectionProfile(i))
    assert nxt.i == pytest.approx(reference_step(star(), p, i), abs=1e-15)


def test_directed_step_uses_in_neighbours():
    g = Graph.from_arcs(2, [0], [1], directed=True)
    p = EpidemicParams(0.0, 0.0, 1.0)
    nxt, _ = step(g, p, InfectionProfile(np.array([1.0, 0.0])))
    # 1 hears from 0; 0 hears from nobody
    assert nxt.i.tolist() == [1.0, 1.0]
    nxt, _ = step(g, p, InfectionProfile(np.array([0.0, 1.0])))
    assert nxt.i.tolist() == [0.0, 1.0]


def test_step_rejects_bad_profiles():
    p = EpidemicParams(0.1, 0.1, 0.1)
    with pytest.raises(PreconditionError):
        step(path(3), p, InfectionProfile(np.array([0.1, 0.2])))
    with pytest.raises(PreconditionError):
        step(path(3), p, InfectionProfile(np.array([0.1, 1.2, 0.0])))


@given(params, st.lists(st.floats(0, 1), min_size=5, max_size=5))
@settings(max_examples=200, deadline=None)
def test_step_matches_reference_and_stays_in_unit_interval(p, i):
    g = star()
    i = np.array(i)
    nxt, _ = step(g, p, InfectionProfile(i))
    assert np.all((nxt.i >= 0) & (nxt.i <= 1))
    assert nxt.i == pytest.approx(reference_step(g, p, i), abs=1e-12)


@given(params, st.lists(st.floats(0, 1), min_size=5, max_size=5))
@settings(max_examples=200, deadline=None)
def test_one_step_floor(p, i):
    # after one step every node is at least min(1 - beta, alpha)
    nxt, _ = step(star(), p, InfectionProfile(np.array(i)))
    assert np.all(nxt.i >= p.nu - 1e-12)


@given(params, st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=5, max_size=5))
@settings(max_examples=200, deadline=None)
def test_update_is_monotone_when_recovery_dominates(p, pairs):
    # increasing in neighbour coordinates always; in its own coordinate the slope is
    # (1-alpha) prod - beta, which is nonnegative once (1-alpha)(1-gamma)^maxdeg >= beta
    if (1 - p.alpha) * (1 - p.gamma) ** 4 < p.beta:
        return
    lo = np.array([min(a, b) for a, b in pairs])
    hi = np.array([max(a, b) for a, b in pairs])
    a, _ = step(star(), p, InfectionProfile(lo))
    b, _ = step(star(), p, InfectionProfile(hi))
    assert np.all(a.i <= b.i + 1e-12)


def test_integrate_records():
    p = EpidemicParams(0.1, 0.3, 0.2)
    g = path(4)
    i0 = np.array([1.0, 0.0, 0.0, 0.5])
    tr = integrate(g, p, i0, 5, record_profiles=True, record_details=True)
    assert tr.ibar.shape == (6,) and tr.profiles.shape == (6, 4)
    cur = i0
    for t in range(1, 6):
        cur = reference_step(g, p, cur)
        assert tr.profiles[t] == pytest.approx(cur, abs=1e-14)
        assert tr.ibar[t] == pytest.approx(cur.mean(), abs=1e-14)
    assert len(tr.details) == 5


def test_integrate_pure_recovery():
    # no transmission and no spontaneous infection: geometric decay
    p = EpidemicParams(0.0, 0.5, 0.0)
    tr = integrate(edgeless(3), p, np.ones(3), 20)
    assert tr.ibar == pytest.approx(0.5 ** np.arange(21), rel=1e-14)


def test_integrate_requires_steps():
    with pytest.raises(ParameterError):
        integrate(path(3), EpidemicParams(0, 0, 0), np.zeros(3), 0)


def test_equilibrium_edgeless_closed_form():
    # alpha (1 - i) + (1 - beta) i = i  =>  i = alpha / (alpha + beta)
    p = EpidemicParams(0.3, 0.2, 0.5)
    eq = find_equilibrium(edgeless(5), p)
    assert eq.converged
    assert eq.i_star == pytest.approx(np.full(5, 0.6), abs=1e-9)


def test_equilibrium_regular_matches_scalar(reg2000):
    # on a d-regular graph the fixed point is uniform and solves the scalar equation
    p = EpidemicParams(0.4, 0.6, 0.004)
    eq = find_equilibrium(reg2000, p)
    x = eq.i_star[0]
    assert np.ptp(eq.i_star) < 1e-12
    assert (1 - 0.6 * (1 - 0.004 * x) ** 6) * (1 - x) == pytest.approx(0.6 * x, abs=1e-9)


def test_equilibrium_not_converged_is_reported():
    p = EpidemicParams(0.3, 0.2, 0.5)
    eq = find_equilibrium(star(), p, max_iter=2)
    assert not eq.converged and eq.residual > eq.tol


def test_mc_frozen_state():
    # beta = 0 and alpha = 1: everything infected after one step and stays so
    p = EpidemicParams(1.0, 0.0, 0.0)
    mc = monte_carlo(path(10), p, 0.0, 5, 7, 3)
    assert mc.ibar_mean.tolist() == [0.0] + [1.0] * 5
    assert np.all(mc.ibar_std[1:] == 0.0)


def test_mc_initial_fraction():
    mc = monte_carlo(path(10), EpidemicParams(0, 0, 0), 0.25, 3, 4, 1)
    # ceil(2.5) = 3 nodes seeded and nothing ever changes
    assert mc.ibar_mean.tolist() == [0.3] * 4
    assert mc.node_freq.sum(axis=1) == pytest.approx([3.0] * 4)


def test_mc_pure_recovery_bands():
    # each infected node survives a step with probability 1/2
    n, runs = 200, 400
    mc = monte_carlo(edgeless(n), EpidemicParams(0.0, 0.5, 0.0), 1.0, 6, runs, 11)
    for t in range(7):
        mean = 0.5 ** t
        sd = math.sqrt(mean * (1 - mean) / (n * runs))
        assert abs(mc.ibar_mean[t] - mean) <= 5 * sd + 1e-15


def test_mc_matches_model_on_edgeless():
    p = EpidemicParams(0.2, 0.3, 0.9)
    mc = monte_carlo(edgeless(300), p, 0.0, 30, 200, 5)
    target = 0.2 / 0.5
    assert abs(mc.ibar_mean[30] - target) < 0.01


def test_mc_deterministic_across_workers_and_blocks():
    g = generate("erdos_renyi", 150, 400, 2)
    p = EpidemicParams(0.1, 0.4, 0.2)
    a = monte_carlo(g, p, 0.2, 20, 150, 42, workers=1)
    b = monte_carlo(g, p, 0.2, 20, 150, 42, workers=4)
    c = monte_carlo(g, p, 0.2, 20, 150, 42, block_size=7)
    for other in (b, c):
        assert np.array_equal(a.ibar_mean, other.ibar_mean)
        assert np.array_equal(a.ibar_std, other.ibar_std)
        assert np.array_equal(a.node_freq, other.node_freq)
    d = monte_carlo(g, p, 0.2, 20, 150, 43)
    assert not np.array_equal(a.ibar_mean, d.ibar_mean)


def test_mc_run_prefix_is_stable():
    # run r depends only on (master_seed, r)
    g = path(20)
    p = EpidemicParams(0.1, 0.4, 0.5)
    a = monte_carlo(g, p, 0.5, 10, 10, 8)
    b = monte_carlo(g, p, 0.5, 10, 70, 8)
    assert np.array_equal(a.run_ibar, b.run_ibar[:10])


@pytest.mark.parametrize("kw", [dict(runs=0), dict(T=0), dict(initial_fraction=1.5)])
def test_mc_parameter_errors(kw):
    args = dict(g=path(3), p=EpidemicParams(0, 0, 0), initial_fraction=0.5, T=3, runs=2, master_seed=0)
    args.update(kw)
    with pytest.raises(ParameterError):
        monte_carlo(**args)


def test_push_infection_keeps_relative_precision():
    from pushpull.dynamics import push_infection
    # a single neighbour at i = 1e-12 pushes with probability exactly gamma * 1e-12
    i = np.array([1e-12, 0.0])
    assert push_infection(two_node(), 0.4, i)[1] == pytest.approx(0.4e-12, rel=1e-14)
