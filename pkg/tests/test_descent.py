import math

import numpy as np
import pytest

from synclandscape.descent import (
    Classification,
    DescentConfig,
    DescentTrace,
    StopReason,
    classify_by_energy,
    classify_by_order,
    descend,
    multi_restart,
    random_init,
    trial_seed,
)
from synclandscape.errors import InvalidParameterError, InvalidSizeError, NumericalDivergenceError, ShapeError
from synclandscape.graphs import WeightedGraph, gen_complete, gen_cycle, gen_er, gen_path, gen_wsg
from synclandscape.seeding import derive_seed
from synclandscape.spectral import twisted_state

from conftest import two_disjoint_edges


def euler_oracle(w, theta, step, iters):
    """Plain double-loop Euler steps on the Kuramoto right-hand side."""
    t = list(theta)
    n = len(t)
    for _ in range(iters):
        v = [sum(w[i][j] * math.sin(t[j] - t[i]) for j in range(n)) for i in range(n)]
        t = [t[i] + step * v[i] for i in range(n)]
    return np.array(t)


class TestRandomInit:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_init(5, 1), random_init(5, 1))

    def test_seeds_differ(self):
        assert not np.array_equal(random_init(5, 1), random_init(5, 2))

    @pytest.mark.parametrize("seed", [0, 7, 2**63 + 5])
    def test_mean_concentrates(self, seed):
        n = 10000
        t = random_init(n, seed)
        assert abs(t.mean() - math.pi) <= 5 * (2 * math.pi / math.sqrt(12 * n))

    def test_range(self):
        t = random_init(1000, 3)
        assert np.all(t >= 0) and np.all(t < 2 * math.pi)

    def test_single(self):
        t = random_init(1, 0)
        assert t.shape == (1,) and 0 <= t[0] < 2 * math.pi

    def test_invalid(self):
        with pytest.raises(InvalidSizeError):
            random_init(0, 1)


class TestConfig:
    def test_defaults(self):
        cfg = DescentConfig()
        assert (cfg.step, cfg.max_iters, cfg.grad_tol, cfg.align_tol, cfg.trace_every) == (
            0.005, 1000, 1e-8, 1e-3, 0)

    @pytest.mark.parametrize(
        "kw",
        [{"step": 0}, {"step": -1}, {"step": math.nan}, {"max_iters": 0}, {"grad_tol": 0},
         {"align_tol": 0}, {"align_tol": 1}, {"trace_every": -1}],
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidParameterError):
            DescentConfig(**kw)


class TestDescend:
    def test_matches_euler_oracle(self):
        g = gen_er(8, 0.6, 4)
        init = random_init(8, 9)
        outcome, _ = descend(g, init, DescentConfig(max_iters=25, grad_tol=1e-300))
        expected = euler_oracle(g.weights.tolist(), init, 0.005, 25)
        np.testing.assert_allclose(outcome.final_theta, expected, atol=1e-12)
        assert outcome.iterations == 25 and outcome.stopped_by is StopReason.MAX_ITERS

    def test_path_near_aligned(self):
        rng = np.random.default_rng(3)
        init = 0.3 + 0.01 * rng.uniform(0, 1, 10)
        outcome, _ = descend(gen_path(10), init)
        assert outcome.classification is Classification.GLOBAL
        assert outcome.final_energy < 1e-4

    def test_twisted_stationary(self):
        init = twisted_state(20)
        outcome, trace = descend(gen_wsg(20, 1), init, DescentConfig(trace_every=5))
        assert outcome.stopped_by is StopReason.GRADIENT_TOL
        assert outcome.iterations == 0
        assert outcome.classification is Classification.NON_GLOBAL
        np.testing.assert_array_equal(outcome.final_theta, init)
        assert len(trace) == 1 and trace.rows[0][0] == 0

    @pytest.mark.parametrize("seed", range(20))
    def test_complete_always_global(self, seed):
        outcome, _ = descend(gen_complete(30), random_init(30, seed))
        assert outcome.is_global

    def test_does_not_mutate_init(self):
        init = random_init(12, 0)
        copy = init.copy()
        descend(gen_cycle(12), init)
        np.testing.assert_array_equal(init, copy)

    def test_shape_error(self):
        with pytest.raises(ShapeError):
            descend(gen_path(4), np.zeros(5))

    def test_divergence_reports_iteration(self):
        with pytest.raises(NumericalDivergenceError) as info:
            descend(gen_path(3), [0.0, math.inf, 1.0])
        assert info.value.context["iteration"] == 0

    @pytest.mark.parametrize("seed", range(6))
    def test_energy_monotone_on_trace(self, seed):
        g = gen_er(60, 0.3, seed)
        _, trace = descend(g, random_init(60, seed), DescentConfig(trace_every=1, max_iters=400))
        e = trace.energies()
        assert np.all(np.diff(e) <= 1e-12 * (1 + e[:-1]))

    def test_trace_layout(self):
        cfg = DescentConfig(trace_every=7, max_iters=50, grad_tol=1e-300)
        _, trace = descend(gen_cycle(9), random_init(9, 2), cfg)
        iters = [r[0] for r in trace.rows]
        assert iters[0] == 0 and iters[-1] == 50
        assert all(b > a for a, b in zip(iters, iters[1:]))
        assert iters[:-1] == list(range(0, 50, 7))

    def test_trace_csv(self):
        _, trace = descend(gen_cycle(5), random_init(5, 2), DescentConfig(trace_every=100))
        lines = trace.to_csv().splitlines()
        assert lines[0] == DescentTrace.HEADER == "iter,energy,grad_norm,order_mag"
        assert all(len(line.split(",")) == 4 for line in lines[1:])

    def test_no_trace_by_default(self):
        _, trace = descend(gen_cycle(5), random_init(5, 2))
        assert len(trace) == 0

    def test_deterministic(self):
        g = gen_er(40, 0.2, 1)
        a, ta = descend(g, random_init(40, 5), DescentConfig(trace_every=10))
        b, tb = descend(g, random_init(40, 5), DescentConfig(trace_every=10))
        np.testing.assert_array_equal(a.final_theta, b.final_theta)
        assert ta.rows == tb.rows

    def test_outcome_invariants(self):
        cfg = DescentConfig(max_iters=300)
        for seed in range(5):
            g = gen_er(30, 0.4, seed)
            out, _ = descend(g, random_init(30, seed), cfg)
            assert out.final_energy >= 0 and out.iterations <= cfg.max_iters
            if out.is_global:
                assert out.final_energy <= 10 * cfg.align_tol * 30 * g.degrees().max()


class TestClassifiers:
    def test_order_aligned(self):
        assert classify_by_order(np.full(7, 2.0), 1e-3) is Classification.GLOBAL

    def test_order_twisted(self):
        assert classify_by_order(twisted_state(7), 1e-3) is Classification.NON_GLOBAL

    def test_energy_rule(self):
        g = gen_cycle(8)
        assert classify_by_energy(g, np.zeros(8), 1e-6) is Classification.GLOBAL
        assert classify_by_energy(g, twisted_state(8), 1e-6) is Classification.NON_GLOBAL

    def test_rules_agree_on_converged(self):
        g = gen_er(40, 0.5, 2)
        for seed in range(5):
            out, _ = descend(g, random_init(40, seed))
            assert classify_by_energy(g, out.final_theta, 1e-6) is out.classification


class TestMultiRestart:
    def test_trial_seed(self):
        assert trial_seed(11, 3) == derive_seed(11, 3)

    def test_complete(self):
        assert multi_restart(gen_complete(20), 50, base_seed=0) == 50

    def test_disjoint_edges(self):
        # each edge aligns on its own; the pair lines up only by chance
        assert multi_restart(two_disjoint_edges(), 50, base_seed=0) < 50

    @pytest.mark.slow
    def test_path15_relaxed_iterations(self):
        assert multi_restart(gen_path(15), 50, base_seed=0, cfg=DescentConfig(max_iters=30000)) == 50

    def test_worker_independent(self):
        g = gen_er(25, 0.15, 8)
        counts = {multi_restart(g, 12, 4, workers=w) for w in (1, 3)}
        assert len(counts) == 1

    def test_invalid_trials(self):
        with pytest.raises(InvalidParameterError):
            multi_restart(gen_path(3), 0, 0)

    def test_error_context(self):
        w = np.array([[0.0, 1e308], [1e308, 0.0]])
        cfg = DescentConfig(step=1e10)
        with pytest.raises(NumericalDivergenceError) as info:
            multi_restart(WeightedGraph(w), 2, 5, cfg)
        assert info.value.context["trial"] == 0
        assert info.value.context["seed"] == trial_seed(5, 0)
