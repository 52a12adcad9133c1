import itertools

import numpy as np
import pytest
from hypothesis import given

from contagion.core.errors import InstanceTooLargeError
from contagion.core.rng import make_rng
from contagion.core.run_manager import ManagedRun
from contagion.graph import ModelKind, TriggerModel, WeightedDigraph, explicit_model
from contagion.simulate import (
    LiveEdgeSampler,
    estimate_influence,
    exact_influence,
    run_cascade_process,
    run_threshold_process,
    sample_live_edges,
)

from .strategies import PROPERTY_SETTINGS, lt_models


class TestExactInfluence:
    def test_chain_star(self, chain_star_model) -> None:
        assert exact_influence(chain_star_model, [0]) == pytest.approx(2.5)
        assert exact_influence(chain_star_model, [1]) == pytest.approx(3.0)

    def test_triangle(self, triangle_model) -> None:
        assert exact_influence(triangle_model, [0]) == pytest.approx(1.56)

    def test_ic_star(self, ic_star_model) -> None:
        assert exact_influence(ic_star_model, [0]) == pytest.approx(1.6)

    def test_explicit(self) -> None:
        model = explicit_model(
            3,
            [[], [((0,), 0.5), ((), 0.5)], [((0, 1), 0.3), ((1,), 0.2), ((), 0.5)]],
        )
        assert exact_influence(model, [0]) == pytest.approx(1.9)

    def test_empty_seed_set(self, triangle_model) -> None:
        assert exact_influence(triangle_model, []) == 0.0

    def test_limit(self, ic_star_model) -> None:
        with pytest.raises(InstanceTooLargeError) as info:
            exact_influence(ic_star_model, [0], limit=4)
        assert info.value.count == 8
        assert info.value.exit_code == 2

    @PROPERTY_SETTINGS
    @given(lt_models(max_n=4))
    def test_monotone_in_the_seed_set(self, model: TriggerModel) -> None:
        values = {
            s: exact_influence(model, s)
            for r in range(model.n + 1)
            for s in itertools.combinations(range(model.n), r)
        }
        for s, value in values.items():
            for x in set(range(model.n)) - set(s):
                assert value <= values[tuple(sorted((*s, x)))] + 1e-9


class TestSampling:
    @PROPERTY_SETTINGS
    @given(lt_models(max_n=6))
    def test_lt_sample_has_one_live_in_edge_at_most(self, model: TriggerModel) -> None:
        sampler = LiveEdgeSampler(model)
        rng = make_rng(0, "test")
        for _ in range(20):
            live = sampler.sample_mask(rng)
            counts = np.bincount(model.graph.dst[live], minlength=model.n)
            assert counts.max(initial=0) <= 1

    def test_lt_marginals(self, triangle_model) -> None:
        rng = make_rng(1, "marginals")
        sampler = LiveEdgeSampler(triangle_model)
        frequency = np.mean([sampler.sample_mask(rng) for _ in range(20_000)], axis=0)
        assert np.allclose(frequency, 0.4, atol=0.02)

    def test_ic_edges_are_independent_coins(self, ic_star_model) -> None:
        rng = make_rng(2, "coins")
        frequency = np.mean([sample_live_edges(ic_star_model, rng).mask for _ in range(20_000)], axis=0)
        assert np.allclose(frequency, 0.2, atol=0.02)

    def test_explicit_draws_whole_trigger_sets(self) -> None:
        model = explicit_model(3, [[], [], [((0, 1), 0.5), ((), 0.5)]])
        sampler = LiveEdgeSampler(model)
        rng = make_rng(3, "explicit")
        for _ in range(50):
            live = sampler.sample_mask(rng)
            assert live.sum() in (0, 2)


class TestEstimate:
    def test_close_to_exact(self, triangle_model) -> None:
        estimate = estimate_influence(triangle_model, [0], 20_000, seed=5)
        assert estimate.replications == 20_000
        assert abs(estimate.mean - 1.56) <= 6 * estimate.stderr + 1e-3

    @pytest.mark.parametrize("fixture, exact", [("chain_star_model", 2.5), ("triangle_model", 1.56)])
    def test_unbiased_over_seeded_trials(self, request, fixture, exact) -> None:
        model = request.getfixturevalue(fixture)
        trials = [estimate_influence(model, [0], 200, seed=s) for s in range(40)]
        covered = sum(abs(t.mean - exact) <= 4 * t.stderr for t in trials)
        assert covered >= 0.95 * len(trials)

    def test_deterministic_across_thread_counts(self, chain_star_model) -> None:
        serial = estimate_influence(chain_star_model, [0], 300, seed=9)
        pooled = estimate_influence(chain_star_model, [0], 300, seed=9, run=ManagedRun("pool", threads=4))
        assert serial == pooled

    def test_isolated_seeds(self) -> None:
        g = WeightedDigraph.from_edges(5, [])
        estimate = estimate_influence(TriggerModel(g, ModelKind.LINEAR_THRESHOLD), [0, 1, 2], 7, seed=0)
        assert estimate.mean == 3.0
        assert estimate.stderr == 0.0

    def test_replications_must_be_positive(self, triangle_model) -> None:
        with pytest.raises(ValueError):
            estimate_influence(triangle_model, [0], 0, seed=0)


class TestProcesses:
    def test_threshold_process_matches_exact(self, chain_star_model) -> None:
        rng = make_rng(4, "threshold")
        sizes = [run_threshold_process(chain_star_model, [0], rng).sum() for _ in range(20_000)]
        assert np.mean(sizes) == pytest.approx(2.5, abs=0.03)

    def test_cascade_process_matches_exact(self, ic_star_model) -> None:
        rng = make_rng(6, "cascade")
        sizes = [run_cascade_process(ic_star_model, [0], rng).sum() for _ in range(20_000)]
        assert np.mean(sizes) == pytest.approx(1.6, abs=0.03)

    def test_seeds_stay_infected(self, triangle_model) -> None:
        infected = run_threshold_process(triangle_model, [1, 2], make_rng(0))
        assert infected[1] and infected[2]
