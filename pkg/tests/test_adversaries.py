import numpy as np
import pytest

from contagion.bandit import (
    Adversary,
    CliqueAdversary,
    FixedSequenceAdversary,
    GameConfig,
    IIDBernoulliAdversary,
    SourceSinkAdversary,
    clique_delta,
    clique_gap,
    empty_adversary,
    gap_estimate,
    source_sink_delta,
    source_sink_gap,
)
from contagion.core.errors import ConfigError
from contagion.core.rng import make_rng
from contagion.graph import EdgeSet, complete


def generic_singletons(adversary: Adversary, g, masks: np.ndarray) -> np.ndarray:
    return Adversary.singleton_rewards(adversary, g, masks)


class TestIIDBernoulli:
    def test_open_rate(self) -> None:
        g = complete(10, directed=False)
        masks = IIDBernoulliAdversary(0.3).sample(g, make_rng(0, "iid"), 2000)
        assert masks.shape == (2000, 45)
        assert masks.mean() == pytest.approx(0.3, abs=0.01)

    def test_empty(self) -> None:
        g = complete(4, directed=True)
        adversary = empty_adversary()
        assert adversary.label == "empty"
        sets = adversary.edge_sets(GameConfig(g, horizon=3), make_rng(1))
        assert [len(s) for s in sets] == [0, 0, 0]

    def test_probability_range(self) -> None:
        with pytest.raises(ConfigError):
            IIDBernoulliAdversary(1.5)


class TestFixedSequence:
    def test_replays_without_randomness(self, k3) -> None:
        sequence = [EdgeSet.from_pairs(k3, [(0, 1)]), EdgeSet.empty(k3)]
        adversary = FixedSequenceAdversary(sequence)
        assert adversary.edge_sets(GameConfig(k3, horizon=2), make_rng(0)) == sequence
        assert adversary.edge_sets(GameConfig(k3, horizon=2), make_rng(99)) == sequence

    def test_horizon_must_match(self, k3) -> None:
        adversary = FixedSequenceAdversary([EdgeSet.empty(k3)])
        with pytest.raises(ConfigError):
            adversary.edge_sets(GameConfig(k3, horizon=2), make_rng(0))

    def test_slot_count_must_match(self, k3) -> None:
        adversary = FixedSequenceAdversary([EdgeSet(np.zeros(2, dtype=bool))])
        with pytest.raises(ConfigError):
            adversary.edge_sets(GameConfig(k3, horizon=1), make_rng(0))


class TestClique:
    def test_open_edges_form_one_clique(self) -> None:
        g = complete(7, directed=False)
        adversary = CliqueAdversary(7, 4, 0.2, distinguished=3)
        masks = adversary.sample(g, make_rng(2, "clique"), 200)
        for row in masks:
            ends = set(g.slot_pairs[row].ravel().tolist())
            assert int(row.sum()) == len(ends) * (len(ends) - 1) // 2

    def test_fast_singletons_match_reach(self) -> None:
        g = complete(6, directed=False)
        adversary = CliqueAdversary(6, 4, 0.3, distinguished=0)
        masks = adversary.sample(g, make_rng(3, "clique"), 300)
        assert adversary.singleton_rewards(g, masks) == pytest.approx(generic_singletons(adversary, g, masks))

    def test_gap_closed_form(self) -> None:
        assert clique_gap(10, 2, 0.1) == pytest.approx(0.00288)
        assert clique_gap(6, 4, 0.3) == pytest.approx(4 * 16 * 0.7 * 0.3 / 216)

    @pytest.mark.slow
    def test_gap_matches_simulation(self) -> None:
        g = complete(10, directed=False)
        adversary = CliqueAdversary(10, 2, 0.1, distinguished=0)
        mean, stderr = gap_estimate(adversary, g, 0, 1, 1_000_000, seed=11)
        assert abs(mean - 0.00288) <= 4 * stderr

    def test_needs_undirected_complete_graph(self) -> None:
        adversary = CliqueAdversary(4, 2, 0.1)
        with pytest.raises(ConfigError):
            adversary.check(GameConfig(complete(4, directed=True), horizon=1))
        with pytest.raises(ConfigError):
            adversary.check(GameConfig(complete(5, directed=False), horizon=1))

    @pytest.mark.parametrize(
        "c, delta, distinguished", [(0, 0.1, None), (3, 0.5, None), (3, 0.1, 4)]
    )
    def test_rejects_parameters(self, c, delta, distinguished) -> None:
        with pytest.raises(ConfigError):
            CliqueAdversary(4, c, delta, distinguished)

    def test_delta_shrinks_with_horizon(self) -> None:
        assert clique_delta(10, 5, 4000) == pytest.approx(clique_delta(10, 5, 1000) / 2)


class TestSourceSink:
    def test_only_source_to_sink_edges_open(self) -> None:
        g = complete(6, directed=True)
        adversary = SourceSinkAdversary(6, 2, 2, 0.4, distinguished=1)
        masks = adversary.sample(g, make_rng(4, "ss"), 300)
        for row in masks:
            tails = set(g.slot_pairs[row, 0].tolist())
            heads = set(g.slot_pairs[row, 1].tolist())
            assert not tails & heads

    def test_fast_singletons_match_reach(self) -> None:
        g = complete(6, directed=True)
        adversary = SourceSinkAdversary(6, 2, 2, 0.4, distinguished=1)
        masks = adversary.sample(g, make_rng(5, "ss"), 300)
        assert adversary.singleton_rewards(g, masks) == pytest.approx(generic_singletons(adversary, g, masks))

    def test_gap_closed_form(self) -> None:
        assert source_sink_gap(6, 1, 2, 0.5) == pytest.approx(5 / 216)

    @pytest.mark.slow
    def test_gap_matches_simulation(self) -> None:
        g = complete(6, directed=True)
        adversary = SourceSinkAdversary(6, 1, 2, 0.5, distinguished=0)
        mean, stderr = gap_estimate(adversary, g, 0, 1, 1_000_000, seed=13)
        assert abs(mean - 5 / 216) <= 4 * stderr

    def test_rejects_parameters(self) -> None:
        with pytest.raises(ConfigError) as info:
            SourceSinkAdversary(4, 3, 2, 1.0)
        assert len(info.value.messages) == 2

    def test_needs_directed_complete_graph(self) -> None:
        with pytest.raises(ConfigError):
            SourceSinkAdversary(4, 1, 1, 0.1).check(GameConfig(complete(4, directed=False), horizon=1))

    def test_delta(self) -> None:
        assert source_sink_delta(9, 3, 3, 18) == pytest.approx(0.5 * 8 / 9 * 1.0 * np.sqrt(9 * 3 / 18))
