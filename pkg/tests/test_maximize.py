import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contagion.core.errors import SearchSpaceTooLargeError
from contagion.maximize import (
    TRACE_COLUMNS,
    Objective,
    exhaustive_maximize,
    greedy_maximize,
    lazy_greedy_maximize,
    lb_objective,
    lb_trig_objective,
    make_objective,
    perturbed_greedy,
)

from .strategies import PROPERTY_SETTINGS, lt_models

WEIGHTS = [0.5, 3.0, 1.0, 3.0, 2.0]


def modular() -> Objective:
    return Objective("modular", lambda s, _: sum(WEIGHTS[v] for v in s))


def coverage() -> Objective:
    """Coverage of {0..5} by fixed sets; monotone and submodular."""
    sets = [{0, 1, 2}, {2, 3}, {3, 4, 5}, {0, 5}]
    return Objective("coverage", lambda s, _: float(len(set().union(*(sets[v] for v in s)))))


class TestGreedy:
    def test_modular_picks_heaviest_smallest_id_first(self) -> None:
        trace = greedy_maximize(modular(), 3, range(5))
        assert trace.selected == [1, 3, 4]
        assert trace.gains == [3.0, 3.0, 2.0]
        assert trace.final_value == 8.0
        assert trace.seeds == (1, 3, 4)

    def test_zero_budget(self) -> None:
        trace = greedy_maximize(modular(), 0, range(5))
        assert trace.selected == []
        assert trace.final_value == 0.0
        frame = trace.to_frame()
        assert list(frame.columns) == TRACE_COLUMNS
        assert frame.empty

    def test_budget_out_of_range(self) -> None:
        with pytest.raises(ValueError):
            greedy_maximize(modular(), 6, range(5))

    def test_coverage(self) -> None:
        trace = greedy_maximize(coverage(), 2, range(4))
        assert trace.selected == [0, 2]
        assert trace.final_value == 6.0
        assert trace.gains_nonincreasing()

    def test_trace_frame_without_timing(self) -> None:
        frame = greedy_maximize(modular(), 2, range(5)).to_frame(record_timing=False)
        assert frame["step"].tolist() == [1, 2]
        assert frame["millis"].tolist() == [0.0, 0.0]

    def test_lazy_matches_eager_on_coverage(self) -> None:
        eager = greedy_maximize(coverage(), 3, range(4))
        lazy = lazy_greedy_maximize(coverage(), 3, range(4))
        assert lazy.selected == eager.selected
        assert lazy.values == eager.values
        assert lazy.evaluations <= eager.evaluations

    @PROPERTY_SETTINGS
    @given(lt_models(max_n=6), st.integers(0, 3))
    def test_lazy_matches_eager_on_lower_bounds(self, model, k) -> None:
        k = min(k, model.n)
        for obj in (lb_objective(model, 1), lb_objective(model, 2), lb_trig_objective(model)):
            eager = greedy_maximize(obj, k, range(model.n))
            lazy = lazy_greedy_maximize(obj, k, range(model.n))
            assert lazy.selected == eager.selected
            assert lazy.values == pytest.approx(eager.values)

    @PROPERTY_SETTINGS
    @given(lt_models(max_n=6), st.integers(1, 3))
    def test_greedy_guarantee(self, model, k) -> None:
        k = min(k, model.n)
        obj = lb_objective(model, 2)
        _, best = exhaustive_maximize(obj, k, range(model.n))
        assert greedy_maximize(obj, k, range(model.n)).final_value >= (1 - 1 / math.e) * best - 1e-9


class TestExhaustive:
    def test_first_maximizer_wins(self) -> None:
        assert exhaustive_maximize(modular(), 1, range(5)) == ((1,), 3.0)
        assert exhaustive_maximize(coverage(), 2, range(4)) == ((0, 2), 6.0)

    def test_limit(self) -> None:
        with pytest.raises(SearchSpaceTooLargeError) as info:
            exhaustive_maximize(modular(), 2, range(5), limit=5)
        assert info.value.count == 10


class TestPerturbedGreedy:
    def test_zero_errors_is_greedy(self) -> None:
        assert perturbed_greedy(coverage(), 2, range(4), [0.0, 0.0]).selected == [0, 2]

    def test_takes_worst_admissible(self) -> None:
        trace = perturbed_greedy(modular(), 2, range(5), [1.5, 0.0])
        assert trace.selected == [4, 1]
        assert trace.label == "modular+errors"

    def test_needs_one_error_per_step(self) -> None:
        with pytest.raises(ValueError):
            perturbed_greedy(modular(), 2, range(5), [0.1])


def test_make_objective(triangle_model) -> None:
    assert make_objective("lb2", triangle_model).label == "lb2"
    assert not make_objective("ub_trunc", triangle_model).guaranteed
    mc = make_objective("mc", triangle_model, replications=5, seed=1)
    assert not mc.guaranteed
    assert mc((0,), 0) == mc((0,), 0)
    with pytest.raises(ValueError):
        make_objective("nope", triangle_model)
