import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from contagion import bounds
from contagion.core.errors import ModelValidationError
from contagion.graph import ModelKind, TriggerModel, WeightedDigraph, complete, uniform_weights, validate
from contagion.simulate import exact_influence

from .strategies import PROPERTY_SETTINGS, explicit_models, ic_models, lt_models, seeded, tree_models

TOLERANCE = 1e-9


def _leq(a: float, b: float) -> bool:
    return a <= b + TOLERANCE * max(1.0, abs(b))


class TestChainStar:
    def test_first_order_bound_misses_the_star(self, chain_star_model) -> None:
        assert bounds.lb_m(chain_star_model, [0], 1) == pytest.approx(1.5)

    def test_higher_orders_are_exact_on_a_tree(self, chain_star_model) -> None:
        assert bounds.lb_m(chain_star_model, [0], 2) == pytest.approx(2.5)
        assert bounds.lb_m(chain_star_model, [0], 3) == pytest.approx(2.5)
        assert bounds.ub_truncated(chain_star_model, [0]) == pytest.approx(2.5)
        assert bounds.ub_neumann(chain_star_model, [0]) == pytest.approx(2.5)
        assert bounds.path_sum_influence(chain_star_model, [0]) == pytest.approx(2.5)

    def test_strongest_path(self, chain_star_model) -> None:
        assert bounds.lb_trig(chain_star_model, [0]) == pytest.approx(2.5)


class TestTriangle:
    def test_values(self, triangle_model) -> None:
        assert bounds.lb_m(triangle_model, [0], 1) == pytest.approx(1.4)
        assert bounds.lb_m(triangle_model, [0], 2) == pytest.approx(1.56)
        assert bounds.ub_truncated(triangle_model, [0]) == pytest.approx(1.56)

    def test_ratio_guarantee(self, triangle_model) -> None:
        ratio = bounds.ratio_guarantees(triangle_model, [0])
        assert ratio.lambda_bar_inf == pytest.approx(0.4)
        assert ratio.r1 == pytest.approx(1 / 0.6)
        assert ratio.r2 == pytest.approx(1 / 0.84)


def test_all_seeds_and_no_seeds(triangle_model) -> None:
    every = [0, 1, 2]
    for value in (
        bounds.lb_m(triangle_model, every, 1),
        bounds.lb_m(triangle_model, every, 3),
        bounds.lb_trig(triangle_model, every),
        bounds.ub_truncated(triangle_model, every),
        bounds.ub_neumann(triangle_model, every),
    ):
        assert value == 3.0
    assert bounds.lb_trig(triangle_model, []) == 0.0
    assert bounds.ub_truncated(triangle_model, []) == 0.0


def test_neumann_diverges_on_a_saturated_cycle() -> None:
    g = WeightedDigraph.from_edges(5, [(0, 4, 0.5), (1, 2, 1.0), (2, 3, 1.0), (3, 1, 1.0)])
    model = TriggerModel(g, ModelKind.LINEAR_THRESHOLD)
    assert bounds.ub_neumann(model, [0]) is None
    assert bounds.ratio_guarantees(model, [0]).r1 is None
    assert bounds.ub_truncated(model, [0]) == pytest.approx(1.5)


def test_lt_only_bounds_reject_ic(ic_star_model) -> None:
    with pytest.raises(ModelValidationError):
        bounds.lb_m(ic_star_model, [0], 1)
    with pytest.raises(ValueError):
        bounds.lb_m(TriggerModel(ic_star_model.graph, ModelKind.LINEAR_THRESHOLD), [0], 4)


class TestIndependentCascade:
    def test_worst_case(self, ic_star_model) -> None:
        worst = bounds.ic_worst_case(ic_star_model, [0])
        assert worst.lambda_inf == pytest.approx(0.6)
        assert worst.value == pytest.approx(1 + 0.6 * (1 - 0.6**3) / 0.4)
        assert worst.simplified == pytest.approx(2.5)
        assert not worst.trivial

    def test_worst_case_at_unit_rate(self) -> None:
        model = uniform_weights(complete(3, directed=True), 0.5)
        worst = bounds.ic_worst_case(model, [0])
        assert worst.value == pytest.approx(3.0)
        assert worst.simplified is None
        assert worst.trivial

    def test_hazard_bound(self, ic_star_model) -> None:
        hazard = -math.log(0.8)
        rho = hazard / 2 * math.sqrt(3)
        assert bounds.hazard_radius(ic_star_model) == pytest.approx(rho, rel=1e-6)
        expected = 1 + math.sqrt(rho / (1 - rho)) * math.sqrt(3)
        assert bounds.hazard_bound(ic_star_model, [0]) == pytest.approx(expected, rel=1e-6)
        assert bounds.hazard_bound(ic_star_model, [0, 1, 2, 3]) is None

    def test_hazard_needs_finite_rates(self) -> None:
        model = uniform_weights(complete(3, directed=True), 1.0)
        assert bounds.hazard_bound(model, [0]) is None

    @PROPERTY_SETTINGS
    @given(seeded(ic_models()))
    def test_ic_bounds_hold(self, case) -> None:
        model, seeds = case
        exact = exact_influence(model, seeds)
        assert _leq(bounds.lb_trig(model, seeds), exact)
        assert _leq(exact, bounds.ub_truncated(model, seeds))
        assert _leq(exact, bounds.ic_worst_case(model, seeds).value)


class TestLinearThresholdProperties:
    @PROPERTY_SETTINGS
    @given(seeded(lt_models()))
    def test_sandwich(self, case) -> None:
        model, seeds = case
        exact = exact_influence(model, seeds)
        chain = [bounds.lb_m(model, seeds, m) for m in (1, 2, 3)]
        chain += [exact, bounds.ub_truncated(model, seeds)]
        neumann = bounds.ub_neumann(model, seeds)
        if neumann is not None:
            chain.append(neumann)
        assert all(_leq(a, b) for a, b in zip(chain, chain[1:]))
        assert _leq(bounds.lb_trig(model, seeds), exact)

    @PROPERTY_SETTINGS
    @given(seeded(lt_models()))
    def test_path_sum_is_the_influence(self, case) -> None:
        model, seeds = case
        assert bounds.path_sum_influence(model, seeds) == pytest.approx(exact_influence(model, seeds), rel=1e-9)

    @PROPERTY_SETTINGS
    @given(seeded(lt_models(dag=True)))
    def test_truncated_bound_is_exact_on_dags(self, case) -> None:
        model, seeds = case
        assert bounds.ub_truncated(model, seeds) == pytest.approx(exact_influence(model, seeds), rel=1e-9)

    @PROPERTY_SETTINGS
    @given(seeded(lt_models()))
    def test_ratio_guarantee_holds(self, case) -> None:
        model, seeds = case
        ratio = bounds.ratio_guarantees(model, seeds)
        upper = bounds.ub_neumann(model, seeds)
        if ratio.r1 is None or upper is None:
            return
        assert upper / bounds.lb_m(model, seeds, 1) <= ratio.r1 + 1e-9
        assert upper / bounds.lb_m(model, seeds, 2) <= ratio.r2 + 1e-9

    @PROPERTY_SETTINGS
    @given(seeded(lt_models()))
    def test_report_fields(self, case) -> None:
        model, seeds = case
        row = bounds.bound_report(model, seeds).to_row()
        assert list(row) == list(bounds.REPORT_FIELDS)
        assert row["seed_size"] == len(seeds)
        assert row["ic_wc"] is None and row["hazard"] is None



class TestExplicitProperties:
    @PROPERTY_SETTINGS
    @given(seeded(explicit_models()))
    def test_sandwich(self, case) -> None:
        model, seeds = case
        validate(model)
        exact = exact_influence(model, seeds)
        assert _leq(bounds.lb_trig(model, seeds), exact)
        assert _leq(exact, bounds.ub_truncated(model, seeds))


@PROPERTY_SETTINGS
@given(tree_models())
def test_strongest_path_is_exact_with_one_path_per_vertex(model) -> None:
    assert bounds.lb_trig(model, [0]) == pytest.approx(exact_influence(model, [0]), rel=1e-9)


@st.composite
def symmetric_matrices(draw) -> np.ndarray:
    size = draw(st.integers(1, 6))
    values = draw(st.lists(st.sampled_from([0.0, 0.0, 0.5, 1.0, 2.0]), min_size=size * size, max_size=size * size))
    upper = np.triu(np.array(values).reshape(size, size), 1)
    return upper + upper.T


@PROPERTY_SETTINGS
@given(symmetric_matrices())
def test_spectral_radius_matches_eigensolver(matrix: np.ndarray) -> None:
    expected = float(np.linalg.eigvalsh(matrix).max()) if matrix.size else 0.0
    assert bounds.spectral_radius_symmetric(matrix) == pytest.approx(max(expected, 0.0), rel=1e-6, abs=1e-9)


def test_spectral_radius_rejects_asymmetric() -> None:
    with pytest.raises(ValueError):
        bounds.spectral_radius_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
