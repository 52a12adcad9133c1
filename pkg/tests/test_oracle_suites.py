import pytest

from contagion.cli.oracle_suites import (
    SUITES,
    OracleSettings,
    perturb_columns,
    random_lt_model,
    run_suites,
)
from contagion.core.errors import ValidationError
from contagion.core.rng import make_rng
from contagion.core.run_manager import ManagedRun
from contagion.graph import validate

FAST = OracleSettings(max_n=4, instances=10)
QUICK_SUITES = [name for name in SUITES if name != "process_equivalence"]


@pytest.mark.parametrize("name", QUICK_SUITES)
def test_suite_passes(name) -> None:
    (result,) = run_suites(FAST, seed=0, names=[name])
    assert result.name == name
    assert result.passed, result.failures[:3]
    assert result.checked > 0


@pytest.mark.slow
def test_process_equivalence() -> None:
    (result,) = run_suites(OracleSettings(max_n=4, instances=1), seed=0, names=["process_equivalence"])
    assert result.passed, result.failures


def test_suites_are_reproducible_on_a_pool() -> None:
    serial = run_suites(FAST, seed=3, names=["sandwich", "ratio"])
    pooled = run_suites(FAST, seed=3, names=["sandwich", "ratio"], run=ManagedRun("oracle", threads=2))
    assert [r.to_row() for r in serial] == [r.to_row() for r in pooled]


def test_summary_row() -> None:
    (result,) = run_suites(FAST, seed=0, names=["chain_star"])
    assert result.to_row() == {"suite": "chain_star", "checked": 16, "skipped": 0, "failed": 0, "passed": True}


def test_perturbed_models_fail_validation() -> None:
    model = random_lt_model(make_rng(0, "perturb"), 5, density=1.0)
    with pytest.raises(ValidationError):
        validate(perturb_columns(model))
    with pytest.raises(ValidationError):
        run_suites(OracleSettings(max_n=4, instances=30, perturb=True), seed=0, names=["sandwich"])


def test_process_equivalence_defaults() -> None:
    settings = OracleSettings()
    assert settings.process_runs == 100_000
    assert settings.process_tolerance == 0.02
