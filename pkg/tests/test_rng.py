import numpy as np
import pytest

from contagion.core.rng import derive_seed, make_rng, seed_sequence


def test_integer_keys_match_spawned_children() -> None:
    child = np.random.SeedSequence(5).spawn(3)[2]
    assert np.array_equal(seed_sequence(5, 2).generate_state(4), child.generate_state(4))


def test_nested_keys_match_nested_spawns() -> None:
    grandchild = np.random.SeedSequence(8).spawn(2)[1].spawn(4)[3]
    assert np.array_equal(seed_sequence(8, 1, 3).generate_state(4), grandchild.generate_state(4))


def test_named_streams_are_independent() -> None:
    a = make_rng(1, "adversary").random(8)
    b = make_rng(1, "player").random(8)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, make_rng(1, "adversary").random(8))


def test_derived_seed_is_a_stable_non_negative_int() -> None:
    seed = derive_seed(3, "episode", 0)
    assert seed == derive_seed(3, "episode", 0)
    assert 0 <= seed < 2**63
    assert seed != derive_seed(3, "episode", 1)


def test_negative_key() -> None:
    with pytest.raises(ValueError):
        seed_sequence(0, -1)
