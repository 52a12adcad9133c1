import pytest

from contagion.core.config_manager import ConfigManager, flatten, parse_value
from contagion.core.errors import ConfigError


@pytest.fixture
def config() -> ConfigManager:
    return ConfigManager()


@pytest.mark.parametrize(
    "text, value",
    [
        ("12", 12),
        ("0.5", 0.5),
        ("1e-3", 0.001),
        ("true", True),
        ("null", None),
        ('["lb1", "lb2"]', ["lb1", "lb2"]),
        ("erdos_renyi", "erdos_renyi"),
    ],
)
def test_parse_value(text, value) -> None:
    assert parse_value(text) == value


def test_flatten() -> None:
    assert flatten({"a": {"b": 1, "c": {"d": 2}}, "e": 3}) == {"a.b": 1, "a.c.d": 2, "e": 3}


class TestConfigManager:
    def test_defaults_are_valid(self, config) -> None:
        assert config.validate() == []
        assert config.get("run.seed") == 0
        assert config.get("bandit.distinguished") == 0
        assert config.get("missing.key", "fallback") == "fallback"

    def test_set_rejects_unknown_keys(self, config) -> None:
        with pytest.raises(ConfigError):
            config.set("graph.colour", "red")

    def test_overrides(self, config) -> None:
        config.apply_overrides(["graph.n=12", "maximize.objectives=[\"lb1\"]", "bandit.distinguished=null"])
        assert config.get("graph.n") == 12
        assert config.get("maximize.objectives") == ["lb1"]
        assert config.get("bandit.distinguished") is None
        assert config.validate() == []

    def test_override_needs_equals_sign(self, config) -> None:
        with pytest.raises(ConfigError):
            config.apply_overrides(["graph.n"])

    def test_type_errors_are_reported(self, config) -> None:
        config.set("graph.n", "many")
        config.set("run.threads", 1.5)
        errors = config.validate()
        assert len(errors) == 2
        assert errors[0].startswith("run.threads") or errors[0].startswith("graph.n")

    def test_range_errors_are_collected(self, config) -> None:
        config.merge({"bandit": {"k": 3, "player": "exp3", "distinguished": 40}, "weights": {"gamma_min": 0.9}})
        errors = config.validate()
        assert any("bandit.k" in e for e in errors)
        assert any("bandit.distinguished" in e for e in errors)
        assert any("gamma_min" in e for e in errors)
        with pytest.raises(ConfigError) as info:
            config.require_valid()
        assert info.value.messages == errors
        assert info.value.exit_code == 1

    def test_symmetric_loss_needs_undirected_game(self, config) -> None:
        config.set("bandit.directed", True)
        assert any("symmetric" in e for e in config.validate())
        config.set("bandit.player", "uniform")
        assert config.validate() == []

    def test_merge_rejects_unknown_keys(self, config) -> None:
        with pytest.raises(ConfigError) as info:
            config.merge({"graph": {"n": 5, "size": 3}})
        assert info.value.messages == ["unknown configuration key: graph.size"]

    def test_merge_file_and_save(self, config, tmp_path) -> None:
        user = tmp_path / "user.yaml"
        user.write_text("bandit:\n  horizon: 50\n  loss: node\n")
        config.merge_file(str(user))
        assert config.get("bandit.horizon") == 50
        saved = tmp_path / "out" / "effective.yaml"
        config.save(str(saved))
        reloaded = ConfigManager(str(saved))
        assert reloaded.get("bandit.loss") == "node"
        assert reloaded.get("graph.family") == "erdos_renyi"

    def test_merge_file_errors(self, config, tmp_path) -> None:
        with pytest.raises(ConfigError):
            config.merge_file(str(tmp_path / "nope.yaml"))
        listed = tmp_path / "list.yaml"
        listed.write_text("- 1\n- 2\n")
        with pytest.raises(ConfigError):
            config.merge_file(str(listed))

    def test_missing_graph_file(self, config, tmp_path) -> None:
        config.merge({"graph": {"source": "file", "file": str(tmp_path / "absent.tsv")}})
        assert any("Graph file not found" in e for e in config.validate())

    def test_load_drops_merged_values(self, config) -> None:
        config.set("graph.n", 7)
        config.load()
        assert config.get("graph.n") == 100
        assert config.get("weights")["scheme"] == "auto"

    @pytest.mark.parametrize(
        "kind, scheme, valid",
        [("lt", "auto", True), ("ic", "auto", True), ("lt", "uniform", False), ("ic", "gamma", False)],
    )
    def test_weight_scheme_per_model_kind(self, config, kind, scheme, valid) -> None:
        config.merge({"model": {"kind": kind}, "weights": {"scheme": scheme}})
        assert (config.validate() == []) is valid
