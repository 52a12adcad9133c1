"""Run configuration shared by every command: packaged defaults with user files and overrides merged on top."""
import copy
import json
import os
from typing import Any, Iterable, Optional

from ruamel.yaml import YAML

from contagion.core.errors import ConfigError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(__file__)), "config.yaml")

GRAPH_SOURCES = ("generator", "file")
GRAPH_FAMILIES = ("erdos_renyi", "preferential_attachment", "grid_2d", "complete")
MODEL_KINDS = ("lt", "ic", "explicit")
WEIGHT_SCHEMES = ("auto", "gamma", "uniform", "file")
OUTPUT_FORMATS = ("csv", "json")
OBJECTIVES = ("lb1", "lb2", "lb3", "lb_trig", "ub_trunc", "mc")
ADVERSARIES = ("iid_bernoulli", "clique", "source_sink", "empty")
PLAYERS = ("exp3", "osmd", "online_greedy", "uniform", "fixed")
SUB_PLAYERS = ("exp3", "osmd")
LOSS_KINDS = ("node", "symmetric")
NULLABLE_KEYS = ("bandit.distinguished",)


def parse_value(text: str) -> Any:
    """Convert override text to a value: JSON first, then a number, else the string."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            if "." in text or "e" in text.lower():
                return float(text)
            return int(text)
        except ValueError:
            return text


def flatten(data: dict, prefix: str = "") -> dict[str, Any]:
    """Flatten nested sections into dot-separated key paths."""
    flat: dict[str, Any] = {}
    for key, value in data.items():
        path = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict):
            flat.update(flatten(value, path))
        else:
            flat[path] = value
    return flat


def _type_error(key: str, default: Any, value: Any) -> Optional[str]:
    if value is None and key in NULLABLE_KEYS:
        return None
    if default is None:
        if value is None or (isinstance(value, (int, float)) and not isinstance(value, bool)):
            return None
        return f"{key}: expected a number or null, got {value!r}"
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool)
    elif isinstance(default, str):
        ok = isinstance(value, str)
    elif isinstance(default, list):
        ok = isinstance(value, list)
    else:
        ok = True
    if ok:
        return None
    return f"{key}: expected {type(default).__name__}, got {value!r}"


class ConfigManager:
    """Run configuration: packaged defaults, user file and ``--set`` overrides in one YAML tree.

    The packaged defaults define the set of legal keys; anything merged on top
    must already exist there. Comments and quoting survive a save, so the
    effective configuration written next to a run reads like the input.
    """

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH):
        """Read ``config_path`` and remember its flattened keys as the legal ones.

        Args:
            config_path: YAML file holding every key with its default.
        """
        self.config_path = config_path
        self.yaml = YAML()
        self.yaml.preserve_quotes = True
        self.yaml.indent(mapping=2, sequence=4, offset=2)
        self._config: dict = {}
        self.load()
        self._defaults = flatten(copy.deepcopy(dict(self._config)))

    def load(self) -> dict:
        """Re-read ``config_path``, dropping merged values; a missing file gives an empty tree."""
        if os.path.exists(self.config_path):
            with open(self.config_path, "r", encoding="utf-8") as f:
                self._config = self.yaml.load(f) or {}
        else:
            self._config = {}
        return self._config

    def save(self, path: Optional[str] = None) -> None:
        """Write the effective configuration, creating parent directories; defaults to ``config_path``."""
        path = path or self.config_path
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            self.yaml.dump(self._config, f)

    def get(self, key_path: str, default: Any = None) -> Any:
        """Value at ``section.key`` such as ``weights.gamma_min``, or ``default`` when absent.

        A section path returns the whole mapping.
        """
        keys = key_path.split(".")
        value = self._config
        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any) -> None:
        """Override ``section.key``; only keys present in the packaged defaults are accepted.

        Raises:
            ConfigError: If the key is not a known configuration key.
        """
        if key_path not in self._defaults:
            raise ConfigError(f"unknown configuration key: {key_path}")
        keys = key_path.split(".")
        config = self._config
        for key in keys[:-1]:
            if key not in config:
                config[key] = {}
            config = config[key]
        config[keys[-1]] = value

    def get_section(self, section: str) -> dict:
        """One top-level section such as ``bandit``, or an empty dict."""
        return self._config.get(section, {})

    @property
    def config(self) -> dict:
        """The merged YAML tree."""
        return self._config

    def merge(self, data: dict) -> None:
        """Merge a nested mapping over the current values; unknown keys are rejected."""
        flat = flatten(dict(data))
        unknown = sorted(k for k in flat if k not in self._defaults)
        if unknown:
            raise ConfigError([f"unknown configuration key: {k}" for k in unknown])
        for key, value in flat.items():
            self.set(key, value)

    def merge_file(self, path: str) -> None:
        """Merge a user YAML file over the current values."""
        if not os.path.isfile(path):
            raise ConfigError(f"config file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            data = self.yaml.load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
        self.merge(data)

    def apply_overrides(self, overrides: Iterable[str]) -> None:
        """Apply ``section.key=value`` overrides."""
        for item in overrides:
            key, sep, text = item.partition("=")
            if not sep:
                raise ConfigError(f"override must look like key=value: {item!r}")
            self.set(key.strip(), parse_value(text.strip()))

    def validate(self) -> list[str]:
        """Type and range checks over every key, plus the cross-key rules of the run.

        Returns:
            One message per problem; empty when the configuration can run.
        """
        errors = []
        for key, default in self._defaults.items():
            message = _type_error(key, default, self.get(key))
            if message:
                errors.append(message)
        if errors:
            return errors

        def choice(key: str, allowed: tuple[str, ...]) -> None:
            if self.get(key) not in allowed:
                errors.append(f"{key} must be one of {', '.join(allowed)}, got {self.get(key)!r}")

        def at_least(key: str, low: float) -> None:
            if self.get(key) is not None and self.get(key) < low:
                errors.append(f"{key} must be >= {low}, got {self.get(key)}")

        def probability(key: str) -> None:
            value = self.get(key)
            if value is not None and not 0.0 <= value <= 1.0:
                errors.append(f"{key} must lie in [0, 1], got {value}")

        if self.get("run.seed") < 0:
            errors.append("run.seed must be a non-negative integer")
        at_least("run.threads", 1)
        choice("output.format", OUTPUT_FORMATS)

        choice("graph.source", GRAPH_SOURCES)
        choice("graph.family", GRAPH_FAMILIES)
        for key in ("graph.n", "graph.rows", "graph.cols", "graph.initial_vertices",
                    "graph.edges_per_vertex"):
            at_least(key, 1)
        probability("graph.edge_probability")
        if self.get("graph.edges_per_vertex") > self.get("graph.initial_vertices"):
            errors.append("graph.edges_per_vertex must not exceed graph.initial_vertices")
        if self.get("graph.source") == "file" and not os.path.isfile(self.get("graph.file")):
            errors.append(f"Graph file not found: {self.get('graph.file')}")

        choice("model.kind", MODEL_KINDS)
        explicit_file = self.get("model.explicit_file")
        if self.get("model.kind") == "explicit" and not os.path.isfile(explicit_file):
            errors.append(f"Explicit trigger file not found: {explicit_file}")

        choice("weights.scheme", WEIGHT_SCHEMES)
        probability("weights.gamma_min")
        probability("weights.gamma_max")
        probability("weights.probability")
        if self.get("weights.gamma_min") > self.get("weights.gamma_max"):
            errors.append("weights.gamma_min must not exceed weights.gamma_max")
        at_least("weights.sweep_steps", 1)
        at_least("weights.sweep_increment", 0.0)
        if self.get("model.kind") == "lt" and self.get("weights.scheme") == "uniform":
            errors.append("LT models need weights.scheme auto, gamma or file")
        if self.get("model.kind") == "ic" and self.get("weights.scheme") == "gamma":
            errors.append("IC models need weights.scheme auto, uniform or file")

        at_least("seeds.size", 0)
        if any(not isinstance(v, int) or v < 0 for v in self.get("seeds.vertices")):
            errors.append("seeds.vertices must be non-negative integers")
        at_least("simulation.replications", 1)
        at_least("simulation.instances", 1)

        at_least("maximize.k", 0)
        for name in self.get("maximize.objectives"):
            if name not in OBJECTIVES:
                errors.append(f"maximize.objectives: unknown objective {name!r}")
        at_least("maximize.mc_replications", 1)
        at_least("maximize.evaluation_replications", 1)
        at_least("maximize.instances", 1)

        at_least("bandit.n", 2)
        choice("bandit.adversary", ADVERSARIES)
        choice("bandit.player", PLAYERS)
        choice("bandit.sub_player", SUB_PLAYERS)
        choice("bandit.loss", LOSS_KINDS)
        probability("bandit.edge_probability")
        at_least("bandit.horizon", 1)
        at_least("bandit.k", 1)
        at_least("bandit.replications", 1)
        distinguished = self.get("bandit.distinguished")
        if distinguished is not None and not 0 <= distinguished < self.get("bandit.n"):
            errors.append("bandit.distinguished must be null or a vertex id below bandit.n")
        if self.get("bandit.k") > self.get("bandit.n"):
            errors.append("bandit.k must not exceed bandit.n")
        if self.get("bandit.player") == "online_greedy" and self.get("bandit.k") < 2:
            errors.append("bandit.player online_greedy needs bandit.k >= 2")
        if self.get("bandit.player") in ("exp3", "osmd") and self.get("bandit.k") != 1:
            errors.append("single-source players need bandit.k = 1")
        if self.get("bandit.loss") == "symmetric" and self.get("bandit.directed"):
            uses_loss = self.get("bandit.player") in ("exp3", "osmd", "online_greedy")
            if uses_loss:
                errors.append("the symmetric loss needs an undirected game (bandit.directed false)")
        alpha = self.get("bandit.alpha")
        if alpha is not None and not 0.0 < alpha <= 1.0:
            errors.append(f"bandit.alpha must lie in (0, 1], got {alpha}")
        fixed = self.get("bandit.fixed_sources")
        if self.get("bandit.player") == "fixed" and len(fixed) != self.get("bandit.k"):
            errors.append("bandit.fixed_sources must list exactly bandit.k vertices")
        if any(not isinstance(v, int) or not 0 <= v < self.get("bandit.n") for v in fixed):
            errors.append("bandit.fixed_sources must be vertex ids below bandit.n")

        at_least("oracle.max_n", 2)
        at_least("oracle.instances", 1)
        return errors

    def require_valid(self) -> None:
        """Raise ConfigError listing every problem, if any."""
        errors = self.validate()
        if errors:
            raise ConfigError(errors)
