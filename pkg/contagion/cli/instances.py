"""Build graphs, models, seed sets and games from a validated configuration."""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from contagion.bandit.adversaries import (
    Adversary,
    CliqueAdversary,
    IIDBernoulliAdversary,
    SourceSinkAdversary,
    clique_delta,
    empty_adversary,
    source_sink_delta,
)
from contagion.bandit.game import GameConfig
from contagion.bandit.players import (
    Player,
    PolicySpec,
    player_exp3,
    player_fixed,
    player_online_greedy,
    player_osmd,
    player_uniform_random,
)
from contagion.core.config_manager import ConfigManager
from contagion.core.errors import ConfigError
from contagion.core.rng import derive_seed, make_rng
from contagion.graph import generators
from contagion.graph.digraph import SeedSet, WeightedDigraph, seed_set
from contagion.graph.io import read_edge_list, read_explicit
from contagion.graph.models import (
    ModelKind,
    TriggerModel,
    lt_weights_gamma,
    uniform_weights,
    validate,
)

logger = logging.getLogger(__name__)

NO_EDGES = "none"
AUTO_SCHEME = "auto"
CLIQUE_DELTA_CAP = 0.49
SOURCE_SINK_DELTA_CAP = 0.99


@dataclass(frozen=True)
class Instance:
    """One validated model with its seed set and the sweep coordinates that produced it."""

    index: int
    step: int
    gamma_min: Optional[float]
    model: TriggerModel
    seeds: SeedSet


def parse_seed_list(text: str) -> list[int]:
    """``"0,1,2"`` to ``[0, 1, 2]``."""
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"seed list must be comma-separated vertex ids, got {text!r}") from None


def build_graph(config: ConfigManager, instance: int, edges: Optional[str] = None) -> WeightedDigraph:
    """Topology from the edge-list file or the configured generator.

    ``edges`` overrides ``graph.file``; the value ``none`` gives
    ``graph.n`` isolated vertices.
    """
    source = config.get("graph.source")
    if edges == NO_EDGES:
        return WeightedDigraph.from_edges(config.get("graph.n"), [], directed=True)
    if edges is not None or source == "file":
        return read_edge_list(edges or config.get("graph.file"))
    seed = derive_seed(config.get("run.seed"), "graph", instance)
    family = config.get("graph.family")
    n = config.get("graph.n")
    if family == "erdos_renyi":
        p = config.get("graph.edge_probability")
        return generators.erdos_renyi_directed(n, 2.0 / n if p is None else p, seed)
    if family == "preferential_attachment":
        return generators.preferential_attachment(
            n, config.get("graph.initial_vertices"), config.get("graph.edges_per_vertex"), seed
        )
    if family == "grid_2d":
        return generators.grid_2d(config.get("graph.rows"), config.get("graph.cols"))
    return generators.complete(n, config.get("graph.directed"))


def graph_from_file(config: ConfigManager, edges: Optional[str] = None) -> bool:
    """Whether :func:`build_graph` reads the topology, with its weights, from an edge list."""
    if edges == NO_EDGES:
        return False
    return edges is not None or config.get("graph.source") == "file"


def weight_scheme(config: ConfigManager, from_file: bool) -> str:
    """The configured scheme with ``auto`` resolved.

    ``auto`` keeps the weights of an edge-list file; generated topologies get
    γ weights (LT) or the uniform probability (IC).
    """
    scheme = config.get("weights.scheme")
    if scheme != AUTO_SCHEME:
        return scheme
    if from_file:
        return "file"
    return "uniform" if config.get("model.kind") == ModelKind.INDEPENDENT_CASCADE.value else "gamma"


def gamma_sweep(config: ConfigManager) -> list[float]:
    """``gamma_min`` values of the sweep, capped at ``gamma_max``."""
    start = config.get("weights.gamma_min")
    step = config.get("weights.sweep_increment")
    top = config.get("weights.gamma_max")
    return [min(start + i * step, top) for i in range(config.get("weights.sweep_steps"))]


def build_model(
    config: ConfigManager,
    g: WeightedDigraph,
    instance: int,
    gamma_min: Optional[float] = None,
    from_file: bool = False,
) -> TriggerModel:
    """Attach the configured weights to ``g`` and validate the model.

    ``from_file`` says ``g`` was read from an edge list; the ``auto`` scheme
    then keeps its weights.
    """
    kind = ModelKind(config.get("model.kind"))
    if kind is ModelKind.EXPLICIT:
        model = read_explicit(config.get("model.explicit_file"))
    else:
        scheme = weight_scheme(config, from_file)
        if from_file and scheme != "file":
            logger.warning("Replacing the edge-list weights with the %s weight scheme", scheme)
        if scheme == "gamma":
            low = config.get("weights.gamma_min") if gamma_min is None else gamma_min
            seed = derive_seed(config.get("run.seed"), "weights", instance)
            model = lt_weights_gamma(g, low, config.get("weights.gamma_max"), seed)
        elif scheme == "uniform":
            model = uniform_weights(g, config.get("weights.probability"), kind)
        else:
            model = TriggerModel(g, kind)
    validate(model)
    return model


def choose_seeds(config: ConfigManager, n: int, instance: int, vertices: Optional[Sequence[int]] = None) -> SeedSet:
    """Explicit seed vertices if given, else ``seeds.size`` vertices drawn uniformly."""
    listed = list(vertices) if vertices is not None else list(config.get("seeds.vertices"))
    if listed:
        return seed_set(listed, n)
    size = config.get("seeds.size")
    if size > n:
        raise ConfigError(f"seeds.size {size} exceeds the {n} vertices of the graph")
    rng = make_rng(config.get("run.seed"), "seeds", instance)
    return seed_set(rng.choice(n, size=size, replace=False).tolist(), n)


def bound_instances(
    config: ConfigManager,
    edges: Optional[str] = None,
    seeds: Optional[Sequence[int]] = None,
) -> list[Instance]:
    """Every (instance, sweep step) combination of the bound study."""
    result = []
    sweep: list[Optional[float]] = [None]
    from_file = graph_from_file(config, edges)
    if config.get("model.kind") == "lt" and weight_scheme(config, from_file) == "gamma":
        sweep = list(gamma_sweep(config))
    for index in range(config.get("simulation.instances")):
        g = build_graph(config, index, edges)
        chosen = choose_seeds(config, g.n, index, seeds)
        for step, low in enumerate(sweep):
            model = build_model(config, g, index, low, from_file)
            result.append(Instance(index, step, low, model, chosen))
    logger.debug("Built %d bound instances", len(result))
    return result


def build_game(config: ConfigManager) -> GameConfig:
    n = config.get("bandit.n")
    graph = generators.complete(n, config.get("bandit.directed"))
    return GameConfig(graph, config.get("bandit.horizon"), config.get("bandit.k"))


def _capped(delta: float, cap: float) -> float:
    if delta > cap:
        logger.warning("Recipe delta %.4g is out of range for this horizon; using %.2f", delta, cap)
        return cap
    return delta


def build_adversary(config: ConfigManager) -> Adversary:
    """The configured adversary; unset ``c``, ``d`` and ``delta`` follow the lower-bound recipes."""
    name = config.get("bandit.adversary")
    n = config.get("bandit.n")
    horizon = config.get("bandit.horizon")
    if name == "empty":
        return empty_adversary()
    if name == "iid_bernoulli":
        return IIDBernoulliAdversary(config.get("bandit.edge_probability"))
    c = config.get("bandit.c")
    delta = config.get("bandit.delta")
    distinguished = config.get("bandit.distinguished")
    if name == "clique":
        c = 2 * n / 3 if c is None else c
        if delta is None:
            delta = _capped(clique_delta(n, c, horizon), CLIQUE_DELTA_CAP)
        return CliqueAdversary(n, c, delta, distinguished)
    d = config.get("bandit.d")
    c = n / 3 if c is None else c
    d = n / 3 if d is None else d
    if delta is None:
        delta = _capped(source_sink_delta(n, c, d, horizon), SOURCE_SINK_DELTA_CAP)
    return SourceSinkAdversary(n, c, d, delta, distinguished)


def policy_spec(config: ConfigManager, policy: Optional[str] = None) -> PolicySpec:
    return PolicySpec(policy or config.get("bandit.sub_player"), config.get("bandit.loss"), config.get("bandit.eta"))


def build_player(config: ConfigManager) -> Player:
    """A fresh player as configured."""
    name = config.get("bandit.player")
    loss = config.get("bandit.loss")
    eta = config.get("bandit.eta")
    if name == "exp3":
        return player_exp3(loss, eta)
    if name == "osmd":
        return player_osmd(loss, eta)
    if name == "online_greedy":
        return player_online_greedy(policy_spec(config), config.get("bandit.k"))
    if name == "fixed":
        return player_fixed(config.get("bandit.fixed_sources"))
    return player_uniform_random()
