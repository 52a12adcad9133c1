"""Named parameter sets applied before ``--set`` overrides."""
from contagion.core.errors import ConfigError

_SIMULATION_STUDY = {
    "graph.source": "generator",
    "graph.n": 900,
    "graph.edge_probability": None,
    "graph.initial_vertices": 10,
    "graph.edges_per_vertex": 3,
    "model.kind": "lt",
    "weights.scheme": "gamma",
    "weights.gamma_min": 0.0075,
    "weights.gamma_max": 0.8,
    "weights.sweep_steps": 33,
    "weights.sweep_increment": 0.0075,
    "seeds.size": 10,
    "simulation.replications": 50,
    "maximize.k": 10,
    "maximize.mc_replications": 50,
    "maximize.evaluation_replications": 200,
    "maximize.instances": 10,
}

PRESETS: dict[str, dict] = {
    "desk": {},
    "study-er": {**_SIMULATION_STUDY, "graph.family": "erdos_renyi"},
    "study-pa": {**_SIMULATION_STUDY, "graph.family": "preferential_attachment"},
    "study-grid": {**_SIMULATION_STUDY, "graph.family": "grid_2d", "graph.rows": 30, "graph.cols": 30},
    "gamma-sweep": {
        "graph.source": "generator",
        "graph.family": "grid_2d",
        "graph.rows": 5,
        "graph.cols": 5,
        "model.kind": "lt",
        "weights.scheme": "gamma",
        "weights.gamma_min": 0.0075,
        "weights.gamma_max": 0.8,
        "weights.sweep_steps": 33,
        "weights.sweep_increment": 0.0075,
        "seeds.size": 3,
        "simulation.replications": 50,
    },
    "regret-exp3-sym": {
        "bandit.n": 20,
        "bandit.directed": False,
        "bandit.adversary": "iid_bernoulli",
        "bandit.edge_probability": 0.1,
        "bandit.player": "exp3",
        "bandit.loss": "symmetric",
        "bandit.horizon": 5000,
        "bandit.k": 1,
        "bandit.replications": 50,
    },
    "regret-osmd-sym": {
        "bandit.n": 20,
        "bandit.directed": False,
        "bandit.adversary": "clique",
        "bandit.player": "osmd",
        "bandit.loss": "symmetric",
        "bandit.horizon": 5000,
        "bandit.k": 1,
        "bandit.replications": 50,
    },
    "regret-osmd-node": {
        "bandit.n": 20,
        "bandit.directed": True,
        "bandit.adversary": "source_sink",
        "bandit.player": "osmd",
        "bandit.loss": "node",
        "bandit.horizon": 5000,
        "bandit.k": 1,
        "bandit.replications": 50,
    },
    "regret-greedy": {
        "bandit.n": 20,
        "bandit.directed": False,
        "bandit.adversary": "iid_bernoulli",
        "bandit.edge_probability": 0.1,
        "bandit.player": "online_greedy",
        "bandit.sub_player": "exp3",
        "bandit.loss": "symmetric",
        "bandit.horizon": 5000,
        "bandit.k": 3,
        "bandit.replications": 50,
    },
}


def preset(name: str) -> dict:
    """Dot-path overrides of preset ``name``."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}")
    return dict(PRESETS[name])
