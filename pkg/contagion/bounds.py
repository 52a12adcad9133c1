"""Closed-form upper and lower bounds on the influence ``I(A)`` of triggering models.

All bounds read the marginal live-edge matrix ``B``. With ``Ā = V \\ A``,
``b`` is the vector ``b(i) = Σ_{j∈A} b_ji`` over ``Ā`` and ``M = B_{ĀĀ}``.
A bound that does not apply is ``None``.
"""
import logging
import math
import warnings
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Iterable, Optional

import networkx as nx
import numpy as np
import scipy.linalg
import scipy.sparse as sp

from contagion.core.errors import ModelValidationError, SpectralConvergenceError
from contagion.graph.digraph import DENSE_LIMIT, seed_set
from contagion.graph.models import ModelKind, TriggerModel

logger = logging.getLogger(__name__)

NEUMANN_MAX_TERMS = 10_000
DIVERGENCE_RUN = 10

REPORT_FIELDS = (
    "seed_size",
    "lb1",
    "lb2",
    "lb3",
    "lb_trig",
    "ub_trunc",
    "ub_neumann",
    "ic_wc",
    "hazard",
    "lambda_bar_inf",
    "ratio_guarantee_lb1",
    "ratio_guarantee_lb2",
)


class _Partition:
    """``|A|``, ``Ā``, ``b`` and ``M`` for one seed set; ``M`` is sliced on first use."""

    def __init__(self, model: TriggerModel, seeds: Iterable[int]):
        g = model.graph
        self.seeds = seed_set(seeds, g.n)
        self.k = len(self.seeds)
        in_seed = np.zeros(g.n, dtype=bool)
        in_seed[list(self.seeds)] = True
        self.rest = np.flatnonzero(~in_seed)
        self._B = g.adjacency
        seeds_idx = np.asarray(self.seeds, dtype=np.int64)
        if sp.issparse(self._B):
            self.b = np.asarray(self._B[seeds_idx][:, self.rest].sum(axis=0)).ravel()
        else:
            self.b = self._B[np.ix_(seeds_idx, self.rest)].sum(axis=0)

    @cached_property
    def M(self):
        if sp.issparse(self._B):
            return self._B[self.rest][:, self.rest].tocsr()
        return self._B[np.ix_(self.rest, self.rest)]

    @property
    def size(self) -> int:
        return int(self.rest.shape[0])

    def row_sums(self) -> np.ndarray:
        return np.asarray(self.M.sum(axis=1)).ravel()

    def diagonal_of_square(self) -> np.ndarray:
        if sp.issparse(self.M):
            return np.asarray(self.M.multiply(self.M.T).sum(axis=1)).ravel()
        return np.einsum("ij,ji->i", self.M, self.M)


def _require_kind(model: TriggerModel, kind: ModelKind, bound: str) -> None:
    if model.kind is not kind:
        raise ModelValidationError(
            "model-kind", f"{bound} needs a {kind.value} model, got {model.kind.value}"
        )


def lb_m(model: TriggerModel, seeds: Iterable[int], m: int) -> float:
    """Path-counting lower bound of order ``m``.

    ``m=1``: ``|A| + bᵀ1``; ``m=2``: ``|A| + bᵀ(I + M)1``;
    ``m=3``: ``|A| + bᵀ(I + M + M² - Diag(M²))1``.

    Raises:
        ValueError: If ``m`` is not 1, 2 or 3.
        ModelValidationError: If the model is not LT.
    """
    if m not in (1, 2, 3):
        raise ValueError(f"m must be 1, 2 or 3, got {m}")
    _require_kind(model, ModelKind.LINEAR_THRESHOLD, f"lb{m}")
    part = _Partition(model, seeds)
    if part.size == 0:
        return float(part.k)
    terms = np.ones(part.size)
    if m >= 2:
        first = part.M @ np.ones(part.size)
        terms = terms + first
        if m == 3:
            second = part.M @ first - part.diagonal_of_square()
            terms = terms + np.maximum(second, 0.0)
    return float(part.k + part.b @ terms)


def ub_truncated(model: TriggerModel, seeds: Iterable[int]) -> float:
    """``|A| + bᵀ(Σ_{i=1}^{n-|A|} M^{i-1})1``; exact on DAGs."""
    part = _Partition(model, seeds)
    total = 0.0
    v = np.ones(part.size)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(part.size):
            total += float(part.b @ v)
            v = part.M @ v
            if not v.any():
                break
    return float(part.k + total)


def ub_neumann(model: TriggerModel, seeds: Iterable[int]) -> Optional[float]:
    """``|A| + bᵀ(I - M)⁻¹1``, or ``None`` when ``ρ(M) >= 1``.

    Up to ``DENSE_LIMIT`` uninfected vertices the system is solved by dense LU;
    the solution must be positive, which holds exactly when ``ρ(M) < 1``.
    Larger systems sum the Neumann series and give up after the terms grow for
    ``DIVERGENCE_RUN`` consecutive steps.
    """
    part = _Partition(model, seeds)
    if part.size == 0:
        return float(part.k)
    if part.size <= DENSE_LIMIT:
        M = part.M.toarray() if sp.issparse(part.M) else part.M
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
                factor = scipy.linalg.lu_factor(np.eye(part.size) - M, check_finite=False)
                x = scipy.linalg.lu_solve(factor, np.ones(part.size), check_finite=False)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning, ValueError):
            logger.debug("Neumann bound: singular system for |A|=%d", part.k)
            return None
        if not np.all(np.isfinite(x)) or not np.all(x > 0):
            return None
        return float(part.k + part.b @ x)

    total = 0.0
    previous = math.inf
    growing = 0
    v = np.ones(part.size)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(NEUMANN_MAX_TERMS):
            term = float(part.b @ v)
            if not math.isfinite(term):
                return None
            total += term
            if term == 0.0 and not v.any():
                return float(part.k + total)
            if term <= 1e-15 * max(total, 1.0):
                return float(part.k + total)
            growing = growing + 1 if term >= previous else 0
            if growing >= DIVERGENCE_RUN:
                return None
            previous = term
            v = part.M @ v
    return None


def lb_trig(model: TriggerModel, seeds: Iterable[int]) -> float:
    """``|A| + Σ_{i∈Ā}`` max-product weight of a path from ``A`` to ``i`` through ``Ā``.

    Dijkstra on ``-log`` weights from a virtual source joined to each ``i``
    with ``max_{a∈A} b_ai``; zero-weight edges are ignored.
    """
    part = _Partition(model, seeds)
    if part.size == 0 or part.k == 0:
        return float(part.k)
    g = model.graph
    in_seed = np.zeros(g.n, dtype=bool)
    in_seed[list(part.seeds)] = True
    best_entry = np.zeros(g.n)
    np.maximum.at(best_entry, g.dst[in_seed[g.src]], g.weight[in_seed[g.src]])

    paths = nx.DiGraph()
    source = -1
    paths.add_node(source)
    for i in np.flatnonzero(~in_seed & (best_entry > 0)):
        paths.add_edge(source, int(i), weight=-math.log(best_entry[i]))
    inner = ~in_seed[g.src] & ~in_seed[g.dst] & (g.weight > 0)
    paths.add_weighted_edges_from(
        (int(u), int(v), -math.log(w))
        for u, v, w in zip(g.src[inner], g.dst[inner], g.weight[inner])
    )
    distance = nx.single_source_dijkstra_path_length(paths, source)
    gain = math.fsum(math.exp(-d) for node, d in sorted(distance.items()) if node != source)
    return float(part.k + gain)


@dataclass(frozen=True)
class RatioGuarantee:
    """``λ = ‖M‖_{∞}`` and the guaranteed ratios ``UB/LB1``, ``UB/LB2`` (``None`` unless ``λ < 1``)."""

    lambda_bar_inf: float
    r1: Optional[float]
    r2: Optional[float]


def ratio_guarantees(model: TriggerModel, seeds: Iterable[int]) -> RatioGuarantee:
    part = _Partition(model, seeds)
    lam = float(part.row_sums().max()) if part.size else 0.0
    if lam < 1.0:
        return RatioGuarantee(lam, 1.0 / (1.0 - lam), 1.0 / (1.0 - lam * lam))
    return RatioGuarantee(lam, None, None)


@dataclass(frozen=True)
class ICWorstCase:
    """Worst-case IC bound at finite ``n`` plus the simplified ``|A|/(1-λ)`` form."""

    value: float
    simplified: Optional[float]
    lambda_inf: float
    trivial: bool


def ic_worst_case(model: TriggerModel, seeds: Iterable[int]) -> ICWorstCase:
    """``|A| + λ|A|(1 - λ^{n-|A|})/(1 - λ)`` with ``λ = ‖B‖_{∞}``.

    At ``λ = 1`` the limit ``|A|(1 + n - |A|)`` is used. ``trivial`` flags
    values of at least ``n``, which say nothing.
    """
    _require_kind(model, ModelKind.INDEPENDENT_CASCADE, "ic_worst_case")
    g = model.graph
    k = len(seed_set(seeds, g.n))
    rest = g.n - k
    lam = float(np.bincount(g.src, weights=g.weight, minlength=g.n).max()) if g.n else 0.0
    if lam == 1.0:
        value = float(k + k * rest)
    else:
        with np.errstate(over="ignore"):
            power = float(np.power(lam, rest))
        value = k + lam * k * (1.0 - power) / (1.0 - lam)
    simplified = k / (1.0 - lam) if lam < 1.0 else None
    return ICWorstCase(float(value), simplified, lam, bool(value >= g.n))


def spectral_radius_symmetric(
    matrix: np.ndarray | sp.spmatrix,
    rtol: float = 1e-8,
    max_iter: int = 100_000,
) -> float:
    """Largest eigenvalue of a symmetric nonnegative matrix by shifted power iteration.

    Stops once the residual ``‖Mx - μx‖`` falls below ``rtol · μ``.

    Raises:
        ValueError: If the matrix is not square, symmetric and nonnegative.
        SpectralConvergenceError: After ``max_iter`` iterations.
    """
    dense = not sp.issparse(matrix)
    M = np.asarray(matrix, dtype=np.float64) if dense else sp.csr_matrix(matrix, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    size = M.shape[0]
    if size == 0:
        return 0.0
    values = M if dense else M.data
    if values.size and values.min() < 0:
        raise ValueError("matrix must be nonnegative")
    asymmetry = abs(M - M.T).max()
    if asymmetry > 1e-12 * max(abs(values).max() if values.size else 0.0, 1.0):
        raise ValueError("matrix must be symmetric")
    norm = float(np.asarray(abs(M).sum(axis=1)).max())
    if norm == 0.0:
        return 0.0
    shift = 0.25 * norm
    x = np.full(size, 1.0 / math.sqrt(size))
    residual = math.inf
    for _ in range(max_iter):
        y = M @ x
        mu = float(x @ y)
        residual = float(np.linalg.norm(y - mu * x))
        if residual <= rtol * max(mu, 1e-300):
            return mu
        z = y + shift * x
        x = z / np.linalg.norm(z)
    raise SpectralConvergenceError(max_iter, residual)


def hazard_radius(model: TriggerModel) -> Optional[float]:
    """``ρ((H + Hᵀ)/2)`` with ``H_ij = -log(1 - b_ij)``; ``None`` when some ``b_ij = 1``."""
    g = model.graph
    keep = g.weight > 0
    if np.any(g.weight[keep] >= 1.0):
        return None
    hazard = sp.csr_matrix(
        (-np.log1p(-g.weight[keep]), (g.src[keep], g.dst[keep])), shape=(g.n, g.n)
    )
    return spectral_radius_symmetric((hazard + hazard.T) / 2.0)


def hazard_bound(model: TriggerModel, seeds: Iterable[int]) -> Optional[float]:
    """Spectral IC bound ``|A| + sqrt(ρ/(1-ρ)) · sqrt(|A|(n-|A|))``.

    Applies when ``ρ < 1 - δ`` with ``δ = (|A| / (4(n-|A|)))^{1/3}``; ``None``
    otherwise, for ``A = V``, or when a hazard is infinite.
    """
    _require_kind(model, ModelKind.INDEPENDENT_CASCADE, "hazard_bound")
    g = model.graph
    k = len(seed_set(seeds, g.n))
    rest = g.n - k
    if rest <= 0:
        return None
    rho = hazard_radius(model)
    if rho is None:
        return None
    delta = (k / (4.0 * rest)) ** (1.0 / 3.0)
    if rho >= 1.0 - delta:
        return None
    return float(k + math.sqrt(rho / (1.0 - rho)) * math.sqrt(k * rest))


def path_sum_influence(model: TriggerModel, seeds: Iterable[int]) -> float:
    """``Σ_k ω(P_A^k)``: total weight of simple paths that leave ``A`` at once.

    Equals the influence in LT models; the enumeration is exponential, so
    this is for small graphs.
    """
    g = model.graph
    sources = seed_set(seeds, g.n)
    in_seed = set(sources)
    ptr, dst = g.adjacency_lists
    weight = g.weight.tolist()
    total = float(len(sources))
    on_path = [False] * g.n

    def extend(u: int, product: float) -> float:
        gained = 0.0
        for e in range(ptr[u], ptr[u + 1]):
            v = dst[e]
            if weight[e] > 0 and v not in in_seed and not on_path[v]:
                value = product * weight[e]
                on_path[v] = True
                gained += value + extend(v, value)
                on_path[v] = False
        return gained

    for a in sources:
        on_path[a] = True
        total += extend(a, 1.0)
        on_path[a] = False
    return total


@dataclass(frozen=True)
class BoundReport:
    """Every computable bound for one seed set; ``None`` marks not-applicable."""

    seed_size: int
    lb1: Optional[float]
    lb2: Optional[float]
    lb3: Optional[float]
    lb_trig: float
    ub_trunc: float
    ub_neumann: Optional[float]
    ic_wc: Optional[float]
    hazard: Optional[float]
    lambda_bar_inf: float
    ratio_guarantee_lb1: Optional[float]
    ratio_guarantee_lb2: Optional[float]

    def to_row(self) -> dict[str, Optional[float]]:
        """Flat mapping in the fixed field order."""
        data = asdict(self)
        return {name: data[name] for name in REPORT_FIELDS}


def bound_report(model: TriggerModel, seeds: Iterable[int]) -> BoundReport:
    """Compute the full report; LT-only and IC-only bounds are ``None`` for other kinds."""
    seeds = seed_set(seeds, model.n)
    is_lt = model.kind is ModelKind.LINEAR_THRESHOLD
    is_ic = model.kind is ModelKind.INDEPENDENT_CASCADE
    ratio = ratio_guarantees(model, seeds)
    return BoundReport(
        seed_size=len(seeds),
        lb1=lb_m(model, seeds, 1) if is_lt else None,
        lb2=lb_m(model, seeds, 2) if is_lt else None,
        lb3=lb_m(model, seeds, 3) if is_lt else None,
        lb_trig=lb_trig(model, seeds),
        ub_trunc=ub_truncated(model, seeds),
        ub_neumann=ub_neumann(model, seeds),
        ic_wc=ic_worst_case(model, seeds).value if is_ic else None,
        hazard=hazard_bound(model, seeds) if is_ic else None,
        lambda_bar_inf=ratio.lambda_bar_inf,
        ratio_guarantee_lb1=ratio.r1,
        ratio_guarantee_lb2=ratio.r2,
    )
