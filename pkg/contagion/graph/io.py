"""Edge-list and explicit trigger-model text formats."""
import os
from typing import Optional

from contagion.core.errors import GraphValidationError, ParseError
from contagion.graph.digraph import WeightedDigraph
from contagion.graph.models import ModelKind, TriggerModel, explicit_model

DIRECTED_HEADER = "#directed"
UNDIRECTED_HEADER = "#undirected"
EXPLICIT_HEADER = "#explicit"
VERTICES_TAG = "#vertices"


def _vertices_line(line: str, path: str, number: int) -> Optional[int]:
    fields = line.split()
    if fields[0] != VERTICES_TAG:
        return None
    try:
        count = int(fields[1])
    except (IndexError, ValueError):
        raise ParseError(path, number, f"bad vertex count line: {line!r}") from None
    if count < 0:
        raise ParseError(path, number, f"negative vertex count {count}")
    return count


def read_edge_list(path: str) -> WeightedDigraph:
    """Load a graph written as ``src<TAB>dst<TAB>weight`` lines.

    The first line is ``#directed`` or ``#undirected``; later ``#`` lines are
    comments, except ``#vertices<TAB>n`` which fixes the vertex count.

    Raises:
        ParseError: On malformed lines, with the line number.
    """
    edges = []
    declared: Optional[int] = None
    directed: Optional[bool] = None
    with open(path, "r", encoding="utf-8") as f:
        for number, raw in enumerate(f, start=1):
            line = raw.strip()
            if number == 1:
                if line not in (DIRECTED_HEADER, UNDIRECTED_HEADER):
                    raise ParseError(path, 1, f"expected {DIRECTED_HEADER} or {UNDIRECTED_HEADER}")
                directed = line == DIRECTED_HEADER
                continue
            if not line:
                continue
            if line.startswith("#"):
                count = _vertices_line(line, path, number)
                declared = declared if count is None else count
                continue
            fields = line.split("\t") if "\t" in line else line.split()
            if len(fields) != 3:
                raise ParseError(path, number, f"expected 3 fields, got {len(fields)}")
            try:
                edges.append((int(fields[0]), int(fields[1]), float(fields[2]), number))
            except ValueError as e:
                raise ParseError(path, number, str(e)) from None
    if directed is None:
        raise ParseError(path, 1, "empty file")
    n = max((max(u, v) + 1 for u, v, _, _ in edges), default=0)
    if declared is not None:
        if declared < n:
            raise ParseError(path, 1, f"{VERTICES_TAG} {declared} is smaller than the largest id + 1 ({n})")
        n = declared
    for u, v, w, number in edges:
        if u < 0 or v < 0:
            raise ParseError(path, number, "vertex ids must be non-negative")
    try:
        return WeightedDigraph.from_edges(n, [(u, v, w) for u, v, w, _ in edges], directed=directed)
    except GraphValidationError as e:
        line = next((num for u, v, _, num in edges if e.edge in ((u, v), (v, u))), 0)
        raise ParseError(path, line, str(e)) from e


def write_edge_list(g: WeightedDigraph, path: str) -> None:
    """Save ``g`` losslessly (weights use the shortest round-tripping repr)."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write((DIRECTED_HEADER if g.directed else UNDIRECTED_HEADER) + "\n")
        f.write(f"{VERTICES_TAG}\t{g.n}\n")
        for u, v, w in g.edges():
            if g.directed or u < v:
                f.write(f"{u}\t{v}\t{w!r}\n")


def read_explicit(path: str) -> TriggerModel:
    """Load an explicit triggering model.

    Format: optional ``#explicit`` and ``#vertices<TAB>n`` lines, then blank-line
    separated blocks ``vertex <i>`` followed by ``p<TAB>j1,j2,...`` lines (an
    empty list after the tab is the empty trigger set).
    """
    blocks: dict[int, list[tuple[tuple[int, ...], float]]] = {}
    declared: Optional[int] = None
    current: Optional[int] = None
    with open(path, "r", encoding="utf-8") as f:
        for number, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            stripped = line.strip()
            if not stripped:
                current = None
                continue
            if stripped.startswith("#"):
                count = _vertices_line(stripped, path, number)
                declared = declared if count is None else count
                continue
            if stripped.startswith("vertex"):
                fields = stripped.split()
                try:
                    current = int(fields[1])
                except (IndexError, ValueError):
                    raise ParseError(path, number, f"bad block header {stripped!r}") from None
                if current < 0 or current in blocks:
                    raise ParseError(path, number, f"vertex {current} invalid or repeated")
                blocks[current] = []
                continue
            if current is None:
                raise ParseError(path, number, "trigger line outside a vertex block")
            p_text, _, members = line.partition("\t")
            try:
                p = float(p_text)
                subset = tuple(int(j) for j in members.split(",") if j.strip())
            except ValueError as e:
                raise ParseError(path, number, str(e)) from None
            blocks[current].append((subset, p))
    ids = [v for v in blocks] + [j for dist in blocks.values() for s, _ in dist for j in s]
    n = max(ids, default=-1) + 1
    if declared is not None:
        if declared < n:
            raise ParseError(path, 1, f"{VERTICES_TAG} {declared} is smaller than the largest id + 1 ({n})")
        n = declared
    try:
        return explicit_model(n, [blocks.get(v, []) for v in range(n)])
    except GraphValidationError as e:
        raise ParseError(path, 0, str(e)) from e


def write_explicit(model: TriggerModel, path: str) -> None:
    """Save an explicit triggering model in the block format read by :func:`read_explicit`."""
    if model.kind is not ModelKind.EXPLICIT or model.triggers is None:
        raise GraphValidationError("explicit-distribution", "only explicit models have trigger blocks")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{EXPLICIT_HEADER}\n{VERTICES_TAG}\t{model.n}\n")
        for v, distribution in enumerate(model.triggers):
            f.write(f"\nvertex {v}\n")
            for subset, p in distribution:
                f.write(f"{p!r}\t{','.join(str(j) for j in subset)}\n")
