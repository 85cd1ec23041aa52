"""Edge-list files, trajectory CSV export, run configs and synthetic data.

Edge-list format (UTF-8)::

    # comment
    w:2.5 geneA geneB geneC
    geneB geneD

Each data line is one hyperedge: an optional ``w:<positive float>`` token
followed by vertex labels separated by whitespace. Single-vertex lines are
dropped (and counted) rather than rejected.
"""
from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .dynamics import Trajectory, sync_error
from .hypergraph import Hypergraph, HypergraphError


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class EmptyFile(ParseError):
    def __init__(self):
        super().__init__(0, "no hyperedges found")


class ParsedEdgeList(NamedTuple):
    hypergraph: Hypergraph
    dropped_singletons: int


def parse_edge_list(text: str) -> ParsedEdgeList:
    labels: dict[str, int] = {}
    edges: list[list[int]] = []
    weights: list[float] = []
    dropped = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        weight = 1.0
        if tokens[0].startswith("w:"):
            try:
                weight = float(tokens[0][2:])
            except ValueError:
                raise ParseError(lineno, f"bad weight token {tokens[0]!r}") from None
            if not weight > 0 or weight == float("inf"):
                raise ParseError(lineno, f"weight must be positive and finite, got {tokens[0][2:]}")
            tokens = tokens[1:]
        if not tokens:
            raise ParseError(lineno, "weight given without vertices")
        if len(set(tokens)) != len(tokens):
            raise ParseError(lineno, "a vertex appears twice in one hyperedge")
        for tok in tokens:
            labels.setdefault(tok, len(labels))
        if len(tokens) < 2:
            dropped += 1
            continue
        edges.append([labels[t] for t in tokens])
        weights.append(weight)
    if not labels:
        raise EmptyFile()
    try:
        G = Hypergraph.from_edges(len(labels), edges, weights, list(labels))
    except HypergraphError as exc:
        raise ParseError(0, str(exc)) from exc
    return ParsedEdgeList(G, dropped)


def read_edge_list(path) -> ParsedEdgeList:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def serialize_edge_list(G: Hypergraph) -> str:
    lines = []
    for e in G.edges:
        names = " ".join(G.labels[u] for u in e.vertices)
        lines.append(names if e.weight == 1.0 else f"w:{e.weight!r} {names}")
    return "\n".join(lines) + ("\n" if lines else "")


def _fmt_time(t) -> str:
    return str(t) if isinstance(t, (int, np.integer)) else repr(float(t))


def export_trajectory_csv(trajectory: Trajectory, path) -> None:
    """One row per (sample, vertex, component), sorted by time, vertex, component."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "vertex", "component", "value", "sync_error"])
        for t, x, err in zip(trajectory.times, trajectory.states, trajectory.sync_errors):
            x2 = x[:, None] if x.ndim == 1 else x
            for u in range(x2.shape[0]):
                for c in range(x2.shape[1]):
                    w.writerow([_fmt_time(t), u, c, repr(float(x2[u, c])), repr(float(err))])


def read_trajectory_csv(path) -> tuple[list[float], list[np.ndarray], list[float]]:
    """Inverse of :func:`export_trajectory_csv`; states come back as ``(n, k)`` arrays."""
    rows: dict[float, dict] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            t = float(r["time"])
            slot = rows.setdefault(t, {"err": float(r["sync_error"]), "vals": {}})
            slot["vals"][(int(r["vertex"]), int(r["component"]))] = float(r["value"])
    times, states, errors = [], [], []
    for t, slot in rows.items():
        n = 1 + max(u for u, _ in slot["vals"])
        k = 1 + max(c for _, c in slot["vals"])
        x = np.empty((n, k))
        for (u, c), v in slot["vals"].items():
            x[u, c] = v
        times.append(t)
        states.append(x)
        errors.append(slot["err"])
    return times, states, errors


@dataclass
class RunConfig:
    """Parameters of one simulation run, stored on disk as ``key=value`` lines."""

    scenario: str = "custom"
    mode: str = "discrete"
    operator: str = "lw"
    eps: float = 1.0
    f: str = "identity"
    g: str = "identity"
    k: int = 1
    dt: float = 1e-2
    t_max: float = 10.0
    max_steps: int = 100_000
    conv_tol: float = 1e-9
    div_tol: float = 1e12
    sample_every: int = 1
    seed: int = 0
    x0_low: float = 0.0
    x0_high: float = 1.0
    edges: str = ""
    output: str = ""
    extra: dict = field(default_factory=dict)

    def to_text(self) -> str:
        lines = []
        for fld in dataclasses.fields(self):
            if fld.name == "extra":
                continue
            v = getattr(self, fld.name)
            lines.append(f"{fld.name}={v!r}" if isinstance(v, float) else f"{fld.name}={v}")
        lines += [f"extra.{k}={v}" for k, v in sorted(self.extra.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        types = {f.name: f.type for f in dataclasses.fields(cls)}
        kwargs: dict = {"extra": {}}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep:
                raise ParseError(lineno, f"expected key=value, got {line!r}")
            if key.startswith("extra."):
                kwargs["extra"][key[6:]] = value
            elif key in types:
                kind = types[key]
                kwargs[key] = int(value) if kind == "int" else float(value) if kind == "float" else value
            else:
                raise ParseError(lineno, f"unknown config key {key!r}")
        return cls(**kwargs)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text(), encoding="utf-8")

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def synthetic_hypergraph(
    n_vertices: int,
    n_edges: int,
    seed: int = 0,
    max_size: int = 8,
    p_size: float = 0.5,
) -> Hypergraph:
    """Random connected hypergraph with exactly ``n_edges`` edges.

    A random spanning hypertree covers every vertex first; the remaining edges
    are drawn uniformly. Edge sizes are ``1 + Geometric(p_size)`` capped at
    ``max_size`` (mean about 3 for the defaults).
    """
    rng = np.random.default_rng(seed)
    order = [int(v) for v in rng.permutation(n_vertices)]

    def size() -> int:
        return int(min(1 + rng.geometric(p_size), max_size))

    edges: list[list[int]] = []
    covered = [order[0]]
    i = 1
    while i < n_vertices:
        new = order[i : i + size() - 1]
        i += len(new)
        edges.append([covered[int(rng.integers(len(covered)))]] + new)
        covered += new
    if len(edges) > n_edges:
        raise ValueError(f"{n_edges} edges cannot connect {n_vertices} vertices at this size mix")
    while len(edges) < n_edges:
        s = min(size(), n_vertices)
        edges.append([int(v) for v in rng.choice(n_vertices, s, replace=False)])
    return Hypergraph.from_edges(n_vertices, edges, labels=[f"v{u}" for u in range(n_vertices)])


def random_initial_state(n: int, k: int = 1, seed: int = 0, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.uniform(low, high, size=(n, k))
    return x[:, 0] if k == 1 else x


def recompute_sync_errors(states) -> list[float]:
    return [sync_error(x) for x in states]
