"""Scale-free comparison network between agents.

The preferential-attachment generator seeds with a complete graph on m+1
nodes and grows one node at a time, each new node wiring m edges to
distinct existing nodes with probability proportional to degree.  That
keeps the graph simple, connected, and of minimum degree m, which the
equity comparison relies on (every agent has someone to compare against).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SocialGraph",
    "generate_ba",
    "load_edgelist",
    "save_edgelist",
    "degree_histogram",
]


@dataclass
class SocialGraph:
    """Undirected simple graph as per-node sorted adjacency lists."""

    n_nodes: int
    adjacency: list = field(repr=False)

    def __post_init__(self):
        self.adjacency = [np.asarray(sorted(adj), dtype=np.int64) for adj in self.adjacency]
        if len(self.adjacency) != self.n_nodes:
            raise ValueError("adjacency length must equal n_nodes")
        for i, adj in enumerate(self.adjacency):
            if adj.size and (adj.min() < 0 or adj.max() >= self.n_nodes):
                raise ValueError(f"node {i} has out-of-range neighbors")
            if np.any(adj == i):
                raise ValueError(f"self-loop at node {i}")
            if adj.size != np.unique(adj).size:
                raise ValueError(f"duplicate edges at node {i}")
        for i, adj in enumerate(self.adjacency):
            for j in adj:
                if i not in self.adjacency[j]:
                    raise ValueError(f"edge {i}-{j} is not symmetric")

    def neighbors(self, i: int) -> np.ndarray:
        """Sorted neighbor indices of node i (never contains i)."""
        if not 0 <= i < self.n_nodes:
            raise ValueError(f"node index {i} out of range [0, {self.n_nodes})")
        return self.adjacency[i]

    @property
    def degrees(self) -> np.ndarray:
        return np.array([adj.size for adj in self.adjacency], dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def edges(self):
        """All edges as (i, j) pairs with i < j."""
        for i, adj in enumerate(self.adjacency):
            for j in adj:
                if i < j:
                    yield (i, int(j))

    def flat_neighbors(self):
        """(concatenated neighbor indices, owner index per entry); used for
        vectorized neighbor averages."""
        owners = np.repeat(np.arange(self.n_nodes), self.degrees)
        flat = (
            np.concatenate(self.adjacency)
            if self.n_nodes and self.degrees.sum()
            else np.array([], dtype=np.int64)
        )
        return flat, owners

    def is_connected(self) -> bool:
        if self.n_nodes == 0:
            return True
        seen = np.zeros(self.n_nodes, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            i = stack.pop()
            for j in self.adjacency[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        return bool(seen.all())


def generate_ba(n_nodes: int, m: int, seed: int) -> SocialGraph:
    """Preferential-attachment graph on n_nodes with attachment count m.

    Deterministic for a given seed.  Edge count is m*(m+1)/2 + m*(n-m-1).
    """
    if m < 1:
        raise ValueError(f"attachment count m must be >= 1, got {m}")
    if n_nodes < m + 1:
        raise ValueError(f"need n_nodes >= m + 1, got n_nodes={n_nodes} m={m}")
    rng = np.random.default_rng(seed)

    adjacency = [set() for _ in range(n_nodes)]
    # clique seed on the first m+1 nodes
    for i in range(m + 1):
        for j in range(i + 1, m + 1):
            adjacency[i].add(j)
            adjacency[j].add(i)

    # one entry per edge endpoint; uniform picks here are degree-weighted picks
    endpoints = [i for i in range(m + 1) for _ in range(m)]
    for source in range(m + 1, n_nodes):
        targets = set()
        while len(targets) < m:
            targets.add(endpoints[rng.integers(len(endpoints))])
        for t in targets:
            adjacency[source].add(t)
            adjacency[t].add(source)
            endpoints.append(t)
        endpoints.extend([source] * m)

    return SocialGraph(n_nodes, [sorted(adj) for adj in adjacency])


def load_edgelist(path) -> SocialGraph:
    """Read a graph from a text file of whitespace-separated "i j" lines.

    Indices are 0-based; lines starting with '#' are skipped.  Node count is
    max index + 1.
    """
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'i j', got {line!r}")
            i, j = int(parts[0]), int(parts[1])
            if i < 0 or j < 0:
                raise ValueError(f"{path}:{lineno}: negative node index")
            if i == j:
                raise ValueError(f"{path}:{lineno}: self-loop {i}-{j}")
            edges.append((i, j))
    n = 1 + max((max(e) for e in edges), default=-1)
    adjacency = [set() for _ in range(n)]
    for i, j in edges:
        adjacency[i].add(j)
        adjacency[j].add(i)
    return SocialGraph(n, [sorted(adj) for adj in adjacency])


def save_edgelist(graph: SocialGraph, path) -> None:
    """Write the graph in the same "i j" text format load_edgelist reads."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# i j\n")
        for i, j in graph.edges():
            fh.write(f"{i} {j}\n")


def degree_histogram(graph: SocialGraph) -> dict:
    """Count of nodes per degree, as {degree: count}."""
    counts = {}
    for d in graph.degrees:
        counts[int(d)] = counts.get(int(d), 0) + 1
    return counts
