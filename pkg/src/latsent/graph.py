"""Undirected simple graphs used as the social network."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

TOPOLOGIES = ("complete", "star", "ring", "custom")


class GraphError(ValueError):
    """Invalid graph size, malformed edge list, or bad node index."""


@dataclass(frozen=True)
class Network:
    """An immutable undirected simple graph on nodes ``0..n-1``.

    ``edges`` is stored canonically: each pair as ``(i, j)`` with ``i < j``,
    deduplicated and sorted. Use :func:`make_network` (or the topology
    constructors) rather than building one by hand.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    topology_tag: str = "custom"

    def __post_init__(self):
        if self.n < 1:
            raise GraphError(f"graph needs at least one node, got n={self.n}")
        if self.topology_tag not in TOPOLOGIES:
            raise GraphError(f"unknown topology tag {self.topology_tag!r}")
        for i, j in self.edges:
            if not (0 <= i < j < self.n):
                raise GraphError(f"edge ({i}, {j}) is not canonical for n={self.n}")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy()
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0].copy(), arr[:, 1].copy()

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        i, j = self.edge_arrays
        a[i, j] = 1
        a[j, i] = 1
        return a

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Neighbour lists as ``(indptr, indices)``, neighbours sorted."""
        i, j = self.edge_arrays
        src = np.concatenate([i, j])
        dst = np.concatenate([j, i])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return np.cumsum(indptr), dst.astype(np.int64)

    def degrees(self) -> list[int]:
        indptr, _ = self.csr
        return np.diff(indptr).tolist()

    def neighbors(self, i: int) -> list[int]:
        indptr, indices = self.csr
        return indices[indptr[i]:indptr[i + 1]].tolist()

    def serialize(self) -> str:
        lines = [f"n {self.n}"]
        lines.extend(f"{i} {j}" for i, j in self.edges)
        return "\n".join(lines) + "\n"


def make_network(n: int, edges: Iterable[tuple[int, int]],
                 topology_tag: str = "custom") -> Network:
    canon = set()
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise GraphError(f"self-loop on node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
        canon.add((min(i, j), max(i, j)))
    return Network(n, tuple(sorted(canon)), topology_tag)


def make_complete(n: int) -> Network:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return make_network(n, ((i, j) for i in range(n) for j in range(i + 1, n)),
                        "complete")


def make_star(n: int) -> Network:
    """Star with node 0 as the hub."""
    if n < 2:
        raise GraphError(f"star needs n >= 2, got {n}")
    return make_network(n, ((0, k) for k in range(1, n)), "star")


def make_ring(n: int) -> Network:
    if n < 3:
        raise GraphError(f"closed chain needs n >= 3, got {n}")
    return make_network(n, ((k, (k + 1) % n) for k in range(n)), "ring")


def make_topology(tag: str, n: int) -> Network:
    builders = {"complete": make_complete, "star": make_star, "ring": make_ring,
                "chain": make_ring}
    try:
        return builders[tag](n)
    except KeyError:
        raise GraphError(f"no constructor for topology {tag!r}") from None


def from_edge_list(text: str) -> Network:
    """Parse the ``i j`` per line edge-list format.

    Lines starting with ``#`` and blank lines are skipped. An optional
    ``n <count>`` line fixes the node count; otherwise it is one more than the
    largest index seen.
    """
    declared_n: Optional[int] = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if tokens[0] == "n":
            if len(tokens) != 2:
                raise GraphError(f"line {lineno}: malformed header {line!r}")
            try:
                declared_n = int(tokens[1])
            except ValueError:
                raise GraphError(f"line {lineno}: node count {tokens[1]!r} is not an integer") from None
            continue
        if len(tokens) != 2:
            raise GraphError(f"line {lineno}: expected two node indices, got {line!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphError(f"line {lineno}: parse error, non-integer token in {line!r}") from None
        if i < 0 or j < 0:
            raise GraphError(f"line {lineno}: negative node index")
        if i == j:
            raise GraphError(f"line {lineno}: self-loop on node {i}")
        edges.append((i, j))

    max_index = max((max(e) for e in edges), default=-1)
    n = declared_n if declared_n is not None else max_index + 1
    if n < 1:
        raise GraphError("edge list defines no nodes")
    if max_index >= n:
        raise GraphError(f"node index {max_index} exceeds declared n={n}")
    return make_network(n, edges, "custom")


def read_edge_list(path) -> Network:
    with open(path) as fh:
        return from_edge_list(fh.read())
