"""Directed acyclic graphs with ancestral queries, path enumeration and d-separation.

Nodes are labelled 1..d everywhere in the public interface. An edge (j, i)
means j -> i, i.e. j is a parent of i.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

__all__ = [
    "Dag",
    "PathCapExceeded",
    "relabel_well_ordered",
    "enumerate_paths",
    "is_confounder",
    "d_separated",
    "random_dag",
    "dag_to_text",
    "dag_from_text",
]

DEFAULT_PATH_CAP = 1_000_000


class PathCapExceeded(RuntimeError):
    """Raised when path enumeration exceeds the explicit cap."""


class Dag:
    """Immutable DAG on nodes {1, ..., d}.

    Parameters
    ----------
    d : int
        Number of nodes.
    edges : iterable of (j, i) pairs
        Directed edges j -> i, 1-based labels.

    Acyclicity, label range, self-loops and duplicate edges are validated at
    construction; all query methods are pure.
    """

    def __init__(self, d: int, edges: Iterable[tuple[int, int]] = ()):
        if d < 1:
            raise ValueError(f"node count must be >= 1, got {d}")
        edge_list = [(int(j), int(i)) for j, i in edges]
        seen = set()
        for j, i in edge_list:
            if not (1 <= j <= d and 1 <= i <= d):
                raise ValueError(f"edge ({j}, {i}) outside node range 1..{d}")
            if j == i:
                raise ValueError(f"self-loop at node {j}")
            if (j, i) in seen:
                raise ValueError(f"duplicate edge ({j}, {i})")
            seen.add((j, i))
        self.d = int(d)
        self.edges = frozenset(seen)

        self._parents = {i: set() for i in range(1, d + 1)}
        self._children = {i: set() for i in range(1, d + 1)}
        for j, i in self.edges:
            self._parents[i].add(j)
            self._children[j].add(i)

        self._topo = self._topological_sort()
        self._an = {i: set() for i in range(1, d + 1)}
        for n in self._topo:
            for p in self._parents[n]:
                self._an[n].add(p)
                self._an[n].update(self._an[p])
        self._de = {i: set() for i in range(1, d + 1)}
        for n in reversed(self._topo):
            for c in self._children[n]:
                self._de[n].add(c)
                self._de[n].update(self._de[c])

    def _topological_sort(self) -> tuple[int, ...]:
        indegree = {n: len(self._parents[n]) for n in range(1, self.d + 1)}
        queue = deque(sorted(n for n, k in indegree.items() if k == 0))
        topo = []
        while queue:
            n = queue.popleft()
            topo.append(n)
            for c in sorted(self._children[n]):
                indegree[c] -= 1
                if indegree[c] == 0:
                    queue.append(c)
        if len(topo) != self.d:
            raise ValueError("edge set contains a directed cycle")
        return tuple(topo)

    def _check_node(self, i: int) -> int:
        if not 1 <= i <= self.d:
            raise ValueError(f"node {i} outside range 1..{self.d}")
        return int(i)

    def parents(self, i: int) -> frozenset[int]:
        return frozenset(self._parents[self._check_node(i)])

    def children(self, i: int) -> frozenset[int]:
        return frozenset(self._children[self._check_node(i)])

    def ancestors(self, i: int) -> frozenset[int]:
        """an(i): all nodes with a directed path to i."""
        return frozenset(self._an[self._check_node(i)])

    def descendants(self, i: int) -> frozenset[int]:
        """de(i): all nodes reachable from i by a directed path."""
        return frozenset(self._de[self._check_node(i)])

    def ancestors_inclusive(self, i: int) -> frozenset[int]:
        """An(i) = an(i) | {i}."""
        return self.ancestors(i) | {i}

    def descendants_inclusive(self, i: int) -> frozenset[int]:
        """De(i) = de(i) | {i}."""
        return self.descendants(i) | {i}

    def source_nodes(self) -> frozenset[int]:
        """All nodes with no parents; nonempty for every DAG."""
        return frozenset(n for n in range(1, self.d + 1) if not self._parents[n])

    def topological_order(self) -> tuple[int, ...]:
        """A deterministic topological order (ancestors first)."""
        return self._topo

    def is_well_ordered(self) -> bool:
        """True iff every edge (j, i) has j > i."""
        return all(j > i for j, i in self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, Dag) and self.d == other.d and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.d, self.edges))

    def __repr__(self) -> str:
        return f"Dag(d={self.d}, edges={sorted(self.edges)})"


def relabel_well_ordered(dag: Dag) -> tuple[Dag, tuple[int, ...]]:
    """Relabel nodes so that every edge points from a higher to a lower label.

    Returns the relabelled DAG and the permutation ``perm`` with
    ``perm[old - 1] == new``. Sources receive the largest labels; applying the
    inverse permutation to the output recovers the input.
    """
    topo = dag.topological_order()
    perm = [0] * dag.d
    for pos, node in enumerate(topo):
        perm[node - 1] = dag.d - pos
    new_edges = {(perm[j - 1], perm[i - 1]) for j, i in dag.edges}
    return Dag(dag.d, new_edges), tuple(perm)


def enumerate_paths(
    dag: Dag, j: int, i: int, cap: int = DEFAULT_PATH_CAP
) -> list[tuple[int, ...]]:
    """All directed paths from j to i as node tuples (j, ..., i).

    Empty iff j is not an ancestor of i. Enumeration is depth-first with
    children visited in label order; raises :class:`PathCapExceeded` if more
    than ``cap`` paths exist.
    """
    dag._check_node(j)
    dag._check_node(i)
    if j == i:
        raise ValueError("path endpoints must differ")
    if j not in dag.ancestors(i):
        return []
    paths: list[tuple[int, ...]] = []
    # iterative DFS; only expand through nodes that can still reach i
    feasible = dag.ancestors(i) | {i}
    stack = [(j, (j,))]
    while stack:
        node, trail = stack.pop()
        if node == i:
            paths.append(trail)
            if len(paths) > cap:
                raise PathCapExceeded(f"more than {cap} paths from {j} to {i}")
            continue
        for c in sorted(dag.children(node), reverse=True):
            if c in feasible:
                stack.append((c, trail + (c,)))
    return paths


def is_confounder(dag: Dag, i: int, j: int, k: int) -> bool:
    """True iff i has a path to j avoiding k and a path to k avoiding j."""
    if len({i, j, k}) != 3:
        raise ValueError("confounder test needs three distinct nodes")
    return _reaches_avoiding(dag, i, j, k) and _reaches_avoiding(dag, i, k, j)


def _reaches_avoiding(dag: Dag, src: int, dst: int, banned: int) -> bool:
    if src == banned:
        return False
    seen = {src}
    stack = [src]
    while stack:
        n = stack.pop()
        for c in dag.children(n):
            if c == banned or c in seen:
                continue
            if c == dst:
                return True
            seen.add(c)
            stack.append(c)
    return False


def d_separated(
    dag: Dag,
    i: int,
    j: int,
    z: Iterable[int],
    removed_edges: Iterable[tuple[int, int]] = (),
) -> bool:
    """Whether nodes i and j are d-separated given the conditioning set z.

    Implemented with the standard reachability (Bayes-ball) algorithm: j is
    d-connected to i iff it is reachable from i along some active trail.
    Edges listed in removed_edges are treated as absent, which supports
    d-separation queries in edge-deleted graphs without rebuilding them.
    """
    zset = {dag._check_node(n) for n in z}
    dag._check_node(i)
    dag._check_node(j)
    if i == j:
        raise ValueError("d-separation endpoints must differ")
    if i in zset or j in zset:
        raise ValueError("endpoints may not lie in the conditioning set")
    removed = frozenset(removed_edges)
    base_parents = dag._parents
    base_children = dag._children

    if removed:
        def parents(n):
            return (p for p in base_parents[n] if (p, n) not in removed)

        def children(n):
            return (c for c in base_children[n] if (n, c) not in removed)
    else:
        parents = base_parents.__getitem__
        children = base_children.__getitem__

    anz = set(zset)
    stack = list(zset)
    while stack:
        for p in parents(stack.pop()):
            if p not in anz:
                anz.add(p)
                stack.append(p)

    # states are (node, direction); "up" means the trail enters from a child
    up, down = 0, 1
    visited = set()
    agenda = deque([(i, up)])
    while agenda:
        node, direction = agenda.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node == j and node not in zset:
            return False
        if direction == up and node not in zset:
            for p in parents(node):
                agenda.append((p, up))
            for c in children(node):
                agenda.append((c, down))
        elif direction == down:
            if node not in zset:
                for c in children(node):
                    agenda.append((c, down))
            if node in anz:
                for p in parents(node):
                    agenda.append((p, up))
    return True


def random_dag(d: int, p: float, rng: np.random.Generator) -> Dag:
    """Well-ordered random DAG with Bernoulli(p) upper-triangular adjacency.

    Adjacency positions (row i, column j) with j > i are drawn in row-major
    order from the generator stream, so output is reproducible for a fixed
    seed. Position (i, j) becoming an edge means j -> i.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    if d < 1:
        raise ValueError(f"node count must be >= 1, got {d}")
    m = d * (d - 1) // 2
    draws = rng.random(m) < p
    edges = []
    pos = 0
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            if draws[pos]:
                edges.append((j, i))
            pos += 1
    return Dag(d, edges)


def dag_to_text(dag: Dag) -> str:
    """Serialise to the text format: first line d, then one 'j i' per edge."""
    lines = [str(dag.d)]
    lines.extend(f"{j} {i}" for j, i in sorted(dag.edges))
    return "\n".join(lines) + "\n"


def dag_from_text(text: str) -> Dag:
    """Parse the text format produced by :func:`dag_to_text`."""
    tokens = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not tokens or len(tokens[0]) != 1:
        raise ValueError("first line must contain the node count")
    d = int(tokens[0][0])
    edges = []
    for parts in tokens[1:]:
        if len(parts) != 2:
            raise ValueError(f"edge line must contain two labels, got {parts!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Dag(d, edges)
