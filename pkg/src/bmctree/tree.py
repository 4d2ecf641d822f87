"""Finite rooted trees and the set-valued operators used throughout the package.

Vertices are dense integer ids ``0..n-1``; the optional string labels only
matter for input and output. Every operator returns vertex sets as tuples in
ascending id order so that anything iterating over them is reproducible.
"""

from __future__ import annotations

import numbers
from collections import deque
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .errors import TreeError

VertexSet = tuple  # ascending tuple of vertex ids


class RootedTree:
    """An immutable finite tree with a distinguished root.

    Parameters
    ----------
    n_vertices : int
        Number of vertices; ids are ``0..n_vertices-1``.
    edges : iterable of pairs
        Undirected edges as id pairs.
    root : int
        The root vertex.
    labels : sequence of str, optional
        Display labels, one per id. Defaults to ``str(id)``.
    """

    __slots__ = (
        "_n", "_edges", "_root", "_labels", "_index", "_adj",
        "_parent", "_depth", "_children", "_future",
    )

    def __init__(self, n_vertices: int, edges: Iterable[tuple[int, int]], root: int,
                 labels: Sequence[str] | None = None):
        n = int(n_vertices)
        if n < 1:
            raise TreeError("a tree needs at least one vertex")
        edge_set = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if not (0 <= a < n and 0 <= b < n):
                raise TreeError(f"edge ({a}, {b}) references a vertex not in tree")
            if a == b:
                raise TreeError(f"self-loop at vertex {a}")
            e = (min(a, b), max(a, b))
            if e in edge_set:
                raise TreeError(f"duplicate edge {e}")
            edge_set.add(e)
        if len(edge_set) != n - 1:
            raise TreeError(f"a tree on {n} vertices has {n - 1} edges, got {len(edge_set)}")
        if not 0 <= root < n:
            raise TreeError("root is not a vertex in tree")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(s) for s in labels)
        if len(labels) != n or len(set(labels)) != n:
            raise TreeError("labels must be distinct and one per vertex")

        adj: list[list[int]] = [[] for _ in range(n)]
        for a, b in sorted(edge_set):
            adj[a].append(b)
            adj[b].append(a)

        self._n = n
        self._edges = frozenset(edge_set)
        self._root = int(root)
        self._labels = labels
        self._index = {s: i for i, s in enumerate(labels)}
        self._adj = tuple(tuple(sorted(a)) for a in adj)

        parent = [-1] * n
        depth = [-1] * n
        parent[root] = root
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    parent[v] = u
                    queue.append(v)
        if min(depth) < 0:
            raise TreeError("graph is not connected")
        self._parent = tuple(parent)
        self._depth = tuple(depth)
        self._children = tuple(
            tuple(v for v in self._adj[u] if depth[v] > depth[u]) for u in range(n)
        )
        self._future: dict[int, tuple[int, ...]] = {}

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_labels(cls, vertices: Sequence[Hashable], edges: Iterable[tuple], root: Hashable):
        """Build a tree from arbitrary labels; ids follow the listed order."""
        labels = [str(v) for v in vertices]
        index = {s: i for i, s in enumerate(labels)}
        if len(index) != len(labels):
            raise TreeError("duplicate vertex label")

        def find(v):
            try:
                return index[str(v)]
            except KeyError:
                raise TreeError(f"vertex not in tree: {v!r}") from None

        return cls(len(labels), [(find(a), find(b)) for a, b in edges], find(root), labels)

    @classmethod
    def path(cls, length: int, root: int = 0) -> "RootedTree":
        return cls(length, [(i, i + 1) for i in range(length - 1)], root)

    @classmethod
    def star(cls, n_leaves: int, root: int = 0) -> "RootedTree":
        return cls(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)], root)

    @classmethod
    def complete_binary(cls, depth: int) -> "RootedTree":
        n = 2 ** (depth + 1) - 1
        return cls(n, [((i - 1) // 2, i) for i in range(1, n)], 0)

    def rerooted(self, root: int) -> "RootedTree":
        """The same undirected tree with another root."""
        self._check(root)
        return RootedTree(self._n, self._edges, root, self._labels)

    # -- basic accessors ------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self._n

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(self._n))

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def root(self) -> int:
        return self._root

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def height(self) -> int:
        return max(self._depth)

    def label(self, x: int) -> str:
        self._check(x)
        return self._labels[x]

    def id(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise TreeError(f"vertex not in tree: {label!r}") from None

    def depth(self, x: int) -> int:
        self._check(x)
        return self._depth[x]

    def _check(self, x) -> None:
        if not isinstance(x, numbers.Integral) or not 0 <= x < self._n:
            raise TreeError(f"vertex not in tree: {x!r}")

    # -- operators ------------------------------------------------------------

    def children(self, x: int) -> VertexSet:
        """Neighbours of ``x`` strictly farther from the root."""
        self._check(x)
        return self._children[x]

    def level_k_successors(self, x: int, k: int) -> VertexSet:
        """Vertices ``k`` generations below ``x``."""
        self._check(x)
        if k < 1:
            raise ValueError("k must be a positive integer")
        layer = [x]
        for _ in range(k):
            layer = [y for u in layer for y in self._children[u]]
        return tuple(sorted(layer))

    def strict_future(self, x: int) -> VertexSet:
        """All proper descendants of ``x`` (``x`` itself excluded)."""
        self._check(x)
        cached = self._future.get(x)
        if cached is None:
            out = []
            stack = list(self._children[x])
            while stack:
                u = stack.pop()
                out.append(u)
                stack.extend(self._children[u])
            cached = self._future[x] = tuple(sorted(out))
        return cached

    def parent(self, x: int) -> int:
        """Neighbour toward the root; the root is its own parent."""
        self._check(x)
        return self._parent[x]

    def past(self, x: int) -> VertexSet:
        """Vertices on the path from ``x`` to the root, ``x`` excluded."""
        self._check(x)
        out = []
        while x != self._root:
            x = self._parent[x]
            out.append(x)
        return tuple(sorted(out))

    def neighbors(self, x: int) -> VertexSet:
        self._check(x)
        return self._adj[x]

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def level_ball(self, n: int) -> VertexSet:
        """Vertices within distance ``n`` of the root."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        return tuple(v for v in range(self._n) if self._depth[v] <= n)

    def is_connected(self, vertices: Iterable[int]) -> bool:
        members = set(vertices)
        if not members:
            return False
        start = min(members)
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v in members and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen == members

    def connected_subsets(self, max_size: int) -> list[VertexSet]:
        """Every vertex set of size at most ``max_size`` inducing a subtree.

        Ordered by size, then lexicographically.
        """
        if max_size < 1:
            raise ValueError("max_size must be a positive integer")
        found: set[tuple[int, ...]] = {(v,) for v in range(self._n)}
        frontier = set(found)
        for _ in range(min(max_size, self._n) - 1):
            grown = set()
            for s in frontier:
                members = set(s)
                for u in s:
                    for v in self._adj[u]:
                        if v not in members:
                            grown.add(tuple(sorted(members | {v})))
            found |= grown
            frontier = grown
        return sorted(found, key=lambda s: (len(s), s))

    def all_subsets(self, universe: Iterable[int]):
        """All subsets of ``universe`` by size then lexicographic order."""
        pool = sorted(universe)
        for r in range(len(pool) + 1):
            yield from combinations(pool, r)

    # -- misc -----------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self._labels),
            "edges": [[self._labels[a], self._labels[b]] for a, b in sorted(self._edges)],
            "root": self._labels[self._root],
        }

    def same_shape(self, other: "RootedTree") -> bool:
        """True when both trees share vertices and edges (roots may differ)."""
        return self._n == other._n and self._edges == other._edges

    def __eq__(self, other):
        if not isinstance(other, RootedTree):
            return NotImplemented
        return (self._n, self._edges, self._root, self._labels) == (
            other._n, other._edges, other._root, other._labels)

    def __hash__(self):
        return hash((self._n, self._edges, self._root, self._labels))

    def __repr__(self):
        return f"RootedTree(n={self._n}, root={self._labels[self._root]!r})"
