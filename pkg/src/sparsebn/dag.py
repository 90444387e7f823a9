"""Directed acyclic graph over named nodes.

Nodes are dense integer indices assigned in registration order, with a
one-to-one name mapping. Every iteration and tie-break in this package is
by ascending index, so builds are reproducible byte for byte.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable

NodeSet = frozenset[int]

EMPTY_SET: NodeSet = frozenset()


class DuplicateNodeError(ValueError):
    """A node name was registered twice."""


class UnknownNodeError(ValueError):
    """A name or index does not refer to a registered node."""


class CycleError(ValueError):
    """An arc insertion would create a directed cycle.

    The offending cycle is available on ``cycle`` as a list of node names,
    first name repeated at the end.
    """

    def __init__(self, message: str, cycle: list[str]):
        super().__init__(message)
        self.cycle = cycle


class Dag:
    """Mutable DAG. Acyclicity is checked on every arc insertion."""

    __slots__ = (
        "_names",
        "_index",
        "_parents",
        "_children",
        "_index_set",
        "_mutations",
        "_closures",
    )

    def __init__(self, names: Iterable[str] = ()):
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self._parents: list[set[int]] = []
        self._children: list[set[int]] = []
        self._index_set: set[int] = set()
        self._mutations = 0
        self._closures: tuple[int, list[frozenset[int]]] | None = None
        for name in names:
            self.add_node(name)

    @property
    def node_count(self) -> int:
        return len(self._names)

    @property
    def arc_count(self) -> int:
        return sum(len(ch) for ch in self._children)

    def add_node(self, name: str) -> int:
        """Register a node and return its index (dense, registration order)."""
        if not name:
            raise ValueError("node name must be non-empty")
        if name in self._index:
            raise DuplicateNodeError(f"node {name!r} is already registered")
        index = len(self._names)
        self._names.append(name)
        self._index[name] = index
        self._parents.append(set())
        self._children.append(set())
        self._index_set.add(index)
        self._mutations += 1
        return index

    def add_arc(self, parent: int, child: int) -> None:
        """Insert the arc parent -> child; re-inserting an arc is a no-op.

        Raises CycleError if the arc would close a directed cycle (self-loops
        included); the existing graph is left untouched.
        """
        self._check_index(parent)
        self._check_index(child)
        if child in self._children[parent]:
            return
        if parent == child:
            name = self._names[parent]
            raise CycleError(f"self-loop on {name}", [name, name])
        if self._reachable(child, parent):
            path = self._directed_path(child, parent)
            cycle = [self._names[parent]] + [self._names[v] for v in path]
            raise CycleError(
                "arc {} -> {} would create cycle: {}".format(
                    self._names[parent], self._names[child], " -> ".join(cycle)
                ),
                cycle,
            )
        self._children[parent].add(child)
        self._parents[child].add(parent)
        self._mutations += 1

    def has_node(self, name: str) -> bool:
        return name in self._index

    def has_arc(self, parent: int, child: int) -> bool:
        self._check_index(parent)
        self._check_index(child)
        return child in self._children[parent]

    def name_of(self, v: int) -> str:
        self._check_index(v)
        return self._names[v]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownNodeError(f"unknown node {name!r}") from None

    def names(self) -> list[str]:
        """Node names in index order."""
        return list(self._names)

    def parents(self, v: int) -> NodeSet:
        self._check_index(v)
        return frozenset(self._parents[v])

    def children(self, v: int) -> NodeSet:
        self._check_index(v)
        return frozenset(self._children[v])

    def roots(self) -> list[int]:
        return [v for v in range(len(self._names)) if not self._parents[v]]

    def leaves(self) -> list[int]:
        return [v for v in range(len(self._names)) if not self._children[v]]

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs as (parent, child) pairs, sorted ascending."""
        out = []
        for parent in range(len(self._names)):
            for child in sorted(self._children[parent]):
                out.append((parent, child))
        return out

    def ancestors(self, v: int) -> NodeSet:
        """All nodes with a directed path to v, excluding v itself."""
        self._check_index(v)
        return frozenset(self._closure(v, self._parents))

    def descendants(self, v: int) -> NodeSet:
        """All nodes reachable from v, excluding v itself."""
        self._check_index(v)
        return frozenset(self._closure(v, self._children))

    def topological_order(self) -> list[int]:
        """Parents before children; ties broken by ascending index."""
        indegree = [len(self._parents[v]) for v in range(len(self._names))]
        heap = [v for v in range(len(self._names)) if indegree[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for child in self._children[v]:
                indegree[child] -= 1
                if indegree[child] == 0:
                    heapq.heappush(heap, child)
        # the insertion-time cycle check makes a partial result impossible
        assert len(order) == len(self._names)
        return order

    def ancestor_closures(self) -> list[frozenset[int]]:
        """Per node: the node plus all its ancestors. Cached between mutations."""
        cached = self._closures
        if cached is not None and cached[0] == self._mutations:
            return cached[1]
        closures: list[frozenset[int]] = [frozenset()] * len(self._names)
        for v in self.topological_order():
            closure = {v}
            for p in self._parents[v]:
                closure |= closures[p]  # parents precede v in the order
            closures[v] = frozenset(closure)
        self._closures = (self._mutations, closures)
        return closures

    def copy(self) -> Dag:
        out = Dag()
        out._names = list(self._names)
        out._index = dict(self._index)
        out._parents = [set(s) for s in self._parents]
        out._children = [set(s) for s in self._children]
        out._index_set = set(self._index_set)
        out._mutations = self._mutations
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self._names == other._names and self._children == other._children

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"Dag({len(self._names)} nodes, {self.arc_count} arcs)"

    def _check_index(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < len(self._names):
            raise UnknownNodeError(f"unknown node index {v!r}")

    def _closure(self, start: int, adjacency: list[set[int]]) -> set[int]:
        seen: set[int] = set()
        stack = list(adjacency[start])
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(adjacency[v] - seen)
        return seen

    def _reachable(self, src: int, dst: int) -> bool:
        return dst in self._closure(src, self._children)

    def _directed_path(self, src: int, dst: int) -> list[int]:
        # BFS for a shortest src -> dst path; callers guarantee one exists
        prev: dict[int, int | None] = {src: None}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if u == dst:
                break
            for child in sorted(self._children[u]):
                if child not in prev:
                    prev[child] = u
                    queue.append(child)
        path = [dst]
        while prev[path[-1]] is not None:
            path.append(prev[path[-1]])
        path.reverse()
        return path
