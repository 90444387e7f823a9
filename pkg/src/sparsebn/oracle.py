"""Conditional-independence oracles.

The builder only needs a predicate answering "is x independent of y given
z?" over a fixed variable universe. ``DsepOracle`` backs that predicate with
d-separation in a ground-truth DAG and layers expert-declared independence
triples on top: a declared triple answers True before the graph is consulted,
and any declared triple the graph disagrees with is recorded as a conflict
for the caller to surface.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from collections.abc import Iterable

from .dag import Dag, NodeSet
from .dsep import check_query, d_separated_checked

Triple = tuple[NodeSet, NodeSet, NodeSet]


class IndependenceModel(ABC):
    """Deterministic predicate over I(x, z, y) queries, symmetric in x and y."""

    @abstractmethod
    def is_independent(
        self, x: Iterable[int], z: Iterable[int], y: Iterable[int]
    ) -> bool:
        raise NotImplementedError


class DsepOracle(IndependenceModel):
    """d-separation in a ground-truth DAG, plus a declared-triple overlay.

    ``call_count`` increments once per well-formed query, declared-triple hits
    included, and is safe to read under concurrent queries. Conflicting
    queries (overlay says independent, graph says dependent) are appended to
    ``overlay_conflicts`` in query order.
    """

    def __init__(self, ground_truth: Dag, declared: Iterable[Triple] = ()):
        self._dag = ground_truth
        self._declared: set[tuple[NodeSet, frozenset[NodeSet]]] = set()
        self._lock = threading.Lock()
        self.call_count = 0
        self.overlay_conflicts: list[Triple] = []
        for x, z, y in declared:
            self.declare_independent(x, z, y)

    @property
    def universe(self) -> tuple[str, ...]:
        return tuple(self._dag.names())

    @property
    def ground_truth(self) -> Dag:
        return self._dag

    def declare_independent(
        self, x: Iterable[int], z: Iterable[int], y: Iterable[int]
    ) -> None:
        """Overlay the triple I(x, z, y); matching is exact up to x/y swap."""
        xs, zs, ys = check_query(self._dag, x, z, y)
        self._declared.add(self._key(xs, zs, ys))

    def is_independent(
        self, x: Iterable[int], z: Iterable[int], y: Iterable[int]
    ) -> bool:
        xs, zs, ys = check_query(self._dag, x, z, y)
        with self._lock:
            self.call_count += 1
        if self._declared and self._key(xs, zs, ys) in self._declared:
            if not d_separated_checked(self._dag, xs, zs, ys):
                self.overlay_conflicts.append((xs, zs, ys))
            return True
        return d_separated_checked(self._dag, xs, zs, ys)

    def reset_counter(self) -> None:
        with self._lock:
            self.call_count = 0

    @staticmethod
    def _key(xs: NodeSet, zs: NodeSet, ys: NodeSet):
        return (zs, frozenset((xs, ys)))
