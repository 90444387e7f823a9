"""Exact d-separation tests over a Dag.

Two interchangeable implementations are provided. ``d_separated`` closes the
conditioning set under ancestors and then runs a reachability pass over
(node, direction) states, visiting each arc a constant number of times.
``d_separated_bruteforce`` enumerates every simple adjacency path between the
query sets and applies the blocking rules to each path directly; it is only
practical on small graphs and exists as an independent cross-check.

Blocking rules for a path given conditioning set Z: a node where the path's
arrows converge transmits only if it is in Z or has a descendant in Z; every
other node on the path transmits only if it is outside Z.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable

from .dag import Dag, NodeSet, UnknownNodeError

_UP = 0  # entered against an arc (from a child), or a search start
_DOWN = 1  # entered along an arc (from a parent)


class InvalidQueryError(ValueError):
    """Query sets violate the contract (overlap, or empty x/y)."""


def check_query(
    dag: Dag, x: Iterable[int], z: Iterable[int], y: Iterable[int]
) -> tuple[NodeSet, NodeSet, NodeSet]:
    """Validate a query and return its sets frozen.

    x and y must be non-empty, all three sets pairwise disjoint, and every
    index registered in ``dag``. z may be empty.
    """
    xs, zs, ys = frozenset(x), frozenset(z), frozenset(y)
    registered = dag._index_set
    if not (xs <= registered and zs <= registered and ys <= registered):
        unknown = (xs | zs | ys) - registered
        raise UnknownNodeError(
            "unknown node index(es): " + ", ".join(sorted(map(repr, unknown)))
        )
    if not xs or not ys:
        raise InvalidQueryError("x and y must be non-empty")
    if xs & ys or xs & zs or ys & zs:
        raise InvalidQueryError("x, z, y must be pairwise disjoint")
    return xs, zs, ys


def d_separated(dag: Dag, x: Iterable[int], z: Iterable[int], y: Iterable[int]) -> bool:
    """True iff every adjacency path between x and y is blocked by z."""
    xs, zs, ys = check_query(dag, x, z, y)
    return d_separated_checked(dag, xs, zs, ys)


def d_separated_checked(dag: Dag, xs: NodeSet, zs: NodeSet, ys: NodeSet) -> bool:
    """``d_separated`` minus validation; callers guarantee a well-formed query."""
    parents = dag._parents
    children = dag._children

    # a direct arc between the sets is a path with no interior nodes, so no
    # conditioning set can block it
    for v in xs:
        if not ys.isdisjoint(parents[v]) or not ys.isdisjoint(children[v]):
            return False

    # z plus everything with a descendant in z: exactly the nodes at which a
    # converging-arrows path node may transmit
    if zs:
        closures = dag.ancestor_closures()
        z_closure = frozenset().union(*[closures[v] for v in zs])
    else:
        z_closure = zs

    # states encode (node, direction) as 2 * node + direction
    seen = bytearray(2 * len(parents))
    queue = deque(2 * v + _UP for v in xs)
    push = queue.append
    while queue:
        state = queue.popleft()
        if seen[state]:
            continue
        seen[state] = 1
        v = state >> 1
        if v in ys:
            return False
        if state & 1 == _UP:
            if v not in zs:
                for p in parents[v]:
                    push(2 * p + _UP)
                for c in children[v]:
                    push(2 * c + _DOWN)
        else:
            if v not in zs:
                for c in children[v]:
                    push(2 * c + _DOWN)
            if v in z_closure:
                # converging arrows at v are unblocked, bounce to parents
                for p in parents[v]:
                    push(2 * p + _UP)
    return True


def d_separated_bruteforce(
    dag: Dag, x: Iterable[int], z: Iterable[int], y: Iterable[int]
) -> bool:
    """Literal path-enumeration form of ``d_separated``; small graphs only."""
    xs, zs, ys = check_query(dag, x, z, y)
    n = dag.node_count
    neighbors = [sorted(dag._parents[v] | dag._children[v]) for v in range(n)]

    def path_active(path: list[int]) -> bool:
        for i in range(1, len(path) - 1):
            v = path[i]
            converging = path[i - 1] in dag._parents[v] and path[i + 1] in dag._parents[v]
            if converging:
                if v not in zs and zs.isdisjoint(dag.descendants(v)):
                    return False
            elif v in zs:
                return False
        return True

    def search(path: list[int], on_path: set[int]) -> bool:
        v = path[-1]
        if v in ys:
            return path_active(path)
        for w in neighbors[v]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                if search(path, on_path):
                    return True
                on_path.remove(w)
                path.pop()
        return False

    for start in sorted(xs):
        if search([start], {start}):
            return False
    return True
