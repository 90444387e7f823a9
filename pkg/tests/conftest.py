from __future__ import annotations

import pytest

from sparsebn import Dag


def make_dag(names, arcs=()):
    """Dag from a name list (or space-separated string) and name-pair arcs."""
    if isinstance(names, str):
        names = names.split()
    dag = Dag(names)
    for parent, child in arcs:
        dag.add_arc(dag.index_of(parent), dag.index_of(child))
    return dag


def arc_names(dag):
    return {(dag.name_of(p), dag.name_of(c)) for p, c in dag.arcs()}


@pytest.fixture
def fig_common_cause():
    """Hidden cause T with two sensors T1, T2; a perfect map of its model."""
    return make_dag("T T1 T2", [("T", "T1"), ("T", "T2")])


@pytest.fixture
def diamond():
    """A -> B, A -> C, B -> D, C -> D."""
    return make_dag("A B C D", [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")])
