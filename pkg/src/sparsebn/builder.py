"""Incremental construction of a sparse network from an independence oracle.

The network grows one node at a time. Expert priority picks the next node
when it ranks a unique candidate highest; otherwise the tied candidates race,
level by level, to find the smallest predecessor subset that screens them off
from the rest of the network, and that subset becomes the winner's parents.

Subset search runs in increasing subset size, ascending lexicographic order
within a size. A subset that failed to screen a candidate off can never
succeed later against a grown network (the failed dependence persists under
supersets of the remainder), so failures are cached per (candidate, subset)
for the whole build and skipped without querying.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum

from .dag import Dag, EMPTY_SET, NodeSet
from .dsep import d_separated_checked
from .expert import ExpertInfo
from .oracle import IndependenceModel

FailureCache = set[tuple[int, NodeSet]]


class StratumNotFoundError(Exception):
    """No qualifying parent set of size <= max_parents exists for a node."""

    def __init__(self, candidate: int, max_parents: int):
        super().__init__(
            f"no parent set of size <= {max_parents} for node {candidate}"
        )
        self.candidate = candidate
        self.max_parents = max_parents


@dataclass(frozen=True)
class BuildConfig:
    max_parents: int | None = None
    use_cache: bool = True
    trust_expert: bool = False

    def __post_init__(self):
        if self.max_parents is not None and self.max_parents < 1:
            raise ValueError("max_parents must be >= 1")


class WarningKind(str, Enum):
    MISSING_DECLARED_CAUSE = "missing_declared_cause"
    OVERLAY_CONFLICT = "overlay_conflict"
    PARENT_BOUND_FALLBACK = "parent_bound_fallback"


@dataclass(frozen=True)
class DeviationWarning:
    kind: WarningKind
    node: int
    detail: str


@dataclass
class BuildResult:
    network: Dag
    warnings: list[DeviationWarning]
    oracle_calls: int
    node_order: list[int]
    strata: dict[int, NodeSet] = field(default_factory=dict)
    _relaxed: bool = field(default=False, repr=False)

    @property
    def minimality_guaranteed(self) -> bool:
        """False when a bound or trust mode may have forced extra parents."""
        return not self._relaxed


class _CountingModel:
    """Counts the oracle calls one build makes, whatever the model is."""

    __slots__ = ("base", "calls")

    def __init__(self, base: IndependenceModel):
        self.base = base
        self.calls = 0

    def is_independent(self, x, z, y) -> bool:
        self.calls += 1
        return self.base.is_independent(x, z, y)


def _stratum_at_size(
    model,
    candidate: int,
    existing: NodeSet,
    size: int,
    required: NodeSet,
    free_pool: Sequence[int],
    cache: FailureCache | None,
) -> NodeSet | None:
    """Search all subsets of one size for a screening set; None if none works.

    Subsets always include ``required``; sizes below len(required) never
    match. A subset equal to the whole existing set qualifies without an
    oracle call (independence from nothing is vacuous).
    """
    pick = size - len(required)
    if pick < 0 or pick > len(free_pool):
        return None
    xset = frozenset((candidate,))
    for combo in itertools.combinations(free_pool, pick):
        subset = frozenset(combo) if not required else required | frozenset(combo)
        if cache is not None and (candidate, subset) in cache:
            continue
        rest = existing - subset
        if not rest:
            return subset
        if model.is_independent(xset, subset, rest):
            return subset
        if cache is not None:
            cache.add((candidate, subset))
    return None


def boundary_stratum(
    model,
    existing: Iterable[int],
    candidate: int,
    cache: FailureCache | None = None,
    config: BuildConfig | None = None,
    required: Iterable[int] = (),
) -> NodeSet:
    """Smallest subset of ``existing`` screening ``candidate`` off the rest.

    Ties within a size resolve to the lexicographically first subset. With
    ``config.max_parents`` set, sizes beyond the bound are not searched and
    StratumNotFoundError is raised if nothing qualified. ``required`` members
    are forced into every subset tried (trust-the-expert mode).
    """
    config = config or BuildConfig()
    existing = frozenset(existing)
    required = frozenset(required)
    if candidate in existing:
        raise ValueError("candidate is already part of the network")
    if not required <= existing:
        raise ValueError("required parents must already be in the network")
    free_pool = sorted(existing - required)
    limit = len(existing) if config.max_parents is None else min(
        config.max_parents, len(existing)
    )
    for size in range(len(required), limit + 1):
        found = _stratum_at_size(
            model, candidate, existing, size, required, free_pool, cache
        )
        if found is not None:
            return found
    raise StratumNotFoundError(candidate, config.max_parents)


def select_winner(
    model,
    info: ExpertInfo,
    existing: Iterable[int],
    candidates: Iterable[int],
    cache: FailureCache | None = None,
    config: BuildConfig | None = None,
) -> tuple[int, NodeSet]:
    """Pick the next node to add and its parent set.

    A unique top-priority candidate wins outright and only then is its
    stratum searched. Tied candidates are searched in lockstep: every tied
    candidate at subset size k before any candidate at k+1, so the winner is
    the one with the smallest stratum, ascending node index breaking ties.

    Raises StratumNotFoundError when max_parents exhausts every tied
    candidate; the reported candidate is the first by index.
    """
    config = config or BuildConfig()
    existing = frozenset(existing)
    maximal = sorted(info.maximal_candidates(candidates))

    def required_for(c: int) -> NodeSet:
        if not config.trust_expert:
            return EMPTY_SET
        return info.declared_causes(c) & existing

    if len(maximal) == 1:
        winner = maximal[0]
        stratum = boundary_stratum(
            model, existing, winner,
            cache=cache, config=config, required=required_for(winner),
        )
        return winner, stratum

    required = {c: required_for(c) for c in maximal}
    pools = {c: sorted(existing - required[c]) for c in maximal}
    limit = len(existing) if config.max_parents is None else min(
        config.max_parents, len(existing)
    )
    for size in range(limit + 1):
        for c in maximal:
            found = _stratum_at_size(
                model, c, existing, size, required[c], pools[c], cache
            )
            if found is not None:
                return c, found
    raise StratumNotFoundError(maximal[0], config.max_parents)


def build(
    model: IndependenceModel,
    universe: Sequence[str],
    info: ExpertInfo | None = None,
    config: BuildConfig | None = None,
) -> BuildResult:
    """Build a network over ``universe`` that is a minimal I-map of ``model``.

    Minimality holds when max_parents is unset and trust_expert is off;
    otherwise the result may carry extra parents and says so via
    ``minimality_guaranteed``. Deviations between the expert's statements and
    what the oracle supports are reported as warnings, never as failures.
    """
    config = config or BuildConfig()
    universe = list(universe)
    if info is None:
        info = ExpertInfo.empty(universe)
    if info.info_dag.names() != universe:
        raise ValueError("expert info was compiled over a different universe")
    model_universe = getattr(model, "universe", None)
    if model_universe is not None and list(model_universe) != universe:
        raise ValueError("model universe does not match the requested universe")

    counting = _CountingModel(model)
    cache: FailureCache | None = set() if config.use_cache else None
    network = Dag(universe)
    warnings: list[DeviationWarning] = []
    conflicts_before = len(getattr(model, "overlay_conflicts", ()))

    existing: NodeSet = EMPTY_SET
    remaining = set(range(len(universe)))
    node_order: list[int] = []
    strata: dict[int, NodeSet] = {}
    while remaining:
        try:
            winner, stratum = select_winner(
                counting, info, existing, remaining, cache=cache, config=config
            )
        except StratumNotFoundError as err:
            # the whole existing set always qualifies: nothing is left over
            winner, stratum = err.candidate, existing
            warnings.append(
                DeviationWarning(
                    WarningKind.PARENT_BOUND_FALLBACK,
                    winner,
                    "no parent set of size <= {} found for {}; keeping all {} "
                    "earlier nodes".format(
                        config.max_parents, universe[winner], len(existing)
                    ),
                )
            )
        for parent in sorted(stratum):
            network.add_arc(parent, winner)
        for cause in sorted(info.declared_causes(winner)):
            if cause not in stratum:
                warnings.append(
                    DeviationWarning(
                        WarningKind.MISSING_DECLARED_CAUSE,
                        winner,
                        "declared cause {} of {} is not a parent in the built "
                        "network".format(universe[cause], universe[winner]),
                    )
                )
        node_order.append(winner)
        strata[winner] = stratum
        existing |= {winner}
        remaining.remove(winner)

    new_conflicts = list(getattr(model, "overlay_conflicts", ()))[conflicts_before:]
    for xs, zs, ys in dict.fromkeys(new_conflicts):
        node = min(xs)
        warnings.append(
            DeviationWarning(
                WarningKind.OVERLAY_CONFLICT,
                node,
                "declared independence I({}; {}; {}) contradicts the model".format(
                    _names(universe, xs), _names(universe, zs), _names(universe, ys)
                ),
            )
        )

    relaxed = config.trust_expert or any(
        w.kind is WarningKind.PARENT_BOUND_FALLBACK for w in warnings
    )
    return BuildResult(
        network=network,
        warnings=warnings,
        oracle_calls=counting.calls,
        node_order=node_order,
        strata=strata,
        _relaxed=relaxed,
    )


def is_imap(network: Dag, model: IndependenceModel) -> bool:
    """Every d-separation in the network holds as a model independence.

    Checked exhaustively over singleton x/y pairs and all conditioning sets,
    so only sensible for small universes.
    """
    n = network.node_count
    for xi in range(n):
        xset = frozenset((xi,))
        for yi in range(xi + 1, n):
            yset = frozenset((yi,))
            others = [v for v in range(n) if v != xi and v != yi]
            for r in range(len(others) + 1):
                for zs in itertools.combinations(others, r):
                    if d_separated_checked(network, xset, frozenset(zs), yset):
                        if not model.is_independent(xset, zs, yset):
                            return False
    return True


def is_minimal_imap(network: Dag, model: IndependenceModel) -> bool:
    """I-map whose every arc is load-bearing: deleting any one breaks it."""
    if not is_imap(network, model):
        return False
    for parent, child in network.arcs():
        if is_imap(_without_arc(network, parent, child), model):
            return False
    return True


def _without_arc(dag: Dag, parent: int, child: int) -> Dag:
    out = Dag(dag.names())
    for a, b in dag.arcs():
        if (a, b) != (parent, child):
            out.add_arc(a, b)
    return out


def _names(universe: Sequence[str], indices: Iterable[int]) -> str:
    return "{" + ", ".join(universe[v] for v in sorted(indices)) + "}"
