"""Branching schemes: how a choice point turns into branch decisions.

A plan is either *enumerated* (d-way style: one branch per set, the variable
stays the branching variable until the plan is exhausted) or *binary* (2-way
style: reduce to the first set, or remove it and re-select freely; only the
first set is materialized).

The splitting schemes (domain split, ties, clustering) only engage when the
current domain is still large relative to the original one: strictly more
than ``threshold_fraction`` times the original size.  Otherwise, and whenever
their partition degenerates (all-singleton tie groups, a single tie group, a
single cluster), they fall back to the plain scheme of their style and emit a
plan identical to it.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .clustering import xmeans
from .heuristics import ScoredValue, score_domain
from .model import SearchState


class SchemeKind(Enum):
    DWAY = "dway"
    TWO_WAY = "2way"
    DOMAIN_SPLIT = "split"
    TIES_DWAY = "ties-dway"
    TIES_TWO_WAY = "ties-2way"
    CLUST_DWAY = "clust-dway"
    CLUST_TWO_WAY = "clust-2way"


SCHEME_NAMES = tuple(kind.value for kind in SchemeKind)


class BranchStyle(Enum):
    ENUMERATED = "enumerated"
    BINARY = "binary"


@dataclass(frozen=True)
class Scheme:
    kind: SchemeKind
    threshold_fraction: Fraction = Fraction(1, 4)
    kmax: int = 4

    def __post_init__(self) -> None:
        tf = Fraction(self.threshold_fraction)
        object.__setattr__(self, "threshold_fraction", tf)
        if not 0 <= tf <= 1:
            raise ValueError("threshold_fraction must be within [0, 1]")
        if self.kmax < 1:
            raise ValueError("kmax must be at least 1")


def parse_scheme(name: str, threshold_fraction=Fraction(1, 4), kmax: int = 4) -> Scheme:
    try:
        kind = SchemeKind(name)
    except ValueError:
        raise ValueError(
            f"unknown scheme {name!r} (expected one of {', '.join(SCHEME_NAMES)})"
        ) from None
    return Scheme(kind, Fraction(threshold_fraction), kmax)


@dataclass(frozen=True)
class BranchPlan:
    variable: int
    style: BranchStyle
    sets: tuple[tuple[int, ...], ...]


def _dway_plan(x: int, scored: list[ScoredValue]) -> BranchPlan:
    return BranchPlan(x, BranchStyle.ENUMERATED, tuple((sv.value,) for sv in scored))


def _two_way_plan(x: int, scored: list[ScoredValue]) -> BranchPlan:
    return BranchPlan(x, BranchStyle.BINARY, ((scored[0].value,),))


def _tie_groups(scored: list[ScoredValue]) -> list[tuple[int, ...]]:
    groups: list[list[int]] = []
    last_score = None
    for sv in scored:
        if not groups or sv.score != last_score:
            groups.append([sv.value])
            last_score = sv.score
        else:
            groups[-1].append(sv.value)
    return [tuple(sorted(g)) for g in groups]


def _score_as_float(score: int) -> float:
    try:
        return float(score)
    except OverflowError:
        return sys.float_info.max if score > 0 else -sys.float_info.max


def plan(scheme: Scheme, state: SearchState, x: int) -> BranchPlan:
    """Build the branch plan for ``x`` under ``scheme`` on the current state."""
    scored = score_domain(state, x)
    kind = scheme.kind
    if kind is SchemeKind.DWAY:
        return _dway_plan(x, scored)
    if kind is SchemeKind.TWO_WAY:
        return _two_way_plan(x, scored)

    # splitting engages only while the domain is still large
    tf = scheme.threshold_fraction
    size = state.sizes[x]
    original = len(state.tables.values[x])
    binary_fallback = kind in (
        SchemeKind.DOMAIN_SPLIT, SchemeKind.TIES_TWO_WAY, SchemeKind.CLUST_TWO_WAY
    )
    if size * tf.denominator <= tf.numerator * original:
        return _two_way_plan(x, scored) if binary_fallback else _dway_plan(x, scored)

    if kind is SchemeKind.DOMAIN_SPLIT:
        top = tuple(sorted(sv.value for sv in scored[: (len(scored) + 1) // 2]))
        return BranchPlan(x, BranchStyle.BINARY, (top,))

    if kind in (SchemeKind.TIES_DWAY, SchemeKind.TIES_TWO_WAY):
        groups = _tie_groups(scored)
        if len(groups) == 1 or all(len(g) == 1 for g in groups):
            return _two_way_plan(x, scored) if binary_fallback else _dway_plan(x, scored)
        if kind is SchemeKind.TIES_DWAY:
            return BranchPlan(x, BranchStyle.ENUMERATED, tuple(groups))
        return BranchPlan(x, BranchStyle.BINARY, (groups[0],))

    clustering = xmeans(
        [_score_as_float(sv.score) for sv in scored], kmax=scheme.kmax, rng=state.rng
    )
    if clustering.k == 1:
        return _two_way_plan(x, scored) if binary_fallback else _dway_plan(x, scored)
    sets = tuple(
        tuple(sorted(scored[i].value for i in cluster)) for cluster in clustering.clusters
    )
    if kind is SchemeKind.CLUST_DWAY:
        return BranchPlan(x, BranchStyle.ENUMERATED, sets)
    return BranchPlan(x, BranchStyle.BINARY, (sets[0],))
