"""Backtracking search maintaining arc consistency.

Every applied decision (an assignment, a set reduction, or a right-branch
removal) is propagated and counts as exactly one node; root preprocessing is
not counted.  A variable is treated as assigned only when a branch reduced its
domain to a singleton; domains that collapse to one value through propagation
stay unassigned until search selects them (their plans then commit them).

The engine is iterative (explicit frame stack) so deep runs cannot hit the
interpreter recursion limit.  After ``solve`` returns, the state has been
unwound: re-running on the same problem starts from the original domains.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .branching import BranchPlan, BranchStyle, Scheme, plan
from .heuristics import select_variable
from .model import Problem, SearchState, check_tuple
from .propagation import decision_arcs, establish_root_gac, propagate

_TIME_CHECK_MASK = 63  # wall clock consulted every 64 nodes


class Status(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    LIMIT = "limit"


@dataclass(frozen=True)
class Limits:
    max_nodes: Optional[int] = None
    wall_time_ms: Optional[float] = None


@dataclass(frozen=True)
class RunStats:
    nodes: int
    decisions: int
    wipeouts: int
    backtracks: int
    elapsed_ms: float


@dataclass(frozen=True)
class Outcome:
    status: Status
    assignment: Optional[tuple[int, ...]]
    stats: RunStats


def verify(problem: Problem, assignment: Sequence[int]) -> bool:
    """Total assignment check straight against every constraint."""
    if len(assignment) != problem.n_vars:
        return False
    for x, v in enumerate(assignment):
        if v not in problem.domains[x]:
            return False
    return all(
        check_tuple(c, tuple(assignment[x] for x in c.scope)) for c in problem.constraints
    )


class _Frame:
    __slots__ = ("x", "style", "sets", "idx", "token", "committed")

    def __init__(self, branch_plan: BranchPlan) -> None:
        self.x = branch_plan.variable
        self.style = branch_plan.style
        self.sets = branch_plan.sets
        self.idx = 0
        self.token: Optional[int] = None
        self.committed = False


def solve(
    problem: Problem,
    scheme: Scheme,
    limits: Optional[Limits] = None,
    seed: int = 0,
    trace: Optional[list[str]] = None,
) -> Outcome:
    """Solve ``problem`` under ``scheme``; deterministic for a given seed."""
    state = SearchState(problem, seed)
    started = time.perf_counter()
    max_nodes = limits.max_nodes if limits else None
    wall_ms = limits.wall_time_ms if limits else None

    def finish(status: Status, assignment: Optional[tuple[int, ...]]) -> Outcome:
        stats = RunStats(
            nodes=state.nodes,
            decisions=state.decisions,
            wipeouts=state.wipeouts,
            backtracks=state.backtracks,
            elapsed_ms=(time.perf_counter() - started) * 1000.0,
        )
        return Outcome(status, assignment, stats)

    def capture() -> tuple[int, ...]:
        values = tuple(state.value_of(x) for x in range(problem.n_vars))
        if not verify(problem, values):
            raise RuntimeError("internal error: produced assignment fails verify()")
        return values

    root = state.push_level()
    if establish_root_gac(state) is not None:
        state.undo_to(root)
        return finish(Status.UNSAT, None)
    if state.all_singleton():
        values = capture()
        state.undo_to(root)
        return finish(Status.SAT, values)

    names = problem.names
    stack = [_Frame(plan(scheme, state, select_variable(state)))]
    result: Optional[Status] = None
    assignment: Optional[tuple[int, ...]] = None

    while stack:
        fr = stack[-1]
        if fr.token is not None:
            # the applied branch (or its subtree) failed
            if fr.committed:
                state.assigned[fr.x] = None
                fr.committed = False
            state.undo_to(fr.token)
            fr.token = None
            state.backtracks += 1
            fr.idx += 1

        if fr.style is BranchStyle.ENUMERATED:
            exhausted = fr.idx >= len(fr.sets)
        else:
            # binary: left branch, then the complement unless it is everything
            exhausted = fr.idx > 1 or (
                fr.idx == 1 and len(fr.sets[0]) == state.sizes[fr.x]
            )
        if exhausted:
            stack.pop()
            continue

        # limits are checked before a decision is applied
        if max_nodes is not None and state.nodes >= max_nodes:
            result = Status.LIMIT
            break
        if (
            wall_ms is not None
            and state.nodes & _TIME_CHECK_MASK == 0
            and (time.perf_counter() - started) * 1000.0 > wall_ms
        ):
            result = Status.LIMIT
            break

        x = fr.x
        fr.token = state.push_level()
        if fr.idx == 0:
            state.decisions += 1  # one per choice point that applies a branch
        if fr.style is BranchStyle.BINARY and fr.idx == 1:
            removed = fr.sets[0]
            for v in removed:
                state.remove_value(x, v)
            kind = "R"
            values = removed
        else:
            values = fr.sets[fr.idx]
            state.reduce_domain(x, values)
            kind = "L" if fr.style is BranchStyle.BINARY else f"E#{fr.idx}"
            if len(values) == 1:
                state.assigned[x] = values[0]
                fr.committed = True
        state.nodes += 1
        if trace is not None:
            joined = ",".join(str(v) for v in values)
            trace.append(f"{len(stack) - 1} {names[x]} {{{joined}}} {kind}")

        if propagate(state, decision_arcs(state, x)) is None:
            if state.all_singleton():
                assignment = capture()
                result = Status.SAT
                break
            stack.append(_Frame(plan(scheme, state, select_variable(state))))
        # on wipeout the loop unwinds this branch at the top

    state.undo_to(root)
    if result is None:
        return finish(Status.UNSAT, None)
    return finish(result, assignment)
