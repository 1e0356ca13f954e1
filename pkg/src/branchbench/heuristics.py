"""Variable and value ordering.

Variable choice is weighted-degree based: each constraint carries a weight
(starting at 1, bumped when it wipes a domain) and a variable's weighted
degree sums the weights of its constraints that still involve at least one
other unassigned variable.  The variable minimizing |domain| / wdeg is
selected, with zero wdeg treated as infinite ratio and ties broken toward the
smallest variable index.  Ratios are compared by cross multiplication, so the
ordering is exact.

Value choice scores each value by the product, over unassigned variables
sharing at least one binary constraint with the branching variable, of how
many of their current values are compatible with it under all those binary
constraints together.  Higher score first; equal scores order by ascending
value.  Scores are plain (unbounded) integers.
"""

from __future__ import annotations

from typing import NamedTuple

from .model import SearchState


class ScoredValue(NamedTuple):
    value: int
    score: int


def wdeg(state: SearchState, x: int) -> int:
    """Weighted degree of ``x`` (constraints with another unassigned var)."""
    assigned = state.assigned
    weights = state.weights
    total = 0
    for cid, others in state.tables.var_constraints[x]:
        for z in others:
            if assigned[z] is None:
                total += weights[cid]
                break
    return total


def select_variable(state: SearchState) -> int:
    """Unassigned variable minimizing |domain| / wdeg (exact comparison)."""
    assigned = state.assigned
    sizes = state.sizes
    best = -1
    best_d = best_w = 0
    for x in range(len(sizes)):
        if assigned[x] is not None:
            continue
        d = sizes[x]
        w = wdeg(state, x)
        if best < 0:
            best, best_d, best_w = x, d, w
            continue
        if w == 0:
            continue  # infinite ratio never improves
        if best_w == 0 or d * best_w < best_d * w:
            best, best_d, best_w = x, d, w
    if best < 0:
        raise ValueError("no unassigned variable to select")
    return best


def promise(state: SearchState, x: int, value: int) -> int:
    """Compatibility-count product for assigning ``value`` to ``x``."""
    bit = state.tables.pos[x].get(value)
    if bit is None or not (state.masks[x] >> bit) & 1:
        raise ValueError(f"value {value} not in current domain of variable {x}")
    assigned = state.assigned
    masks = state.masks
    score = 1
    for y, comb in state.tables.neighbors[x]:
        if assigned[y] is None:
            score *= (comb[bit] & masks[y]).bit_count()
            if score == 0:
                return 0
    return score


def score_domain(state: SearchState, x: int) -> list[ScoredValue]:
    """All current values of ``x`` scored, best first (ties: ascending value)."""
    tables = state.tables
    values = tables.values[x]
    assigned = state.assigned
    masks = state.masks

    bits = []
    m = masks[x]
    while m:
        b = m & -m
        bits.append(b.bit_length() - 1)
        m ^= b
    scores = [1] * len(bits)
    for y, comb in tables.neighbors[x]:
        if assigned[y] is None:
            my = masks[y]
            for k, bit in enumerate(bits):
                scores[k] *= (comb[bit] & my).bit_count()
    out = [ScoredValue(values[bit], scores[k]) for k, bit in enumerate(bits)]
    out.sort(key=lambda sv: (-sv.score, sv.value))
    return out
