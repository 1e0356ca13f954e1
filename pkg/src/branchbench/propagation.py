"""Arc consistency: revise single arcs and run AC-3 style propagation.

An arc is a pair ``(constraint id, variable id)``; revising it deletes every
value of the variable lacking a supporting tuple in the constraint over the
current domains of the other scope variables.  ``propagate`` drives a FIFO
queue with deduplication: when a revision shrinks a domain, all arcs of other
constraints sharing that variable are re-enqueued.  A revision that empties a
domain bumps the weight of exactly that constraint by one and stops
propagation immediately.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .model import ExtensionalAllowed, SearchState, check_tuple


@dataclass(frozen=True)
class Wipeout:
    """A revision emptied ``variable``'s domain; ``constraint`` did it."""

    variable: int
    constraint: int


def _supported_mask(state: SearchState, cid: int, x: int) -> int:
    """Mask of values of ``x`` that keep a support in constraint ``cid``."""
    tables = state.tables
    arity = tables.arity[cid]
    m = state.masks[x]
    if arity == 1:
        return m & tables.unary_masks[cid]
    if arity == 2:
        u, v = tables.scopes[cid]
        side = 0 if x == u else 1
        p = v if x == u else u
        sup = tables.bin_sup[cid][side]
        pm = state.masks[p]
        if state.sizes[p] == 1:
            # the opposite table maps the partner's single bit to x-values
            return m & tables.bin_sup[cid][1 - side][pm.bit_length() - 1]
        new = 0
        t = m
        while t:
            b = t & -t
            if sup[b.bit_length() - 1] & pm:
                new |= b
            t ^= b
        return new
    return _supported_mask_nary(state, cid, x)


def _supported_mask_nary(state: SearchState, cid: int, x: int) -> int:
    constraint = state.problem.constraints[cid]
    scope = constraint.scope
    pos_x = scope.index(x)
    others = [z for z in scope if z != x]
    values = state.tables.values[x]
    pos = state.tables.pos[x]
    new = 0
    rel = constraint.relation
    if isinstance(rel, ExtensionalAllowed):
        for t in sorted(rel.tuples):
            bit = pos.get(t[pos_x])
            if bit is None or not (state.masks[x] >> bit) & 1 or (new >> bit) & 1:
                continue
            if all(state.has_value(z, t[k]) for k, z in enumerate(scope) if z != x):
                new |= 1 << bit
        return new
    m = state.masks[x]
    t = m
    while t:
        b = t & -t
        bit = b.bit_length() - 1
        a = values[bit]
        for combo in itertools.product(*(state.domain_values(z) for z in others)):
            it = iter(combo)
            tup = tuple(a if k == pos_x else next(it) for k in range(len(scope)))
            if check_tuple(constraint, tup):
                new |= b
                break
        t ^= b
    return new


def revise(state: SearchState, cid: int, x: int) -> bool:
    """Revise one arc; True iff at least one value was removed."""
    m = state.masks[x]
    new = _supported_mask(state, cid, x)
    if new == m:
        return False
    removed = m & ~new
    while removed:
        b = removed & -removed
        state._remove_bit(x, b.bit_length() - 1)
        removed ^= b
    return True


def propagate(state: SearchState, arcs: Iterable[tuple[int, int]]) -> Optional[Wipeout]:
    """Run the arc queue to fixpoint; None means consistent."""
    queue = deque(arcs)
    queued = set(queue)
    tables = state.tables
    sizes = state.sizes
    while queue:
        arc = queue.popleft()
        queued.discard(arc)
        cid, x = arc
        if revise(state, cid, x):
            if sizes[x] == 0:
                state.weights[cid] += 1
                state.wipeouts += 1
                return Wipeout(x, cid)
            for follow in tables.decision_arcs[x]:
                if follow[0] != cid and follow not in queued:
                    queue.append(follow)
                    queued.add(follow)
    return None


def decision_arcs(state: SearchState, x: int) -> tuple[tuple[int, int], ...]:
    """Arcs to seed after a decision on ``x``: every constraint on ``x``,
    revised at its other scope variables, ascending (cid, var)."""
    return state.tables.decision_arcs[x]


def establish_root_gac(state: SearchState) -> Optional[Wipeout]:
    """Propagate every arc of the problem once (root preprocessing)."""
    return propagate(state, state.tables.root_arcs)
