"""Core problem model: variables, domains, constraints, and the search state.

A :class:`Problem` is immutable after construction and safely shareable
between solver runs.  Variables are identified by index; original domains
are kept sorted ascending and duplicate-free.  Mutable search data (current
domains, constraint weights, the restoration trail) lives in
:class:`SearchState`.

Current domains are bitmasks over positions in the original domain, which
keeps membership tests, removals, and the compatibility counting done by the
value heuristic cheap.  The compiled tables on the problem (support masks per
binary constraint, arc lists, neighbour tables) are a pure indexing layer:
they change nothing about constraint semantics, which are always those of
:func:`check_tuple`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .exprs import (
    EvalError,
    Expr,
    INT64_MAX,
    INT64_MIN,
    eval_expr,
    expr_vars,
    format_expr,
)
from .rng import Rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtensionalAllowed:
    """Relation listing exactly the satisfying tuples."""

    tuples: frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class ExtensionalForbidden:
    """Relation listing exactly the violating tuples."""

    tuples: frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class Intensional:
    """Relation defined by an expression; non-zero means satisfied."""

    expr: Expr


Relation = Union[ExtensionalAllowed, ExtensionalForbidden, Intensional]


@dataclass(frozen=True)
class Constraint:
    cid: int
    scope: tuple[int, ...]
    var_names: tuple[str, ...]
    relation: Relation


def check_tuple(constraint: Constraint, values: Sequence[int]) -> bool:
    """True iff ``values`` (one per scope position) satisfies the constraint.

    Evaluation errors (zero divisor, 64-bit overflow) make the tuple
    unsatisfying; a diagnostic is logged.
    """
    rel = constraint.relation
    tup = tuple(values)
    if isinstance(rel, ExtensionalAllowed):
        return tup in rel.tuples
    if isinstance(rel, ExtensionalForbidden):
        return tup not in rel.tuples
    try:
        return eval_expr(rel.expr, dict(zip(constraint.var_names, tup))) != 0
    except EvalError as err:
        logger.debug("constraint %d rejects %r: %s", constraint.cid, tup, err)
        return False


def _relation_signature(constraint: Constraint):
    """Cache key identifying a relation up to renaming of scope variables."""
    rel = constraint.relation
    if isinstance(rel, ExtensionalAllowed):
        return ("ea", rel.tuples)
    if isinstance(rel, ExtensionalForbidden):
        return ("ef", rel.tuples)
    positional = {name: f"${i}" for i, name in enumerate(constraint.var_names)}
    from .exprs import rename_expr

    return ("in", format_expr(rename_expr(rel.expr, positional)))


class _Tables:
    """Compiled immutable lookup tables for one problem (see module docstring)."""

    __slots__ = (
        "values", "pos", "full_masks",
        "arity", "scopes",
        "bin_sup", "unary_masks",
        "decision_arcs", "root_arcs",
        "neighbors", "var_constraints",
    )

    def __init__(self, problem: "Problem") -> None:
        n = len(problem.names)
        self.values = [problem.domains[x] for x in range(n)]
        self.pos = [{v: i for i, v in enumerate(dom)} for dom in self.values]
        self.full_masks = [(1 << len(dom)) - 1 for dom in self.values]

        cons = problem.constraints
        self.arity = [len(c.scope) for c in cons]
        self.scopes = [c.scope for c in cons]
        self.bin_sup: list = [None] * len(cons)
        self.unary_masks: list = [None] * len(cons)

        sup_cache: dict = {}
        for c in cons:
            if len(c.scope) == 1:
                x = c.scope[0]
                mask = 0
                for i, v in enumerate(self.values[x]):
                    if check_tuple(c, (v,)):
                        mask |= 1 << i
                self.unary_masks[c.cid] = mask
            elif len(c.scope) == 2:
                u, v = c.scope
                key = (_relation_signature(c), self.values[u], self.values[v])
                got = sup_cache.get(key)
                if got is None:
                    got = self._build_binary_support(c)
                    sup_cache[key] = got
                self.bin_sup[c.cid] = got

        # arcs (cid, target) seeded after a decision on x: every constraint on
        # x revised at its other scope variables, ascending (cid, var)
        per_var: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        cons_of: list[list[int]] = [[] for _ in range(n)]
        for c in cons:
            for x in set(c.scope):
                cons_of[x].append(c.cid)
                for y in c.scope:
                    if y != x:
                        per_var[x].append((c.cid, y))
        self.decision_arcs = [tuple(sorted(set(a))) for a in per_var]
        self.root_arcs = tuple(
            sorted({(c.cid, y) for c in cons for y in c.scope})
        )
        self.var_constraints = [
            tuple((cid, tuple(z for z in cons[cid].scope if z != x)) for cid in cons_of[x])
            for x in range(n)
        ]

        # combined binary compatibility per unordered variable pair, used by
        # the value heuristic: comb[bit of x] = mask of compatible values of y
        pair_comb: dict[tuple[int, int], list[int]] = {}
        for c in cons:
            if len(c.scope) != 2:
                continue
            u, v = c.scope
            if u == v:
                continue
            sup_u, sup_v = self.bin_sup[c.cid]
            for a, b, sup in ((u, v, sup_u), (v, u, sup_v)):
                comb = pair_comb.get((a, b))
                if comb is None:
                    pair_comb[(a, b)] = list(sup)
                else:
                    pair_comb[(a, b)] = [old & s for old, s in zip(comb, sup)]
        grouped: list[list[tuple[int, tuple[int, ...]]]] = [[] for _ in range(n)]
        for (a, b), comb in sorted(pair_comb.items()):
            grouped[a].append((b, tuple(comb)))
        self.neighbors = [tuple(g) for g in grouped]

    def _build_binary_support(self, c: Constraint):
        u, v = c.scope
        du, dv = self.values[u], self.values[v]
        rel = c.relation
        sup_u = [0] * len(du)
        sup_v = [0] * len(dv)
        if isinstance(rel, ExtensionalAllowed):
            pu, pv = self.pos[u], self.pos[v]
            for a, b in rel.tuples:
                i = pu.get(a)
                j = pv.get(b)
                if i is not None and j is not None:
                    sup_u[i] |= 1 << j
                    sup_v[j] |= 1 << i
        elif isinstance(rel, ExtensionalForbidden):
            full_v = (1 << len(dv)) - 1
            full_u = (1 << len(du)) - 1
            sup_u = [full_v] * len(du)
            sup_v = [full_u] * len(dv)
            pu, pv = self.pos[u], self.pos[v]
            for a, b in rel.tuples:
                i = pu.get(a)
                j = pv.get(b)
                if i is not None and j is not None:
                    sup_u[i] &= ~(1 << j)
                    sup_v[j] &= ~(1 << i)
        else:
            for i, a in enumerate(du):
                for j, b in enumerate(dv):
                    if check_tuple(c, (a, b)):
                        sup_u[i] |= 1 << j
                        sup_v[j] |= 1 << i
        return (tuple(sup_u), tuple(sup_v))


def _normalize_domain(dom: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(dom)))
    if not out:
        raise ValueError("empty domain")
    for v in out:
        if not INT64_MIN <= v <= INT64_MAX:
            raise ValueError(f"domain value {v} outside 64-bit range")
    return out


@dataclass(frozen=True)
class Problem:
    names: tuple[str, ...]
    domains: tuple[tuple[int, ...], ...]
    constraints: tuple[Constraint, ...]
    _tables: object = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        names = tuple(self.names)
        domains = tuple(_normalize_domain(d) for d in self.domains)
        constraints = tuple(self.constraints)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "constraints", constraints)
        if len(names) != len(domains):
            raise ValueError("names/domains length mismatch")
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        for i, c in enumerate(constraints):
            if c.cid != i:
                raise ValueError(f"constraint {i} carries cid {c.cid}")
            if not c.scope:
                raise ValueError(f"constraint {i} has empty scope")
            if len(set(c.scope)) != len(c.scope):
                raise ValueError(f"constraint {i} repeats a variable in scope")
            for x in c.scope:
                if not 0 <= x < len(names):
                    raise ValueError(f"constraint {i} references variable {x}")
            expected = tuple(names[x] for x in c.scope)
            if c.var_names != expected:
                raise ValueError(f"constraint {i} scope names {c.var_names} != {expected}")
            rel = c.relation
            if isinstance(rel, (ExtensionalAllowed, ExtensionalForbidden)):
                for t in rel.tuples:
                    if len(t) != len(c.scope):
                        raise ValueError(f"constraint {i} tuple arity mismatch: {t}")
                    for x, v in zip(c.scope, t):
                        if v not in domains[x]:
                            raise ValueError(
                                f"constraint {i} tuple value {v} outside the domain "
                                f"of {names[x]}"
                            )
            else:
                extra = expr_vars(rel.expr) - set(c.var_names)
                if extra:
                    raise ValueError(
                        f"constraint {i} expression references {sorted(extra)} outside scope"
                    )

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def tables(self) -> _Tables:
        t = self._tables
        if t is None:
            t = _Tables(self)
            object.__setattr__(self, "_tables", t)
        return t


class SearchState:
    """Mutable per-run state: current domains, weights, trail, counters."""

    __slots__ = (
        "problem", "tables", "masks", "sizes", "weights", "assigned",
        "trail", "marks", "singletons",
        "nodes", "decisions", "wipeouts", "backtracks", "seed", "rng",
    )

    def __init__(self, problem: Problem, seed: int = 0) -> None:
        t = problem.tables
        self.problem = problem
        self.tables = t
        self.masks = list(t.full_masks)
        self.sizes = [len(dom) for dom in t.values]
        self.weights = [1] * len(problem.constraints)
        self.assigned: list[Optional[int]] = [None] * problem.n_vars
        self.trail: list[tuple[int, int]] = []
        self.marks: list[int] = []
        self.singletons = sum(1 for s in self.sizes if s == 1)
        self.nodes = 0
        self.decisions = 0
        self.wipeouts = 0
        self.backtracks = 0
        self.seed = seed
        self.rng = Rng(seed)

    # -- domain queries ----------------------------------------------------

    def domain_values(self, x: int) -> list[int]:
        """Current domain of ``x`` in ascending value order."""
        vals = self.tables.values[x]
        m = self.masks[x]
        out = []
        while m:
            b = m & -m
            out.append(vals[b.bit_length() - 1])
            m ^= b
        return out

    def domain_size(self, x: int) -> int:
        return self.sizes[x]

    def has_value(self, x: int, v: int) -> bool:
        bit = self.tables.pos[x].get(v)
        return bit is not None and (self.masks[x] >> bit) & 1 == 1

    def value_of(self, x: int) -> int:
        """The value of a singleton domain."""
        m = self.masks[x]
        if self.sizes[x] != 1:
            raise ValueError(f"variable {x} is not singleton")
        return self.tables.values[x][m.bit_length() - 1]

    def all_singleton(self) -> bool:
        return self.singletons == len(self.sizes)

    # -- trail -------------------------------------------------------------

    def push_level(self) -> int:
        """Open a restoration level; returns a token for :meth:`undo_to`."""
        self.marks.append(len(self.trail))
        return len(self.marks) - 1

    def undo_to(self, token: int) -> None:
        """Restore exactly the domains that held when ``token`` was pushed."""
        mark = self.marks[token]
        del self.marks[token:]
        trail = self.trail
        masks = self.masks
        sizes = self.sizes
        while len(trail) > mark:
            x, bit = trail.pop()
            masks[x] |= 1 << bit
            s = sizes[x]
            sizes[x] = s + 1
            if s == 1:
                self.singletons -= 1
            elif s == 0:
                self.singletons += 1

    def _remove_bit(self, x: int, bit: int) -> None:
        self.masks[x] &= ~(1 << bit)
        self.trail.append((x, bit))
        s = self.sizes[x] - 1
        self.sizes[x] = s
        if s == 1:
            self.singletons += 1
        elif s == 0:
            self.singletons -= 1

    def remove_value(self, x: int, v: int) -> None:
        """Delete ``v`` from the current domain of ``x`` (trail-logged)."""
        bit = self.tables.pos[x].get(v)
        if bit is None or not (self.masks[x] >> bit) & 1:
            raise ValueError(f"value {v} not in current domain of variable {x}")
        self._remove_bit(x, bit)

    def reduce_domain(self, x: int, values: Iterable[int]) -> None:
        """Shrink the domain of ``x`` to ``values`` (a non-empty subset of it)."""
        pos = self.tables.pos[x]
        target = 0
        for v in values:
            bit = pos.get(v)
            if bit is None:
                raise ValueError(f"value {v} not in original domain of variable {x}")
            target |= 1 << bit
        cur = self.masks[x]
        if target == 0:
            raise ValueError("reduce_domain target is empty")
        if target & ~cur:
            raise ValueError("reduce_domain target is not a subset of the current domain")
        removed = cur & ~target
        while removed:
            b = removed & -removed
            self._remove_bit(x, b.bit_length() - 1)
            removed ^= b
