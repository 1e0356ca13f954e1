"""Shared builders for the test suite."""

from __future__ import annotations

import itertools
import random

from branchbench.exprs import Call, Const, VarRef
from branchbench.model import (
    Constraint,
    ExtensionalAllowed,
    ExtensionalForbidden,
    Intensional,
    Problem,
)

_BIN_OPS = ("ne", "eq", "lt", "le", "add", "sub")


def make_binary(names, domains, pairs_with_relations) -> Problem:
    cons = []
    for (u, v), rel in pairs_with_relations:
        cons.append(Constraint(len(cons), (u, v), (names[u], names[v]), rel))
    return Problem(tuple(names), tuple(domains), tuple(cons))


def ne_rel(a: str, b: str) -> Intensional:
    return Intensional(Call("ne", (VarRef(a), VarRef(b))))


def _random_extensional(r: random.Random, domains, scope):
    space = [domains[x] for x in scope]
    all_tuples = list(itertools.product(*space))
    count = r.randint(0, min(len(all_tuples), 12))
    chosen = frozenset(r.sample(all_tuples, count))
    if r.randrange(2):
        return ExtensionalAllowed(chosen)
    return ExtensionalForbidden(chosen)


def _random_intensional(r: random.Random, var_names):
    arity = len(var_names)
    if arity == 1:
        expr = Call(
            r.choice(("lt", "le", "ne", "eq")),
            (VarRef(var_names[0]), Const(r.randint(-2, 6))),
        )
    elif arity == 2:
        op = r.choice(_BIN_OPS)
        left, right = VarRef(var_names[0]), VarRef(var_names[1])
        if op in ("add", "sub"):
            expr = Call("eq", (Call(op, (left, Const(r.randint(-2, 3)))), right))
        else:
            expr = Call(op, (left, right))
    else:
        expr = Call(
            "le",
            (
                Call("add", (VarRef(var_names[0]), VarRef(var_names[1]))),
                Call("add", (VarRef(var_names[2]), Const(r.randint(0, 6)))),
            ),
        )
    return Intensional(expr)


CLUSTER_CENTERS = {
    1: (0.0,),
    2: (0.0, 400.0),
    3: (0.0, 60.0, 1200.0),
    4: (0.0, 60.0, 1200.0, 1260.0),
}


def score_vector(seed: int) -> list[float]:
    """Promise-shaped score vector: separated plateaus of evenly spaced values.

    Mimics what value scoring produces on structured instances: a few well
    separated score levels, each a tight spread of nearby values, shuffled.
    Every 19th vector is constant.  The plateau count cycles with the seed so
    a seed range covers k = 1..4 evenly.
    """
    r = random.Random(seed)
    k_true = 1 + seed % 4
    if seed % 19 == 0:
        return [float(r.randint(1, 5))] * r.randint(12, 30)
    n = r.randint(12, 30)
    base = r.uniform(-50.0, 50.0)
    centers = [base + c for c in CLUSTER_CENTERS[k_true]]
    sizes = [n // k_true + (1 if j < n % k_true else 0) for j in range(k_true)]
    pts: list[float] = []
    for center, m in zip(centers, sizes):
        if m == 1:
            pts.append(center)
        else:
            step = 2.0 / (m - 1)
            pts.extend(center - 1.0 + step * i for i in range(m))
    r.shuffle(pts)
    return pts


def random_problem(seed: int, max_vars: int = 6, max_dom: int = 5) -> Problem:
    """Small random CSP mixing arities and relation kinds.

    Kept tiny on purpose: every instance is brute forceable in well under a
    millisecond, so thousands of them fit inside the acceptance budgets.
    """
    r = random.Random(seed)
    n = r.randint(2, max_vars)
    names = tuple(f"v{i}" for i in range(n))
    domains = tuple(
        tuple(sorted(r.sample(range(-3, 9), r.randint(1, max_dom)))) for _ in range(n)
    )
    cons = []
    for _ in range(r.randint(1, 2 * n)):
        arity = min(r.choices((1, 2, 3), weights=(1, 6, 2))[0], n)
        scope = tuple(sorted(r.sample(range(n), arity)))
        var_names = tuple(names[x] for x in scope)
        if r.randrange(2):
            rel = _random_extensional(r, domains, scope)
        else:
            rel = _random_intensional(r, var_names)
        cons.append(Constraint(len(cons), scope, var_names, rel))
    return Problem(names, domains, tuple(cons))
