"""Exact antagonistic / collaborative values by policy iteration.

The solver works on any finite graph whose nodes are tagged maximizer or
minimizer.  Strongly connected components are solved sinks-first, so layered
graphs (such as strategy products with a step counter) cost one Bellman
backup per acyclic node; inside a non-trivial component we run strategy
improvement with exact rationals, evaluating each fixed profile through the
closed form of the lasso every node ends up on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ADAM, EVE, Game, History, Lasso, PositionalStrategy

MAX = 1
MIN = -1


def _sccs(succ: Sequence[Sequence[tuple[int, object]]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative; components come out sinks first."""
    n = len(succ)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                u = succ[v][i][0]
                if index[u] == -1:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on_stack[u] = True
                    work.append((u, 0))
                elif on_stack[u]:
                    low[v] = min(low[v], index[u])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        u = stack.pop()
                        on_stack[u] = False
                        comp.append(u)
                        if u == v:
                            break
                    comps.append(sorted(comp))
    return comps


def _evaluate(comp, inside, choice, succ, val, lam):
    """Values of ``comp`` nodes when node ``i`` always takes ``succ[i][choice[i]]``.

    Nodes outside the component must already carry a value in ``val``.
    """
    fresh: dict[int, Fraction] = {}

    def value(x):
        return fresh[x] if x in fresh else val[x]

    for s in comp:
        if s in fresh:
            continue
        path: list[int] = []
        pos: dict[int, int] = {}
        x = s
        while x in inside and x not in fresh and x not in pos:
            pos[x] = len(path)
            path.append(x)
            x = succ[x][choice[x]][0]
        if x in pos:
            cyc = path[pos[x]:]
            total = Fraction(0)
            disc = Fraction(1)
            for c in cyc:
                total += disc * succ[c][choice[c]][1]
                disc *= lam
            fresh[cyc[0]] = total / (1 - disc)
            for c in reversed(cyc[1:]):
                j, w = succ[c][choice[c]]
                fresh[c] = w + lam * value(j)
            path = path[: pos[x]]
        for c in reversed(path):
            j, w = succ[c][choice[c]]
            fresh[c] = w + lam * value(j)
    return fresh


def solve_bellman(succ, kinds, lam) -> tuple[list[Fraction], list[int]]:
    """Solve ``V(i) = opt_i { w + lam * V(j) : (j, w) in succ[i] }`` exactly.

    ``kinds[i]`` is ``MAX`` or ``MIN``.  Returns the values and, per node, the
    position in ``succ[i]`` of the first successor attaining the optimum.
    """
    lam = Fraction(lam)
    n = len(succ)
    val: list = [None] * n

    def q(i, k):
        j, w = succ[i][k]
        return w + lam * val[j]

    for comp in _sccs(succ):
        if len(comp) == 1 and all(j != comp[0] for j, _ in succ[comp[0]]):
            i = comp[0]
            qs = [q(i, k) for k in range(len(succ[i]))]
            val[i] = max(qs) if kinds[i] == MAX else min(qs)
            continue
        inside = set(comp)
        choice = {i: 0 for i in comp}
        maxers = [i for i in comp if kinds[i] == MAX and len(succ[i]) > 1]
        miners = [i for i in comp if kinds[i] == MIN and len(succ[i]) > 1]
        while True:
            # minimizer best response to the maximizer's current profile
            while True:
                fresh = _evaluate(comp, inside, choice, succ, val, lam)
                for i in comp:
                    val[i] = fresh[i]
                changed = False
                for i in miners:
                    qs = [q(i, k) for k in range(len(succ[i]))]
                    best = min(qs)
                    if best < qs[choice[i]]:
                        choice[i] = qs.index(best)
                        changed = True
                if not changed:
                    break
            changed = False
            for i in maxers:
                qs = [q(i, k) for k in range(len(succ[i]))]
                best = max(qs)
                if best > qs[choice[i]]:
                    choice[i] = qs.index(best)
                    changed = True
            if not changed:
                break

    best_choice = []
    for i in range(n):
        qs = [q(i, k) for k in range(len(succ[i]))]
        best_choice.append(qs.index(max(qs) if kinds[i] == MAX else min(qs)))
    return val, best_choice


@dataclass(frozen=True)
class ValueTable:
    aval: tuple[Fraction, ...]
    cval: tuple[Fraction, ...]
    acval: tuple[Fraction, ...]
    swo: PositionalStrategy
    sbo: PositionalStrategy
    sbwo: PositionalStrategy
    adam_worst: PositionalStrategy
    adam_best: PositionalStrategy

    def gap(self, v: int) -> Fraction:
        return self.cval[v] - self.aval[v]


def _pick(g: Game, vals, choice, owner) -> PositionalStrategy:
    owned = g.eve_vertices if owner == EVE else [v for v in range(g.n) if not g.is_eve(v)]
    return PositionalStrategy(owner, {u: g.succ[u][choice[u]][0] for u in owned})


def aval_optimal_edges(g: Game, aval) -> list[list[tuple[int, int]]]:
    """Successor lists restricted to the Eve edges attaining the worst-case optimum."""
    out = []
    for u in range(g.n):
        if g.is_eve(u):
            out.append([(v, w) for v, w in g.succ[u] if w + g.lam * aval[v] == aval[u]])
        else:
            out.append(list(g.succ[u]))
    return out


def solve_values(g: Game) -> ValueTable:
    kinds_a = [MAX if g.is_eve(u) else MIN for u in range(g.n)]
    aval, a_choice = solve_bellman(g.succ, kinds_a, g.lam)
    cval, c_choice = solve_bellman(g.succ, [MAX] * g.n, g.lam)

    restricted = aval_optimal_edges(g, aval)
    acval, r_choice = solve_bellman(restricted, [MAX] * g.n, g.lam)
    sbwo = PositionalStrategy(EVE, {u: restricted[u][r_choice[u]][0] for u in g.eve_vertices})

    return ValueTable(
        aval=tuple(aval),
        cval=tuple(cval),
        acval=tuple(acval),
        swo=_pick(g, aval, a_choice, EVE),
        sbo=_pick(g, cval, c_choice, EVE),
        sbwo=sbwo,
        adam_worst=_pick(g, aval, a_choice, ADAM),
        adam_best=_pick(g, cval, c_choice, ADAM),
    )


def restricted_cval(g: Game, vt: ValueTable, u: int, forbidden: int) -> Fraction | None:
    """Best collaborative value from ``u`` when the first move avoids ``forbidden``.

    ``None`` when ``forbidden`` is the only successor of ``u``.
    """
    if not g.has_edge(u, forbidden):
        raise ValueError(f"{g.name(forbidden)} is not a successor of {g.name(u)}")
    alts = [w + g.lam * vt.cval[v] for v, w in g.succ[u] if v != forbidden]
    return max(alts) if alts else None


def copt(g: Game, vt: ValueTable, u: int) -> frozenset[int]:
    return frozenset(v for v, w in g.succ[u] if w + g.lam * vt.cval[v] == vt.cval[u])


def cval_witness(g: Game, vt: ValueTable, u: int) -> Lasso:
    """Play of ``sbo`` against ``adam_best`` from ``u``, cut at its first repeat."""
    path = [u]
    seen = {u: 0}
    x = u
    while True:
        x = vt.sbo[x] if g.is_eve(x) else vt.adam_best[x]
        if x in seen:
            i = seen[x]
            return Lasso(History(tuple(path[: i + 1])), History(tuple(path[i:]) + (x,)))
        seen[x] = len(path)
        path.append(x)


def bellman_residuals(g: Game, vt: ValueTable) -> dict[str, list[Fraction]]:
    """Per-vertex residual of the three fixed-point equations (all zero when solved)."""
    lam = g.lam
    res: dict[str, list[Fraction]] = {"aval": [], "cval": [], "acval": []}
    restricted = aval_optimal_edges(g, vt.aval)
    for u in range(g.n):
        qa = [w + lam * vt.aval[v] for v, w in g.succ[u]]
        res["aval"].append((max(qa) if g.is_eve(u) else min(qa)) - vt.aval[u])
        res["cval"].append(max(w + lam * vt.cval[v] for v, w in g.succ[u]) - vt.cval[u])
        res["acval"].append(max(w + lam * vt.acval[v] for v, w in restricted[u]) - vt.acval[u])
    return res
