"""Admissibility of finite-memory strategies and weak dominance between them.

All comparisons are made on product states: the value of a history under a
fixed strategy is ``Val(h) + lambda^|h| * V(state)``, and the prefix part
cancels in every inequality we need.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import FiniteMemoryStrategy, Game, SwitchMemory
from .product import ProductGame, ProductState, build_product, memory_ops, solve_fixed_eve
from .values import ValueTable, solve_values

SBWO = "sbwo"  # memory of the repaired strategy once it has handed over


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    state: ProductState | None = None
    depth: int | None = None

    def describe(self, g: Game) -> str:
        if self.admissible:
            return "admissible"
        st = self.state
        if isinstance(st.memory, SwitchMemory):
            sw = "true" if st.memory.switched else "false"
            return f"dominated at {g.name(st.vertex)} step<={st.memory.counter} switched={sw}"
        return f"dominated at {g.name(st.vertex)} memory={st.memory!r}"


def _violations(g: Game, vt: ValueTable, p: ProductGame) -> list[int]:
    amin = solve_fixed_eve(p, "min")
    amax = solve_fixed_eve(p, "max")
    bad = []
    for i, (v, _) in enumerate(p.states):
        a = vt.aval[v]
        if amax[i] > a:
            continue
        if amin[i] == amax[i] == a == vt.acval[v]:
            continue
        bad.append(i)
    return bad


def _order(p: ProductGame, i: int):
    st = p.states[i]
    if isinstance(st.memory, SwitchMemory):
        return (st.memory.counter, st.vertex, st.memory.switched)
    return (p.depth[i], st.vertex, str(st.memory))


def check_admissible(g: Game, vt: ValueTable | None, s) -> AdmissibilityVerdict:
    """Every reachable state needs ``C > aVal`` or ``A = C = aVal = acVal``."""
    vt = vt or solve_values(g)
    p = build_product(g, s)
    bad = _violations(g, vt, p)
    if not bad:
        return AdmissibilityVerdict(True)
    i = min(bad, key=lambda i: _order(p, i))
    return AdmissibilityVerdict(False, p.states[i], p.depth[i])


def admissibilize(g: Game, vt: ValueTable | None, s) -> FiniteMemoryStrategy:
    """Follow ``s`` until a violating state is entered, then ``sbwo`` forever.

    The violating states are exactly those with ``A <= C <= aVal <= acVal`` and
    one inequality strict.
    """
    vt = vt or solve_values(g)
    p = build_product(g, s)
    dead = {p.states[i] for i in _violations(g, vt, p)}
    initial, update, action = memory_ops(g, s)

    def enter(v, m):
        return SBWO if ProductState(v, m) in dead else m

    def upd(m, u):
        if m == SBWO:
            return SBWO
        return enter(u, update(m, u))

    def act(m, v):
        return vt.sbwo[v] if m == SBWO else action(m, v)

    return FiniteMemoryStrategy.explore(g, enter(g.init, initial), upd, act)


def weakly_dominates(g: Game, s2, s1) -> bool:
    """Does ``s2`` do at least as well as ``s1`` against every Adam strategy?

    Walk the common histories of both strategies.  Where they first choose
    differently, Adam can treat the two continuations independently, so we need
    the best ``s1`` continuation to be no better than the worst ``s2`` one.
    """
    return _first_counterexample(g, s2, s1) is None


def _first_counterexample(g: Game, s2, s1):
    p1, p2 = build_product(g, s1), build_product(g, s2)
    best1 = solve_fixed_eve(p1, "max")
    worst2 = solve_fixed_eve(p2, "min")
    i1, u1, a1 = memory_ops(g, s1)
    i2, u2, a2 = memory_ops(g, s2)
    lam = g.lam

    start = (g.init, i1, i2)
    seen = {start}
    queue = deque([start])
    while queue:
        v, m1, m2 = queue.popleft()
        if g.is_eve(v):
            x, y = a1(m1, v), a2(m2, v)
            if x != y:
                hi = g.weight(v, x) + lam * best1[p1.index[ProductState(x, u1(m1, x))]]
                lo = g.weight(v, y) + lam * worst2[p2.index[ProductState(y, u2(m2, y))]]
                if hi > lo:
                    return v, m1, m2
                continue
            targets = [x]
        else:
            targets = g.successors(v)
        for u in targets:
            nxt = (u, u1(m1, u), u2(m2, u))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return None


def dominance(g: Game, a, b) -> str:
    ab = weakly_dominates(g, a, b)
    ba = weakly_dominates(g, b, a)
    if ab and ba:
        return "equivalent"
    if ab:
        return "A-dominates-B"
    if ba:
        return "B-dominates-A"
    return "incomparable"


def action_table(g: Game, s: FiniteMemoryStrategy) -> list[str]:
    """Readable listing of a finite-memory strategy, one line per memory state."""
    labels: dict = {}

    def label(m):
        if m not in labels:
            if m == SBWO:
                labels[m] = "sbwo"
            elif isinstance(m, SwitchMemory):
                labels[m] = f"c{m.counter}{'S' if m.switched else 'U'}"
            else:
                labels[m] = f"m{len(labels)}"
        return labels[m]

    # assign labels in exploration order
    order = [s.initial]
    seen = {s.initial}
    for (m, _), m2 in sorted(s.updates.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
        for x in (m, m2):
            if x not in seen:
                seen.add(x)
                order.append(x)
    for m in order:
        label(m)

    lines = [f"initial {label(s.initial)}"]
    for (m, v), a in sorted(s.actions.items(), key=lambda kv: (label(kv[0][0]), kv[0][1])):
        lines.append(f"act {label(m)} {g.name(v)} -> {g.name(a)}")
    for (m, u), m2 in sorted(s.updates.items(), key=lambda kv: (label(kv[0][0]), kv[0][1])):
        lines.append(f"next {label(m)} {g.name(u)} => {label(m2)}")
    return lines
