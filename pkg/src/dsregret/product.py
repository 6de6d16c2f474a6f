"""Game x strategy-memory products.

Once Eve's moves are fixed by a finite-memory strategy, what is left is a
one-player graph for Adam; its min/max values at ``(vertex, memory)`` are the
antagonistic/collaborative values of the residual strategy (up to the
``Val(h) + lambda^|h|`` normalization, which every caller cancels).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, NamedTuple

from .core import (
    FiniteMemoryStrategy,
    Game,
    PositionalStrategy,
    SwitchingStrategy,
    SwitchMemory,
    fmt_q,
)
from .values import MAX, MIN, solve_bellman


class ProductState(NamedTuple):
    vertex: int
    memory: Hashable

    @property
    def counter(self) -> int:
        return self.memory.counter

    @property
    def switched(self) -> bool:
        return self.memory.switched


@dataclass(frozen=True)
class ProductGame:
    game: Game
    states: tuple[ProductState, ...]
    index: Mapping[ProductState, int]
    succ: tuple[tuple[tuple[int, int], ...], ...]
    depth: tuple[int, ...]  # BFS distance from the initial state
    actions: tuple[int | None, ...]  # Eve's move at each Eve state

    def eve_action(self, i: int) -> int:
        return self.actions[i]

    def is_eve(self, i: int) -> bool:
        return self.game.is_eve(self.states[i].vertex)

    def __len__(self) -> int:
        return len(self.states)


def memory_ops(g: Game, s):
    """``(initial, update, action)`` for any supported strategy representation."""
    if isinstance(s, PositionalStrategy):
        s = SwitchingStrategy.positional(s)
    if isinstance(s, SwitchingStrategy):
        return s.initial_memory(g), (lambda m, u: s.next_memory(g, m, u)), s.action
    if isinstance(s, FiniteMemoryStrategy):
        return s.initial, s.update, s.action
    raise TypeError(f"not a strategy: {type(s).__name__}")


def build_product(g: Game, s) -> ProductGame:
    """Reachable part of ``g`` x memory of ``s``; Eve states keep only the chosen edge."""
    initial, update, action = memory_ops(g, s)
    start = ProductState(g.init, initial)
    states = [start]
    index = {start: 0}
    depth = [0]
    actions: list[int | None] = []
    succ: list[list[tuple[int, int]]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        v, m = states[i]
        if g.is_eve(v):
            a = action(m, v)
            edges = [(a, g.weight(v, a))]
        else:
            a = None
            edges = g.succ[v]
        out = []
        for u, w in edges:
            nxt = ProductState(u, update(m, u))
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
                depth.append(depth[i] + 1)
                queue.append(index[nxt])
            out.append((index[nxt], w))
        # BFS pops states in index order
        succ.append(out)
        actions.append(a)
    return ProductGame(
        game=g,
        states=tuple(states),
        index=index,
        succ=tuple(tuple(x) for x in succ),
        depth=tuple(depth),
        actions=tuple(actions),
    )


def solve_fixed_eve(p: ProductGame, mode: str = "min") -> list[Fraction]:
    """Per-state value when Adam minimizes (``"min"``) or maximizes (``"max"``)."""
    if mode not in ("min", "max"):
        raise ValueError(f"mode must be 'min' or 'max', got {mode!r}")
    kind = MIN if mode == "min" else MAX
    vals, _ = solve_bellman(p.succ, [kind] * len(p), p.game.lam)
    return vals


def dump(p: ProductGame) -> str:
    g = p.game
    amin = solve_fixed_eve(p, "min")
    amax = solve_fixed_eve(p, "max")

    def label(st: ProductState) -> str:
        if isinstance(st.memory, SwitchMemory):
            return f"({g.name(st.vertex)},{st.memory.counter},{'S' if st.memory.switched else 'U'})"
        return f"({g.name(st.vertex)},{st.memory!r})"

    lines = [f"states {len(p)}"]
    for i, st in enumerate(p.states):
        owner = "eve" if g.is_eve(st.vertex) else "adam"
        lines.append(
            f"{i} {label(st)} {owner} depth={p.depth[i]} min={fmt_q(amin[i])} max={fmt_q(amax[i])}"
        )
    for i, out in enumerate(p.succ):
        for j, w in out:
            lines.append(f"{i} -> {j} {w}")
    return "\n".join(lines) + "\n"
