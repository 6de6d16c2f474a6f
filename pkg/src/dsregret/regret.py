"""Regret of finite-memory strategies and synthesis of optipess strategies.

Regret is computed from local regrets: at every reachable Eve state of the
strategy product, the best value Eve could get by deviating now, minus what
the strategy still guarantees, discounted by the length of the shortest
history reaching that state.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import (
    INF,
    FiniteMemoryStrategy,
    Game,
    PositionalStrategy,
    SwitchingStrategy,
    SwitchMemory,
)
from .product import build_product, memory_ops, solve_fixed_eve
from .values import ValueTable, solve_values

HORIZON_ENV = "DSREGRET_HORIZON"


@dataclass(frozen=True)
class RegretReport:
    regret: Fraction
    # shortest history class attaining the maximum; all None when regret is 0
    witness_length: int | None = None
    witness_vertex: int | None = None
    witness_switched: bool | None = None
    witness_deviation: int | None = None


@dataclass(frozen=True)
class OptipessResult:
    regret: Fraction
    strategy: SwitchingStrategy
    thresholds: Mapping[int, int | float]
    horizon_used: int
    horizon_sufficient: bool


@dataclass(frozen=True)
class OptimalityVerdict:
    verdict: str  # "optimal" | "suboptimal" | "inconclusive"
    regret: Fraction
    minimum: Fraction


def history_cap(g: Game, s) -> int | None:
    """Length bound ``2|V| + T_sat`` for switching strategies, ``None`` otherwise."""
    if isinstance(s, PositionalStrategy):
        return 2 * g.n
    if isinstance(s, SwitchingStrategy):
        return 2 * g.n + s.saturation
    return None


def local_regrets(g: Game, vt: ValueTable, s):
    """Yield ``(state index, product, local regret, deviation)`` for Eve states.

    The local regret is ``lambda^depth * (cVal_not_a - A)``; states where Eve has
    no alternative are skipped.
    """
    p = build_product(g, s)
    amin = solve_fixed_eve(p, "min")
    for i, (v, _) in enumerate(p.states):
        if not g.is_eve(v):
            continue
        a = p.eve_action(i)
        best = None
        dev = None
        for u, w in g.succ[v]:
            if u != a:
                q = w + g.lam * vt.cval[u]
                if best is None or q > best:
                    best, dev = q, u
        if best is None:
            continue
        yield i, p, g.lam ** p.depth[i] * (best - amin[i]), dev


def regret_of(g: Game, vt: ValueTable | None, s, cap: int | None | str = "auto") -> RegretReport:
    """Regret of ``s`` from the initial vertex.

    ``cap`` bounds the length of the histories considered; ``"auto"`` uses
    :func:`history_cap`, ``None`` considers every reachable state.
    """
    vt = vt or solve_values(g)
    if cap == "auto":
        cap = history_cap(g, s)
    best = Fraction(0)
    report = RegretReport(Fraction(0))
    for i, p, r, dev in local_regrets(g, vt, s):
        if cap is not None and p.depth[i] > cap:
            continue
        if r > best:
            best = r
            mem = p.states[i].memory
            report = RegretReport(
                regret=r,
                witness_length=p.depth[i],
                witness_vertex=p.states[i].vertex,
                witness_switched=mem.switched if isinstance(mem, SwitchMemory) else None,
                witness_deviation=dev,
            )
    return report


# --------------------------------------------------------------------------
# thresholds


def default_horizon(g: Game) -> int:
    bits = max(g.max_abs_weight().bit_length(), 1) + g.lam.denominator.bit_length()
    return 4 * g.n * bits


def resolve_horizon(g: Game, horizon: int | None = None) -> int:
    """Explicit value, else ``$DSREGRET_HORIZON``, else :func:`default_horizon`."""
    if horizon is not None:
        return horizon
    env = os.environ.get(HORIZON_ENV)
    if env:
        return int(env)
    return default_horizon(g)


def _thresholds(g: Game, vt: ValueTable, r, horizon: int | None):
    t: dict[int, int | float] = {}
    exhausted: set[int] = set()
    for v in g.eve_vertices:
        gap = vt.gap(v)
        if gap <= r:
            t[v] = 0
        elif r <= 0:
            t[v] = INF
        else:
            i, x = 0, gap
            while x > r and (horizon is None or i < horizon):
                i += 1
                x *= g.lam
            if x > r:
                t[v] = INF
                exhausted.add(v)
            else:
                t[v] = i
    return t, exhausted


def threshold_from_regret(g: Game, vt: ValueTable, r, horizon: int | None = None) -> dict:
    """``t(v) = min { i : lambda^i (cVal^v - aVal^v) <= r }``, capped at ``horizon``.

    ``horizon=None`` means no cap.
    """
    return _thresholds(g, vt, Fraction(r), horizon)[0]


def optipess(g: Game, vt: ValueTable, t: Mapping) -> SwitchingStrategy:
    return SwitchingStrategy(vt.sbo, t, vt.sbwo)


def candidates(g: Game, vt: ValueTable, horizon: int) -> list[Fraction]:
    """Breakpoints of ``r -> t_r``, descending, with 0 last."""
    out = {Fraction(0)}
    for v in g.eve_vertices:
        x = vt.gap(v)
        if x > 0:
            for _ in range(horizon + 1):
                out.add(x)
                x *= g.lam
    return sorted(out, reverse=True)


def _key(t: Mapping) -> tuple:
    return tuple(t[v] for v in sorted(t))


def _rho(job):
    g, vt, t = job
    return regret_of(g, vt, optipess(g, vt, t)).regret


def min_regret(
    g: Game,
    vt: ValueTable | None = None,
    horizon: int | None = None,
    *,
    exhaustive: bool = False,
    jobs: int = 1,
) -> OptipessResult:
    """Minimal regret ``Reg(v0)`` and an optipess strategy attaining it.

    The regret of the candidate strategy for ``r`` is at most ``r`` exactly when
    ``r >= Reg``, so by default candidates are scanned downwards and the scan
    stops at the first ``r`` whose strategy overshoots.  ``exhaustive`` (implied
    by ``jobs > 1``) evaluates every candidate instead.
    """
    vt = vt or solve_values(g)
    horizon = resolve_horizon(g, horizon)
    cands = candidates(g, vt, horizon)

    seen: dict[tuple, Fraction] = {}
    tables: dict[tuple, dict] = {}
    for r in cands:
        t = threshold_from_regret(g, vt, r, horizon)
        tables.setdefault(_key(t), t)

    if exhaustive or jobs > 1:
        keys = list(tables)
        jobs_in = [(g, vt, tables[k]) for k in keys]
        if jobs > 1 and len(keys) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                results = list(ex.map(_rho, jobs_in))
        else:
            results = [_rho(j) for j in jobs_in]
        seen = dict(zip(keys, results))
    else:
        def rho(r):
            k = _key(threshold_from_regret(g, vt, r, horizon))
            if k not in seen:
                seen[k] = _rho((g, vt, tables[k]))
            return seen[k]

        if rho(Fraction(0)) > 0:
            for r in cands:
                if rho(r) > r:
                    break

    best = min(seen.values())
    t, exhausted = _thresholds(g, vt, best, horizon)
    return OptipessResult(
        regret=best,
        strategy=optipess(g, vt, t),
        thresholds=t,
        horizon_used=horizon,
        horizon_sufficient=not exhausted,
    )


def is_regret_optimal(
    g: Game, s, horizon: int | None = None, vt: ValueTable | None = None
) -> OptimalityVerdict:
    vt = vt or solve_values(g)
    mine = regret_of(g, vt, s).regret
    res = min_regret(g, vt, horizon)
    if mine > res.regret:
        verdict = "suboptimal"
    elif res.horizon_sufficient:
        verdict = "optimal"
    else:
        verdict = "inconclusive"
    return OptimalityVerdict(verdict, mine, res.regret)


def switch_to(g: Game, s, t: Mapping, sigma: PositionalStrategy) -> FiniteMemoryStrategy:
    """``s`` until an Eve vertex ``v`` is entered at step ``i >= t(v)``, then ``sigma``.

    Memory is ``(memory of s, steps so far, switched)``; the counter saturates at
    the largest finite threshold.
    """
    initial, update, action = memory_ops(g, s)
    sat = max((x for x in t.values() if x != INF), default=0)

    def fires(v, step):
        return g.is_eve(v) and t[v] <= step

    def upd(m, u):
        inner, c, sw = m
        if sw:
            return m  # nothing left to track
        if fires(u, c + 1):
            return (None, 0, True)
        return (update(inner, u), min(c + 1, sat), False)

    def act(m, v):
        inner, _, sw = m
        return sigma[v] if sw else action(inner, v)

    start = (None, 0, True) if fires(g.init, 0) else (initial, 0, False)
    return FiniteMemoryStrategy.explore(g, start, upd, act)


def swo_switch(g: Game, vt: ValueTable, s) -> FiniteMemoryStrategy:
    """The regret-preserving simplification: switch from ``s`` to ``swo`` once
    ``lambda^n (cVal - aVal) <= reg(s)`` holds at the current vertex."""
    r = regret_of(g, vt, s, cap=None).regret
    return switch_to(g, s, threshold_from_regret(g, vt, r), vt.swo)

