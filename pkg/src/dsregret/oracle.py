"""Brute-force reference implementations for differential testing.

Nothing here goes through the solver, product or pumping code: values come
from enumerating positional profiles, regret from unfolding histories, and
dominance from truncated game trees.  Everything refuses to run on instances
that are too large instead of silently truncating.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import INF, FiniteMemoryStrategy, Game, History, PositionalStrategy, SwitchingStrategy

PROFILE_LIMIT = 10**6
STRATEGY_LIMIT = 20_000


class OracleTooLarge(Exception):
    """Instance too large for oracle."""


@dataclass(frozen=True)
class OracleValues:
    aval: tuple[Fraction, ...]
    cval: tuple[Fraction, ...]
    acval: tuple[Fraction, ...]


def _play_value(g: Game, choice: dict, start: int) -> Fraction:
    """Value of the unique play from ``start`` when every vertex is fixed."""
    order: list[int] = []
    where: dict[int, int] = {}
    x = start
    while x not in where:
        where[x] = len(order)
        order.append(x)
        x = choice[x]
    weights = [g.weight(a, choice[a]) for a in order]
    k = where[x]
    lam = g.lam
    prefix = sum(lam**i * w for i, w in enumerate(weights[:k]))
    loop = weights[k:]
    cyc = sum(lam**i * w for i, w in enumerate(loop)) / (1 - lam ** len(loop))
    return prefix + lam**k * cyc


def _choices(g: Game, owned: list[int]):
    return [dict(zip(owned, pick)) for pick in itertools.product(*(g.successors(u) for u in owned))]


def oracle_values(g: Game) -> OracleValues:
    eve = g.eve_vertices
    adam = [u for u in range(g.n) if not g.is_eve(u)]
    total = 1
    for u in range(g.n):
        total *= len(g.succ[u])
    if total > PROFILE_LIMIT:
        raise OracleTooLarge(f"{total} positional profiles")

    sigmas = _choices(g, eve)
    taus = _choices(g, adam)
    table = [[[_play_value(g, {**s, **t}, v) for v in range(g.n)] for t in taus] for s in sigmas]

    guaranteed = [[min(row[v] for row in rows) for v in range(g.n)] for rows in table]
    aval = [max(gs[v] for gs in guaranteed) for v in range(g.n)]
    cval = [max(row[v] for rows in table for row in rows) for v in range(g.n)]
    good = [i for i, gs in enumerate(guaranteed) if gs == aval]
    acval = [max(row[v] for i in good for row in table[i]) for v in range(g.n)]
    return OracleValues(tuple(aval), tuple(cval), tuple(acval))


# --------------------------------------------------------------------------
# regret by unfolding


def _extreme_tail(g: Game, start, succ, pick=min) -> Fraction:
    """Smallest (``pick=min``) or largest play value from ``start`` in a graph over
    ``(vertex, ...)`` states with successor function ``succ``; one player, so
    simple lassos suffice."""
    lam = g.lam
    best = None
    path = [start]
    weights: list[int] = []

    def dfs():
        nonlocal best
        x = path[-1]
        for y in succ(x):
            w = g.weight(x[0], y[0])
            if y in path:
                k = path.index(y)
                pre = sum(lam**i * c for i, c in enumerate(weights[:k]))
                loop = weights[k:] + [w]
                cyc = sum(lam**i * c for i, c in enumerate(loop)) / (1 - lam ** len(loop))
                val = pre + lam**k * cyc
                best = val if best is None else pick(best, val)
            else:
                path.append(y)
                weights.append(w)
                dfs()
                path.pop()
                weights.pop()

    dfs()
    return best


class _Switcher:
    """Direct reading of the switching rule: Eve vertex ``x`` entered at step ``i``
    with ``i >= t(x)`` flips the strategy for good."""

    def __init__(self, g: Game, s: SwitchingStrategy):
        self.g, self.s = g, s
        self.top = max((x for x in s.t.values() if x != INF), default=0)

    def fires(self, x, i):
        return self.g.is_eve(x) and self.s.t[x] <= i

    def start(self):
        return (self.g.init, 0, self.fires(self.g.init, 0))

    def move(self, v, i, sw, u):
        return (u, i + 1, sw or self.fires(u, i + 1))

    def act(self, v, sw):
        return (self.s.sigma2 if sw else self.s.sigma1)[v]


def _as_switching(s) -> SwitchingStrategy:
    if isinstance(s, PositionalStrategy):
        return SwitchingStrategy(s, {v: INF for v in s.choice}, s)
    return s


class _Unfolder:
    """Continuation values of a switching strategy by unfolding the game tree up
    to the largest finite threshold, then enumerating lassos."""

    def __init__(self, g: Game, s):
        self.g = g
        self.sw = _Switcher(g, _as_switching(s))
        self._tails: dict = {}
        self._conts: dict = {}

    def _tail_succ(self, x):
        # past every finite threshold: any Eve vertex with a finite one triggers
        g, sw_ = self.g, self.sw
        v, flag = x
        targets = [sw_.act(v, flag)] if g.is_eve(v) else g.successors(v)
        return [(u, flag or sw_.fires(u, sw_.top + 1)) for u in targets]

    def tail(self, v, flag, pick=min):
        key = (v, flag, pick)
        if key not in self._tails:
            self._tails[key] = _extreme_tail(self.g, (v, flag), self._tail_succ, pick)
        return self._tails[key]

    def cont(self, v, i, flag, pick=min) -> Fraction:
        """Worst (or best) value of the strategy from a history in state ``(v, i, flag)``."""
        g, sw_ = self.g, self.sw
        if i >= sw_.top:
            return self.tail(v, flag, pick)
        key = (v, i, flag, pick)
        if key not in self._conts:
            targets = [sw_.act(v, flag)] if g.is_eve(v) else g.successors(v)
            self._conts[key] = pick(
                g.weight(v, u) + g.lam * self.cont(*sw_.move(v, i, flag, u), pick) for u in targets
            )
        return self._conts[key]

    def replay(self, h: History):
        """``(vertex, steps, switched)`` after ``h``, or ``None`` if ``s`` disagrees."""
        g, sw_ = self.g, self.sw
        if h.first != g.init:
            return None
        state = sw_.start()
        for u in h.vertices[1:]:
            v, i, flag = state
            if g.is_eve(v) and sw_.act(v, flag) != u:
                return None
            state = sw_.move(v, i, flag, u)
        return state


def oracle_continuation(g: Game, s, h: History, mode: str = "min") -> Fraction:
    """Value of ``s`` after the consistent history ``h``, against the worst
    (``"min"``) or best (``"max"``) Adam, without the prefix ``Val(h)``."""
    u = _Unfolder(g, s)
    state = u.replay(h)
    if state is None:
        raise ValueError("history is not consistent with the strategy")
    return u.cont(*state, min if mode == "min" else max)


def oracle_histories(g: Game, s, n: int) -> set[tuple[int, bool]]:
    """``(last vertex, switched)`` over all consistent histories of length ``n``,
    by explicit enumeration."""
    sw_ = _Switcher(g, _as_switching(s))
    out = set()
    stack = [(sw_.start(), 0)]
    while stack:
        (v, i, flag), k = stack.pop()
        if k == n:
            out.add((v, flag))
            continue
        targets = [sw_.act(v, flag)] if g.is_eve(v) else g.successors(v)
        for u in targets:
            stack.append((sw_.move(v, i, flag, u), k + 1))
    return out


def oracle_regret_of(g: Game, s, cap: int | None = None, cval=None, limit: int = 2_000_000) -> Fraction:
    """``max lambda^n (cVal_not_a - aVal(sigma_h))`` over consistent histories
    ``h`` of length ``n <= cap`` (default ``2|V| + max finite threshold``).

    Histories that agree on vertex, switch flag and (capped) step count have
    identical futures, so the enumeration memoizes on that triple.
    """
    unf = _Unfolder(g, s)
    sw_ = unf.sw
    top = sw_.top
    if cap is None:
        cap = 2 * g.n + top
    if cval is None:
        cval = oracle_values(g).cval
    lam = g.lam
    budget = [0]

    @lru_cache(maxsize=None)
    def explore(v, i, flag, left):
        budget[0] += 1
        if budget[0] > limit:
            raise OracleTooLarge("too many histories")
        best = Fraction(0)
        if g.is_eve(v):
            a = sw_.act(v, flag)
            alts = [g.weight(v, u) + lam * cval[u] for u in g.successors(v) if u != a]
            if alts:
                best = max(best, max(alts) - unf.cont(v, i, flag))
            nxt = [a]
        else:
            nxt = g.successors(v)
        if left:
            for u in nxt:
                x, j, flag2 = sw_.move(v, i, flag, u)
                best = max(best, lam * explore(x, min(j, top), flag2, left - 1))
        return best

    v0, i0, f0 = sw_.start()
    return explore(v0, i0, f0, cap)


def _distances(g: Game) -> dict[int, int]:
    dist = {g.init: 0}
    frontier = [g.init]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.successors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def oracle_min_regret(g: Game, max_threshold: int = 3, limit: int = STRATEGY_LIMIT) -> Fraction:
    """Least regret over all ``sigma1 ~>_t sigma2`` with positional ``sigma1``,
    ``sigma2`` and thresholds in ``{0, ..., max_threshold, inf}``.

    A threshold no larger than the distance from the initial vertex fires on
    every visit, exactly like 0, so those are enumerated once.
    """
    eve = g.eve_vertices
    dist = _distances(g)
    options = []
    for v in eve:
        if v not in dist:
            options.append([INF])
        else:
            options.append([0] + [i for i in range(1, max_threshold + 1) if i > dist[v]] + [INF])
    sigmas = [PositionalStrategy("eve", c) for c in _choices(g, eve)]
    ts = list(itertools.product(*options))
    size = len(sigmas) + len(sigmas) * (len(sigmas) - 1) * len(ts)
    if size > limit:
        raise OracleTooLarge(f"{size} switching strategies")
    cval = oracle_values(g).cval
    best = None
    for s1, s2 in itertools.product(sigmas, repeat=2):
        # with equal components the thresholds are irrelevant
        for t in ts[-1:] if s1 == s2 else ts:
            s = SwitchingStrategy(s1, dict(zip(eve, t)), s2)
            r = oracle_regret_of(g, s, cval=cval)
            if best is None or r < best:
                best = r
    return best if best is not None else Fraction(0)


# --------------------------------------------------------------------------
# dominance by truncated game trees


def _machine(g: Game, s):
    """``(initial, update, action)`` read directly off the strategy's definition."""
    if isinstance(s, FiniteMemoryStrategy):
        return s.initial, s.update, s.action
    sw = _Switcher(g, _as_switching(s))

    def update(m, u):
        i, flag = m
        _, j, flag2 = sw.move(None, i, flag, u)
        return (min(j, sw.top), flag2)

    return (0, sw.fires(g.init, 0)), update, lambda m, v: sw.act(v, m[1])


def oracle_dominates(g: Game, s2, s1, depth: int = 8):
    """``True``/``False`` if the depth-``depth`` tree settles whether ``s2`` weakly
    dominates ``s1``; ``None`` when the truncation error hides the answer.

    Computes an interval for ``min over Adam of Val(s2 play) - Val(s1 play)``.
    """
    lam = g.lam
    w_max = max(abs(w) for _, _, w in g.edges)
    i1, up1, act1 = _machine(g, s1)
    i2, up2, act2 = _machine(g, s2)

    @lru_cache(maxsize=None)
    def single(v, m, which, r, sign):
        # truncated sign-optimal (max if sign>0) play value of one strategy
        if r == 0:
            return Fraction(0)
        up, act = (up1, act1) if which == 1 else (up2, act2)
        targets = [act(m, v)] if g.is_eve(v) else g.successors(v)
        vals = [g.weight(v, u) + lam * single(u, up(m, u), which, r - 1, sign) for u in targets]
        return max(vals) if sign > 0 else min(vals)

    bound = 2 * w_max / (1 - lam)

    # joint states from which the two strategies can still come apart
    edges: dict = {}
    start = (g.init, i1, i2)
    todo = [start]
    edges[start] = None
    splits = set()
    while todo:
        x = todo.pop()
        v, m1, m2 = x
        if g.is_eve(v) and act1(m1, v) != act2(m2, v):
            splits.add(x)
            edges[x] = []
            continue
        targets = [act1(m1, v)] if g.is_eve(v) else g.successors(v)
        edges[x] = [(u, up1(m1, u), up2(m2, u)) for u in targets]
        for y in edges[x]:
            if y not in edges:
                edges[y] = None
                todo.append(y)
    live = set(splits)
    grew = True
    while grew:
        grew = False
        for x, ys in edges.items():
            if x not in live and any(y in live for y in ys):
                live.add(x)
                grew = True

    @lru_cache(maxsize=None)
    def joint(v, m1, m2, r):
        if (v, m1, m2) not in live:
            return Fraction(0), Fraction(0)
        if r == 0:
            # still undiverged: the rest of the difference is at most `bound`
            return -bound, bound
        if g.is_eve(v):
            x, y = act1(m1, v), act2(m2, v)
            if x == y:
                lo, hi = joint(x, up1(m1, x), up2(m2, x), r - 1)
                return lam * lo, lam * hi
            d = (g.weight(v, y) + lam * single(y, up2(m2, y), 2, r - 1, -1)) - (
                g.weight(v, x) + lam * single(x, up1(m1, x), 1, r - 1, +1)
            )
            err = 2 * lam**r * w_max / (1 - lam)
            return d - err, d + err
        outs = [joint(u, up1(m1, u), up2(m2, u), r - 1) for u in g.successors(v)]
        return lam * min(o[0] for o in outs), lam * min(o[1] for o in outs)

    lo, hi = joint(g.init, i1, i2, depth)
    if lo >= 0:
        return True
    if hi < 0:
        return False
    return None
