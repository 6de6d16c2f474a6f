"""Random small games, strategies and histories for tests and experiments."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import EVE, INF, Game, History, PositionalStrategy, SwitchingStrategy


@dataclass(frozen=True)
class GameConfig:
    min_vertices: int = 1
    max_vertices: int = 5
    min_weight: int = -2
    max_weight: int = 2
    lambdas: tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4))
    max_out: int = 2
    p_eve: float = 0.5
    p_extra_edge: float = 0.5  # chance of each extra successor beyond the first


@dataclass(frozen=True)
class StrategyConfig:
    max_threshold: int = 3
    p_inf: float = 0.25


def random_game(rng: random.Random, cfg: GameConfig = GameConfig()) -> Game:
    n = rng.randint(cfg.min_vertices, cfg.max_vertices)
    names = tuple(f"v{i}" for i in range(n))
    eve = frozenset(i for i in range(n) if rng.random() < cfg.p_eve)
    edges = []
    for u in range(n):
        out = 1
        while out < min(cfg.max_out, n) and rng.random() < cfg.p_extra_edge:
            out += 1
        for v in rng.sample(range(n), out):
            edges.append((u, v, rng.randint(cfg.min_weight, cfg.max_weight)))
    return Game(names, eve, tuple(edges), rng.choice(cfg.lambdas), 0)


def random_positional(rng: random.Random, g: Game) -> PositionalStrategy:
    return PositionalStrategy(EVE, {u: rng.choice(g.successors(u)) for u in g.eve_vertices})


def random_thresholds(rng: random.Random, g: Game, cfg: StrategyConfig = StrategyConfig()) -> dict:
    return {
        u: INF if rng.random() < cfg.p_inf else rng.randint(0, cfg.max_threshold)
        for u in g.eve_vertices
    }


def random_switching(
    rng: random.Random, g: Game, cfg: StrategyConfig = StrategyConfig()
) -> SwitchingStrategy:
    return SwitchingStrategy(random_positional(rng, g), random_thresholds(rng, g, cfg), random_positional(rng, g))


def random_history(rng: random.Random, g: Game, length: int, start: int | None = None) -> History:
    v = g.init if start is None else start
    vs = [v]
    for _ in range(length):
        v = rng.choice(g.successors(v))
        vs.append(v)
    return History(tuple(vs))
