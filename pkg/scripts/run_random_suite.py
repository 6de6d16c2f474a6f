"""Differential run of the solvers against the brute-force oracles on random
games.  Prints mismatch counts and timings."""
import argparse
import random
import time
from dataclasses import dataclass, field

from dsregret.admissibility import check_admissible
from dsregret.core import INF
from dsregret.generate import GameConfig, random_game, random_switching
from dsregret.oracle import OracleTooLarge, oracle_min_regret, oracle_regret_of, oracle_values
from dsregret.regret import min_regret, regret_of
from dsregret.values import solve_values


@dataclass
class SuiteConfig:
    games: int = 200
    seed: int = 0
    max_threshold: int = 3
    game: GameConfig = field(default_factory=GameConfig)


def run(cfg: SuiteConfig) -> dict:
    rng = random.Random(cfg.seed)
    stats = {"values": 0, "regret": 0, "min_regret": 0, "admissible": 0, "skipped": 0}
    for _ in range(cfg.games):
        g = random_game(rng, cfg.game)
        vt = solve_values(g)
        o = oracle_values(g)
        stats["values"] += (vt.aval, vt.cval, vt.acval) != (o.aval, o.cval, o.acval)
        s = random_switching(rng, g)
        stats["regret"] += regret_of(g, vt, s).regret != oracle_regret_of(g, s, cval=vt.cval)
        res = min_regret(g, vt)
        stats["admissible"] += not check_admissible(g, vt, res.strategy).admissible
        try:
            best = oracle_min_regret(g, cfg.max_threshold)
        except OracleTooLarge:
            stats["skipped"] += 1
            continue
        top = max((t for t in res.thresholds.values() if t != INF), default=0)
        stats["min_regret"] += res.regret > best or (top <= cfg.max_threshold and res.regret != best)
    return stats


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--games", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-vertices", type=int, default=5)
    ap.add_argument("--max-threshold", type=int, default=3)
    a = ap.parse_args()
    cfg = SuiteConfig(a.games, a.seed, a.max_threshold, GameConfig(max_vertices=a.max_vertices))
    start = time.perf_counter()
    stats = run(cfg)
    for k, v in stats.items():
        print(f"{k:12s} {v}")
    print(f"elapsed      {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
