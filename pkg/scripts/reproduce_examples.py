"""Print the headline numbers for every fixture: values, regrets, minimal
regret and admissibility."""
from pathlib import Path

from dsregret.admissibility import admissibilize, check_admissible, weakly_dominates
from dsregret.core import fmt_q, fmt_threshold, read_game, read_strategy
from dsregret.regret import min_regret, regret_of
from dsregret.values import solve_values

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

STRATEGIES = {
    "GA": ["GA-double"],
    "GB": ["GB-v1", "GB-v2"],
    "GT": ["GT"],
    "GC": ["GC"],
}


def main():
    for game, strats in STRATEGIES.items():
        g = read_game(FIXTURES / f"{game}.game")
        vt = solve_values(g)
        v0 = g.init
        print(f"{game}: lambda={fmt_q(g.lam)} |V|={g.n}")
        print(f"  values at {g.name(v0)}: aVal={fmt_q(vt.aval[v0])} cVal={fmt_q(vt.cval[v0])} acVal={fmt_q(vt.acval[v0])}")
        res = min_regret(g, vt)
        ts = " ".join(f"{g.name(v)}={fmt_threshold(t)}" for v, t in res.thresholds.items())
        print(f"  min regret {fmt_q(res.regret)}  thresholds {ts or '-'}")
        for name in strats:
            s = read_strategy(FIXTURES / f"{name}.strat", g)
            verdict = check_admissible(g, vt, s)
            line = f"  {name}: regret {fmt_q(regret_of(g, vt, s).regret)}, {verdict.describe(g)}"
            if not verdict.admissible:
                fixed = admissibilize(g, vt, s)
                ok = check_admissible(g, vt, fixed).admissible and weakly_dominates(g, fixed, s)
                line += f"; repaired strategy admissible and dominating: {ok}"
            print(line)


if __name__ == "__main__":
    main()
