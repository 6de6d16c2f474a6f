"""``dsregret`` command line."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .admissibility import action_table, admissibilize, check_admissible, dominance
from .core import (
    INF,
    DSRegretError,
    History,
    fmt_q,
    fmt_threshold,
    read_game,
    read_strategy,
    serialize_strategy,
)
from .oracle import OracleTooLarge, oracle_min_regret, oracle_regret_of, oracle_values
from .product import build_product, dump
from .pumping import compress_history, history_exists, val_history, val_pumped
from .regret import is_regret_optimal, min_regret, regret_of
from .values import cval_witness, solve_values

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_NOINPUT = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Outcome:
    """What a subcommand produced, in both text and JSON form."""

    def __init__(self, command: str):
        self.command = command
        self.lines: list[str] = []
        self.result = None
        self.exact: dict[str, str] = {}
        self.witness = None
        self.code = EXIT_OK

    def q(self, key: str, value) -> str:
        s = fmt_q(value)
        self.exact[key] = s
        return s

    def to_json(self) -> str:
        obj = {"command": self.command, "result": self.result, "exact": self.exact}
        if self.witness is not None:
            obj["witness"] = self.witness
        return json.dumps(obj, sort_keys=True)


def decimal(q: Fraction, digits: int) -> str:
    """Round-half-even to ``digits`` places, exactly."""
    scaled = round(q * 10**digits)
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + body
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def _vertex(g, name: str) -> int:
    return g.index(name)


# --------------------------------------------------------------------------
# subcommands


def cmd_values(args, out: Outcome):
    g = read_game(args.game)
    vt = solve_values(g)
    out.lines.append("vertex aVal cVal acVal")
    table = {}
    for v in range(g.n):
        name = g.name(v)
        vals = (vt.aval[v], vt.cval[v], vt.acval[v])
        cells = [out.q(f"{name}.{k}", x) for k, x in zip(("aVal", "cVal", "acVal"), vals)]
        table[name] = dict(zip(("aVal", "cVal", "acVal"), cells))
        if args.decimal is not None:
            cells += [decimal(x, args.decimal) for x in vals]
        out.lines.append(" ".join([name] + cells))
    out.result = table
    if args.witness:
        lasso = cval_witness(g, vt, _vertex(g, args.witness))
        text = lasso.render(g)
        out.lines.append(f"witness {args.witness}: {text}")
        out.witness = text
    if args.verify:
        o = oracle_values(g)
        for key, mine, theirs in (("aVal", vt.aval, o.aval), ("cVal", vt.cval, o.cval), ("acVal", vt.acval, o.acval)):
            for v in range(g.n):
                if mine[v] != theirs[v]:
                    raise DSRegretError(
                        f"oracle mismatch for {key}({g.name(v)}): {fmt_q(mine[v])} vs {fmt_q(theirs[v])}"
                    )
        out.lines.append("verified: ok")


def cmd_regret(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    vt = solve_values(g)
    rep = regret_of(g, vt, s)
    out.result = out.q("regret", rep.regret)
    out.lines.append(f"regret {out.result}")
    if rep.witness_vertex is None:
        out.lines.append("witness: none")
    else:
        sw = "true" if rep.witness_switched else "false"
        out.witness = {
            "length": rep.witness_length,
            "vertex": g.name(rep.witness_vertex),
            "switched": rep.witness_switched,
            "deviation": g.name(rep.witness_deviation),
        }
        out.lines.append(
            f"witness: length={rep.witness_length} vertex={g.name(rep.witness_vertex)} "
            f"switched={sw} deviation={g.name(rep.witness_deviation)}"
        )
    if args.verify:
        other = oracle_regret_of(g, s, cval=vt.cval)
        if other != rep.regret:
            raise DSRegretError(f"oracle mismatch: {fmt_q(rep.regret)} vs {fmt_q(other)}")
        out.lines.append("verified: ok")


def cmd_min_regret(args, out: Outcome):
    g = read_game(args.game)
    vt = solve_values(g)
    res = min_regret(g, vt, args.horizon, jobs=args.jobs)
    out.result = out.q("regret", res.regret)
    out.lines.append(f"Regret {out.result}")
    out.lines.extend(serialize_strategy(res.strategy, g).splitlines())
    out.lines.append(f"horizon-sufficient: {'yes' if res.horizon_sufficient else 'no'}")
    out.witness = {
        "thresholds": {g.name(v): fmt_threshold(t) for v, t in res.thresholds.items()},
        "horizon": res.horizon_used,
        "horizon_sufficient": res.horizon_sufficient,
    }
    if args.verify:
        top = max((t for t in res.thresholds.values() if t != INF), default=0)
        other = oracle_min_regret(g, top)
        if other != res.regret:
            raise DSRegretError(f"oracle mismatch: {fmt_q(res.regret)} vs {fmt_q(other)}")
        out.lines.append("verified: ok")
    if not res.horizon_sufficient:
        out.code = EXIT_INCONCLUSIVE


def cmd_check_optimal(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    v = is_regret_optimal(g, s, args.horizon)
    out.result = v.verdict
    out.lines.append(f"{v.verdict} regret={out.q('regret', v.regret)} minimum={out.q('minimum', v.minimum)}")
    if v.verdict == "inconclusive":
        out.code = EXIT_INCONCLUSIVE


def cmd_check_admissible(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    v = check_admissible(g, None, s)
    out.result = "admissible" if v.admissible else "dominated"
    out.lines.append(v.describe(g))
    if not v.admissible:
        out.witness = {
            "vertex": g.name(v.state.vertex),
            "counter": v.state.memory.counter,
            "switched": v.state.memory.switched,
        }


def cmd_admissibilize(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    fixed = admissibilize(g, None, s)
    out.lines.extend(action_table(g, fixed))
    out.result = out.lines[:]


def cmd_dominates(args, out: Outcome):
    g = read_game(args.game)
    a = read_strategy(args.a, g)
    b = read_strategy(args.b, g)
    out.result = dominance(g, a, b)
    out.lines.append(out.result)


def cmd_compress(args, out: Outcome):
    g = read_game(args.game)
    names = [x for x in args.history.split(",") if x]
    h = History.of(g, names)
    p = compress_history(g, h)
    out.result = p.render(g)
    out.lines.append(out.result)
    out.lines.append(f"value-original {out.q('original', val_history(g, h))}")
    out.lines.append(f"value-compressed {out.q('compressed', val_pumped(g, p))}")


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text}")


def _nat(text: str) -> int:
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"not a natural number: {text}")
    return int(text)


def cmd_exists(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    ok = history_exists(g, s, args.n, args.switched, _vertex(g, args.at), _vertex(g, args.action))
    out.result = "yes" if ok else "no"
    out.lines.append(out.result)


def cmd_product(args, out: Outcome):
    g = read_game(args.game)
    s = read_strategy(args.strategy, g)
    p = build_product(g, s)
    text = dump(p) if args.dump else f"states {len(p)}\n"
    out.lines.extend(text.splitlines())
    out.result = len(p)


COMMANDS = {
    "values": cmd_values,
    "regret": cmd_regret,
    "min-regret": cmd_min_regret,
    "check-optimal": cmd_check_optimal,
    "check-admissible": cmd_check_admissible,
    "admissibilize": cmd_admissibilize,
    "dominates": cmd_dominates,
    "compress": cmd_compress,
    "exists": cmd_exists,
    "product": cmd_product,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")

    parser = _Parser(prog="dsregret", description="Regret and admissibility in discounted-sum games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("values", parents=[common], help="aVal, cVal, acVal per vertex")
    p.add_argument("game")
    p.add_argument("--decimal", type=_nat, metavar="DIGITS")
    p.add_argument("--witness", metavar="VERTEX")
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("regret", parents=[common], help="regret of a switching strategy")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("min-regret", parents=[common], help="minimal regret and an optipess strategy")
    p.add_argument("game")
    p.add_argument("--horizon", type=_nat)
    p.add_argument("--jobs", type=_nat, default=1)
    p.add_argument("--verify", action="store_true")

    p = sub.add_parser("check-optimal", parents=[common], help="is a strategy regret optimal")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--horizon", type=_nat)

    for name, text in (("check-admissible", "admissibility verdict"), ("admissibilize", "admissible repair")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("game")
        p.add_argument("strategy")

    p = sub.add_parser("dominates", parents=[common], help="weak dominance between two strategies")
    p.add_argument("game")
    p.add_argument("a", metavar="strategyA")
    p.add_argument("b", metavar="strategyB")

    p = sub.add_parser("compress", parents=[common], help="compress a history to alpha beta^k gamma")
    p.add_argument("game")
    p.add_argument("--history", required=True, help="comma-separated vertex names")

    p = sub.add_parser("exists", parents=[common], help="consistent history of exact length")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--n", type=_nat, required=True)
    p.add_argument("--switched", type=_bool, required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--action", required=True)

    p = sub.add_parser("product", parents=[common], help="game x strategy-memory product")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--dump", action="store_true")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"dsregret: {e}", file=stderr)
        return EXIT_USAGE
    out = Outcome(args.command)
    try:
        COMMANDS[args.command](args, out)
    except FileNotFoundError as e:
        print(f"dsregret: {e.filename}: no such file", file=stderr)
        return EXIT_NOINPUT
    except OracleTooLarge as e:
        print(f"dsregret: instance too large for oracle ({e})", file=stderr)
        return EXIT_INCONCLUSIVE
    except (DSRegretError, ValueError) as e:
        print(f"dsregret: {e}", file=stderr)
        return EXIT_DOMAIN
    if args.json:
        print(out.to_json(), file=stdout)
    else:
        for line in out.lines:
            print(line, file=stdout)
    return out.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
