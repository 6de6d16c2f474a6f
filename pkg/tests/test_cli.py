import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import FIXTURES
from dsregret.cli import EXIT_DOMAIN, EXIT_INCONCLUSIVE, EXIT_NOINPUT, EXIT_OK, EXIT_USAGE, decimal, run
from dsregret.regret import HORIZON_ENV

GB_OPTIPESS = """\
Regret 1/2
strategy switching
sigma1 v0 -> v1
sigma1 v1p -> v1p
sigma1 v1pp -> v1pp
sigma1 v2p -> v2p
threshold v0 2
threshold v1p 0
threshold v1pp 0
threshold v2p 0
sigma2 v0 -> v2
sigma2 v1p -> v1p
sigma2 v1pp -> v1pp
sigma2 v2p -> v2p
horizon-sufficient: yes
"""


def f(name):
    return str(FIXTURES / name)


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def test_values_table():
    code, out, _ = call("values", f("GB.game"), "--decimal", 2)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "vertex aVal cVal acVal"
    assert lines[1] == "v0 3/1 5/1 3/1 3.00 5.00 3.00"


def test_values_witness_and_verify():
    code, out, _ = call("values", f("GB.game"), "--witness", "v0", "--verify")
    assert code == EXIT_OK
    assert "witness v0:" in out
    assert out.rstrip().endswith("verified: ok")


def test_regret():
    code, out, _ = call("regret", f("GB.game"), f("GB-v2.strat"), "--verify")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "regret 2/1",
        "witness: length=0 vertex=v0 switched=true deviation=v1",
        "verified: ok",
    ]


def test_regret_without_witness():
    code, out, _ = call("regret", f("GT.game"), f("GT.strat"))
    assert out.splitlines() == ["regret 0/1", "witness: none"]


def test_min_regret_golden():
    code, out, _ = call("min-regret", f("GB.game"))
    assert code == EXIT_OK
    assert out == GB_OPTIPESS


def test_min_regret_verify():
    code, out, _ = call("min-regret", f("GA.game"), "--verify")
    assert code == EXIT_OK
    assert out.startswith("Regret 1/1\n")
    assert out.rstrip().endswith("verified: ok")


def test_short_horizon_is_inconclusive():
    code, out, _ = call("min-regret", f("GB.game"), "--horizon", 1)
    assert code == EXIT_INCONCLUSIVE
    assert "threshold v0 inf" in out
    assert out.rstrip().endswith("horizon-sufficient: no")


def test_env_horizon_and_flag_precedence(monkeypatch):
    monkeypatch.setenv(HORIZON_ENV, "1")
    assert call("min-regret", f("GB.game"))[0] == EXIT_INCONCLUSIVE
    code, out, _ = call("min-regret", f("GB.game"), "--horizon", 50)
    assert (code, out) == (EXIT_OK, GB_OPTIPESS)


def test_check_optimal():
    assert call("check-optimal", f("GB.game"), f("GB-v2.strat"))[1] == "suboptimal regret=2/1 minimum=1/2\n"
    assert call("check-optimal", f("GB.game"), f("GB-v1.strat"))[1] == "optimal regret=1/2 minimum=1/2\n"


def test_check_admissible():
    code, out, _ = call("check-admissible", f("GA.game"), f("GA-double.strat"))
    assert (code, out) == (EXIT_OK, "dominated at v2 step<=0 switched=true\n")
    assert call("check-admissible", f("GB.game"), f("GB-v1.strat"))[1] == "admissible\n"


def test_admissibilize():
    code, out, _ = call("admissibilize", f("GA.game"), f("GA-double.strat"))
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "initial c0U"
    assert "next c0U v2 => sbwo" in lines
    assert "act sbwo v2 -> v2p" in lines


def test_dominates():
    assert call("dominates", f("GB.game"), f("GB-v1.strat"), f("GB-v2.strat"))[1] == "incomparable\n"
    assert call("dominates", f("GB.game"), f("GB-v1.strat"), f("GB-v1.strat"))[1] == "equivalent\n"


def test_compress():
    code, out, _ = call("compress", f("GC.game"), "--history", "u,u,u,u")
    assert out.splitlines() == ["u | u u ^ 3 | u", "value-original 7/4", "value-compressed 7/4"]


def test_exists():
    base = ["exists", f("GB.game"), f("GB-v1.strat"), "--switched", "true", "--at", "v1p", "--action", "v1p"]
    assert call(*base, "--n", 2)[1] == "yes\n"
    assert call(*base, "--n", 3)[1] == "yes\n"
    assert call(*base, "--n", 1)[1] == "no\n"
    assert call(*base, "--n", 2**128)[1] == "yes\n"


def test_product():
    code, out, _ = call("product", f("GB.game"), f("GB-v2.strat"), "--dump")
    assert out.splitlines()[:2] == ["states 3", "0 (v0,0,S) eve depth=0 min=3/1 max=3/1"]
    assert call("product", f("GB.game"), f("GB-v2.strat"))[1] == "states 3\n"


def test_json_output():
    code, out, _ = call("regret", f("GB.game"), f("GB-v1.strat"), "--json")
    obj = json.loads(out)
    assert obj["command"] == "regret"
    assert Fraction(obj["exact"]["regret"]) == Fraction(1, 2)
    assert obj["witness"]["vertex"] == "v0"
    code, out, _ = call("values", f("GB.game"), "--json")
    table = json.loads(out)["result"]
    assert Fraction(table["v0"]["cVal"]) == 5


@pytest.mark.parametrize(
    "argv, code",
    [
        (["bogus"], EXIT_USAGE),
        ([], EXIT_USAGE),
        (["values"], EXIT_USAGE),
        (["min-regret", "GB", "--horizon", "-3"], EXIT_USAGE),
        (["values", "missing.game"], EXIT_NOINPUT),
        (["exists", "GB.game", "GB-v1.strat", "--n", "2", "--switched", "maybe", "--at", "v0", "--action", "v1"],
         EXIT_USAGE),
        (["exists", "GB.game", "GB-v1.strat", "--n", "2", "--switched", "true", "--at", "v1", "--action", "v1p"],
         EXIT_DOMAIN),
        (["compress", "GB.game", "--history", "v0,v1p"], EXIT_DOMAIN),
        (["compress", "GB.game", "--history", "v0,nowhere"], EXIT_DOMAIN),
    ],
)
def test_exit_codes(argv, code):
    argv = [f(a) if a.endswith((".game", ".strat")) and a != "missing.game" else a for a in argv]
    assert call(*argv)[0] == code


def test_parse_error_reports_position(tmp_path):
    bad = tmp_path / "bad.game"
    bad.write_text("lambda 2\n")
    code, _, err = call("values", bad)
    assert code == EXIT_DOMAIN
    assert "line 1, column 8" in err


@pytest.mark.parametrize(
    "q, digits, text",
    [
        (Fraction(1, 8), 2, "0.12"),
        (Fraction(3, 8), 2, "0.38"),
        (Fraction(-1, 8), 2, "-0.12"),
        (Fraction(5, 2), 0, "2"),
        (Fraction(7, 2), 0, "4"),
        (Fraction(1, 3), 4, "0.3333"),
        (Fraction(-5, 1000), 2, "0.00"),
        (Fraction(20), 1, "20.0"),
    ],
)
def test_decimal_rounds_half_even(q, digits, text):
    assert decimal(q, digits) == text


@pytest.mark.parametrize("game", ["GA", "GB", "GT", "GC"])
def test_min_regret_is_byte_identical(game):
    outs = set()
    for jobs in ("1", "1", "3"):
        proc = subprocess.run(
            [sys.executable, "-m", "dsregret.cli", "min-regret", f(f"{game}.game"), "--jobs", jobs, "--json"],
            capture_output=True,
        )
        assert proc.returncode == 0
        outs.add(proc.stdout)
    assert len(outs) == 1
