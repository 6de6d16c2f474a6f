from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, game_from, seeds
from dsregret.core import (
    INF,
    History,
    Lasso,
    ParseError,
    SwitchingStrategy,
    ValidationError,
    fmt_q,
    parse_game,
    parse_q,
    parse_strategy,
    serialize_game,
    serialize_strategy,
    uniform_strategy,
)

GT_TEXT = "lambda 1/2; vertex u eve; edge u u 0; init u"


def test_parse_ga(GA):
    assert GA.n == 8
    assert len(GA.edges) == 13
    assert GA.lam == Fraction(1, 2)
    assert GA.name(GA.init) == "v0"
    assert GA.weight(GA.index("x"), GA.index("x")) == 2
    assert GA.weight(GA.index("v2p"), GA.index("v2p")) == 1


def test_parse_minimal_game():
    g = parse_game(GT_TEXT)
    assert g.names == ("u",)
    assert g.is_eve(0)
    assert g.succ[0] == ((0, 0),)


def test_sink_vertex_rejected():
    with pytest.raises(ValidationError, match="sink vertex u"):
        parse_game("lambda 1/2; vertex u eve; init u")


@pytest.mark.parametrize(
    "text, message",
    [
        ("lambda 1/2\nvertex u eve\nedge u w 0\ninit u", "unknown vertex w"),
        ("lambda 1/2\nvertex u eve\nedge u u 0\nedge u u 1\ninit u", "duplicate edge"),
        ("lambda 3/2\nvertex u eve\nedge u u 0\ninit u", "lambda"),
        ("lambda 1/2\nvertex u eve\nedge u u 0.5\ninit u", "integer"),
        ("lambda 1/2\nvertex u god\nedge u u 0\ninit u", "owner"),
        ("lambda 1/2\nvertex u eve\nedge u u 0", "missing init"),
        ("vertex u eve\nedge u u 0\ninit u", "missing lambda"),
        ("lambda 1/2\nvertex u eve\nedge u u\ninit u", "expects 3"),
        ("lambda 1/2\nvertex u eve\nfoo u\ninit u", "unknown statement"),
    ],
)
def test_game_errors(text, message):
    with pytest.raises((ParseError, ValidationError), match=message):
        parse_game(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_game("lambda 1/2\nvertex u eve\nedge u zz 0\ninit u")
    assert (e.value.line, e.value.column) == (3, 8)


def test_comments_and_separators():
    g = parse_game("# header\nlambda 1/3 # discount\nvertex a adam; vertex b eve\nedge a b -2; edge b a 1\ninit b\n")
    assert g.lam == Fraction(1, 3)
    assert g.init == 1
    assert g.weight(0, 1) == -2


def test_strategy_example_one(GB):
    s = parse_strategy((FIXTURES / "GB-v2.strat").read_text(), GB)
    assert s.sigma1 == s.sigma2
    assert GB.name(s.sigma1[GB.index("v0")]) == "v2"
    assert set(s.t.values()) == {0}


def test_strategy_inf_threshold(GB):
    text = (FIXTURES / "GB-v2.strat").read_text().replace("threshold v0 0", "threshold v0 inf")
    s = parse_strategy(text, GB)
    assert s.t[GB.index("v0")] is INF


@pytest.mark.parametrize(
    "old, new, message",
    [
        ("sigma1 v0 -> v2", "sigma1 z -> v2", "unknown vertex z"),
        ("sigma1 v0 -> v2", "sigma1 v0 -> v1p", "not an edge"),
        ("sigma2 v2p -> v2p\n", "", "missing sigma2"),
        ("threshold v0 0", "threshold v0 -3", "negative threshold"),
        ("strategy switching", "strategy stubborn", "switching"),
    ],
)
def test_strategy_errors(GB, old, new, message):
    text = (FIXTURES / "GB-v2.strat").read_text()
    assert old in text
    with pytest.raises((ParseError, ValidationError), match=message):
        parse_strategy(text.replace(old, new), GB)


def test_strategy_roundtrip(GB):
    s = SwitchingStrategy(
        uniform_strategy(GB, {"v0": "v1"}).sigma1,
        {v: (2 if GB.name(v) == "v0" else INF) for v in GB.eve_vertices},
        uniform_strategy(GB, {"v0": "v2"}).sigma1,
    )
    assert parse_strategy(serialize_strategy(s, GB), GB) == s


def test_history_checks(GA):
    h = History.of(GA, ["v0", "v1", "v1p", "x"])
    assert len(h) == 3
    assert h.is_simple_path()
    with pytest.raises(ValidationError):
        History.of(GA, ["v0", "x"])
    loop = History.of(GA, ["x", "x"])
    assert loop.is_simple_cycle()
    assert len(loop.repeat(4)) == 4
    assert len(h + loop) == 4


def test_lasso_validation(GC):
    Lasso(History((0,)), History((0, 0)))
    with pytest.raises(ValidationError):
        Lasso(History((0,)), History((0,)))


def test_thresholds_validated():
    with pytest.raises(ValidationError):
        SwitchingStrategy(uniform_strategy(parse_game(GT_TEXT), {}).sigma1, {0: -1}, uniform_strategy(parse_game(GT_TEXT), {}).sigma1)


def test_fmt_q():
    assert fmt_q(1) == "1/1"
    assert fmt_q(Fraction(-6, 4)) == "-3/2"
    assert parse_q(" -3/2 ") == Fraction(-3, 2)
    with pytest.raises(ValueError):
        parse_q("1/0")


ints64 = st.integers(min_value=-(2**63), max_value=2**63 - 1)
pos64 = st.integers(min_value=1, max_value=2**63 - 1)


@given(ints64, pos64, ints64, pos64)
def test_rational_arithmetic_exact(p, q, r, s):
    a, b = Fraction(p, q), Fraction(r, s)
    assert (a + b) - b == a
    assert a.denominator > 0


@given(seeds)
def test_game_roundtrip(seed):
    _, g = game_from(seed)
    again = parse_game(serialize_game(g))
    assert again == g
    assert again.names == g.names
