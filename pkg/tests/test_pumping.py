import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_strategy, game_from, instance_from, seeds
from dsregret.core import Game, History, ValidationError
from dsregret.generate import GameConfig, random_history
from dsregret.oracle import oracle_histories
from dsregret.pumping import (
    SCD,
    PowerSum,
    PumpedPath,
    compress_history,
    decompose,
    history_exists,
    reachable_after,
    replace_cycle,
    scd_value,
    val_history,
    val_pumped,
)

BIG = 2**100


def h(*vs):
    return History(tuple(vs))


def test_gc_closed_form(GC):
    u = GC.index("u")
    p = PumpedPath(h(u), h(u, u), 3, h(u))
    assert val_pumped(GC, p) == Fraction(7, 4)
    assert len(p) == 3


def test_gc_compresses_to_one_cycle(GC):
    u = GC.index("u")
    hist = h(*[u] * 51)
    p = compress_history(GC, hist)
    assert len(p) == 50
    assert p.beta == h(u, u)
    assert p.unroll() == hist
    assert val_pumped(GC, p) == val_history(GC, hist)


def test_acyclic_history_has_no_cycle(GB):
    hist = History.of(GB, ["v0", "v1", "v1p"])
    p = compress_history(GB, hist)
    assert p.beta is None and p.k == 0
    assert p.unroll() == hist


def test_ga_history_value(GA):
    assert val_history(GA, History.of(GA, ["v0", "v1", "v1p", "x"])) == Fraction(1, 2)


def test_render(GC):
    u = GC.index("u")
    assert PumpedPath(h(u), h(u, u), 4, h(u)).render(GC) == "u | u u ^ 4 | u"


def test_huge_pump_stays_symbolic(GC):
    u = GC.index("u")
    small = val_pumped(GC, PumpedPath(h(u), h(u, u), BIG, h(u)))
    large = val_pumped(GC, PumpedPath(h(u), h(u, u), BIG + 1, h(u)))
    assert isinstance(small, PowerSum)
    assert small < large < 2
    assert small > Fraction(19, 10)


def test_power_sum_order():
    lam = Fraction(1, 2)
    a = PowerSum(lam, {0: 2, BIG: -1})
    b = PowerSum(lam, {0: 2, BIG + 1: -1})
    assert a < b and b - a > 0
    assert PowerSum(lam, {BIG: 1}) > 0
    assert PowerSum(lam, {BIG: 1, 2 * BIG: -10**6}) > 0
    assert PowerSum(lam, {BIG: 1}) - PowerSum(lam, {BIG: 1}) == 0
    assert PowerSum(lam, {3: 1}).exact() == Fraction(1, 8)


def test_pumped_path_validation(GC):
    u = GC.index("u")
    with pytest.raises(ValidationError):
        PumpedPath(h(u), None, 2, h(u))
    with pytest.raises(ValidationError):
        PumpedPath(h(u), h(u), 1, h(u))


def test_replace_cycle_gadget():
    # a -> b -> a costs nothing, a -> c -> a pays 1 twice
    g = Game(("a", "b", "c"), frozenset(), ((0, 1, 0), (1, 0, 0), (0, 2, 1), (2, 0, 1)), Fraction(1, 2), 0)
    alpha, gamma = h(0, 1, 0), h(0, 2, 0)
    out = replace_cycle(g, alpha + gamma, (alpha, h(0), gamma))
    assert out == alpha.repeat(2)


def test_replace_cycle_same_cycle(GC):
    u = GC.index("u")
    out = replace_cycle(GC, h(u, u, u), (h(u, u), h(u), h(u, u)))
    assert out == h(u, u, u)


def test_replace_cycle_rejects_bad_split(GC):
    u = GC.index("u")
    with pytest.raises(ValidationError):
        replace_cycle(GC, h(u, u, u), (h(u, u), h(u), h(u)))


def _splits(g, hist):
    vs = hist.vertices
    n = len(hist)
    for i in range(1, n + 1):
        if vs[i] != vs[0]:
            continue
        for j in range(i, n - i + 1):
            if n - j == i and vs[j] == vs[n]:
                yield History(vs[: i + 1]), History(vs[i : j + 1]), History(vs[j:])


def random_splits(seed, count):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = game_from(rng.randrange(2**32), GameConfig(max_vertices=4))[1]
        hist = random_history(rng, g, rng.randint(2, 14))
        found = list(_splits(g, hist))
        if found:
            out.append((g, hist, rng.choice(found)))
    return out


@pytest.mark.parametrize("g, hist, split", random_splits(0, 60))
def test_replacement_never_costs_more(g, hist, split):
    out = replace_cycle(g, hist, split)
    assert len(out) == len(hist)
    assert out.first == hist.first and out.last == hist.last
    assert val_history(g, out) <= val_history(g, hist)


@given(seeds, st.integers(0, 16))
def test_pumped_value_matches_unrolled(seed, k):
    rng, g = game_from(seed)
    hist = random_history(rng, g, rng.randint(0, 10))
    d = decompose(hist)
    if not d.cycles:
        return
    beta = d.cycles[0][0]
    alpha = d.paths[0]
    gamma = History((beta.first,)) + d.paths[1]
    p = PumpedPath(alpha, beta, k, gamma)
    assert val_pumped(g, p) == val_history(g, p.unroll())


@given(seeds)
def test_decomposition_is_exact(seed):
    rng, g = game_from(seed)
    hist = random_history(rng, g, rng.randint(0, 30))
    d = decompose(hist)
    assert d.unroll() == hist
    assert all(p.is_simple_path() for p in d.paths)
    assert scd_value(g, d) == val_history(g, hist)


@given(seeds)
def test_compress_postconditions(seed):
    rng, g = game_from(seed)
    hist = random_history(rng, g, rng.randint(0, 60))
    p = compress_history(g, hist)
    assert len(p) == len(hist)
    assert p.first == hist.first and p.last == hist.last
    assert val_pumped(g, p) <= val_history(g, hist)
    assert val_pumped(g, p) == val_history(g, p.unroll())
    short = len(p.alpha) + len(p.gamma) + (len(p.beta) if p.beta else 0)
    assert short <= 4 * g.n**3
    assert p.beta is None or p.beta.is_simple_cycle()


def test_scd_rejects_non_simple_cycle(GC):
    u = GC.index("u")
    with pytest.raises(ValidationError):
        SCD((h(u), h(u)), ((h(u, u, u), 1),))


@given(seeds, st.integers(0, 12))
def test_reachability_matches_enumeration(seed, n):
    _, g, s = instance_from(seed)
    assert reachable_after(g, s, n) == oracle_histories(g, s, n)


@given(seeds, st.integers(0, 12))
def test_history_exists_matches_enumeration(seed, n):
    rng, g, s = instance_from(seed)
    found = oracle_histories(g, s, n)
    for v in g.eve_vertices:
        for sw in (False, True):
            a = (s.sigma2 if sw else s.sigma1)[v]
            assert history_exists(g, s, n, sw, v, a) == ((v, sw) in found)


@settings(max_examples=25)
@given(seeds, st.integers(0, 12))
def test_more_edges_more_histories(seed, n):
    # adding Adam edges can only add histories
    rng, g, s = instance_from(seed)
    adam = [v for v in range(g.n) if not g.is_eve(v)]
    if not adam:
        return
    u = rng.choice(adam)
    extra = [x for x in range(g.n) if not g.has_edge(u, x)]
    if not extra:
        return
    g2 = Game(g.names, g.eve, g.edges + ((u, rng.choice(extra), 0),), g.lam, g.init)
    assert reachable_after(g, s, n) <= reachable_after(g2, s, n)


def test_gb_exact_length_queries(GB):
    s = fixture_strategy("GB-v1", GB)
    ix = GB.index
    assert history_exists(GB, s, 2, True, ix("v1p"), ix("v1p"))
    assert not history_exists(GB, s, 1, True, ix("v1p"), ix("v1p"))
    assert not history_exists(GB, s, 2, False, ix("v1p"), ix("v1p"))
    assert not history_exists(GB, s, 5, True, ix("v2p"), ix("v2p"))


def test_astronomical_length(GB):
    s = fixture_strategy("GB-v1", GB)
    ix = GB.index
    start = time.perf_counter()
    assert history_exists(GB, s, 2**128, True, ix("v1pp"), ix("v1pp"))
    assert not history_exists(GB, s, 2**128, True, ix("v0"), ix("v1"))
    assert time.perf_counter() - start < 1.0


def test_history_exists_rejects_non_edge(GB):
    s = fixture_strategy("GB-v1", GB)
    with pytest.raises(ValidationError):
        history_exists(GB, s, 3, True, GB.index("v0"), GB.index("v1p"))
