import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dsregret.core import read_game, read_strategy
from dsregret.generate import GameConfig, random_game, random_switching

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile(
    "default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def fixture_game(name):
    return read_game(FIXTURES / f"{name}.game")


def fixture_strategy(name, g):
    return read_strategy(FIXTURES / f"{name}.strat", g)


@pytest.fixture
def GA():
    return fixture_game("GA")


@pytest.fixture
def GB():
    return fixture_game("GB")


@pytest.fixture
def GT():
    return fixture_game("GT")


@pytest.fixture
def GC():
    return fixture_game("GC")


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def game_from(seed, cfg=GameConfig()):
    rng = random.Random(seed)
    return rng, random_game(rng, cfg)


def instance_from(seed, cfg=GameConfig()):
    rng, g = game_from(seed, cfg)
    return rng, g, random_switching(rng, g)


# one summary line per acceptance criterion
_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, title = mark.args
    ok = rep.passed if rep.when == "call" else False
    prev = _criteria.get(n)
    _criteria[n] = (title, ok and (prev is None or prev[1]), rep.duration + (prev[2] if prev else 0))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, ok, secs = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({secs:.2f}s) {title}")
