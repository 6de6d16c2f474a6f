"""Domain types for discounted-sum games and their text formats.

Every number that takes part in a computation is a :class:`fractions.Fraction`
or an ``int``.  Vertices are dense indices in file order; names only appear at
the parsing/printing boundary.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

INF = math.inf  # threshold sentinel, compared but never used in arithmetic

EVE = "eve"
ADAM = "adam"


class DSRegretError(Exception):
    """Base class for domain errors (bad input, invalid objects)."""


class ParseError(DSRegretError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationError(DSRegretError):
    pass


def fmt_q(q) -> str:
    """Exact ``p/q`` rendering; integers keep their ``/1``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_q(text: str) -> Fraction:
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def fmt_threshold(t) -> str:
    return "inf" if t == INF else str(t)


# --------------------------------------------------------------------------
# games


@dataclass(frozen=True)
class Game:
    """A finite weighted game graph ``(V, v0, V_eve, E, w, lambda)``.

    ``succ[u]`` lists ``(v, w(u, v))`` sorted by target index, which fixes the
    tie-breaking order used by every solver downstream.
    """

    names: tuple[str, ...]
    eve: frozenset[int]
    edges: tuple[tuple[int, int, int], ...]
    lam: Fraction
    init: int
    succ: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False, compare=False)
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)
    _weight: Mapping[tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValidationError("duplicate vertex name")
        lam = Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if not 0 < lam < 1:
            raise ValidationError(f"lambda must lie in (0, 1), got {fmt_q(lam)}")
        if not 0 <= self.init < n:
            raise ValidationError("initial vertex out of range")
        if any(not 0 <= v < n for v in self.eve):
            raise ValidationError("Eve vertex out of range")
        weight: dict[tuple[int, int], int] = {}
        succ: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for u, v, w in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError("edge endpoint out of range")
            if not isinstance(w, int) or isinstance(w, bool):
                raise ValidationError(f"non-integer weight on {self.names[u]} -> {self.names[v]}")
            if (u, v) in weight:
                raise ValidationError(f"duplicate edge {self.names[u]} -> {self.names[v]}")
            weight[(u, v)] = w
            succ[u].append((v, w))
        for u in range(n):
            if not succ[u]:
                raise ValidationError(f"sink vertex {self.names[u]}")
            succ[u].sort()
        object.__setattr__(self, "succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})
        object.__setattr__(self, "_weight", weight)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def eve_vertices(self) -> list[int]:
        return sorted(self.eve)

    def is_eve(self, v: int) -> bool:
        return v in self.eve

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"unknown vertex {name}") from None

    def name(self, v: int) -> str:
        return self.names[v]

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self._weight

    def weight(self, u: int, v: int) -> int:
        return self._weight[(u, v)]

    def successors(self, u: int) -> list[int]:
        return [v for v, _ in self.succ[u]]

    def max_abs_weight(self) -> int:
        return max(abs(w) for _, _, w in self.edges)

    def with_lambda(self, lam) -> "Game":
        return Game(self.names, self.eve, self.edges, Fraction(lam), self.init)


# --------------------------------------------------------------------------
# histories, strategies


@dataclass(frozen=True)
class History:
    """A finite path ``v_0 ... v_n``; ``len(h)`` is the number of edges."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValidationError("empty history")

    @classmethod
    def of(cls, game: Game, vertices: Iterable) -> "History":
        vs = tuple(game.index(v) if isinstance(v, str) else int(v) for v in vertices)
        h = cls(vs)
        h.check(game)
        return h

    def check(self, game: Game) -> None:
        for a, b in zip(self.vertices, self.vertices[1:]):
            if not game.has_edge(a, b):
                raise ValidationError(f"{game.name(a)} -> {game.name(b)} is not an edge")

    def __len__(self) -> int:
        return len(self.vertices) - 1

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    def is_cycle(self) -> bool:
        return len(self) >= 1 and self.first == self.last

    def is_simple_path(self) -> bool:
        return len(set(self.vertices)) == len(self.vertices)

    def is_simple_cycle(self) -> bool:
        return self.is_cycle() and len(set(self.vertices[:-1])) == len(self)

    def __add__(self, other: "History") -> "History":
        if self.last != other.first:
            raise ValidationError("histories do not connect")
        return History(self.vertices + other.vertices[1:])

    def repeat(self, k: int) -> "History":
        if k == 0:
            return History((self.first,))
        if not self.is_cycle():
            raise ValidationError("only cycles can be repeated")
        return History(self.vertices + self.vertices[1:] * (k - 1))

    def render(self, game: Game) -> str:
        return " ".join(game.name(v) for v in self.vertices)


@dataclass(frozen=True)
class PositionalStrategy:
    owner: str
    choice: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "choice", dict(sorted(self.choice.items())))

    def check(self, game: Game) -> None:
        owned = game.eve if self.owner == EVE else set(range(game.n)) - game.eve
        if set(self.choice) != set(owned):
            missing = sorted(set(owned) - set(self.choice))
            if missing:
                raise ValidationError(f"missing choice for {game.name(missing[0])}")
            raise ValidationError("choice given for a vertex of the other player")
        for u, v in self.choice.items():
            if not game.has_edge(u, v):
                raise ValidationError(f"{game.name(u)} -> {game.name(v)} is not an edge")

    def __getitem__(self, u: int) -> int:
        return self.choice[u]

    def __hash__(self):
        return hash((self.owner, tuple(self.choice.items())))


class SwitchMemory(NamedTuple):
    counter: int
    switched: bool


@dataclass(frozen=True)
class SwitchingStrategy:
    """Follow ``sigma1`` until some Eve vertex ``v`` is entered at a step index
    ``i >= t(v)`` (the start vertex is step 0), then ``sigma2`` forever."""

    sigma1: PositionalStrategy
    t: Mapping[int, int | float]
    sigma2: PositionalStrategy

    def __post_init__(self):
        object.__setattr__(self, "t", dict(sorted(self.t.items())))
        for v, x in self.t.items():
            if x != INF and (not isinstance(x, int) or x < 0):
                raise ValidationError("thresholds must be naturals or inf")

    def __hash__(self):
        return hash((self.sigma1, tuple(self.t.items()), self.sigma2))

    def check(self, game: Game) -> None:
        self.sigma1.check(game)
        self.sigma2.check(game)
        if set(self.t) != set(game.eve):
            raise ValidationError("threshold function must cover exactly the Eve vertices")

    @classmethod
    def positional(cls, sigma: PositionalStrategy) -> "SwitchingStrategy":
        return cls(sigma, {v: INF for v in sigma.choice}, sigma)

    @property
    def saturation(self) -> int:
        """Largest finite threshold (0 if there is none)."""
        return max((x for x in self.t.values() if x != INF), default=0)

    def _triggers(self, game: Game, v: int, step: int) -> bool:
        return game.is_eve(v) and self.t[v] <= step

    def initial_memory(self, game: Game) -> SwitchMemory:
        return SwitchMemory(0, self._triggers(game, game.init, 0))

    def next_memory(self, game: Game, mem: SwitchMemory, target: int) -> SwitchMemory:
        step = mem.counter + 1
        return SwitchMemory(
            min(step, self.saturation),
            mem.switched or self._triggers(game, target, step),
        )

    def action(self, mem: SwitchMemory, v: int) -> int:
        return (self.sigma2 if mem.switched else self.sigma1)[v]


@dataclass(frozen=True)
class Lasso:
    """The play ``alpha . beta^omega``."""

    alpha: History
    beta: History

    def __post_init__(self):
        if not self.beta.is_cycle():
            raise ValidationError("lasso loop must be a cycle of length >= 1")
        if self.alpha.last != self.beta.first:
            raise ValidationError("lasso prefix must end where the loop starts")

    def render(self, game: Game) -> str:
        return f"{self.alpha.render(game)} | {self.beta.render(game)}"


@dataclass(frozen=True)
class FiniteMemoryStrategy:
    """Eve strategy given by a memory automaton.

    ``initial`` is the memory after observing the start vertex; ``updates`` maps
    ``(memory, entered vertex)`` to the next memory and ``actions`` maps
    ``(memory, eve vertex)`` to a successor.  Tables only cover the pairs that
    can occur on plays from the initial vertex.
    """

    initial: Hashable
    updates: Mapping[tuple[Hashable, int], Hashable]
    actions: Mapping[tuple[Hashable, int], int]

    def update(self, mem, target: int):
        return self.updates[(mem, target)]

    def action(self, mem, v: int) -> int:
        return self.actions[(mem, v)]

    @property
    def memory(self) -> set:
        mems = {self.initial}
        mems.update(m for m, _ in self.updates)
        mems.update(self.updates.values())
        return mems

    def check(self, game: Game) -> None:
        for (_, v), a in self.actions.items():
            if not game.has_edge(v, a):
                raise ValidationError(f"action {game.name(v)} -> {game.name(a)} is not an edge")

    @classmethod
    def explore(cls, game: Game, initial, update, action) -> "FiniteMemoryStrategy":
        """Tabulate a strategy given as two callables, over reachable pairs."""
        updates: dict = {}
        actions: dict = {}
        start = (game.init, initial)
        seen = {start}
        todo = [start]
        while todo:
            v, m = todo.pop()
            if game.is_eve(v):
                a = action(m, v)
                actions[(m, v)] = a
                targets = [a]
            else:
                targets = game.successors(v)
            for u in targets:
                m2 = update(m, u)
                updates[(m, u)] = m2
                if (u, m2) not in seen:
                    seen.add((u, m2))
                    todo.append((u, m2))
        fms = cls(initial, updates, actions)
        fms.check(game)
        return fms

    @classmethod
    def from_switching(cls, game: Game, s: SwitchingStrategy) -> "FiniteMemoryStrategy":
        return cls.explore(
            game,
            s.initial_memory(game),
            lambda m, u: s.next_memory(game, m, u),
            s.action,
        )


def as_memory_strategy(game: Game, s) -> FiniteMemoryStrategy:
    if isinstance(s, FiniteMemoryStrategy):
        return s
    if isinstance(s, PositionalStrategy):
        s = SwitchingStrategy.positional(s)
    if isinstance(s, SwitchingStrategy):
        return FiniteMemoryStrategy.from_switching(game, s)
    raise TypeError(f"not a strategy: {type(s).__name__}")


# --------------------------------------------------------------------------
# text formats


_TOKEN = re.compile(r"\S+")


def _statements(text: str):
    """Yield ``(line, [(token, column), ...])`` per statement.

    Statements end at newlines or ``;``; ``#`` starts a comment.
    """
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        start = 0
        for part in line.split(";"):
            toks = [(m.group(0), start + m.start() + 1) for m in _TOKEN.finditer(part)]
            if toks:
                yield lineno, toks
            start += len(part) + 1


def parse_game(text: str) -> Game:
    names: list[str] = []
    index: dict[str, int] = {}
    eve: set[int] = set()
    edges: list[tuple[int, int, int]] = []
    lam = None
    init = None

    def lookup(tok, line, col):
        if tok not in index:
            raise ParseError(f"unknown vertex {tok}", line, col)
        return index[tok]

    for line, toks in _statements(text):
        kw, col = toks[0]
        args = toks[1:]

        def arity(k):
            if len(args) != k:
                raise ParseError(f"'{kw}' expects {k} argument(s)", line, col)

        if kw == "lambda":
            arity(1)
            if lam is not None:
                raise ParseError("duplicate lambda", line, col)
            tok, c = args[0]
            m = re.fullmatch(r"(\d+)/(\d+)", tok)
            if not m:
                raise ParseError(f"lambda must be p/q, got {tok}", line, c)
            p, q = int(m.group(1)), int(m.group(2))
            if not 0 < p < q:
                raise ValidationError(f"lambda must lie in (0, 1), got {tok}")
            lam = Fraction(p, q)
        elif kw == "vertex":
            arity(2)
            (name, c), (owner, c2) = args
            if name in index:
                raise ParseError(f"duplicate vertex {name}", line, c)
            if owner not in (EVE, ADAM):
                raise ParseError(f"owner must be eve or adam, got {owner}", line, c2)
            index[name] = len(names)
            names.append(name)
            if owner == EVE:
                eve.add(index[name])
        elif kw == "edge":
            arity(3)
            (a, ca), (b, cb), (w, cw) = args
            u, v = lookup(a, line, ca), lookup(b, line, cb)
            if not re.fullmatch(r"[-+]?\d+", w):
                raise ParseError(f"weight must be an integer, got {w}", line, cw)
            edges.append((u, v, int(w)))
        elif kw == "init":
            arity(1)
            if init is not None:
                raise ParseError("duplicate init", line, col)
            init = lookup(args[0][0], line, args[0][1])
        else:
            raise ParseError(f"unknown statement {kw}", line, col)

    if lam is None:
        raise ValidationError("missing lambda")
    if init is None:
        raise ValidationError("missing init")
    if not names:
        raise ValidationError("game has no vertices")
    return Game(tuple(names), frozenset(eve), tuple(edges), lam, init)


def serialize_game(g: Game) -> str:
    out = [f"lambda {g.lam.numerator}/{g.lam.denominator}"]
    out += [f"vertex {name} {EVE if g.is_eve(i) else ADAM}" for i, name in enumerate(g.names)]
    out += [f"edge {g.name(u)} {g.name(v)} {w}" for u, v, w in g.edges]
    out.append(f"init {g.name(g.init)}")
    return "\n".join(out) + "\n"


def parse_strategy(text: str, g: Game) -> SwitchingStrategy:
    header = False
    s1: dict[int, int] = {}
    s2: dict[int, int] = {}
    t: dict[int, int | float] = {}

    def eve_vertex(tok, line, col):
        if tok not in g.names:
            raise ParseError(f"unknown vertex {tok}", line, col)
        v = g.index(tok)
        if not g.is_eve(v):
            raise ValidationError(f"{tok} is not an Eve vertex")
        return v

    for line, toks in _statements(text):
        kw, col = toks[0]
        words = [w for w, _ in toks]
        if kw == "strategy":
            if words[1:] != ["switching"]:
                raise ParseError("only 'strategy switching' is supported", line, col)
            header = True
        elif kw in ("sigma1", "sigma2"):
            if len(toks) != 4 or words[2] != "->":
                raise ParseError(f"expected '{kw} <vertex> -> <vertex>'", line, col)
            u = eve_vertex(toks[1][0], line, toks[1][1])
            if toks[3][0] not in g.names:
                raise ParseError(f"unknown vertex {toks[3][0]}", line, toks[3][1])
            v = g.index(toks[3][0])
            if not g.has_edge(u, v):
                raise ValidationError(f"{toks[1][0]} -> {toks[3][0]} is not an edge")
            target = s1 if kw == "sigma1" else s2
            if u in target:
                raise ParseError(f"duplicate {kw} entry for {toks[1][0]}", line, col)
            target[u] = v
        elif kw == "threshold":
            if len(toks) != 3:
                raise ParseError("expected 'threshold <vertex> <nat|inf>'", line, col)
            u = eve_vertex(toks[1][0], line, toks[1][1])
            word, c = toks[2]
            if word == "inf":
                val: int | float = INF
            elif re.fullmatch(r"\d+", word):
                val = int(word)
            elif re.fullmatch(r"-\d+", word):
                raise ValidationError(f"negative threshold for {toks[1][0]}")
            else:
                raise ParseError(f"threshold must be a natural or inf, got {word}", line, c)
            if u in t:
                raise ParseError(f"duplicate threshold for {toks[1][0]}", line, col)
            t[u] = val
        else:
            raise ParseError(f"unknown statement {kw}", line, col)

    if not header:
        raise ValidationError("missing 'strategy switching' header")
    for v in g.eve_vertices:
        for table, label in ((s1, "sigma1"), (t, "threshold"), (s2, "sigma2")):
            if v not in table:
                raise ValidationError(f"missing {label} for {g.name(v)}")
    s = SwitchingStrategy(PositionalStrategy(EVE, s1), t, PositionalStrategy(EVE, s2))
    s.check(g)
    return s


def serialize_strategy(s: SwitchingStrategy, g: Game) -> str:
    out = ["strategy switching"]
    out += [f"sigma1 {g.name(v)} -> {g.name(s.sigma1[v])}" for v in g.eve_vertices]
    out += [f"threshold {g.name(v)} {fmt_threshold(s.t[v])}" for v in g.eve_vertices]
    out += [f"sigma2 {g.name(v)} -> {g.name(s.sigma2[v])}" for v in g.eve_vertices]
    return "\n".join(out) + "\n"


def read_game(path) -> Game:
    with open(path) as fh:
        return parse_game(fh.read())


def read_strategy(path, g: Game) -> SwitchingStrategy:
    with open(path) as fh:
        return parse_strategy(fh.read(), g)


def uniform_strategy(g: Game, choice: Mapping, t=0) -> SwitchingStrategy:
    """Switching strategy with ``sigma1 == sigma2 == choice`` and constant threshold.

    ``choice`` may use names or indices; Eve vertices with a single successor can
    be omitted.
    """
    table: dict[int, int] = {}
    for k, v in choice.items():
        table[g.index(k) if isinstance(k, str) else k] = g.index(v) if isinstance(v, str) else v
    for u in g.eve_vertices:
        table.setdefault(u, g.successors(u)[0])
    sigma = PositionalStrategy(EVE, table)
    s = SwitchingStrategy(sigma, {v: t for v in g.eve_vertices}, sigma)
    s.check(g)
    return s


def names_of(g: Game, vs: Sequence[int]) -> list[str]:
    return [g.name(v) for v in vs]
