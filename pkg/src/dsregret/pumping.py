"""Values of long histories, cycle pumping and exact-length reachability.

Pumped paths ``alpha . beta^k . gamma`` are valued by the geometric closed
form, so ``k`` can be astronomically large.  When ``lambda^k`` is too big to
write down as a rational, values are kept as :class:`PowerSum` objects: finite
sums ``sum c_i lambda^e_i`` with big-integer exponents that still support exact
arithmetic and sign tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .core import INF, Game, History, Lasso, SwitchingStrategy, ValidationError

EXPAND_LIMIT = 1 << 16  # largest exponent we materialize as a rational
CLUSTER_GAP = 4096


# --------------------------------------------------------------------------
# exact sums of powers of lambda


class PowerSum:
    """``sum(c * lam**e for e, c in terms)`` with exact coefficients."""

    __slots__ = ("lam", "terms")

    def __init__(self, lam, terms=None):
        self.lam = Fraction(lam)
        self.terms: dict[int, Fraction] = {}
        for e, c in (terms or {}).items():
            if c:
                self.terms[e] = self.terms.get(e, 0) + Fraction(c)
        self.terms = {e: c for e, c in self.terms.items() if c}

    @classmethod
    def const(cls, lam, c) -> "PowerSum":
        return cls(lam, {0: c})

    def _lift(self, other) -> "PowerSum":
        if isinstance(other, PowerSum):
            if other.lam != self.lam:
                raise ValueError("mixing different discount factors")
            return other
        return PowerSum.const(self.lam, other)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return PowerSum(self.lam, terms)

    __radd__ = __add__

    def __neg__(self):
        return PowerSum(self.lam, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, c):
        if isinstance(c, PowerSum):
            return NotImplemented
        return PowerSum(self.lam, {e: x * c for e, x in self.terms.items()})

    __rmul__ = __mul__

    def shift(self, k: int) -> "PowerSum":
        """Multiply by ``lam**k``."""
        return PowerSum(self.lam, {e + k: c for e, c in self.terms.items()})

    @property
    def max_exponent(self) -> int:
        return max(self.terms, default=0)

    def is_small(self, limit: int = EXPAND_LIMIT) -> bool:
        return self.max_exponent <= limit

    def exact(self) -> Fraction:
        if not self.is_small():
            raise OverflowError("exponent too large to expand")
        return sum((c * self.lam**e for e, c in self.terms.items()), Fraction(0))

    def sign(self) -> int:
        """Exact sign, by separating clusters of nearby exponents.

        A cluster is dominant when it outweighs everything after it even at the
        smallest possible gap; otherwise :class:`ArithmeticError` is raised.
        """
        items = sorted(self.terms.items())
        clusters: list[list[tuple[int, Fraction]]] = []
        for e, c in items:
            if clusters and e - clusters[-1][-1][0] <= CLUSTER_GAP:
                clusters[-1].append((e, c))
            else:
                clusters.append([(e, c)])
        for idx, cl in enumerate(clusters):
            base = cl[0][0]
            head = sum(c * self.lam ** (e - base) for e, c in cl)
            rest = clusters[idx + 1:]
            if not rest:
                return (head > 0) - (head < 0)
            if head == 0:
                continue
            bound = sum(abs(c) for r in rest for _, c in r) * self.lam ** (CLUSTER_GAP + 1)
            if abs(head) > bound:
                return 1 if head > 0 else -1
            raise ArithmeticError("cannot separate the terms of this power sum")
        return 0

    def _cmp(self, other) -> int:
        return (self - self._lift(other)).sign()

    def __eq__(self, other):
        if not isinstance(other, (PowerSum, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"({c})*lam^{e}" for e, c in sorted(self.terms.items())) or "0"
        return f"PowerSum[{self.lam}]({body})"


def _collapse(x: PowerSum, limit: int):
    return x.exact() if x.is_small(limit) else x


# --------------------------------------------------------------------------
# succinct paths


@dataclass(frozen=True)
class PumpedPath:
    """``alpha . beta^k . gamma``; ``beta`` is ``None`` only when ``k == 0``."""

    alpha: History
    beta: History | None
    k: int
    gamma: History

    def __post_init__(self):
        if self.k < 0:
            raise ValidationError("negative pump count")
        if self.beta is None:
            if self.k != 0:
                raise ValidationError("a pumped path without a cycle needs k = 0")
            if self.alpha.last != self.gamma.first:
                raise ValidationError("alpha must end where gamma starts")
            return
        if not self.beta.is_cycle():
            raise ValidationError("beta must be a cycle of length >= 1")
        if self.alpha.last != self.beta.first or self.beta.last != self.gamma.first:
            raise ValidationError("pieces do not connect")

    def __len__(self) -> int:
        return len(self.alpha) + (len(self.beta) * self.k if self.beta else 0) + len(self.gamma)

    @property
    def first(self) -> int:
        return self.alpha.first

    @property
    def last(self) -> int:
        return self.gamma.last

    def unroll(self) -> History:
        h = self.alpha
        if self.beta is not None and self.k:
            h = h + self.beta.repeat(self.k)
        return h + self.gamma

    def render(self, game: Game) -> str:
        beta = self.beta.render(game) if self.beta is not None else "-"
        return f"{self.alpha.render(game)} | {beta} ^ {self.k} | {self.gamma.render(game)}"


@dataclass(frozen=True)
class SCD:
    """``paths[0] . beta_1^k_1 . paths[1] ... beta_n^k_n . paths[n]``."""

    paths: tuple[History, ...]
    cycles: tuple[tuple[History, int], ...]

    def __post_init__(self):
        if len(self.paths) != len(self.cycles) + 1:
            raise ValidationError("an SCD has one more path than cycles")
        for j, (beta, k) in enumerate(self.cycles):
            if not beta.is_simple_cycle():
                raise ValidationError("SCD cycles must be simple")
            if k < 1:
                raise ValidationError("SCD multiplicities must be positive")
            if self.paths[j].last != beta.first or beta.first != self.paths[j + 1].first:
                raise ValidationError("SCD pieces do not connect")

    def __len__(self) -> int:
        return sum(len(a) for a in self.paths) + sum(len(b) * k for b, k in self.cycles)

    def unroll(self) -> History:
        h = self.paths[0]
        for (beta, k), a in zip(self.cycles, self.paths[1:]):
            h = h + beta.repeat(k) + a
        return h


# --------------------------------------------------------------------------
# values


def val_history(g: Game, h: History) -> Fraction:
    total = Fraction(0)
    disc = Fraction(1)
    for a, b in zip(h.vertices, h.vertices[1:]):
        total += disc * g.weight(a, b)
        disc *= g.lam
    return total


def val_lasso(g: Game, l: Lasso) -> Fraction:
    loop = val_history(g, l.beta) / (1 - g.lam ** len(l.beta))
    return val_history(g, l.alpha) + g.lam ** len(l.alpha) * loop


def _pumped_sum(g: Game, p: PumpedPath) -> PowerSum:
    lam = g.lam
    a = len(p.alpha)
    out = PowerSum.const(lam, val_history(g, p.alpha))
    if p.beta is None or p.k == 0:
        return out + PowerSum.const(lam, val_history(g, p.gamma)).shift(a)
    b = len(p.beta)
    loop = val_history(g, p.beta) / (1 - lam**b)
    out = out + PowerSum.const(lam, loop).shift(a)
    tail = PowerSum.const(lam, val_history(g, p.gamma) - loop).shift(a + b * p.k)
    return out + tail


def val_pumped(g: Game, p: PumpedPath, limit: int = EXPAND_LIMIT):
    """Closed-form value of ``alpha . beta^k . gamma``.

    A :class:`Fraction` when ``lambda^(|alpha| + |beta| k)`` has at most
    ``limit`` factors, otherwise the exact value as a :class:`PowerSum`.
    """
    return _collapse(_pumped_sum(g, p), limit)


def scd_value(g: Game, d: SCD, limit: int = EXPAND_LIMIT):
    lam = g.lam
    total = PowerSum.const(lam, val_history(g, d.paths[0]))
    offset = len(d.paths[0])
    for (beta, k), a in zip(d.cycles, d.paths[1:]):
        piece = PumpedPath(History((beta.first,)), beta, k, a)
        total = total + _pumped_sum(g, piece).shift(offset)
        offset += len(beta) * k + len(a)
    return _collapse(total, limit)


# --------------------------------------------------------------------------
# replacing and compressing cycles


def replace_cycle(g: Game, h: History, split: tuple[History, History, History]) -> History:
    """Given ``h = alpha . beta . gamma`` with ``alpha``, ``gamma`` cycles of equal
    length, return the cheaper of ``alpha^2 . beta`` and ``beta . gamma^2``."""
    alpha, beta, gamma = split
    if not (alpha.is_cycle() and gamma.is_cycle()):
        raise ValidationError("alpha and gamma must be cycles")
    if len(alpha) != len(gamma):
        raise ValidationError("alpha and gamma must have the same length")
    try:
        whole = alpha + beta + gamma
    except ValidationError:
        raise ValidationError("split pieces do not connect") from None
    if whole != h:
        raise ValidationError("split does not concatenate to the history")
    left = alpha.repeat(2) + beta
    right = beta + gamma.repeat(2)
    return left if val_history(g, left) <= val_history(g, right) else right


def decompose(h: History) -> SCD:
    """Greedy SCD of ``h`` with simple paths.

    Vertices are pushed on the current segment; when a vertex repeats, the
    cycle it closes is popped, and equal cycles separated only by a trivial path
    are merged into one multiplicity.
    """
    paths: list[History] = []
    cycles: list[tuple[History, int]] = []
    seg = [h.first]
    for x in h.vertices[1:]:
        if x in seg:
            p = seg.index(x)
            beta = History(tuple(seg[p:]) + (x,))
            alpha = History(tuple(seg[: p + 1]))
            if cycles and cycles[-1][0] == beta and len(alpha) == 0:
                cycles[-1] = (beta, cycles[-1][1] + 1)
            else:
                paths.append(alpha)
                cycles.append((beta, 1))
            seg = [x]
        else:
            seg.append(x)
    paths.append(History(tuple(seg)))
    return SCD(tuple(paths), tuple(cycles))


def _normalize(paths: list[History], cycles: list[tuple[History, int]]):
    """Drop empty cycles, re-split non-simple paths, merge repeated cycles."""
    changed = True
    while changed:
        changed = False
        for j, (beta, k) in enumerate(cycles):
            if k == 0:
                merged = paths[j] + paths[j + 1]
                sub = decompose(merged)
                paths[j : j + 2] = list(sub.paths)
                cycles[j : j + 1] = list(sub.cycles)
                changed = True
                break
        if changed:
            continue
        for j in range(len(paths)):
            if not paths[j].is_simple_path():
                sub = decompose(paths[j])
                paths[j : j + 1] = list(sub.paths)
                cycles[j:j] = list(sub.cycles)
                changed = True
                break
        if changed:
            continue
        for j in range(1, len(cycles)):
            if cycles[j - 1][0] == cycles[j][0] and len(paths[j]) == 0:
                cycles[j - 1] = (cycles[j - 1][0], cycles[j - 1][1] + cycles[j][1])
                del cycles[j]
                del paths[j]
                changed = True
                break


def _transfer(g: Game, paths, cycles, j: int, jj: int):
    """Move whole blocks of equal length between cycles ``j < jj``.

    With ``L = |beta_j|``, ``L' = |beta_jj|`` the blocks are ``beta_j^(L'/g)`` and
    ``beta_jj^(L/g)``.  The value is monotone in how many blocks sit on each
    side, so only the two extremes need comparing; ties favor ``j``.
    """
    (b1, k1), (b2, k2) = cycles[j], cycles[jj]
    l1, l2 = len(b1), len(b2)
    g_ = gcd(l1, l2)
    x, y = l2 // g_, l1 // g_  # repetitions of b1, b2 per block
    n1, r1 = divmod(k1, x)
    n2, r2 = divmod(k2, y)
    blocks = n1 + n2
    options = [(r1 + blocks * x, r2), (r1, r2 + blocks * y)]
    best = None
    for a, b in options:
        trial = list(cycles)
        trial[j] = (b1, a)
        trial[jj] = (b2, b)
        v = _value(g, paths, trial)
        if best is None or v < best[0]:
            best = (v, trial)
    cycles[:] = best[1]


def _value(g: Game, paths, cycles) -> Fraction:
    lam = g.lam
    total = val_history(g, paths[0])
    disc = lam ** len(paths[0])
    for (beta, k), a in zip(cycles, paths[1:]):
        if k:
            lb = len(beta)
            total += disc * val_history(g, beta) * (1 - lam ** (lb * k)) / (1 - lam**lb)
            disc *= lam ** (lb * k)
        total += disc * val_history(g, a)
        disc *= lam ** len(a)
    return total


def compress_history(g: Game, h: History) -> PumpedPath:
    """A history ``alpha . beta^k . gamma`` with the endpoints and length of ``h``,
    no larger value, ``beta`` a simple cycle and ``|alpha beta gamma| <= 4|V|^3``.

    Returns ``beta = None`` (and ``k = 0``) when ``h`` contains no cycle.
    """
    n = g.n
    d = decompose(h)
    paths, cycles = list(d.paths), list(d.cycles)
    for _ in range(8 * len(h) + 16):
        pair = None
        if len(cycles) > n:
            seen: dict[int, int] = {}
            for jj, (beta, _) in enumerate(cycles):
                if len(beta) in seen:
                    pair = (seen[len(beta)], jj)
                    break
                seen[len(beta)] = jj
        else:
            big = [j for j, (_, k) in enumerate(cycles) if k > n]
            if len(big) >= 2:
                pair = (big[0], big[1])
        if pair is None:
            break
        _transfer(g, paths, cycles, *pair)
        _normalize(paths, cycles)
    else:
        raise RuntimeError("cycle compression did not converge")

    if not cycles:
        return PumpedPath(paths[0], None, 0, History((h.last,)))
    j = max(range(len(cycles)), key=lambda i: (cycles[i][1], -i))
    head = SCD(tuple(paths[: j + 1]), tuple(cycles[:j])).unroll()
    tail = SCD(tuple(paths[j + 1 :]), tuple(cycles[j + 1 :])).unroll()
    beta, k = cycles[j]
    return PumpedPath(head, beta, k, tail)


# --------------------------------------------------------------------------
# exact-length histories of a switching strategy


def _mat_mul(a: list[int], b: list[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        while row:
            low = row & -row
            acc |= b[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return out


def _apply(vec: int, m: list[int]) -> int:
    acc = 0
    while vec:
        low = vec & -vec
        acc |= m[low.bit_length() - 1]
        vec ^= low
    return acc


def _advance(vec: int, m: list[int], steps: int) -> int:
    while steps:
        if steps & 1:
            vec = _apply(vec, m)
        steps >>= 1
        if steps:
            m = _mat_mul(m, m)
    return vec


def reachable_after(g: Game, s: SwitchingStrategy, n: int) -> set[tuple[int, bool]]:
    """``(vertex, switched)`` pairs ending some consistent history of length ``n``.

    States are numbered ``2v + switched``; the step matrix only depends on
    which Eve vertices trigger at the arrival index, and that set is constant
    between consecutive finite thresholds.
    """
    def trig(v, step):
        return g.is_eve(v) and s.t[v] <= step

    def matrix(step):
        rows = []
        for st in range(2 * g.n):
            u, sw = divmod(st, 2)
            if g.is_eve(u):
                targets = [(s.sigma2 if sw else s.sigma1)[u]]
            else:
                targets = g.successors(u)
            row = 0
            for x in targets:
                row |= 1 << (2 * x + int(sw or trig(x, step)))
            rows.append(row)
        return rows

    vec = 1 << (2 * g.init + int(trig(g.init, 0)))
    done = 0
    bounds = sorted({x for x in s.t.values() if x != INF and 1 <= x <= n} | {n + 1})
    for b in bounds:
        # steps arriving at indices done+1 .. b-1 share a trigger set
        length = b - 1 - done
        if length > 0:
            vec = _advance(vec, matrix(done + 1), length)
            done += length
        if done < n:
            vec = _apply(vec, matrix(done + 1))
            done += 1
    return {(st // 2, bool(st % 2)) for st in range(2 * g.n) if vec >> st & 1}


def history_exists(
    g: Game, s: SwitchingStrategy, n: int, switched: bool, v: int, v2: int
) -> bool:
    """Is there a history of length ``n`` consistent with ``s``, switched iff
    ``switched``, ending at Eve vertex ``v`` where ``s`` plays ``v2``?"""
    if not g.is_eve(v):
        raise ValidationError(f"{g.name(v)} is not an Eve vertex")
    if not g.has_edge(v, v2):
        raise ValidationError(f"{g.name(v)} -> {g.name(v2)} is not an edge")
    if n < 0:
        raise ValidationError("history length must be non-negative")
    if (s.sigma2 if switched else s.sigma1)[v] != v2:
        return False
    return (v, switched) in reachable_after(g, s, n)
