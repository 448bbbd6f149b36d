"""The presentation of IG(B) as a reduction system on generator words.

Words are tuples of element indices; the letter ``i`` stands for the
generator of element ``i``.  A contraction replaces a basic pair ``e f`` by
``ef``; an expansion is the reverse move.  Certificates are replayable
sequences of such moves.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .band import Band, BandError

Word = Tuple[int, ...]

CONTRACT = "C"
EXPAND = "E"


class InvalidStep(ValueError):
    pass


def parse_word(b: Band, text: str) -> Word:
    names = text.split()
    if not names:
        raise BandError("empty word")
    return tuple(b.index(x) for x in names)


def format_word(b: Band, w: Sequence[int]) -> str:
    return " ".join(b.name(x) for x in w)


def check_word(b: Band, w: Sequence[int]) -> Word:
    w = tuple(w)
    if not w:
        raise ValueError("words are non-empty")
    n = len(b)
    for x in w:
        if not 0 <= x < n:
            raise ValueError(f"letter {x} out of range")
    return w


@dataclass(frozen=True)
class RewriteStep:
    position: int
    direction: str
    pair: Tuple[int, int]
    product: int

    def inverse(self) -> "RewriteStep":
        other = EXPAND if self.direction == CONTRACT else CONTRACT
        return RewriteStep(self.position, other, self.pair, self.product)


@dataclass(frozen=True)
class RewriteCertificate:
    start: Word
    steps: Tuple[RewriteStep, ...]
    end: Word

    def __len__(self):
        return len(self.steps)

    def inverse(self) -> "RewriteCertificate":
        return RewriteCertificate(
            self.end, tuple(s.inverse() for s in reversed(self.steps)), self.start
        )

    def then(self, other: "RewriteCertificate") -> "RewriteCertificate":
        if self.end != other.start:
            raise ValueError("certificates do not compose")
        return RewriteCertificate(self.start, self.steps + other.steps, other.end)

    def shifted(self, prefix: Word = (), suffix: Word = ()) -> "RewriteCertificate":
        """The same derivation performed inside ``prefix + . + suffix``."""
        k = len(prefix)
        steps = tuple(
            RewriteStep(s.position + k, s.direction, s.pair, s.product) for s in self.steps
        )
        return RewriteCertificate(prefix + self.start + suffix, steps, prefix + self.end + suffix)


def trivial_certificate(w: Word) -> RewriteCertificate:
    return RewriteCertificate(w, (), w)


def apply_step(b: Band, w: Word, step: RewriteStep) -> Word:
    p = step.position
    u, v = step.pair
    n = len(b)
    if not (0 <= u < n and 0 <= v < n):
        raise InvalidStep("pair out of range")
    if b.basic_product[u][v] != step.product:
        raise InvalidStep(f"({u}, {v}) is not a basic pair with product {step.product}")
    if step.direction == CONTRACT:
        if not 0 <= p < len(w) - 1 or (w[p], w[p + 1]) != (u, v):
            raise InvalidStep(f"no redex {u} {v} at position {p}")
        return w[:p] + (step.product,) + w[p + 2:]
    if step.direction == EXPAND:
        if not 0 <= p < len(w) or w[p] != step.product:
            raise InvalidStep(f"letter at position {p} is not {step.product}")
        return w[:p] + (u, v) + w[p + 1:]
    raise InvalidStep(f"unknown direction {step.direction!r}")


def check_certificate(b: Band, c: RewriteCertificate) -> bool:
    try:
        w = check_word(b, c.start)
        for step in c.steps:
            w = apply_step(b, w, step)
    except ValueError:
        return False
    return w == tuple(c.end)


class Derivation:
    """A word together with the validated moves that produced it."""

    def __init__(self, b: Band, word: Sequence[int]):
        self.band = b
        self.start: Word = tuple(word)
        self.word: List[int] = list(word)
        self.steps: List[RewriteStep] = []

    def __len__(self):
        return len(self.word)

    def apply(self, step: RewriteStep) -> None:
        self.word = list(apply_step(self.band, tuple(self.word), step))
        self.steps.append(step)

    def contract(self, pos: int) -> None:
        u, v = self.word[pos], self.word[pos + 1]
        self.apply(RewriteStep(pos, CONTRACT, (u, v), self.band.basic_product[u][v]))

    def expand(self, pos: int, u: int, v: int) -> None:
        self.apply(RewriteStep(pos, EXPAND, (u, v), self.band.basic_product[u][v]))

    def push_left(self, pos: int) -> None:
        """x y -> (xyx) y where y lies in a class below that of x."""
        t = self.band.table
        x, y = self.word[pos], self.word[pos + 1]
        if t[t[x][y]][x] == x:
            return
        yx = t[y][x]
        self.expand(pos + 1, yx, y)
        self.contract(pos)

    def push_right(self, pos: int) -> None:
        """y x -> y (xyx) where y lies in a class below that of x."""
        t = self.band.table
        y, x = self.word[pos], self.word[pos + 1]
        if t[t[x][y]][x] == x:
            return
        xy = t[x][y]
        self.expand(pos, y, xy)
        self.contract(pos + 1)

    def contract_region(self, lo: int, hi: int) -> int:
        """Leftmost-first contraction inside ``word[lo:hi]``; returns new ``hi``."""
        bp = self.band.basic_product
        i = lo
        while i < hi - 1:
            if bp[self.word[i]][self.word[i + 1]] >= 0:
                self.contract(i)
                hi -= 1
                i = max(i - 1, lo)
            else:
                i += 1
        return hi

    def certificate(self) -> RewriteCertificate:
        return RewriteCertificate(self.start, tuple(self.steps), tuple(self.word))


# ---------------------------------------------------------------------------
# single moves


def contract(b: Band, w: Word, pos: int) -> Optional[Word]:
    if not 0 <= pos < len(w) - 1:
        raise IndexError(f"position {pos} out of range for a word of length {len(w)}")
    p = b.basic_product[w[pos]][w[pos + 1]]
    if p < 0:
        return None
    return w[:pos] + (p,) + w[pos + 2:]


def expansions(b: Band, w: Word, pos: int) -> Set[Word]:
    if not 0 <= pos < len(w):
        raise IndexError(f"position {pos} out of range for a word of length {len(w)}")
    head, tail = w[:pos], w[pos + 1:]
    return {head + uv + tail for uv in b.factorizations[w[pos]]}


def neighbours(b: Band, w: Word, max_len: int) -> Iterator[Tuple[RewriteStep, Word]]:
    """All single moves from ``w`` that keep the length at most ``max_len``."""
    bp = b.basic_product
    for i in range(len(w) - 1):
        p = bp[w[i]][w[i + 1]]
        if p >= 0:
            yield RewriteStep(i, CONTRACT, (w[i], w[i + 1]), p), w[:i] + (p,) + w[i + 2:]
    if len(w) < max_len:
        fac = b.factorizations
        for i, g in enumerate(w):
            head, tail = w[:i], w[i + 1:]
            for uv in fac[g]:
                yield RewriteStep(i, EXPAND, uv, g), head + uv + tail


def _neighbour_words(b: Band, w: Word, max_len: int) -> Iterator[Word]:
    """Like :func:`neighbours` but yields only the words (the search hot path)."""
    bp = b.basic_product
    n = len(w)
    for i in range(n - 1):
        p = bp[w[i]][w[i + 1]]
        if p >= 0:
            yield w[:i] + (p,) + w[i + 2:]
    if n < max_len:
        fac = b.factorizations
        for i in range(n):
            head, tail = w[:i], w[i + 1:]
            for uv in fac[w[i]]:
                yield head + uv + tail


def _step_between(b: Band, w: Word, nw: Word) -> RewriteStep:
    """Recover a single move taking ``w`` to ``nw``."""
    bp = b.basic_product
    if len(nw) == len(w) - 1:
        for i in range(len(w) - 1):
            if w[:i] == nw[:i] and w[i + 2:] == nw[i + 1:] and bp[w[i]][w[i + 1]] == nw[i]:
                return RewriteStep(i, CONTRACT, (w[i], w[i + 1]), nw[i])
    elif len(nw) == len(w) + 1:
        for i in range(len(w)):
            if nw[:i] == w[:i] and nw[i + 2:] == w[i + 1:] and bp[nw[i]][nw[i + 1]] == w[i]:
                return RewriteStep(i, EXPAND, (nw[i], nw[i + 1]), w[i])
    raise InvalidStep("words are not one move apart")


def normal_form(b: Band, w: Sequence[int]) -> Tuple[Word, RewriteCertificate]:
    """Leftmost-first contraction to an irreducible word."""
    der = Derivation(b, check_word(b, w))
    der.contract_region(0, len(der))
    cert = der.certificate()
    return cert.end, cert


def is_irreducible(b: Band, w: Word) -> bool:
    bp = b.basic_product
    return all(bp[w[i]][w[i + 1]] < 0 for i in range(len(w) - 1))


def irreducible_descendants(b: Band, w: Word, _memo: Optional[Dict[Word, frozenset]] = None) -> frozenset:
    """Every irreducible word reachable from ``w`` by contractions."""
    memo = {} if _memo is None else _memo
    if w in memo:
        return memo[w]
    out: Set[Word] = set()
    reducible = False
    for i in range(len(w) - 1):
        nxt = contract(b, w, i)
        if nxt is not None:
            reducible = True
            out |= irreducible_descendants(b, nxt, memo)
    res = frozenset(out) if reducible else frozenset([w])
    memo[w] = res
    return res


# ---------------------------------------------------------------------------
# local confluence


@dataclass(frozen=True)
class CriticalPair:
    word: Word
    left: Word
    right: Word


@dataclass(frozen=True)
class ConfluenceReport:
    verdict: str  # "locally-confluent" | "counterexample"
    counterexample: Optional[CriticalPair] = None
    counterexamples: Tuple[CriticalPair, ...] = field(default=(), compare=False)
    checked: int = 0

    @property
    def confluent(self) -> bool:
        return self.verdict == "locally-confluent"


def check_local_confluence(b: Band) -> ConfluenceReport:
    bp = b.basic_product
    n = len(b)
    memo: Dict[Word, frozenset] = {}
    bad: List[CriticalPair] = []
    checked = 0
    for e, f, g in itertools.product(range(n), repeat=3):
        ef, fg = bp[e][f], bp[f][g]
        if ef < 0 or fg < 0:
            continue
        checked += 1
        x, y = (ef, g), (e, fg)
        nx = irreducible_descendants(b, x, memo)
        ny = irreducible_descendants(b, y, memo)
        if nx & ny:
            continue
        left = normal_form(b, x)[0]
        right = normal_form(b, y)[0]
        bad.append(CriticalPair((e, f, g), left, right))
    if bad:
        return ConfluenceReport("counterexample", bad[0], tuple(bad), checked)
    return ConfluenceReport("locally-confluent", None, (), checked)


# ---------------------------------------------------------------------------
# bounded breadth-first equality oracle

EQUAL = "equal"
DISTINCT = "distinct-within-budget"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Budget:
    max_len: Optional[int] = None  # default: longest input + 4
    max_states: int = 100_000

    def length_for(self, *words: Sequence[int]) -> int:
        longest = max(len(w) for w in words)
        if self.max_len is None:
            return longest + 4
        if self.max_len < longest:
            raise ValueError(f"max_len {self.max_len} is below the input length {longest}")
        return self.max_len


@dataclass(frozen=True)
class BfsResult:
    status: str
    certificate: Optional[RewriteCertificate] = None
    states: int = 0

    @property
    def equal(self) -> bool:
        return self.status == EQUAL

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE


def _path_to(b: Band, parents: Dict[Word, Optional[Word]], w: Word) -> List[RewriteStep]:
    chain = [w]
    while parents[chain[-1]] is not None:
        chain.append(parents[chain[-1]])
    chain.reverse()
    return [_step_between(b, x, y) for x, y in zip(chain, chain[1:])]


def bfs_equal(b: Band, w1: Sequence[int], w2: Sequence[int], budget: Optional[Budget] = None) -> BfsResult:
    """Search the congruence closure of ``w1`` for ``w2``.

    Both ends are grown breadth first (the smaller frontier first); since
    every move is invertible this explores the same component.  Words longer
    than ``max_len`` are never visited.
    """
    budget = budget or Budget()
    w1, w2 = check_word(b, w1), check_word(b, w2)
    max_len = budget.length_for(w1, w2)
    if w1 == w2:
        return BfsResult(EQUAL, trivial_certificate(w1), 1)

    parents: List[Dict[Word, Optional[Word]]] = [{w1: None}, {w2: None}]
    frontier: List[List[Word]] = [[w1], [w2]]
    states = 2
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, theirs = parents[side], parents[1 - side]
        nxt: List[Word] = []
        for w in frontier[side]:
            for nw in _neighbour_words(b, w, max_len):
                if nw in mine:
                    continue
                mine[nw] = w
                if nw in theirs:
                    fwd = _path_to(b, parents[0], nw)
                    back = [s.inverse() for s in reversed(_path_to(b, parents[1], nw))]
                    cert = RewriteCertificate(w1, tuple(fwd + back), w2)
                    return BfsResult(EQUAL, cert, states + 1)
                nxt.append(nw)
                states += 1
                if states >= budget.max_states:
                    return BfsResult(INCONCLUSIVE, None, states)
        frontier[side] = nxt
    return BfsResult(DISTINCT, None, states)


@dataclass
class Closure:
    """The part of the congruence class of ``root`` made of short words."""

    band: Band
    root: Word
    max_len: int
    parents: Dict[Word, Optional[Word]]
    complete: bool

    def __contains__(self, w) -> bool:
        return tuple(w) in self.parents

    def __len__(self):
        return len(self.parents)

    @property
    def words(self):
        return self.parents.keys()

    def certificate_to(self, w: Word) -> RewriteCertificate:
        return RewriteCertificate(self.root, tuple(_path_to(self.band, self.parents, w)), w)

    def certificate_between(self, w1: Word, w2: Word) -> RewriteCertificate:
        return self.certificate_to(w1).inverse().then(self.certificate_to(w2))


def closure(b: Band, w: Sequence[int], max_len: int, max_states: int = 100_000) -> Closure:
    root = check_word(b, w)
    if len(root) > max_len:
        raise ValueError("root longer than max_len")
    parents: Dict[Word, Optional[Word]] = {root: None}
    queue = deque([root])
    while queue:
        cur = queue.popleft()
        for nw in _neighbour_words(b, cur, max_len):
            if nw not in parents:
                parents[nw] = cur
                if len(parents) >= max_states:
                    return Closure(b, root, max_len, parents, False)
                queue.append(nw)
    return Closure(b, root, max_len, parents, True)


class ClosureCache:
    """Memoised closures; words inside a complete closure share it."""

    def __init__(self, b: Band, max_states: int = 100_000):
        self.band = b
        self.max_states = max_states
        self._by_word: Dict[Tuple[Word, int], Closure] = {}

    def get(self, w: Sequence[int], max_len: int) -> Closure:
        w = tuple(w)
        key = (w, max_len)
        c = self._by_word.get(key)
        if c is None:
            c = closure(self.band, w, max_len, self.max_states)
            if c.complete:
                for x in c.words:
                    self._by_word[(x, max_len)] = c
            else:
                self._by_word[key] = c
        return c

    def status(self, w1: Sequence[int], w2: Sequence[int], max_len: int) -> str:
        c = self.get(w1, max_len)
        if tuple(w2) in c:
            return EQUAL
        return DISTINCT if c.complete else INCONCLUSIVE


# ---------------------------------------------------------------------------
# certificate text format


def format_certificate(b: Band, c: RewriteCertificate) -> str:
    nm = b.name
    lines = [f"start: {format_word(b, c.start)}"]
    for s in c.steps:
        u, v = s.pair
        if s.direction == CONTRACT:
            lines.append(f"{s.position} C {nm(u)} {nm(v)} -> {nm(s.product)}")
        else:
            lines.append(f"{s.position} E {nm(s.product)} -> {nm(u)} {nm(v)}")
    lines.append(f"end: {format_word(b, c.end)}")
    return "\n".join(lines) + "\n"


def parse_certificate(b: Band, text: str) -> RewriteCertificate:
    start = end = None
    steps: List[RewriteStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("start:"):
            start = parse_word(b, line[len("start:"):])
        elif line.startswith("end:"):
            end = parse_word(b, line[len("end:"):])
        else:
            toks = line.split()
            try:
                pos, kind = int(toks[0]), toks[1]
                if kind == CONTRACT and len(toks) == 6 and toks[4] == "->":
                    u, v, p = (b.index(x) for x in (toks[2], toks[3], toks[5]))
                elif kind == EXPAND and len(toks) == 6 and toks[3] == "->":
                    p, u, v = (b.index(x) for x in (toks[2], toks[4], toks[5]))
                else:
                    raise ValueError
            except (ValueError, IndexError):
                raise ValueError(f"line {lineno}: malformed step {line!r}") from None
            steps.append(RewriteStep(pos, kind, (u, v), p))
    if start is None or end is None:
        raise ValueError("certificate needs start: and end: lines")
    return RewriteCertificate(start, tuple(steps), end)
