"""Acceptance criteria, one test each, with their time limits.

Every test records a PASS/FAIL line; the lines are printed together in the
terminal summary (see conftest.py) and also echoed as each test finishes.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from igband.band import build_strong_semilattice, classify, parse_strong_semilattice, restrict, structure_morphisms
from igband.bundled import BUNDLED, load
from igband.decide import EQUAL, NOT_EQUAL, equal, equal_locally_large, equal_normal_component, equal_rectangular, equal_semilattice
from igband.greens import (
    PAIR,
    SINGLE,
    L,
    R,
    falsify_condition_p,
    make_witness,
    search_nonabundance,
    tilde_related,
    verify_nonabundance,
)
from igband.igword import LTR, RTL, anf, check_anf, significant_indices
from igband.rewrite import Budget, ClosureCache, bfs_equal, check_certificate, check_local_confluence, parse_word

RESULTS: list = []

# Oracle budget for the agreement suite: two letters of slack over the longer input.
AGREEMENT_SLACK = 2
AGREEMENT_STATES = 20_000


class Criterion:
    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        self.notes = []
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = f"{detail}; {exc_type.__name__}: {exc}".lstrip("; ")
        elif elapsed >= self.limit:
            detail = f"{detail}; over the {self.limit:g}s limit".lstrip("; ")
        line = f"criterion {self.number:>2} {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s < {self.limit:g}s?) {self.title}"
        if detail:
            line += f" -- {detail}"
        RESULTS.append(line)
        print("\n" + line)
        if exc_type is None and not ok:
            pytest.fail(line)
        return False


def W(b, text):
    return parse_word(b, text)


def rect(rows, cols):
    names = " ".join(f"r{i}c{j}" for i in range(rows) for j in range(cols))
    return build_strong_semilattice(
        parse_strong_semilattice(f"component top: rows={rows} cols={cols} names={names}\n")
    )


def test_criterion_01_y3_nonregular():
    b, _ = load("y3")
    e, f = b.index("e"), b.index("f")
    with Criterion(1, "(e f)^n w (e f)^n != (e f)^n for |w| <= 8, n = 1..3", 5.0) as c:
        bad = 0
        checked = 0
        for n in (1, 2, 3):
            p = (e, f) * n
            for k in range(1, 9):
                for w in itertools.product(range(3), repeat=k):
                    checked += 1
                    if equal_semilattice(b, p + w + p, p).verdict != NOT_EQUAL:
                        bad += 1
        c.notes.append(f"{checked} products, {bad} counterexamples")
        assert bad == 0


def test_criterion_02_confluence():
    with Criterion(2, "local confluence verdicts", 1.0) as c:
        assert check_local_confluence(load("y3")[0]).confluent
        for r, k in itertools.product((1, 2, 3), repeat=2):
            assert check_local_confluence(rect(r, k)).confluent, (r, k)
        b = load("normal5")[0]
        rep = check_local_confluence(b)
        assert not rep.confluent
        assert rep.counterexample.word == W(b, "c a d")
        assert {rep.counterexample.left, rep.counterexample.right} == {W(b, "b d"), W(b, "c d")}
        c.notes.append("y3 and 9 rectangular bands confluent; normal5: c a d -> b d / c d")


def test_criterion_03_band4_nonabundance():
    b, d = load("band4")
    with Criterion(3, "band4 pair witness verified and rediscovered", 1.0) as c:
        w = make_witness(b, W(b, "a b"), W(b, "x"), W(b, "y"), d=d)
        assert w is not None and verify_nonabundance(b, w, d=d)
        found = search_nonabundance(b, W(b, "a b"), max_length=1, d=d)
        assert found is not None and found.kind == PAIR
        assert (found.x, found.y) == (W(b, "x"), W(b, "y"))
        c.notes.append("search returns (x, y) at length 1")


def test_criterion_04_projection_counterexample():
    b, d = load("nonnormal5")
    with Criterion(4, "nonnormal5: u' w = w' in IG(B) but not in IG(B_beta)", 1.0) as c:
        v = equal(b, W(b, "u' w"), W(b, "w'"), d=d)
        assert v.verdict == EQUAL and check_certificate(b, v.evidence)
        assert len(v.evidence) <= 6
        comp = restrict(b, d.classes[d.class_of[b.index("w'")]])
        assert equal_rectangular(comp, W(comp, "u' w"), W(comp, "w'")).verdict == NOT_EQUAL
        c.notes.append(f"certificate of {len(v.evidence)} steps")


def test_criterion_05_normal10_nonabundance():
    b, d = load("normal10")
    with Criterion(5, "normal10: e v = e h e v, e h e != e, witness e h", 2.0) as c:
        res = bfs_equal(b, W(b, "e v"), W(b, "e h e v"))
        assert res.equal and check_certificate(b, res.certificate) and len(res.certificate) <= 8
        assert equal_normal_component(b, d, None, W(b, "e h e"), W(b, "e")).verdict == NOT_EQUAL
        w = make_witness(b, W(b, "e v"), W(b, "e h"), d=d)
        assert w is not None and w.kind == SINGLE and verify_nonabundance(b, w, d=d)
        c.notes.append(f"certificate of {len(res.certificate)} steps")


def test_criterion_06_normal5_derivation():
    b, _ = load("normal5")
    with Criterion(6, "normal5: c d = b d within length 4", 1.0) as c:
        res = bfs_equal(b, W(b, "c d"), W(b, "b d"), Budget(max_len=4))
        assert res.equal and check_certificate(b, res.certificate)
        c.notes.append(f"{len(res.certificate)} steps")


def _agreement(b, d, decider, pairs, tally):
    cache = ClosureCache(b, AGREEMENT_STATES)
    for w1, w2 in pairs:
        v = decider(w1, w2)
        status = cache.status(w1, w2, max(len(w1), len(w2)) + AGREEMENT_SLACK)
        if status == "inconclusive":
            tally["inconclusive"] += 1
            continue
        tally["compared"] += 1
        if (v.verdict == EQUAL) != (status == "equal"):
            tally["disagree"] += 1


def test_criterion_07_decider_oracle_agreement():
    rng = random.Random(0)
    tally = {"compared": 0, "inconclusive": 0, "disagree": 0}
    with Criterion(7, "decider/oracle agreement on y3, rect1, normal10", 60.0) as c:
        for name in ("y3", "rect1", "normal10"):
            b, d = load(name)
            if name == "normal10":
                pools = [list(cl) for cl in d.classes]
                m = structure_morphisms(b, d)

                def decider(u, v, b=b, d=d, m=m):
                    return equal_normal_component(b, d, m, u, v)

                short = [
                    (u, v)
                    for pool in pools
                    for u, v in itertools.product(
                        [w for k in (1, 2, 3) for w in itertools.product(pool, repeat=k)], repeat=2
                    )
                ]

                rand = []
                for _ in range(500):
                    pool = rng.choice(pools)
                    rand.append(tuple(tuple(rng.choice(pool) for _ in range(rng.randint(1, 5))) for _ in range(2)))
            else:
                if name == "y3":
                    def decider(u, v, b=b):
                        return equal_semilattice(b, u, v)
                else:
                    def decider(u, v, b=b, d=d):
                        return equal_locally_large(b, d, u, v)
                ws = [w for k in (1, 2, 3) for w in itertools.product(range(len(b)), repeat=k)]
                short = list(itertools.product(ws, repeat=2))
                n = len(b)
                rand = [
                    tuple(tuple(rng.randrange(n) for _ in range(rng.randint(1, 5))) for _ in range(2))
                    for _ in range(500)
                ]
            _agreement(b, d, decider, short + rand, tally)
        c.notes.append(
            f"{tally['compared']} conclusive comparisons, {tally['inconclusive']} inconclusive, "
            f"{tally['disagree']} disagreements"
        )
        assert tally["disagree"] == 0


def test_criterion_08_anf_properties():
    with Criterion(8, "ANF invariants on all bundled bands, |w| <= 4", 30.0) as c:
        total = 0
        for name in BUNDLED:
            b, d = load(name)
            m = structure_morphisms(b, d) if classify(b, d).is_normal else None
            for k in (1, 2, 3, 4):
                for w in itertools.product(range(len(b)), repeat=k):
                    a, cert = anf(b, d, m, w)
                    check_anf(b, d, a)
                    assert cert.start == w and cert.end == a.word and check_certificate(b, cert)
                    assert significant_indices(b, d, a.word, LTR).indices == a.block_ends
                    starts = (1,) + tuple(x + 1 for x in a.block_bounds)
                    assert significant_indices(b, d, a.word, RTL).indices == starts
                    total += 1
        c.notes.append(f"{total} words, 0 violations")


def _related_triples(b, d, m, rng, side, want=500, attempts=200_000):
    n = len(b)
    found = 0
    for _ in range(attempts):
        w1 = tuple(rng.randrange(n) for _ in range(rng.randint(1, 4)))
        w2 = tuple(rng.randrange(n) for _ in range(rng.randint(1, 4)))
        if not tilde_related(b, d, m, w1, w2, side):
            continue
        z = tuple(rng.randrange(n) for _ in range(rng.randint(1, 3)))
        if side == R:
            yield tilde_related(b, d, m, z + w1, z + w2, R)
        else:
            yield tilde_related(b, d, m, w1 + z, w2 + z, L)
        found += 1
        if found == want:
            return


def test_criterion_09_congruence_condition():
    rng = random.Random(0)
    with Criterion(9, "R~ left / L~ right congruence samples", 30.0) as c:
        counts = []
        for name in BUNDLED:
            b, d = load(name)
            m = structure_morphisms(b, d) if classify(b, d).is_normal else None
            for side in (R, L):
                res = list(_related_triples(b, d, m, rng, side))
                assert len(res) == 500, (name, side, len(res))
                assert all(res), (name, side)
            counts.append(name)
        c.notes.append(f"500 R and 500 L triples for each of {len(counts)} bands, 0 violations")


def test_criterion_10_condition_p():
    with Criterion(10, "Condition (P): violation in normal10, none in y3/rect1 (length 6)", 120.0) as c:
        b, d = load("normal10")
        v = falsify_condition_p(b, 6, d=d)
        assert v is not None and check_certificate(b, v.certificate)
        assert v.inequality.verdict == NOT_EQUAL
        for name in ("y3", "rect1"):
            bb, dd = load(name)
            assert falsify_condition_p(bb, 6, d=dd) is None, name
        c.notes.append(f"normal10 clause ({v.clause}) at index {v.index}")
