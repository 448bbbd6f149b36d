from __future__ import annotations

import dataclasses
import random

import pytest

from igband.band import PreconditionError, build_strong_semilattice, classify, parse_strong_semilattice, structure_morphisms
from igband.bundled import load
from igband.decide import NOT_EQUAL, equal
from igband.greens import (
    L,
    PAIR,
    R,
    SINGLE,
    falsify_condition_p,
    format_witness,
    make_witness,
    parse_witness,
    regularity_witness,
    search_nonabundance,
    tilde_idempotent,
    tilde_related,
    verify_nonabundance,
)
from igband.rewrite import Budget, check_certificate

from conftest import words


def setup(name):
    b, d = load(name)
    m = structure_morphisms(b, d) if classify(b, d).is_normal else None
    return b, d, m


# --- tilde idempotents ----------------------------------------------------------------


def test_tilde_idempotent_examples():
    b, d, m = setup("band4")
    assert b.name(tilde_idempotent(b, d, m, words(b, "a b")[0], R)) == "a"
    b, d, m = setup("normal10")
    assert b.name(tilde_idempotent(b, d, m, words(b, "e v")[0], R)) == "e"
    e = words(b, "e")[0]
    assert tilde_idempotent(b, d, m, e, R) == tilde_idempotent(b, d, m, e, L) == e[0]


def test_tilde_related_y3():
    b, d, m = setup("y3")
    e, f = words(b, "e", "f")
    for n in range(1, 5):
        assert tilde_related(b, d, m, e, (e + f) * n, R)
    assert not tilde_related(b, d, m, e, f, R)
    assert tilde_related(b, d, m, e + f, e + f, L)


def test_tilde_idempotent_invariant_under_rewriting(bundled):
    from igband.rewrite import neighbours

    _, b, d = bundled
    m = structure_morphisms(b, d) if classify(b, d).is_normal else None
    rng = random.Random(21)
    for _ in range(300):
        w = tuple(rng.randrange(len(b)) for _ in range(rng.randint(1, 5)))
        w2 = rng.choice(list(neighbours(b, w, len(w) + 1)))[1]
        assert b.r_related(tilde_idempotent(b, d, m, w, R), tilde_idempotent(b, d, m, w2, R))
        assert b.l_related(tilde_idempotent(b, d, m, w, L), tilde_idempotent(b, d, m, w2, L))


# --- non-abundance witnesses ---------------------------------------------------------


def test_band4_pair_witness():
    b, d = load("band4")
    w = make_witness(b, *words(b, "a b", "x", "y"), d=d)
    assert w is not None and w.kind == PAIR
    assert verify_nonabundance(b, w, d=d).ok
    lhs, rhs = w.left_words()
    assert w.equality_evidence.start == lhs and w.equality_evidence.end == rhs


def test_band4_search_rediscovers_pair():
    b, d = load("band4")
    w = search_nonabundance(b, words(b, "a b")[0], max_length=1, d=d)
    assert w.kind == PAIR and (b.name(w.x[0]), b.name(w.y[0])) == ("x", "y")


def test_normal10_single_witness():
    b, d = load("normal10")
    w = make_witness(b, *words(b, "e v", "e h"), d=d)
    assert w is not None and w.kind == SINGLE
    assert verify_nonabundance(b, w, d=d)


def test_normal10_search_finds_single_of_length_two():
    b, d = load("normal10")
    target, eh = words(b, "e v", "e h")
    w = search_nonabundance(b, target, max_length=2, d=d)
    assert w.kind == SINGLE and len(w.x) == 2
    assert verify_nonabundance(b, w, d=d)
    # a single witness of length 2 exists, and e h is one of them
    assert make_witness(b, target, eh, d=d) is not None


def test_y3_search_finds_nothing():
    b, d = load("y3")
    assert search_nonabundance(b, words(b, "e f e f")[0], max_length=3, d=d) is None


def test_inconsistent_witness_rejected():
    b, d = load("band4")
    w = make_witness(b, *words(b, "a b", "x", "y"), d=d)
    # claim the same multiplier on both sides: the inequality re-decides as equal
    bad = dataclasses.replace(w, y=w.x)
    assert not verify_nonabundance(b, bad, d=d).ok
    wrong_e = dataclasses.replace(w, tilde_idempotent=b.index("b"))
    res = verify_nonabundance(b, wrong_e, d=d)
    assert not res and "tilde idempotent" in res.reason
    assert not verify_nonabundance(b, dataclasses.replace(w, kind=SINGLE), d=d)


def test_witness_transfers_to_every_idempotent():
    """No idempotent f is R*-related to the target.

    Either the witness pair already separates x f from y f, or f is not
    R-related to the tilde idempotent, which R* would force.
    """
    for name, target, x, y in (("band4", "a b", "x", "y"), ("normal10", "e v", "e h", None)):
        b, d, m = setup(name)
        a, xs = words(b, target, x)
        ys = words(b, y)[0] if y else ()
        assert equal(b, xs + a, ys + a, d=d).equal
        e = tilde_idempotent(b, d, m, a, R)
        for f in range(len(b)):
            v = equal(b, xs + (f,), ys + (f,), Budget(max_states=20_000), d=d)
            assert v.verdict == NOT_EQUAL or not b.r_related(f, e)


def test_witness_text_round_trip():
    b, d = load("normal10")
    w = make_witness(b, *words(b, "e v", "e h"), d=d)
    text = format_witness(b, w)
    assert parse_witness(b, text, d=d) == w
    with pytest.raises(ValueError):
        parse_witness(b, "target: e v\n", d=d)


# --- regularity ----------------------------------------------------------------------


def test_regularity_examples():
    r = load("rect1")
    b, d = r
    z, cert = regularity_witness(b, d, words(b, "p s")[0])
    assert z == words(b, "r")[0]
    assert check_certificate(b, cert)
    e = words(b, "p")[0]
    assert regularity_witness(b, d, e)[0] == e
    n10, d10 = load("normal10")
    eh = words(n10, "e h")[0]
    z, cert = regularity_witness(n10, d10, eh)
    assert z == words(n10, "g")[0]
    assert cert.start == eh + z + eh and cert.end == eh
    assert equal(n10, eh + z + eh, eh, d=d10).equal


def test_regularity_rejects_mixed_words():
    b, d = load("rect1")
    with pytest.raises(PreconditionError, match="mixed-class"):
        regularity_witness(b, d, words(b, "p a")[0])


def test_regularity_random(bundled):
    _, b, d = bundled
    rng = random.Random(9)
    for _ in range(50):
        cls = rng.choice(d.classes)
        w = tuple(rng.choice(cls) for _ in range(rng.randint(1, 6)))
        z, cert = regularity_witness(b, d, w)
        assert check_certificate(b, cert) and cert.start == w + z + w and cert.end == w


# --- congruence condition ------------------------------------------------------------


def test_tilde_congruence_samples(bundled):
    _, b, d = bundled
    m = structure_morphisms(b, d) if classify(b, d).is_normal else None
    rng = random.Random(13)
    checked = 0
    for _ in range(3000):
        w1 = tuple(rng.randrange(len(b)) for _ in range(rng.randint(1, 4)))
        w2 = tuple(rng.randrange(len(b)) for _ in range(rng.randint(1, 4)))
        z = tuple(rng.randrange(len(b)) for _ in range(rng.randint(1, 3)))
        if tilde_related(b, d, m, w1, w2, R):
            assert tilde_related(b, d, m, z + w1, z + w2, R)
            checked += 1
        if tilde_related(b, d, m, w1, w2, L):
            assert tilde_related(b, d, m, w1 + z, w2 + z, L)
    assert checked > 0


# --- Condition (P) ----------------------------------------------------------------------


def test_condition_p_violation_normal10():
    b, d = load("normal10")
    v = falsify_condition_p(b, 6, d=d)
    assert v is not None
    assert check_certificate(b, v.certificate)
    assert v.certificate.start == v.w1.word and v.certificate.end == v.w2.word
    assert v.w1.components == v.w2.components and v.w1.y_length >= 2
    x, y = v.related
    ends1, ends2 = v.w1.block_ends, v.w2.block_ends
    if v.clause == "i":
        assert b.l_related(x, y)
        assert x == v.w1.word[ends1[v.index - 1] - 1] and y == v.w2.word[ends2[v.index - 1] - 1]
        p, q = v.w1.word[: ends1[v.index - 1]], v.w2.word[: ends2[v.index - 1]]
    else:
        assert b.r_related(x, y)
        p, q = v.w1.word[ends1[v.index - 1]:], v.w2.word[ends2[v.index - 1]:]
    assert equal(b, p, q, d=d).verdict == NOT_EQUAL
    assert v.inequality.verdict == NOT_EQUAL


@pytest.mark.parametrize("name", ["y3", "rect1"])
def test_condition_p_holds_for_locally_large(name):
    b, d = load(name)
    assert falsify_condition_p(b, 5, d=d) is None


def test_condition_p_y_basic_sample():
    # a chain of a left zero band over a right zero band: Y-basic
    text = """\
component top: rows=2 cols=1 names=p q
component bot: rows=1 cols=2 names=s t
order: top > bot
phi top bot: p->s q->s
"""
    b = build_strong_semilattice(parse_strong_semilattice(text))
    assert classify(b).is_y_basic
    assert falsify_condition_p(b, 5) is None
