"""Tilde idempotents, non-abundance and regularity witnesses, Condition (P) search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .band import Band, DClassDecomposition, PreconditionError, StructureMorphisms, classify, decompose, structure_morphisms
from .decide import EQUAL, NOT_EQUAL, EqualityVerdict, equal
from .igword import AlmostNormalForm, anf, blocks_of, is_almost_normal
from .rewrite import (
    Budget,
    ClosureCache,
    RewriteCertificate,
    Word,
    check_certificate,
    check_word,
    format_certificate,
    format_word,
    normal_form,
    parse_certificate,
    parse_word,
)

R, L = "R", "L"
SINGLE, PAIR = "single", "pair"


def _morphisms(b: Band, d: DClassDecomposition) -> Optional[StructureMorphisms]:
    return structure_morphisms(b, d) if classify(b, d).is_normal else None


def tilde_idempotent(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], w: Sequence[int], side: str = R) -> int:
    word = anf(b, d, m, w)[0].word
    if side == R:
        return word[0]
    if side == L:
        return word[-1]
    raise ValueError(f"side must be R or L, not {side!r}")


def tilde_related(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], w1, w2, side: str = R) -> bool:
    e, f = tilde_idempotent(b, d, m, w1, side), tilde_idempotent(b, d, m, w2, side)
    return b.r_related(e, f) if side == R else b.l_related(e, f)


# ---------------------------------------------------------------------------
# non-abundance


@dataclass(frozen=True)
class NonAbundanceWitness:
    """``x a = y a`` but ``x e != y e`` where ``a`` is R~-related to ``e``.

    A single witness has ``y`` absent, standing for the empty word.
    """

    target: Word
    tilde_idempotent: int
    kind: str
    x: Word
    y: Optional[Word]
    equality_evidence: RewriteCertificate
    inequality_evidence: EqualityVerdict

    def left_words(self) -> Tuple[Word, Word]:
        """The two sides ``x a`` and ``y a`` of the equality."""
        y = self.y or ()
        return self.x + self.target, y + self.target

    def idempotent_words(self) -> Tuple[Word, Word]:
        y = self.y or ()
        e = (self.tilde_idempotent,)
        return self.x + e, y + e


@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def verify_nonabundance(b: Band, witness: NonAbundanceWitness, budget: Optional[Budget] = None, d: Optional[DClassDecomposition] = None) -> Verification:
    d = d or decompose(b)
    m = _morphisms(b, d)
    try:
        target = check_word(b, witness.target)
        e = tilde_idempotent(b, d, m, target, R)
    except (ValueError, IndexError) as exc:
        return Verification(False, f"bad target: {exc}")
    if e != witness.tilde_idempotent:
        return Verification(False, f"tilde idempotent of the target is {b.name(e)}")
    if (witness.kind == SINGLE) != (witness.y is None):
        return Verification(False, f"kind {witness.kind!r} does not match the words given")
    lhs, rhs = witness.left_words()
    cert = witness.equality_evidence
    if (cert.start, cert.end) != (lhs, rhs):
        return Verification(False, "equality certificate has the wrong endpoints")
    if not check_certificate(b, cert):
        return Verification(False, "equality certificate does not replay")
    v = equal(b, *witness.idempotent_words(), budget=budget, d=d)
    if v.verdict != NOT_EQUAL:
        return Verification(False, f"inequality re-decided as {v.verdict}")
    return Verification(True, "verified")


def make_witness(
    b: Band,
    target: Sequence[int],
    x: Sequence[int],
    y: Optional[Sequence[int]] = None,
    budget: Optional[Budget] = None,
    d: Optional[DClassDecomposition] = None,
) -> Optional[NonAbundanceWitness]:
    """Assemble a witness from candidate multipliers, or None if they do not work."""
    d = d or decompose(b)
    a = check_word(b, target)
    e = tilde_idempotent(b, d, _morphisms(b, d), a, R)
    x = check_word(b, x)
    y = None if y is None else check_word(b, y)
    ys = y or ()
    same = equal(b, x + a, ys + a, budget=budget, d=d)
    if same.verdict != EQUAL:
        return None
    differ = equal(b, x + (e,), ys + (e,), budget=budget, d=d)
    if differ.verdict != NOT_EQUAL:
        return None
    return NonAbundanceWitness(a, e, SINGLE if y is None else PAIR, x, y, same.certificate, differ)


def _words(n: int, k: int) -> Iterator[Word]:
    return itertools.product(range(n), repeat=k)


def search_nonabundance(
    b: Band,
    target: Sequence[int],
    max_length: int = 2,
    budget: Optional[Budget] = None,
    d: Optional[DClassDecomposition] = None,
) -> Optional[NonAbundanceWitness]:
    """Single candidates of every length first, then pairs; shortest and lexicographic first."""
    d = d or decompose(b)
    m = _morphisms(b, d)
    a = check_word(b, target)
    e = tilde_idempotent(b, d, m, a, R)
    memo: Dict[Tuple[Word, Word], EqualityVerdict] = {}

    def eq(u: Word, v: Word) -> EqualityVerdict:
        key = (u, v)
        if key not in memo:
            memo[key] = equal(b, u, v, budget=budget, d=d)
        return memo[key]

    n = len(b)
    for k in range(1, max_length + 1):
        for x in _words(n, k):
            same = eq(x + a, a)
            if same.verdict == EQUAL:
                differ = eq(x + (e,), (e,))
                if differ.verdict == NOT_EQUAL:
                    return NonAbundanceWitness(a, e, SINGLE, x, None, same.certificate, differ)
    for k in range(1, max_length + 1):
        shorter = [w for j in range(1, k) for w in _words(n, j)]
        current = list(_words(n, k))
        pairs = itertools.chain(
            itertools.product(shorter, current), itertools.combinations(current, 2)
        )
        for x, y in pairs:
            same = eq(x + a, y + a)
            if same.verdict == EQUAL:
                differ = eq(x + (e,), y + (e,))
                if differ.verdict == NOT_EQUAL:
                    return NonAbundanceWitness(a, e, PAIR, x, y, same.certificate, differ)
    return None


def format_witness(b: Band, w: NonAbundanceWitness) -> str:
    lines = [
        f"target: {format_word(b, w.target)}",
        f"idempotent: {b.name(w.tilde_idempotent)}",
        f"kind: {w.kind}",
        f"x: {format_word(b, w.x)}",
    ]
    if w.y is not None:
        lines.append(f"y: {format_word(b, w.y)}")
    lines.append(f"inequality: {w.inequality_evidence.verdict} {w.inequality_evidence.method}")
    lines.append("equality:")
    lines.append(format_certificate(b, w.equality_evidence).rstrip("\n"))
    return "\n".join(lines) + "\n"


def parse_witness(b: Band, text: str, budget: Optional[Budget] = None, d: Optional[DClassDecomposition] = None) -> NonAbundanceWitness:
    """Read a witness; the inequality is re-decided rather than trusted."""
    fields: Dict[str, str] = {}
    lines = text.splitlines()
    cert_at = None
    for i, raw in enumerate(lines):
        line = raw.split("#")[0].strip()
        if not line:
            continue
        if line == "equality:":
            cert_at = i + 1
            break
        key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"line {i + 1}: expected 'key: value'")
        fields[key.strip()] = value.strip()
    missing = {"target", "idempotent", "kind", "x"} - fields.keys()
    if missing or cert_at is None:
        raise ValueError(f"witness is missing {sorted(missing) or ['equality']}")
    x = parse_word(b, fields["x"])
    y = parse_word(b, fields["y"]) if "y" in fields else None
    cert = parse_certificate(b, "\n".join(lines[cert_at:]))
    e = b.index(fields["idempotent"])
    ys = y or ()
    inequality = equal(b, x + (e,), ys + (e,), budget=budget, d=d)
    return NonAbundanceWitness(parse_word(b, fields["target"]), e, fields["kind"], x, y, cert, inequality)


# ---------------------------------------------------------------------------
# regularity


def regularity_witness(b: Band, d: DClassDecomposition, w: Sequence[int]) -> Tuple[Word, RewriteCertificate]:
    """An inverse ``z`` of ``w`` (so ``w z w = w``) for a word inside one D-class."""
    w = check_word(b, w)
    if len({d.class_of[x] for x in w}) != 1:
        raise PreconditionError("mixed-class input")
    if len(w) == 1:
        z: Word = w
    else:
        t = b.table
        z = tuple(t[w[i]][w[i - 1]] for i in range(len(w) - 1, 0, -1))
    n1, c1 = normal_form(b, w + z + w)
    n2, c2 = normal_form(b, w)
    assert n1 == n2, "component normal forms disagree"
    return z, c1.then(c2.inverse())


# ---------------------------------------------------------------------------
# Condition (P)


@dataclass(frozen=True)
class ConditionPViolation:
    w1: AlmostNormalForm
    w2: AlmostNormalForm
    certificate: RewriteCertificate
    clause: str  # "i" or "ii"
    index: int  # s for clause (i), t for clause (ii)
    related: Tuple[int, int]  # the L- or R-related letters
    inequality: EqualityVerdict


def check_condition_p(
    b: Band,
    d: DClassDecomposition,
    u: AlmostNormalForm,
    v: AlmostNormalForm,
    certificate: RewriteCertificate,
    decide_equal,
) -> Optional[ConditionPViolation]:
    """Check both clauses for two ANFs already known to be equal.

    ``decide_equal(w1, w2)`` must return an EqualityVerdict; anything but
    not-equal counts as agreement.
    """
    if u.components != v.components:
        return None
    ue, ve = u.block_ends, v.block_ends
    r = len(ue)
    for s in range(1, r):  # s = r compares the whole words
        x, y = u.word[ue[s - 1] - 1], v.word[ve[s - 1] - 1]
        if b.l_related(x, y):
            p, q = u.word[:ue[s - 1]], v.word[:ve[s - 1]]
            if p != q:
                verdict = decide_equal(p, q)
                if verdict.verdict == NOT_EQUAL:
                    return ConditionPViolation(u, v, certificate, "i", s, (x, y), verdict)
    for t in range(1, r):  # t = 0 compares the whole words
        x, y = u.word[ue[t - 1]], v.word[ve[t - 1]]
        if b.r_related(x, y):
            p, q = u.word[ue[t - 1]:], v.word[ve[t - 1]:]
            if p != q:
                verdict = decide_equal(p, q)
                if verdict.verdict == NOT_EQUAL:
                    return ConditionPViolation(u, v, certificate, "ii", t, (x, y), verdict)
    return None


def _anf_words(b: Band, d: DClassDecomposition, max_length: int) -> Iterator[Word]:
    """ANF words of Y-length at least two, shortest first, lexicographic."""
    n = len(b)
    for k in range(2, max_length + 1):
        for w in _words(n, k):
            if is_almost_normal(d, w) and len(blocks_of(d, w).components) >= 2:
                yield w


def falsify_condition_p(
    b: Band,
    max_length: int = 6,
    budget: Optional[Budget] = None,
    d: Optional[DClassDecomposition] = None,
) -> Optional[ConditionPViolation]:
    """Search ANFs up to ``max_length`` for a pair of equal ones breaking Condition (P).

    For locally large bands ANFs are compared through their canonical form;
    otherwise equal ANFs are found inside bounded rewrite closures.
    """
    d = d or decompose(b)
    budget = budget or Budget(max_len=max_length)
    cls = classify(b, d)
    m = _morphisms(b, d)
    memo: Dict[Tuple[Word, Word], EqualityVerdict] = {}

    def decide_equal(p: Word, q: Word) -> EqualityVerdict:
        if (p, q) not in memo:
            memo[(p, q)] = equal(b, p, q, budget=Budget(None, budget.max_states), d=d)
        return memo[(p, q)]

    if cls.is_locally_large:
        groups: Dict[Word, List[Tuple[Word, RewriteCertificate]]] = {}
        for w in _anf_words(b, d, max_length):
            a, cert = anf(b, d, m, w)
            for other, ocert in groups.get(a.word, ()):
                found = check_condition_p(
                    b, d, blocks_of(d, other), blocks_of(d, w), ocert.then(cert.inverse()), decide_equal
                )
                if found:
                    return found
            groups.setdefault(a.word, []).append((w, cert))
        return None

    cache = ClosureCache(b, budget.max_states)
    max_len = budget.max_len or max_length
    seen = set()
    for w in _anf_words(b, d, max_length):
        if w in seen:
            continue
        c = cache.get(w, max_len)
        members = sorted((x for x in c.words if is_almost_normal(d, x)), key=lambda x: (len(x), x))
        if c.complete:
            seen.update(members)
        if w not in members:  # incomplete closures are keyed by their root only
            members.insert(0, w)
        forms = [blocks_of(d, x) for x in members]
        for i, j in itertools.combinations(range(len(members)), 2):
            found = check_condition_p(
                b, d, forms[i], forms[j], c.certificate_between(members[i], members[j]), decide_equal
            )
            if found:
                return found
    return None
