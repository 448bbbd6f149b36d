"""Word problem deciders for IG(B), with a filtered search fallback."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .band import (
    Band,
    DClassDecomposition,
    PreconditionError,
    StructureMorphisms,
    classify,
    decompose,
    structure_morphisms,
)
from .igword import LTR, RTL, anf, significant_indices, y_projection
from .rewrite import (
    Budget,
    RewriteCertificate,
    Word,
    bfs_equal,
    check_word,
    format_word,
    normal_form,
)

EQUAL = "equal"
NOT_EQUAL = "not-equal"
INCONCLUSIVE = "inconclusive"

SEMILATTICE = "semilattice-nf"
RECTANGULAR = "rectangular-nf"
LOCALLY_LARGE = "locally-large"
NORMAL_COMPONENT = "normal-component"
FILTER = "invariant-filter"
ORACLE = "bfs-oracle"


@dataclass(frozen=True)
class Invariant:
    """A quantity preserved by IG(B)-equality that takes different values."""

    kind: str
    left: object
    right: object

    def describe(self) -> str:
        return f"{self.kind}: {self.left} vs {self.right}"


@dataclass(frozen=True)
class EqualityVerdict:
    verdict: str
    method: str
    evidence: Union[RewriteCertificate, Invariant, None] = None
    reason: str = ""

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL

    @property
    def not_equal(self) -> bool:
        return self.verdict == NOT_EQUAL

    @property
    def certificate(self) -> Optional[RewriteCertificate]:
        return self.evidence if isinstance(self.evidence, RewriteCertificate) else None


def _labels(d: DClassDecomposition, comps: Sequence[int]) -> str:
    return " ".join(d.label(c) for c in comps)


def _joined(c1: RewriteCertificate, c2: RewriteCertificate) -> RewriteCertificate:
    """``c1`` from w1 and ``c2`` from w2 end at the same word; build w1 -> w2."""
    return c1.then(c2.inverse())


def _by_normal_form(b: Band, w1, w2, method: str) -> EqualityVerdict:
    n1, c1 = normal_form(b, w1)
    n2, c2 = normal_form(b, w2)
    if n1 == n2:
        return EqualityVerdict(EQUAL, method, _joined(c1, c2))
    return EqualityVerdict(
        NOT_EQUAL, method, Invariant("normal form", format_word(b, n1), format_word(b, n2)), "distinct unique normal forms"
    )


def equal_semilattice(b: Band, w1: Sequence[int], w2: Sequence[int]) -> EqualityVerdict:
    if not classify(b).is_semilattice:
        raise PreconditionError("not a semilattice")
    return _by_normal_form(b, check_word(b, w1), check_word(b, w2), SEMILATTICE)


def equal_rectangular(b: Band, w1: Sequence[int], w2: Sequence[int]) -> EqualityVerdict:
    if not classify(b).is_rectangular:
        raise PreconditionError("not rectangular")
    return _by_normal_form(b, check_word(b, w1), check_word(b, w2), RECTANGULAR)


def equal_locally_large(b: Band, d: DClassDecomposition, w1: Sequence[int], w2: Sequence[int]) -> EqualityVerdict:
    """Compare almost normal forms; their blocks come out in component normal form."""
    if not classify(b, d).is_locally_large:
        raise PreconditionError("not locally large")
    a1, c1 = anf(b, d, None, w1)
    a2, c2 = anf(b, d, None, w2)
    if a1.components != a2.components:
        return EqualityVerdict(
            NOT_EQUAL,
            LOCALLY_LARGE,
            Invariant("Y-components", _labels(d, a1.components), _labels(d, a2.components)),
            "Y-lengths or components differ",
        )
    for t, (x, y) in enumerate(zip(a1.blocks, a2.blocks)):
        if x != y:
            return EqualityVerdict(
                NOT_EQUAL,
                LOCALLY_LARGE,
                Invariant(f"block {t + 1} normal form", format_word(b, x), format_word(b, y)),
                "blocks differ in their component",
            )
    return EqualityVerdict(EQUAL, LOCALLY_LARGE, _joined(c1, c2))


def project_component(b: Band, d: DClassDecomposition, m: StructureMorphisms, w: Sequence[int], alpha: int) -> Word:
    out = []
    for x in check_word(b, w):
        if not d.le(alpha, d.class_of[x]):
            raise PreconditionError(
                f"letter {b.name(x)} lies in {d.label(d.class_of[x])}, not above {d.label(alpha)}"
            )
        out.append(m.apply(x, alpha))
    return tuple(out)


def _single_class(b: Band, d: DClassDecomposition, *words: Sequence[int]) -> Optional[int]:
    classes = {d.class_of[x] for w in words for x in w}
    return classes.pop() if len(classes) == 1 else None


def equal_normal_component(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], w1: Sequence[int], w2: Sequence[int]) -> EqualityVerdict:
    if m is None:
        m = structure_morphisms(b, d)  # raises on non-normal bands
    w1, w2 = check_word(b, w1), check_word(b, w2)
    if _single_class(b, d, w1, w2) is None:
        raise PreconditionError("mixed-component input")
    # contractions never leave the component, so this is the component's own normal form
    return _by_normal_form(b, w1, w2, NORMAL_COMPONENT)


# ---------------------------------------------------------------------------
# dispatcher


def _prefix_r_classes(b: Band, d: DClassDecomposition, w: Word):
    prof = significant_indices(b, d, w, LTR)
    return [b.product(w[:i]) for i in prof.indices]


def _suffix_l_classes(b: Band, d: DClassDecomposition, w: Word):
    prof = significant_indices(b, d, w, RTL)
    return [b.product(w[i - 1:]) for i in prof.indices]


def invariant_mismatch(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], w1: Word, w2: Word) -> Optional[Invariant]:
    """The first necessary condition for equality that the two words fail."""
    p1, p2 = y_projection(b, d, w1)[1], y_projection(b, d, w2)[1]
    if p1 != p2:
        return Invariant("Y-projection", _labels(d, p1), _labels(d, p2))
    for i, (x, y) in enumerate(zip(_prefix_r_classes(b, d, w1), _prefix_r_classes(b, d, w2))):
        if not b.r_related(x, y):
            return Invariant(f"R-class of prefix {i + 1}", b.name(x), b.name(y))
    for i, (x, y) in enumerate(zip(_suffix_l_classes(b, d, w1), _suffix_l_classes(b, d, w2))):
        if not b.l_related(x, y):
            return Invariant(f"L-class of suffix {i + 1}", b.name(x), b.name(y))
    x, y = b.product(w1), b.product(w2)
    if x != y:
        return Invariant("value in B", b.name(x), b.name(y))
    if m is not None:
        alpha = d.class_of[x]
        q1 = normal_form(b, project_component(b, d, m, w1, alpha))[0]
        q2 = normal_form(b, project_component(b, d, m, w2, alpha))[0]
        if q1 != q2:
            return Invariant(f"projection to {d.label(alpha)}", format_word(b, q1), format_word(b, q2))
    return None


def equal(
    b: Band,
    w1: Sequence[int],
    w2: Sequence[int],
    budget: Optional[Budget] = None,
    d: Optional[DClassDecomposition] = None,
) -> EqualityVerdict:
    """Decide ``w1 = w2`` in IG(B) with the strongest tool that applies."""
    w1, w2 = check_word(b, w1), check_word(b, w2)
    d = d or decompose(b)
    cls = classify(b, d)
    if cls.is_semilattice:
        return equal_semilattice(b, w1, w2)
    if cls.is_rectangular:
        return equal_rectangular(b, w1, w2)
    if cls.is_locally_large:
        return equal_locally_large(b, d, w1, w2)
    m = structure_morphisms(b, d) if cls.is_normal else None
    if m is not None and _single_class(b, d, w1, w2) is not None:
        return equal_normal_component(b, d, m, w1, w2)

    n1, c1 = normal_form(b, w1)
    n2, c2 = normal_form(b, w2)
    if n1 == n2:
        return EqualityVerdict(EQUAL, FILTER, _joined(c1, c2), "common normal form")
    if len(n1) == 1 and len(n2) == 1:
        return EqualityVerdict(
            NOT_EQUAL, FILTER, Invariant("generator", b.name(n1[0]), b.name(n2[0])),
            "distinct generators are distinct elements",
        )
    bad = invariant_mismatch(b, d, m, w1, w2)
    if bad is not None:
        return EqualityVerdict(NOT_EQUAL, FILTER, bad, bad.kind + " differs")

    res = bfs_equal(b, n1, n2, budget)
    if res.equal:
        return EqualityVerdict(EQUAL, ORACLE, c1.then(res.certificate).then(c2.inverse()))
    budget = budget or Budget()
    reason = (
        f"no path within length {budget.length_for(n1, n2)}"
        if res.conclusive
        else f"state budget {budget.max_states} exhausted"
    )
    return EqualityVerdict(INCONCLUSIVE, ORACLE, None, reason)
