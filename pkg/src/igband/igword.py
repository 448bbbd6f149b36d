"""Structure of IG(B) words: significant indices, Y-projection, almost normal forms."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .band import Band, DClassDecomposition, StructureMorphisms
from .rewrite import Derivation, RewriteCertificate, Word, check_word, normal_form

LTR = "left-to-right"
RTL = "right-to-left"


@dataclass(frozen=True)
class SignificantProfile:
    direction: str
    indices: Tuple[int, ...]  # 1-based
    stops: Tuple[int, ...]  # 1-based
    components: Tuple[int, ...]

    @property
    def y_length(self) -> int:
        return len(self.indices)


def _scan(d: DClassDecomposition, comps: Sequence[int]) -> Tuple[List[int], List[int]]:
    n = len(comps)
    le = d.le
    indices, stops = [], []
    p = 0  # 0-based start of the current segment
    while p < n:
        i = p
        for cand in range(p, n):
            c = comps[cand]
            if all(le(c, comps[j]) for j in range(p, cand + 1)):
                i = cand
        c = comps[i]
        k = i
        while k + 1 < n and le(c, comps[k + 1]):
            k += 1
        indices.append(i + 1)
        stops.append(k + 1)
        p = k + 1
    return indices, stops


def significant_indices(b: Band, d: DClassDecomposition, w: Sequence[int], direction: str = LTR) -> SignificantProfile:
    w = check_word(b, w)
    comps = [d.class_of[x] for x in w]
    if direction == LTR:
        idx, stops = _scan(d, comps)
    elif direction == RTL:
        n = len(comps)
        ridx, rstops = _scan(d, comps[::-1])
        idx = [n + 1 - i for i in reversed(ridx)]
        stops = [n + 1 - k for k in reversed(rstops)]
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return SignificantProfile(direction, tuple(idx), tuple(stops), tuple(comps[i - 1] for i in idx))


def y_projection(b: Band, d: DClassDecomposition, w: Sequence[int]) -> Tuple[Word, Word]:
    """The image of ``w`` in IG(Y) and its (unique) normal form there."""
    proj = tuple(d.class_of[x] for x in check_word(b, w))
    return proj, normal_form(d.semilattice, proj)[0]


# ---------------------------------------------------------------------------
# almost normal forms


@dataclass(frozen=True)
class AlmostNormalForm:
    word: Word
    block_bounds: Tuple[int, ...]  # 1-based end of every block but the last
    components: Tuple[int, ...]

    @property
    def blocks(self) -> List[Word]:
        cuts = (0,) + self.block_bounds + (len(self.word),)
        return [self.word[cuts[i]:cuts[i + 1]] for i in range(len(cuts) - 1)]

    @property
    def y_length(self) -> int:
        return len(self.components)

    @property
    def block_ends(self) -> Tuple[int, ...]:
        return self.block_bounds + (len(self.word),)


def blocks_of(d: DClassDecomposition, w: Sequence[int]) -> AlmostNormalForm:
    """Split ``w`` into maximal single-class runs (no validity check)."""
    bounds, comps = [], [d.class_of[w[0]]]
    for i in range(1, len(w)):
        c = d.class_of[w[i]]
        if c != comps[-1]:
            bounds.append(i)
            comps.append(c)
    return AlmostNormalForm(tuple(w), tuple(bounds), tuple(comps))


def is_almost_normal(d: DClassDecomposition, w: Sequence[int]) -> bool:
    comps = blocks_of(d, w).components
    return all(not d.comparable(comps[i], comps[i + 1]) for i in range(len(comps) - 1))


def check_anf(b: Band, d: DClassDecomposition, a: AlmostNormalForm) -> None:
    """Raise AssertionError unless ``a`` satisfies the block invariants."""
    assert a.word, "empty word"
    assert list(a.block_bounds) == sorted(set(a.block_bounds)), "bounds not increasing"
    assert len(a.blocks) == len(a.components), "one component per block"
    for blk, c in zip(a.blocks, a.components):
        assert blk, "empty block"
        assert all(d.class_of[x] == c for x in blk), "block leaves its component"
    for c1, c2 in zip(a.components, a.components[1:]):
        assert not d.comparable(c1, c2), "adjacent components comparable"


def _block_starts(d: DClassDecomposition, word: Sequence[int], hi: int) -> List[int]:
    """0-based starts of the single-class runs of ``word[:hi]``."""
    starts = [0]
    for i in range(1, hi):
        if d.class_of[word[i]] != d.class_of[word[i - 1]]:
            starts.append(i)
    return starts


def _check_phi(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], der: Derivation, pos: int, beta: int, original: int):
    if m is not None:
        assert der.word[pos] == m.apply(original, beta), "conjugate differs from phi image"


def _multiply_in_place(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], der: Derivation, split: int, hi: int) -> int:
    """``der.word[:split]`` and ``der.word[split:hi]`` are ANFs; make ``[:hi]`` one.

    Returns the new end of the product region.
    """
    w = der.word
    cls = d.class_of
    alpha_r = cls[w[split - 1]]
    beta_1 = cls[w[split]]
    if not d.comparable(alpha_r, beta_1):
        return hi
    if d.le(beta_1, alpha_r):
        # conjugate the trailing blocks of the left factor across y1
        starts = _block_starts(d, w, split)
        first = split
        for s in reversed(starts):
            if d.le(beta_1, cls[w[s]]):
                first = s
            else:
                break
        for j in range(split - 1, first - 1, -1):
            x = der.word[j]
            der.push_left(j)
            _check_phi(b, d, m, der, j, beta_1, x)
    else:
        # alpha_r < beta_1: conjugate the leading blocks of the right factor
        starts = _block_starts(d, w[split:hi], hi - split)
        ends = [s + split for s in starts[1:]] + [hi]
        last = split
        for s, e in zip(starts, ends):
            if d.le(alpha_r, cls[w[s + split]]):
                last = e
            else:
                break
        for j in range(split, last):
            y = der.word[j]
            der.push_right(j - 1)
            _check_phi(b, d, m, der, j, alpha_r, y)
    return der.contract_region(0, hi)


def anf_multiply(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], left: AlmostNormalForm, right: AlmostNormalForm) -> Tuple[AlmostNormalForm, RewriteCertificate]:
    der = Derivation(b, left.word + right.word)
    _multiply_in_place(b, d, m, der, len(left.word), len(der))
    result = blocks_of(d, der.word)
    check_anf(b, d, result)
    return result, der.certificate()


def anf(b: Band, d: DClassDecomposition, m: Optional[StructureMorphisms], w: Sequence[int]) -> Tuple[AlmostNormalForm, RewriteCertificate]:
    """Fold the letters of ``w`` left to right through the ANF product."""
    w = check_word(b, w)
    der = Derivation(b, w)
    done = 1  # der.word[:done] is an ANF; the rest are untouched letters of w
    for _ in range(1, len(w)):
        done = _multiply_in_place(b, d, m, der, done, done + 1)
    der.contract_region(0, len(der))
    result = blocks_of(d, der.word)
    check_anf(b, d, result)
    return result, der.certificate()


def format_anf(b: Band, a: AlmostNormalForm) -> str:
    return " | ".join(" ".join(b.name(x) for x in blk) for blk in a.blocks)
