"""Finite bands given by Cayley tables.

A band is stored as a tuple of element names plus an ``n x n`` index table;
``table[i][j]`` is the index of the product of element ``i`` and element ``j``.
Everything downstream works on element indices.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_']*")


class BandError(ValueError):
    """Raised for invalid band data."""


class BandSyntaxError(BandError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class PreconditionError(ValueError):
    """An operation was applied to a band outside its domain."""


@dataclass(frozen=True)
class Band:
    elements: Tuple[str, ...]
    table: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise BandError("a band needs at least one element")
        if len(set(self.elements)) != n:
            raise BandError("duplicate element names")
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise BandError(f"table must be {n}x{n}")
        for row in self.table:
            for v in row:
                if not 0 <= v < n:
                    raise BandError(f"table entry {v} out of range")
        for i in range(n):
            if self.table[i][i] != i:
                raise BandError(f"non-idempotent diagonal at {self.elements[i]}")
        t = self.table
        for i, j, k in itertools.product(range(n), repeat=3):
            if t[t[i][j]][k] != t[i][t[j][k]]:
                e = self.elements
                raise BandError(
                    f"associativity failure at ({e[i]}, {e[j]}, {e[k]}): "
                    f"({e[i]}{e[j]}){e[k]} = {e[t[t[i][j]][k]]} but "
                    f"{e[i]}({e[j]}{e[k]}) = {e[t[i][t[j][k]]]}"
                )

    def __len__(self):
        return len(self.elements)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.elements)}

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise BandError(f"unknown element {name!r}") from None

    def name(self, i: int) -> str:
        return self.elements[i]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def product(self, word: Sequence[int]) -> int:
        """Evaluate a non-empty word in the band."""
        it = iter(word)
        acc = next(it)
        for x in it:
            acc = self.table[acc][x]
        return acc

    def r_related(self, e: int, f: int) -> bool:
        t = self.table
        return t[e][f] == f and t[f][e] == e

    def l_related(self, e: int, f: int) -> bool:
        t = self.table
        return t[e][f] == e and t[f][e] == f

    @cached_property
    def basic_product(self) -> Tuple[Tuple[int, ...], ...]:
        """``basic_product[e][f]`` is ``ef`` when (e, f) is basic, else -1."""
        n = len(self.elements)
        t = self.table
        rows = []
        for e in range(n):
            row = []
            for f in range(n):
                ef, fe = t[e][f], t[f][e]
                basic = ef in (e, f) or fe in (e, f)
                row.append(ef if basic else -1)
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def factorizations(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """For each g, all basic pairs (u, v) with uv = g, in index order."""
        n = len(self.elements)
        out: List[List[Tuple[int, int]]] = [[] for _ in range(n)]
        bp = self.basic_product
        for u in range(n):
            for v in range(n):
                p = bp[u][v]
                if p >= 0:
                    out[p].append((u, v))
        return tuple(tuple(x) for x in out)


def is_basic_pair(b: Band, e: int, f: int) -> Optional[Tuple[int, int]]:
    """Return (ef, fe) if {e, f} meets {ef, fe}, else None."""
    if b.basic_product[e][f] < 0:
        return None
    return b.table[e][f], b.table[f][e]


# ---------------------------------------------------------------------------
# band file format


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def _tokens(line: str) -> List[Tuple[str, int]]:
    """Whitespace separated tokens with 1-based columns."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _check_name(tok: str, lineno: int, col: int) -> str:
    if not NAME_RE.fullmatch(tok):
        raise BandSyntaxError(f"invalid element name {tok!r}", lineno, col)
    return tok


def parse_band(text: str) -> Band:
    lines = [
        (i + 1, _strip_comment(raw))
        for i, raw in enumerate(text.splitlines())
    ]
    lines = [(no, ln) for no, ln in lines if ln.strip()]
    if not lines:
        raise BandSyntaxError("empty band file", 1, 1)

    lineno, header = lines[0]
    head = header.lstrip()
    if not head.startswith("elements:"):
        raise BandSyntaxError("expected 'elements:'", lineno, len(header) - len(head) + 1)
    offset = header.index("elements:") + len("elements:")
    names = [
        _check_name(tok, lineno, col + offset)
        for tok, col in _tokens(header[offset:])
    ]
    if not names:
        raise BandSyntaxError("no elements declared", lineno, offset + 1)
    if len(set(names)) != len(names):
        raise BandSyntaxError("duplicate element name", lineno, offset + 1)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)

    rows: Dict[int, Tuple[int, ...]] = {}
    for lineno, line in lines[1:]:
        if ":" not in line:
            raise BandSyntaxError("expected '<name>: <row>'", lineno, 1)
        colon = line.index(":")
        label = line[:colon].strip()
        label_col = len(line[:colon]) - len(line[:colon].lstrip()) + 1
        if label not in index:
            raise BandSyntaxError(f"unknown element {label!r}", lineno, label_col)
        if index[label] in rows:
            raise BandSyntaxError(f"duplicate row for {label!r}", lineno, label_col)
        entries = _tokens(line[colon + 1:])
        if len(entries) != n:
            raise BandSyntaxError(
                f"row {label!r} has {len(entries)} entries, expected {n}",
                lineno, colon + 2,
            )
        row = []
        for tok, col in entries:
            if tok not in index:
                raise BandSyntaxError(f"unknown element {tok!r}", lineno, colon + 1 + col)
            row.append(index[tok])
        rows[index[label]] = tuple(row)

    missing = [names[i] for i in range(n) if i not in rows]
    if missing:
        raise BandSyntaxError(f"missing rows for {', '.join(missing)}", lines[-1][0], 1)
    table = tuple(rows[i] for i in range(n))
    return Band(tuple(names), table)


def format_band(b: Band) -> str:
    width = max(len(x) for x in b.elements)
    out = ["elements: " + " ".join(b.elements)]
    for i, name in enumerate(b.elements):
        row = " ".join(b.elements[j].ljust(width) for j in b.table[i]).rstrip()
        out.append(f"{name.ljust(width)}: {row}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# D-class decomposition


@dataclass(frozen=True)
class DClassDecomposition:
    class_of: Tuple[int, ...]
    classes: Tuple[Tuple[int, ...], ...]
    leq: Tuple[Tuple[bool, ...], ...]
    meet_table: Tuple[Tuple[int, ...], ...]
    names: Tuple[str, ...] = field(default=())

    def __len__(self):
        return len(self.classes)

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq[a][b]

    def comparable(self, a: int, b: int) -> bool:
        return self.leq[a][b] or self.leq[b][a]

    def label(self, a: int) -> str:
        return self.names[a] if self.names else f"D{a}"

    @cached_property
    def semilattice(self) -> Band:
        """Y as a band in its own right (the meet table)."""
        labels = tuple(self.label(a) for a in range(len(self.classes)))
        return Band(labels, self.meet_table)


def _union_find_classes(n: int, pairs) -> List[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)
    return [find(x) for x in range(n)]


@lru_cache(maxsize=64)
def decompose(b: Band) -> DClassDecomposition:
    n = len(b)
    pairs = [
        (e, f)
        for e in range(n)
        for f in range(e + 1, n)
        if b.l_related(e, f) or b.r_related(e, f)
    ]
    roots = _union_find_classes(n, pairs)
    # class ids in order of first element
    ids: Dict[int, int] = {}
    for r in roots:
        ids.setdefault(r, len(ids))
    class_of = tuple(ids[r] for r in roots)
    k = len(ids)
    classes = tuple(tuple(x for x in range(n) if class_of[x] == c) for c in range(k))

    meet = [[-1] * k for _ in range(k)]
    for x in range(n):
        for y in range(n):
            c = class_of[b.table[x][y]]
            a, bb = class_of[x], class_of[y]
            if meet[a][bb] == -1:
                meet[a][bb] = c
            elif meet[a][bb] != c:
                raise AssertionError("class product depends on representatives")
    leq = tuple(tuple(meet[a][c] == a for c in range(k)) for a in range(k))
    return DClassDecomposition(
        class_of=class_of,
        classes=classes,
        leq=leq,
        meet_table=tuple(tuple(r) for r in meet),
    )


def r_classes(b: Band, members: Sequence[int]) -> List[List[int]]:
    out: List[List[int]] = []
    for x in members:
        for cls in out:
            if b.r_related(cls[0], x):
                cls.append(x)
                break
        else:
            out.append([x])
    return out


def l_classes(b: Band, members: Sequence[int]) -> List[List[int]]:
    out: List[List[int]] = []
    for x in members:
        for cls in out:
            if b.l_related(cls[0], x):
                cls.append(x)
                break
        else:
            out.append([x])
    return out


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class BandClassification:
    is_semilattice: bool
    is_rectangular: bool
    is_chain: bool
    is_normal: bool
    is_regular_band: bool
    is_locally_large: bool
    is_y_basic: bool
    # None when the band is not normal (pliancy is only defined for normal bands)
    is_pliant: Optional[bool]
    witnesses: Dict[str, Tuple[int, ...]] = field(default_factory=dict, compare=False)

    def flags(self) -> Dict[str, Optional[bool]]:
        return {
            "semilattice": self.is_semilattice,
            "rectangular": self.is_rectangular,
            "chain": self.is_chain,
            "normal": self.is_normal,
            "regular_band": self.is_regular_band,
            "locally_large": self.is_locally_large,
            "y_basic": self.is_y_basic,
            "pliant": self.is_pliant,
        }


def _find(pred, n: int, arity: int) -> Optional[Tuple[int, ...]]:
    for tup in itertools.product(range(n), repeat=arity):
        if not pred(*tup):
            return tup
    return None


@lru_cache(maxsize=64)
def classify(b: Band, d: Optional[DClassDecomposition] = None) -> BandClassification:
    if d is None:
        d = decompose(b)
    n = len(b)
    t = b.table
    w: Dict[str, Tuple[int, ...]] = {}

    def m(*xs):
        return b.product(xs)

    wit = _find(lambda x, y: t[x][y] == t[y][x], n, 2)
    if wit:
        w["semilattice"] = wit
    wit = _find(lambda x, y: m(x, y, x) == x, n, 2)
    if wit:
        w["rectangular"] = wit
    wit = _find(lambda x, y, z: m(x, y, z, x) == m(x, z, y, x), n, 3)
    if wit:
        w["normal"] = wit
    wit = _find(lambda x, y, z: m(x, y, x, z, x) == m(x, y, z, x), n, 3)
    if wit:
        w["regular_band"] = wit

    reps = [c[0] for c in d.classes]
    for a, c in itertools.combinations(range(len(d)), 2):
        if not d.comparable(a, c):
            w["chain"] = (reps[a], reps[c])
            break

    for u in range(n):
        for v in range(n):
            if d.lt(d.class_of[u], d.class_of[v]) and not (t[u][v] == u and t[v][u] == u):
                w.setdefault("locally_large", (u, v))

    for cls in d.classes:
        left = next(((x, y) for x in cls for y in cls if t[x][y] != x), None)
        right = next(((x, y) for x in cls for y in cls if t[x][y] != y), None)
        if left and right:
            w.setdefault("y_basic", left + right)

    normal = "normal" not in w
    pliant: Optional[bool] = None
    if normal:
        pliant = True
        morph = structure_morphisms(b, d)
        for alpha in range(len(d)):
            images = {}
            for beta in range(len(d)):
                if d.lt(alpha, beta):
                    for x in d.classes[beta]:
                        images[x] = morph.apply(x, alpha)
            if len(set(images.values())) > 1:
                xs = sorted(images)
                first = images[xs[0]]
                other = next(x for x in xs if images[x] != first)
                w["pliant"] = (xs[0], other)
                pliant = False
                break

    return BandClassification(
        is_semilattice="semilattice" not in w,
        is_rectangular="rectangular" not in w,
        is_chain="chain" not in w,
        is_normal=normal,
        is_regular_band="regular_band" not in w,
        is_locally_large="locally_large" not in w,
        is_y_basic="y_basic" not in w,
        is_pliant=pliant,
        witnesses=w,
    )


# ---------------------------------------------------------------------------
# structure morphisms of a normal band


@dataclass(frozen=True)
class StructureMorphisms:
    class_of: Tuple[int, ...]
    # (alpha, beta) with beta <= alpha -> tuple mapping element index -> image
    # (entries outside B_alpha are -1)
    phi: Dict[Tuple[int, int], Tuple[int, ...]] = field(compare=False)

    def apply(self, x: int, beta: int) -> int:
        """x phi_{alpha, beta} for the class alpha of x."""
        try:
            y = self.phi[(self.class_of[x], beta)][x]
        except KeyError:
            raise PreconditionError(
                f"class {beta} is not below the class of element {x}"
            ) from None
        return y

    def as_dict(self, alpha: int, beta: int) -> Dict[int, int]:
        row = self.phi[(alpha, beta)]
        return {x: y for x, y in enumerate(row) if y >= 0}


@lru_cache(maxsize=64)
def structure_morphisms(b: Band, d: Optional[DClassDecomposition] = None) -> StructureMorphisms:
    if d is None:
        d = decompose(b)
    wit = _find(lambda x, y, z: b.product((x, y, z, x)) == b.product((x, z, y, x)), len(b), 3)
    if wit is not None:
        raise PreconditionError("not a normal band")
    t = b.table
    n = len(b)
    phi: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for alpha in range(len(d)):
        for beta in range(len(d)):
            if not d.le(beta, alpha):
                continue
            target = d.classes[beta]
            row = [-1] * n
            for x in d.classes[alpha]:
                images = {t[t[x][f]][x] for f in target}
                if len(images) != 1:
                    raise AssertionError(
                        f"xfx depends on f for x={b.name(x)} (decomposition bug)"
                    )
                row[x] = images.pop()
            phi[(alpha, beta)] = tuple(row)
    morph = StructureMorphisms(d.class_of, phi)
    _check_morphisms(b, d, morph)
    return morph


def _check_morphisms(b: Band, d: DClassDecomposition, m: StructureMorphisms) -> None:
    for alpha in range(len(d)):
        for x in d.classes[alpha]:
            if m.apply(x, alpha) != x:
                raise AssertionError("phi(alpha, alpha) is not the identity")
    for a, bb, c in itertools.product(range(len(d)), repeat=3):
        if d.le(bb, a) and d.le(c, bb):
            for x in d.classes[a]:
                if m.apply(m.apply(x, bb), c) != m.apply(x, c):
                    raise AssertionError("phi composition law fails")
    for x in range(len(b)):
        for y in range(len(b)):
            ab = d.meet(d.class_of[x], d.class_of[y])
            if b.mul(m.apply(x, ab), m.apply(y, ab)) != b.mul(x, y):
                raise AssertionError("product law fails for structure morphisms")


# ---------------------------------------------------------------------------
# strong semilattices of rectangular bands


@dataclass(frozen=True)
class Component:
    rows: int
    cols: int
    names: Tuple[str, ...]

    def element(self, i: int, j: int) -> str:
        return self.names[i * self.cols + j]

    def position(self, name: str) -> Tuple[int, int]:
        k = self.names.index(name)
        return divmod(k, self.cols)


@dataclass(frozen=True)
class StrongSemilatticeSpec:
    components: Dict[str, Component]  # insertion order = element order
    covers: Tuple[Tuple[str, str], ...]  # (upper, lower) pairs
    phi: Dict[Tuple[str, str], Dict[str, str]]


def parse_strong_semilattice(text: str) -> StrongSemilatticeSpec:
    components: Dict[str, Component] = {}
    covers: List[Tuple[str, str]] = []
    phi: Dict[Tuple[str, str], Dict[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if line.startswith("order:"):
            body = line[len("order:"):]
            for part in body.split(","):
                m = re.fullmatch(r"\s*(\w+)\s*>\s*(\w+)\s*", part)
                if not m:
                    raise BandSyntaxError(f"bad order clause {part.strip()!r}", lineno, 1)
                covers.append((m.group(1), m.group(2)))
        elif line.startswith("component"):
            m = re.fullmatch(
                r"component\s+(\w+)\s*:\s*rows=(\d+)\s+cols=(\d+)\s+names=(.*)", line
            )
            if not m:
                raise BandSyntaxError("bad component line", lineno, 1)
            name, r, c = m.group(1), int(m.group(2)), int(m.group(3))
            names = tuple(m.group(4).split())
            for x in names:
                if not NAME_RE.fullmatch(x):
                    raise BandSyntaxError(f"invalid element name {x!r}", lineno, 1)
            if r < 1 or c < 1 or len(names) != r * c:
                raise BandSyntaxError(
                    f"component {name}: expected {r}*{c} names, got {len(names)}", lineno, 1
                )
            if name in components:
                raise BandSyntaxError(f"duplicate component {name}", lineno, 1)
            components[name] = Component(r, c, names)
        elif line.startswith("phi"):
            m = re.fullmatch(r"phi\s+(\w+)\s+(\w+)\s*:(.*)", line)
            if not m:
                raise BandSyntaxError("bad phi line", lineno, 1)
            mapping = {}
            for tok in m.group(3).split():
                if "->" not in tok:
                    raise BandSyntaxError(f"bad mapping {tok!r}", lineno, 1)
                x, y = tok.split("->", 1)
                mapping[x] = y
            phi[(m.group(1), m.group(2))] = mapping
        else:
            raise BandSyntaxError("expected order:, component or phi line", lineno, 1)
    return StrongSemilatticeSpec(components, tuple(covers), phi)


def build_strong_semilattice(spec: StrongSemilatticeSpec) -> Band:
    comps = spec.components
    ys = list(comps)
    if not ys:
        raise BandError("no components")
    for hi, lo in spec.covers:
        for y in (hi, lo):
            if y not in comps:
                raise BandError(f"order mentions unknown component {y}")
    all_names = [x for c in comps.values() for x in c.names]
    if len(set(all_names)) != len(all_names):
        raise BandError("element names must be distinct across components")
    home = {x: y for y, c in comps.items() for x in c.names}

    below: Dict[str, set] = {y: {y} for y in ys}
    changed = True
    while changed:
        changed = False
        for hi, lo in spec.covers:
            new = below[lo] - below[hi]
            if new:
                below[hi] |= new
                changed = True
    for y in ys:
        for z in ys:
            if y != z and z in below[y] and y in below[z]:
                raise BandError(f"order has a cycle through {y} and {z}")

    def le(a, c):
        return a in below[c]

    meet: Dict[Tuple[str, str], str] = {}
    for a in ys:
        for c in ys:
            lower = below[a] & below[c]
            greatest = [z for z in lower if all(le(w, z) for w in lower)]
            if len(greatest) != 1:
                raise BandError(f"order is not a meet semilattice: no meet for {a}, {c}")
            meet[(a, c)] = greatest[0]

    def rect_mul(comp: Component, x: str, y: str) -> str:
        i, _ = comp.position(x)
        _, j = comp.position(y)
        return comp.element(i, j)

    cover_maps: Dict[Tuple[str, str], Dict[str, str]] = {}
    for hi, lo in spec.covers:
        mapping = spec.phi.get((hi, lo))
        if mapping is None:
            if len(comps[lo].names) != 1:
                raise BandError(f"missing phi {hi} {lo}")
            mapping = {x: comps[lo].names[0] for x in comps[hi].names}
        if set(mapping) != set(comps[hi].names):
            raise BandError(f"phi {hi} {lo} must be defined on all of {hi}")
        if not set(mapping.values()) <= set(comps[lo].names):
            raise BandError(f"phi {hi} {lo} must map into {lo}")
        for x in comps[hi].names:
            for y in comps[hi].names:
                if mapping[rect_mul(comps[hi], x, y)] != rect_mul(comps[lo], mapping[x], mapping[y]):
                    raise BandError(f"phi {hi} {lo} is not a morphism at ({x}, {y})")
        cover_maps[(hi, lo)] = mapping
    for key in spec.phi:
        if key not in cover_maps:
            raise BandError(f"phi given for non-covering pair {key[0]} > {key[1]}")

    # compose along every chain of covers and insist on path independence
    paths: Dict[Tuple[str, str], Tuple[Tuple[str, ...], Dict[str, str]]] = {}

    def walk(start: str, node: str, path: Tuple[str, ...], acc: Dict[str, str]):
        key = (start, node)
        if key in paths:
            prev_path, prev = paths[key]
            if prev != acc:
                raise BandError(
                    "phi is path dependent: "
                    f"{' > '.join(prev_path)} and {' > '.join(path)} differ"
                )
        else:
            paths[key] = (path, acc)
        for hi, lo in spec.covers:
            if hi == node:
                step = cover_maps[(hi, lo)]
                walk(start, lo, path + (lo,), {x: step[v] for x, v in acc.items()})

    for y in ys:
        walk(y, y, (y,), {x: x for x in comps[y].names})

    index = {x: i for i, x in enumerate(all_names)}
    table = []
    for x in all_names:
        row = []
        for y in all_names:
            a, c = home[x], home[y]
            m = meet[(a, c)]
            xm = paths[(a, m)][1][x]
            ym = paths[(c, m)][1][y]
            row.append(index[rect_mul(comps[m], xm, ym)])
        table.append(tuple(row))
    band = Band(tuple(all_names), tuple(table))

    d = decompose(band)
    got = sorted(sorted(band.name(x) for x in cls) for cls in d.classes)
    want = sorted(sorted(c.names) for c in comps.values())
    if got != want:
        raise BandError("components do not come out as the D-classes of the table")
    return band


def load_band_text(text: str) -> Band:
    """Parse either file format, dispatching on the first directive."""
    for raw in text.splitlines():
        line = _strip_comment(raw).strip()
        if line:
            if line.startswith("elements:"):
                return parse_band(text)
            return build_strong_semilattice(parse_strong_semilattice(text))
    raise BandSyntaxError("empty band file", 1, 1)


def component_names(b: Band, d: DClassDecomposition, spec: StrongSemilatticeSpec) -> DClassDecomposition:
    """Attach the component names of ``spec`` as class labels."""
    names = []
    for cls in d.classes:
        member = b.name(cls[0])
        names.append(next(y for y, c in spec.components.items() if member in c.names))
    return DClassDecomposition(d.class_of, d.classes, d.leq, d.meet_table, tuple(names))


def restrict(b: Band, members: Sequence[int]) -> Band:
    """The subband on ``members`` (which must be closed under the product)."""
    members = list(members)
    pos = {x: i for i, x in enumerate(members)}
    try:
        table = tuple(tuple(pos[b.table[x][y]] for y in members) for x in members)
    except KeyError:
        raise PreconditionError("members are not closed under the product") from None
    return Band(tuple(b.elements[x] for x in members), table)
