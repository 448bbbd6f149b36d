"""Command-line front end."""

from __future__ import annotations

import argparse
import itertools
import sys
from typing import Callable, Dict, List, Optional, Sequence

from .band import (
    Band,
    BandError,
    DClassDecomposition,
    PreconditionError,
    classify,
    l_classes,
    r_classes,
    restrict,
    structure_morphisms,
)
from .bundled import load
from .decide import EQUAL, INCONCLUSIVE, NOT_EQUAL, equal, equal_normal_component, equal_rectangular, equal_semilattice
from .greens import (
    format_witness,
    falsify_condition_p,
    make_witness,
    parse_witness,
    regularity_witness,
    search_nonabundance,
    verify_nonabundance,
)
from .igword import LTR, RTL, anf, format_anf, significant_indices, y_projection
from .rewrite import (
    Budget,
    bfs_equal,
    check_certificate,
    check_local_confluence,
    format_certificate,
    format_word,
    normal_form,
    parse_word,
)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2


class Report:
    """Collects human-readable lines and ``key=value`` machine lines."""

    def __init__(self, machine: bool):
        self.machine = machine
        self.lines: List[str] = []

    def text(self, line: str = "") -> None:
        if not self.machine:
            self.lines.append(line)

    def block(self, text: str) -> None:
        for line in text.rstrip("\n").splitlines():
            self.text(line)

    def field(self, key: str, value) -> None:
        if self.machine:
            self.lines.append(f"{key}={value}")
        else:
            self.lines.append(f"{key}: {value}")

    def emit(self, out) -> None:
        for line in self.lines:
            print(line, file=out)


def _budget(args) -> Budget:
    return Budget(args.max_len, args.max_states)


def _morphisms(b: Band, d: DClassDecomposition):
    return structure_morphisms(b, d) if classify(b, d).is_normal else None


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args, rep: Report) -> int:
    b, d = load(args.band)
    rep.field("elements", len(b))
    rep.field("classes", len(d))
    rep.field("status", "valid")
    return EXIT_OK


def cmd_classify(args, rep: Report) -> int:
    b, d = load(args.band)
    c = classify(b, d)
    for name, flag in c.flags().items():
        shown = "n/a" if flag is None else str(flag).lower()
        rep.field(name, shown)
        if name in c.witnesses:
            rep.field(f"{name}_witness", " ".join(b.name(x) for x in c.witnesses[name]))
    return EXIT_OK


def render_class(b: Band, members: Sequence[int]) -> List[str]:
    rows, cols = r_classes(b, members), l_classes(b, members)
    cells = [[next(x for x in r if x in set(col)) for col in cols] for r in rows]
    width = max(len(b.name(x)) for x in members)
    rule = "+" + "+".join("-" * (width + 2) for _ in cols) + "+"
    out = [rule]
    for row in cells:
        out.append("|" + "|".join(f" {b.name(x):<{width}} " for x in row) + "|")
        out.append(rule)
    return out


# IG(Y) for the three-element semilattice with two incomparable tops,
# as a fixed reference listing (it is infinite, so it is not computed).
Y3_IG_EGGBOX = (
    ("{e}, ({e} {f})^n {e}", "({e} {f})^n"),
    ("({f} {e})^n", "{f}, ({f} {e})^n {f}"),
)


def _render_fixed(rows) -> List[str]:
    width = max(len(c) for r in rows for c in r)
    rule = "+" + "+".join("-" * (width + 2) for _ in rows[0]) + "+"
    out = [rule]
    for r in rows:
        out.append("|" + "|".join(f" {c:<{width}} " for c in r) + "|")
        out.append(rule)
    return out


def cmd_eggbox(args, rep: Report) -> int:
    b, d = load(args.band)
    for a, members in enumerate(d.classes):
        rows, cols = len(r_classes(b, members)), len(l_classes(b, members))
        rep.field(f"class {d.label(a)}", f"{rows}x{cols}")
        for line in render_class(b, members):
            rep.text(line)
    tops = [x for x in range(len(b)) if all(b.mul(x, y) != x or x == y for y in range(len(b)))]
    if len(b) == 3 and classify(b, d).is_semilattice and len(tops) == 2:
        e, f = (b.name(x) for x in tops)
        rows = [[cell.format(e=e, f=f) for cell in row] for row in Y3_IG_EGGBOX]
        rep.text()
        rep.text("hard-coded reference data: the non-trivial D*-class of IG(Y), n >= 1")
        for line in _render_fixed(rows):
            rep.text(line)
    return EXIT_OK


def cmd_nf(args, rep: Report) -> int:
    b, _ = load(args.band)
    nf, cert = normal_form(b, parse_word(b, args.word))
    rep.field("normal_form", format_word(b, nf))
    rep.field("steps", len(cert))
    return EXIT_OK


def cmd_anf(args, rep: Report) -> int:
    b, d = load(args.band)
    a, cert = anf(b, d, _morphisms(b, d), parse_word(b, args.word))
    rep.field("anf", format_anf(b, a))
    rep.field("y_length", a.y_length)
    rep.field("components", " ".join(d.label(c) for c in a.components))
    rep.block(format_certificate(b, cert))
    return EXIT_OK


def cmd_indices(args, rep: Report) -> int:
    b, d = load(args.band)
    direction = RTL if args.direction == "rtl" else LTR
    p = significant_indices(b, d, parse_word(b, args.word), direction)
    rep.field("direction", p.direction)
    rep.field("indices", " ".join(map(str, p.indices)))
    rep.field("stops", " ".join(map(str, p.stops)))
    rep.field("components", " ".join(d.label(c) for c in p.components))
    rep.field("y_length", p.y_length)
    return EXIT_OK


def cmd_project_y(args, rep: Report) -> int:
    b, d = load(args.band)
    proj, nf = y_projection(b, d, parse_word(b, args.word))
    rep.field("projection", " ".join(d.label(c) for c in proj))
    rep.field("normal_form", " ".join(d.label(c) for c in nf))
    return EXIT_OK


def _report_verdict(b: Band, v, rep: Report) -> int:
    rep.field("verdict", v.verdict)
    rep.field("method", v.method)
    if v.reason:
        rep.field("reason", v.reason)
    if v.certificate is not None:
        rep.field("steps", len(v.certificate))
        rep.block(format_certificate(b, v.certificate))
    elif v.evidence is not None:
        rep.field("evidence", v.evidence.describe())
    return EXIT_INCONCLUSIVE if v.verdict == INCONCLUSIVE else EXIT_OK


def cmd_equal(args, rep: Report) -> int:
    b, d = load(args.band)
    v = equal(b, parse_word(b, args.word1), parse_word(b, args.word2), _budget(args), d)
    return _report_verdict(b, v, rep)


def cmd_witness_verify(args, rep: Report) -> int:
    b, d = load(args.band)
    with open(args.witness, encoding="utf-8") as fh:
        w = parse_witness(b, fh.read(), _budget(args), d)
    res = verify_nonabundance(b, w, _budget(args), d)
    rep.field("verified", str(res.ok).lower())
    rep.field("reason", res.reason)
    return EXIT_OK if res.ok else EXIT_INCONCLUSIVE


def cmd_witness_search(args, rep: Report) -> int:
    b, d = load(args.band)
    w = search_nonabundance(b, parse_word(b, args.word), args.length, _budget(args), d)
    if w is None:
        rep.field("witness", f"none up to length {args.length}")
        return EXIT_INCONCLUSIVE
    rep.field("witness", w.kind)
    rep.block(format_witness(b, w))
    return EXIT_OK


def cmd_regularity(args, rep: Report) -> int:
    b, d = load(args.band)
    z, cert = regularity_witness(b, d, parse_word(b, args.word))
    rep.field("inverse", format_word(b, z))
    rep.block(format_certificate(b, cert))
    return EXIT_OK


def cmd_confluence(args, rep: Report) -> int:
    b, _ = load(args.band)
    r = check_local_confluence(b)
    rep.field("verdict", r.verdict)
    rep.field("critical_words", r.checked)
    if r.counterexample is not None:
        cp = r.counterexample
        rep.field("word", format_word(b, cp.word))
        rep.field("descendants", f"{format_word(b, cp.left)} / {format_word(b, cp.right)}")
    return EXIT_OK


def cmd_condition_p(args, rep: Report) -> int:
    b, d = load(args.band)
    budget = Budget(args.max_len or args.length, args.max_states)
    v = falsify_condition_p(b, args.length, budget, d)
    if v is None:
        rep.field("violation", f"none up to length {args.length}")
        return EXIT_OK
    rep.field("violation", f"clause ({v.clause}) at index {v.index}")
    rep.field("anf1", format_anf(b, v.w1))
    rep.field("anf2", format_anf(b, v.w2))
    rep.field("related", " ".join(b.name(x) for x in v.related))
    rep.field("differ", v.inequality.evidence.describe() if v.inequality.evidence else v.inequality.method)
    rep.block(format_certificate(b, v.certificate))
    return EXIT_OK


# ---------------------------------------------------------------------------
# demos


class DemoFailure(AssertionError):
    pass


def _expect(cond: bool, what: str) -> None:
    if not cond:
        raise DemoFailure(what)


def demo_y3_nonregular(rep: Report, length: int = 6) -> None:
    b, _ = load("y3")
    e, f = b.index("e"), b.index("f")
    for n in (1, 2, 3):
        p = (e, f) * n
        bad = 0
        for k in range(1, length + 1):
            for w in itertools.product(range(len(b)), repeat=k):
                if equal_semilattice(b, p + w + p, p).verdict != NOT_EQUAL:
                    bad += 1
        _expect(bad == 0, f"(e f)^{n} has an inverse among short words")
        rep.field(f"(e f)^{n}", f"no w of length <= {length} with (e f)^{n} w (e f)^{n} = (e f)^{n}")


def demo_normal5_derivation(rep: Report) -> None:
    b, _ = load("normal5")
    res = bfs_equal(b, parse_word(b, "c d"), parse_word(b, "b d"), Budget(4))
    _expect(res.equal and check_certificate(b, res.certificate), "c d = b d not certified")
    rep.field("c d = b d", "equal")
    rep.block(format_certificate(b, res.certificate))


def demo_normal5_confluence(rep: Report) -> None:
    b, _ = load("normal5")
    r = check_local_confluence(b)
    cp = r.counterexample
    _expect(not r.confluent and cp is not None, "normal5 reported locally confluent")
    _expect(format_word(b, cp.word) == "c a d", "unexpected critical word")
    _expect({format_word(b, cp.left), format_word(b, cp.right)} == {"b d", "c d"}, "unexpected descendants")
    rep.field("critical word", "c a d")
    rep.field("descendants", "b d / c d")


def demo_band4_nonabundant(rep: Report) -> None:
    b, d = load("band4")
    target = parse_word(b, "a b")
    w = make_witness(b, target, parse_word(b, "x"), parse_word(b, "y"), d=d)
    _expect(w is not None and bool(verify_nonabundance(b, w, d=d)), "pair witness x, y rejected")
    found = search_nonabundance(b, target, 1, d=d)
    _expect(found is not None and found.kind == "pair" and len(found.x) == len(found.y) == 1, "search missed the pair")
    rep.block(format_witness(b, w))
    rep.field("search", f"pair {format_word(b, found.x)}, {format_word(b, found.y)}")


def demo_nonnormal5_projection(rep: Report) -> None:
    b, d = load("nonnormal5")
    w1, w2 = parse_word(b, "u' w"), parse_word(b, "w'")
    v = equal(b, w1, w2, d=d)
    _expect(v.verdict == EQUAL and check_certificate(b, v.certificate) and len(v.certificate) <= 6, "u' w = w' not certified")
    comp = restrict(b, d.classes[d.class_of[w2[0]]])
    r = equal_rectangular(comp, parse_word(comp, "u' w"), parse_word(comp, "w'"))
    _expect(r.verdict == NOT_EQUAL, "component wrongly identifies u' w and w'")
    rep.field("in IG(B)", f"u' w = w' ({len(v.certificate)} steps)")
    rep.block(format_certificate(b, v.certificate))
    rep.field("in the component alone", "u' w != w'")


def demo_normal10_nonabundant(rep: Report) -> None:
    b, d = load("normal10")
    ev, ehev = parse_word(b, "e v"), parse_word(b, "e h e v")
    res = bfs_equal(b, ev, ehev)
    _expect(res.equal and len(res.certificate) <= 8, "e v = e h e v not certified")
    comp = equal_normal_component(b, d, None, parse_word(b, "e h e"), parse_word(b, "e"))
    _expect(comp.verdict == NOT_EQUAL, "e h e = e in the component")
    w = make_witness(b, ev, parse_word(b, "e h"), d=d)
    _expect(w is not None and bool(verify_nonabundance(b, w, d=d)), "witness e h rejected")
    rep.block(format_witness(b, w))


DEMOS: Dict[str, Callable[[Report], None]] = {
    "y3-nonregular": demo_y3_nonregular,
    "normal5-derivation": demo_normal5_derivation,
    "normal5-confluence": demo_normal5_confluence,
    "band4-nonabundant": demo_band4_nonabundant,
    "nonnormal5-projection": demo_nonnormal5_projection,
    "normal10-nonabundant": demo_normal10_nonabundant,
}


def cmd_demo(args, rep: Report) -> int:
    names = list(DEMOS) if args.name == "all" else [args.name]
    for name in names:
        rep.text(f"== {name}")
        try:
            DEMOS[name](rep)
        except DemoFailure as exc:
            rep.field(name, f"FAILED: {exc}")
            raise
        rep.field(name, "ok")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--band", default="y3", help="band file, or the name of a bundled band")
    common.add_argument("--max-len", type=int, default=None, help="longest word searched (default: input length + 4)")
    common.add_argument("--max-states", type=int, default=100_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--machine", action="store_true", help="key=value output")

    p = argparse.ArgumentParser(prog="igband", description="Free idempotent generated semigroups over finite bands.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, *words):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        for w in words:
            sp.add_argument(w, help="space-separated element names")
        sp.set_defaults(fn=fn)
        return sp

    add("validate", cmd_validate, "parse and validate a band")
    add("classify", cmd_classify, "band class flags with witnesses")
    add("eggbox", cmd_eggbox, "D-classes as R-row by L-column grids")
    add("nf", cmd_nf, "leftmost normal form", "word")
    add("anf", cmd_anf, "almost normal form with certificate", "word")
    sp = add("indices", cmd_indices, "significant indices", "word")
    sp.add_argument("--direction", choices=("ltr", "rtl"), default="ltr")
    add("project-y", cmd_project_y, "image in IG(Y)", "word")
    add("equal", cmd_equal, "decide equality of two words", "word1", "word2")
    sp = add("witness-verify", cmd_witness_verify, "check a non-abundance witness file")
    sp.add_argument("witness")
    sp = add("witness-search", cmd_witness_search, "search for a non-abundance witness", "word")
    sp.add_argument("--length", type=int, default=2, help="longest multiplier tried")
    add("regularity", cmd_regularity, "inverse of a single-class word", "word")
    add("confluence", cmd_confluence, "local confluence check")
    sp = add("condition-p", cmd_condition_p, "search for a Condition (P) violation")
    sp.add_argument("--length", type=int, default=6, help="longest ANF tried")
    sp = add("demo", cmd_demo, "replay a bundled example")
    sp.add_argument("name", choices=sorted(DEMOS) + ["all"])
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report(args.machine)
    try:
        code = args.fn(args, rep)
    except DemoFailure:
        rep.emit(sys.stdout)
        return EXIT_INCONCLUSIVE
    except (BandError, PreconditionError, KeyError, ValueError, OSError) as exc:
        rep.emit(sys.stdout)
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"igband: error: {msg}", file=sys.stderr)
        return EXIT_INPUT
    rep.emit(sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
