"""Command line: ``twopres SUBCOMMAND ...``.

Exit status is 0 on success (passed, EQUAL, unique factorization), 1 when
the answer is negative (violations, DISTINCT, UNKNOWN_AT_BOUND, no or
non-unique factorization) and 2 on input errors, which are printed to
stderr prefixed with their code.
"""

from __future__ import annotations

import argparse
import sys

from . import presio
from .action import (candidate_from_fragment, hom_category,
                     validate_action, validate_monoidal, verify_universal)
from .bicat import build_2cat
from .congruence import Verdict, decide_equal, describe_step
from .errors import InputError, PresError
from .graded import check_strict_n
from .terms import enumerate_free


def _out(line=""):
    print(line)


def _first(doc, kind):
    names = doc.names(kind)
    if not names:
        raise InputError(f"no {kind} section")
    return names[0]


def _report(label, rep):
    if rep.passed:
        _out(f"{label}: passed")
        return 0
    _out(f"{label}: {len(rep.violations)} violation(s)")
    for v in rep.violations:
        _out(f"  {v.axiom} at {' '.join(map(str, v.witness))}" + (f": {v.detail}" if v.detail else ""))
    return 1


def cmd_check(args):
    doc = presio.read(args.file)
    status = 0
    for name in doc.names("category"):
        status |= _report(f"category {name}", check_strict_n(doc.category(name).table))
    for name in doc.names("monoidal"):
        status |= _report(f"monoidal {name}", validate_monoidal(doc.monoidal(name)))
    for name in doc.names("action"):
        status |= _report(f"action {name}", validate_action(doc.action(name)))
    for name in doc.names("relations"):
        sec = doc.section("relations", name)
        X = doc.data(sec.refs["on"])
        R = doc.relations(name)
        # parallelism is gated before any closure, so the smallest bound
        # that holds every relation side is enough
        build_2cat(X, R, max([t.leaves for p in R for t in p], default=1))
        _out(f"relations {name}: parallel after the 1-cell stage")
    return status


def cmd_free(args):
    doc = presio.read(args.file)
    X = doc.data(args.data or _first(doc, "data"))
    for t in enumerate_free(X, args.max_size, args.grade):
        _out(t.text())
    return 0


def _print_classes(frag):
    for k, c in enumerate(frag.classes()):
        _out(f"c{k} g{c[0].grade}: " + " | ".join(t.text() for t in c))


def cmd_present(args):
    doc = presio.read(args.file)
    data = args.data or _first(doc, "data")
    build = ("present", data) + ((args.relations,) if args.relations else
                                 tuple(s.name for s in doc.sections
                                       if s.kind == "relations" and s.refs["on"] == data)[:1])
    flags = ("collapse",) if args.collapse else ()
    fdoc = presio.fragment_document(doc, build, args.bound, flags)
    if args.out:
        presio.write(fdoc, args.out)
    frag = presio.load_fragment(fdoc)
    _print_classes(frag)
    return 0


def cmd_quotient(args):
    doc = presio.read(args.file)
    name = args.action or _first(doc, "action")
    flags = tuple(f for f, on in (("collapse", args.collapse), ("lax", args.lax)) if on)
    fdoc = presio.fragment_document(doc, ("quotient", name), args.bound, flags)
    if args.out:
        presio.write(fdoc, args.out)
    else:
        sys.stdout.write(presio.print_document(fdoc))
    return 0


def _load(path):
    return presio.load_fragment(presio.read(path))


def cmd_hom(args):
    frag = _load(args.frag)
    h = hom_category(frag, args.src, args.dst, args.bound)
    _out(f"hom({h.source}, {h.target}) within {h.bound} leaves")
    _out(f"1-cells: {len(h.one_cells)}")
    for i, u in enumerate(h.one_cells):
        _out(f"  u{i} {u.text()}")
    _out(f"2-cells: {len(h.two_cells)}")
    for k, (i, j, c) in enumerate(h.two_cells):
        _out(f"  e{k} u{i} => u{j}: {c.text()}")
    _out("vertical:")
    for (p, q), r in sorted(h.vertical.items()):
        _out(f"  e{p} *1 e{q} = e{r}")
    return 0


def cmd_decide(args):
    frag = _load(args.frag)
    t1, t2 = frag.term(args.t1), frag.term(args.t2)
    d = decide_equal(frag, t1, t2)
    _out(d.verdict.value)
    names = list(frag.relations.tags)
    for step in d.certificate:
        _out("  " + describe_step(step, names))
    return 0 if d.verdict is Verdict.EQUAL else 1


def cmd_universal(args):
    frag = _load(args.frag)
    cand = candidate_from_fragment(_load(args.cand))
    res = verify_universal(frag, cand)
    _out(res.verdict.value)
    if res.factor is not None:
        for k in sorted(res.factor, key=lambda s: (len(s), s)):
            _out(f"  {k} -> {res.factor[k]}")
    for w in res.witnesses:
        _out(f"  witness with {len(w)} classes")
    return 0 if res else 1


def make_parser():
    p = argparse.ArgumentParser(prog="twopres", description="Presented 2-categories and quotients by monoidal actions.")
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("check", help="validate every section of a presentation")
    s.add_argument("file")
    s.set_defaults(run=cmd_check)
    s = sub.add_parser("free", help="enumerate free terms")
    s.add_argument("file")
    s.add_argument("--max-size", type=int, required=True)
    s.add_argument("--grade", type=int, default=1)
    s.add_argument("--data", default=None)
    s.set_defaults(run=cmd_free)
    s = sub.add_parser("present", help="bounded fragment of a presented 2-category")
    s.add_argument("file")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--data", default=None)
    s.add_argument("--relations", default=None)
    s.add_argument("--collapse", action="store_true")
    s.add_argument("--out", default=None)
    s.set_defaults(run=cmd_present)
    s = sub.add_parser("quotient", help="bounded fragment of the quotient by an action")
    s.add_argument("file")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--action", default=None)
    s.add_argument("--collapse", action="store_true")
    s.add_argument("--lax", action="store_true")
    s.add_argument("--out", default=None)
    s.set_defaults(run=cmd_quotient)
    s = sub.add_parser("hom", help="hom-category between two objects of a fragment")
    s.add_argument("frag")
    s.add_argument("--from", dest="src", required=True)
    s.add_argument("--to", dest="dst", required=True)
    s.add_argument("--bound", type=int, default=None)
    s.set_defaults(run=cmd_hom)
    s = sub.add_parser("decide", help="decide equality of two terms in a fragment")
    s.add_argument("frag")
    s.add_argument("t1")
    s.add_argument("t2")
    s.set_defaults(run=cmd_decide)
    s = sub.add_parser("universal", help="check the universal property against a candidate fragment")
    s.add_argument("frag")
    s.add_argument("cand")
    s.set_defaults(run=cmd_universal)
    return p


def main(argv=None):
    args = make_parser().parse_args(argv)
    try:
        return args.run(args)
    except PresError as e:
        print(f"{e.code}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"E-INPUT: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
