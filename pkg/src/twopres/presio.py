"""Text format for presentations (``.2pres``) and fragments (``.2frag``).

A document is a sequence of sections separated by blank lines::

    category C
      object a
      f: a -> b
      compose g f = h
    end

    monoidal M on MC
      unit 1
      tensor f g = h
      beta a b c = f
      lunit a = f
      runit a = f
      symmetry a b = f
    end

    action A of M on C
      act f x = y
      beta* m n a = f
      u a = f
    end

    data X
      object a
      f: a -> b
      c: (g *0 f) => h
    end

    relations R on X
      (g *0 f) = h
      Q3: eta = (u *1 v)
    end

Fragments add ``fragment``, ``classes``, ``structure`` and ``homs``
sections; the fragment section records how to rebuild the fragment and
the other three are tables for reading.  Lines starting with ``#`` are
kept as comments.  Printing produces the canonical form, and parsing a
canonical document then printing it gives back the same bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product

from .action import (ActionPresentation, MonoidalPresentation, build_quotient, hom_category)
from .bicat import build_2cat
from .congruence import RelationSet, collapse_preorder
from .errors import DuplicateError, InputError, ParseError, PresError, UnresolvedError
from .graded import FiniteCategory
from .terms import STRUCTURE_KINDS, GeneratingData, expr_text, parse_expr, resolve

SECTION_KINDS = ("category", "monoidal", "action", "data", "relations",
                 "fragment", "classes", "structure", "homs")
_ID = r"[A-Za-z0-9_][A-Za-z0-9_'.]*"


@dataclass
class Entry:
    kind: str
    fields: tuple
    line: int = 0

    def text(self):
        f = self.fields
        k = self.kind
        if k == "comment":
            return f[0]
        if k == "object":
            return f"object {f[0]}"
        if k == "arrow":
            return f"{f[0]}: {f[1]} -> {f[2]}"
        if k == "cell":
            return f"{f[0]}: {f[1]} => {f[2]}"
        if k == "rel":
            return (f"{f[0]}: " if f[0] else "") + f"{f[1]} = {f[2]}"
        if k == "raw":
            return f[0]
        return k + " " + " ".join(f[:-1]) + " = " + f[-1] if k in _TABLES else k + " " + " ".join(f)


# table rows: keyword -> number of arguments before "="
_TABLES = {"compose": 2, "tensor": 2, "beta": 3, "lunit": 1, "runit": 1, "symmetry": 2,
           "act": 2, "beta*": 3, "u": 1}
_ALLOWED = {
    "category": {"object", "arrow", "compose"},
    "monoidal": {"unit", "tensor", "beta", "lunit", "runit", "symmetry"},
    "action": {"act", "beta*", "u"},
    "data": {"object", "arrow", "cell"},
    "relations": {"rel"},
    "fragment": {"build", "bound", "flag"},
    "classes": {"raw"},
    "structure": {"raw"},
    "homs": {"raw"},
}
_HEADERS = {
    "category": ("name",),
    "monoidal": ("name", "on"),
    "action": ("name", "of", "on"),
    "data": ("name",),
    "relations": ("name", "on"),
    "fragment": ("name",),
    "classes": ("name",),
    "structure": ("name",),
    "homs": ("name",),
}


@dataclass
class Section:
    kind: str
    name: str
    refs: dict = field(default_factory=dict)  # header keyword -> section name
    entries: list = field(default_factory=list)
    line: int = 0

    def header(self):
        parts = [self.kind, self.name]
        for kw in _HEADERS[self.kind][1:]:
            parts += [kw, self.refs[kw]]
        return " ".join(parts)

    def rows(self, kind):
        return [e for e in self.entries if e.kind == kind]


@dataclass
class PresentationDocument:
    """Parsed document; ``objects`` holds the resolved values by
    (section kind, name)."""

    sections: list = field(default_factory=list)
    preamble: list = field(default_factory=list)  # comment lines before the first section
    objects: dict = field(default_factory=dict)

    def section(self, kind, name=None):
        found = [s for s in self.sections if s.kind == kind and (name is None or s.name == name)]
        if not found:
            raise InputError(f"no {kind} section" + (f" named {name!r}" if name else ""))
        return found[0]

    def get(self, kind, name=None):
        return self.objects[(kind, self.section(kind, name).name)]

    def names(self, kind):
        return [s.name for s in self.sections if s.kind == kind]

    def category(self, name=None) -> FiniteCategory:
        return self.get("category", name)

    def monoidal(self, name=None) -> MonoidalPresentation:
        return self.get("monoidal", name)

    def action(self, name=None) -> ActionPresentation:
        return self.get("action", name)

    def data(self, name=None) -> GeneratingData:
        return self.get("data", name)

    def relations(self, name=None) -> RelationSet:
        return self.get("relations", name)

    @property
    def is_fragment(self):
        return any(s.kind == "fragment" for s in self.sections)


FragmentDocument = PresentationDocument


# parsing ---------------------------------------------------------------------------------

def _err(cls, msg, line, col=1):
    return cls(msg, line, col)


def _split_row(body, line, col):
    """``kw a b = c`` -> (kw, (a, b, c))."""
    if "=" not in body:
        raise _err(ParseError, "expected '='", line, col + len(body))
    lhs, rhs = body.split("=", 1)
    words = lhs.split()
    vals = rhs.split()
    if len(vals) != 1:
        raise _err(ParseError, "expected one name after '='", line, col + len(lhs) + 1)
    return words[0], tuple(words[1:]) + (vals[0],)


def _colon(body):
    """Index of the first ':' outside brackets, or None."""
    depth = 0
    for i, ch in enumerate(body):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == ":" and depth == 0:
            return i
    return None


def _parse_entry(kind, body, line, col):
    if body.startswith("#"):
        return Entry("comment", (body,), line)
    if kind in ("classes", "structure", "homs"):
        return Entry("raw", (body,), line)
    words = body.split()
    head = words[0]
    if kind == "relations":
        tag, off = "", 0
        i = _colon(body)
        if i is not None:
            tag = body[:i]
            if not re.fullmatch(_ID, tag):
                raise _err(ParseError, f"bad relation tag {tag!r}", line, col)
            off = i + 1
            while off < len(body) and body[off] == " ":
                off += 1
        rest = body[off:]
        depth, cut = 0, None
        for i, ch in enumerate(rest):
            if ch in "([":
                depth += 1
            elif ch in ")]":
                depth -= 1
            elif ch == "=" and depth == 0:
                cut = i
                break
        if cut is None:
            raise _err(ParseError, "expected 'lhs = rhs'", line, col)
        l = parse_expr(rest[:cut], line, col + off - 1)
        r = parse_expr(rest[cut + 1:], line, col + off + cut)
        return Entry("rel", (tag, expr_text(l), expr_text(r)), line)
    if head == "object" and kind in ("category", "data"):
        if len(words) != 2:
            raise _err(ParseError, "expected 'object NAME'", line, col)
        return Entry("object", (words[1],), line)
    if kind == "fragment":
        if head not in _ALLOWED["fragment"]:
            raise _err(ParseError, f"unknown fragment entry {head!r}", line, col)
        return Entry(head, tuple(words[1:]), line)
    if kind == "monoidal" and head == "unit":
        if len(words) != 2:
            raise _err(ParseError, "expected 'unit NAME'", line, col)
        return Entry("unit", (words[1],), line)
    if head in _TABLES and head in _ALLOWED[kind]:
        kw, vals = _split_row(body, line, col)
        if len(vals) != _TABLES[head] + 1:
            raise _err(ParseError, f"{head} takes {_TABLES[head]} arguments", line, col)
        return Entry(head, vals, line)
    i = _colon(body)
    if i is not None and kind in ("category", "data"):
        ex = parse_expr(body[:i], line, col - 1)
        if ex[0] != "n":
            raise _err(ParseError, "expected a generator name", line, col)
        name, rest = ex[1], body[i + 1:]
        rcol = col + i + 1
        if "=>" in rest and kind == "data":
            s_txt, t_txt = rest.split("=>", 1)
            s = parse_expr(s_txt, line, rcol - 1)
            t = parse_expr(t_txt, line, rcol + len(s_txt) + 1)
            return Entry("cell", (name, expr_text(s), expr_text(t)), line)
        parts = rest.split()
        if len(parts) == 3 and parts[1] == "->":
            return Entry("arrow", (name, parts[0], parts[2]), line)
        raise _err(ParseError, "expected 'NAME: SRC -> TGT'", line, rcol)
    raise _err(ParseError, f"unexpected entry in {kind} section", line, col)


def parse(text: str) -> PresentationDocument:
    """Parse and resolve a document; the first error carries line:column."""
    doc = PresentationDocument()
    cur = None
    seen = set()
    for ln, raw in enumerate(text.split("\n"), start=1):
        if raw.strip() == "":
            continue
        stripped = raw.strip()
        col = len(raw) - len(raw.lstrip()) + 1
        if cur is None:
            if stripped.startswith("#"):
                doc.preamble.append(stripped)
                continue
            words = stripped.split()
            kind = words[0]
            if kind not in SECTION_KINDS:
                raise _err(ParseError, f"unknown section kind {kind!r}", ln, col)
            want = _HEADERS[kind]
            if len(words) != 1 + 2 * len(want) - 1:
                raise _err(ParseError, f"expected '{' '.join([kind, 'NAME'] + [f'{k} NAME' for k in want[1:]])}'", ln, col)
            refs = {}
            for i, kw in enumerate(want[1:]):
                if words[2 + 2 * i] != kw:
                    raise _err(ParseError, f"expected {kw!r}", ln, raw.index(words[2 + 2 * i]) + 1)
                refs[kw] = words[3 + 2 * i]
            if (kind, words[1]) in seen:
                raise _err(DuplicateError, f"duplicate {kind} section {words[1]!r}", ln, col)
            seen.add((kind, words[1]))
            cur = Section(kind, words[1], refs, [], ln)
            continue
        if stripped == "end":
            doc.sections.append(cur)
            cur = None
            continue
        cur.entries.append(_parse_entry(cur.kind, stripped, ln, col))
    if cur is not None:
        raise _err(ParseError, f"section {cur.name!r} is not closed with 'end'", cur.line)
    _resolve(doc)
    return doc


def _ref(doc, kind, name, line):
    if (kind, name) not in doc.objects:
        raise _err(UnresolvedError, f"unknown {kind} {name!r}", line)
    return doc.objects[(kind, name)]


def _resolve(doc):
    for s in doc.sections:
        build = _BUILDERS.get(s.kind)
        if build is not None:
            doc.objects[(s.kind, s.name)] = build(doc, s)


def _build_category(doc, s):
    obs, arrows, comp = [], [], {}
    names = {}
    for e in s.entries:
        if e.kind in ("object", "arrow"):
            if e.fields[0] in names:
                raise _err(DuplicateError, f"duplicate id {e.fields[0]!r}", e.line)
            names[e.fields[0]] = e
            if e.kind == "object":
                obs.append(e.fields[0])
            else:
                for o in e.fields[1:]:
                    if o not in obs:
                        raise _err(UnresolvedError, f"unknown object {o!r}", e.line)
                arrows.append(e.fields)
    for e in s.rows("compose"):
        for n in e.fields:
            if n not in names:
                raise _err(UnresolvedError, f"unknown morphism {n!r}", e.line)
        key = e.fields[:2]
        if key in comp:
            raise _err(DuplicateError, f"duplicate composite {key[0]} o {key[1]}", e.line)
        comp[key] = e.fields[2]
    try:
        return FiniteCategory(obs, arrows, comp, name=s.name)
    except InputError as err:
        raise InputError(f"{s.line}:1: {err}") from None


def _table(s, kind, C_names, arity, line_names=None):
    out = {}
    for e in s.rows(kind):
        *args, val = e.fields
        for n in args:
            if n not in C_names[0]:
                raise _err(UnresolvedError, f"unknown name {n!r} in {kind}", e.line)
        if val not in C_names[1]:
            raise _err(UnresolvedError, f"unknown morphism {val!r} in {kind}", e.line)
        key = tuple(args) if arity > 1 else args[0]
        if key in out:
            raise _err(DuplicateError, f"duplicate {kind} entry for {' '.join(args)}", e.line)
        out[key] = val
    return out


def _build_monoidal(doc, s):
    B = _ref(doc, "category", s.refs["on"], s.line)
    mor = set(B.morphisms)
    units = s.rows("unit")
    if len(units) != 1:
        raise _err(ParseError, "monoidal section needs exactly one unit", s.line)
    unit = units[0].fields[0]
    if unit not in B.objects:
        raise _err(UnresolvedError, f"unknown unit object {unit!r}", units[0].line)
    names = (mor, mor)
    sym = _table(s, "symmetry", names, 2) if s.rows("symmetry") else None
    return MonoidalPresentation(B, _table(s, "tensor", names, 2), unit,
                                _table(s, "beta", names, 3), _table(s, "lunit", names, 1),
                                _table(s, "runit", names, 1), sym, name=s.name)


def _build_action(doc, s):
    M = _ref(doc, "monoidal", s.refs["of"], s.line)
    C = _ref(doc, "category", s.refs["on"], s.line)
    both = set(M.base.morphisms) | set(C.morphisms)
    cm = set(C.morphisms)
    return ActionPresentation(C, M, _table(s, "act", (both, cm), 2),
                              _table(s, "beta*", (both, cm), 3),
                              _table(s, "u", (both, cm), 1), name=s.name)


def _build_data(doc, s):
    X = GeneratingData()
    for e in s.entries:
        if e.kind == "comment":
            continue
        name = e.fields[0]
        if name in X:
            raise _err(DuplicateError, f"duplicate id {name!r}", e.line)
        if e.kind == "object":
            X.add_object(name)
        elif e.kind == "arrow":
            for o in e.fields[1:]:
                if o not in X or X.decls[o].grade != 0:
                    raise _err(UnresolvedError, f"unknown object {o!r}", e.line)
            X.add_arrow(name, e.fields[1], e.fields[2])
        else:
            src, tgt = (_term(X, e.fields[i], e.line) for i in (1, 2))
            cell = None
            ex = parse_expr(name, e.line)
            if ex[2] in STRUCTURE_KINDS:
                cell = (ex[2], tuple(resolve(a, _lookup(X, e.line), X.compose) for a in ex[3]))
            try:
                X.add_cell(name, src, tgt, cell, check=False)
            except InputError as err:
                raise InputError(f"{e.line}:1: {err}") from None
    return X


def _lookup(X, line):
    def look(name):
        if name not in X:
            raise _err(UnresolvedError, f"unknown generator {name!r}", line)
        return X.gen(name)
    return look


def _term(X, text, line):
    try:
        return resolve(parse_expr(text, line), _lookup(X, line), X.compose)
    except PresError as err:
        if isinstance(err, ParseError):
            raise
        raise InputError(f"{line}:1: {err}") from None


def _build_relations(doc, s):
    X = _ref(doc, "data", s.refs["on"], s.line)
    R = RelationSet()
    for e in s.rows("rel"):
        tag, l, r = e.fields
        R.add(_term(X, l, e.line), _term(X, r, e.line), tag)
    return R


def _build_fragment(doc, s):
    recipe = {"build": None, "bound": None, "flags": []}
    for e in s.entries:
        if e.kind == "build":
            recipe["build"] = e.fields
        elif e.kind == "bound":
            recipe["bound"] = int(e.fields[0])
        elif e.kind == "flag":
            recipe["flags"].append(e.fields[0])
    b = recipe["build"]
    if b is None or recipe["bound"] is None:
        raise _err(ParseError, "fragment needs 'build' and 'bound' entries", s.line)
    if b[0] == "quotient":
        _ref(doc, "action", b[1], s.line)
    elif b[0] == "present":
        _ref(doc, "data", b[1], s.line)
        if len(b) > 2:
            _ref(doc, "relations", b[2], s.line)
    else:
        raise _err(ParseError, f"unknown build kind {b[0]!r}", s.line)
    return recipe


_BUILDERS = {"category": _build_category, "monoidal": _build_monoidal, "action": _build_action,
             "data": _build_data, "relations": _build_relations, "fragment": _build_fragment}


# printing --------------------------------------------------------------------------------

def print_document(doc: PresentationDocument) -> str:
    blocks = []
    if doc.preamble:
        blocks.append("\n".join(doc.preamble))
    for s in doc.sections:
        lines = [s.header()] + ["  " + e.text() for e in s.entries] + ["end"]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def read(path) -> PresentationDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(print_document(doc))


# building documents from objects ---------------------------------------------------------

def category_section(C: FiniteCategory, name=None) -> Section:
    s = Section("category", name or C.name or "C")
    s.entries += [Entry("object", (o,)) for o in C.objects]
    s.entries += [Entry("arrow", (m, a, b)) for m, (a, b) in C.arrows.items()]
    s.entries += [Entry("compose", (g, f, h)) for (g, f), h in C.entries.items()]
    return s


def data_section(X: GeneratingData, name="X") -> Section:
    s = Section("data", name)
    for d in X.decls.values():
        if d.grade == 0:
            s.entries.append(Entry("object", (d.name,)))
        elif d.grade == 1:
            s.entries.append(Entry("arrow", (d.name, d.src, d.tgt)))
        else:
            s.entries.append(Entry("cell", (d.name, d.src.text(), d.tgt.text())))
    return s


def relations_section(R: RelationSet, data_name="X", name="R") -> Section:
    s = Section("relations", name, {"on": data_name})
    for (l, r), tag in zip(R.pairs, R.tags):
        s.entries.append(Entry("rel", (tag or "", l.text(), r.text())))
    return s


def fragment_document(doc: PresentationDocument, build: tuple, bound: int, flags=(),
                      frag=None, name="F") -> PresentationDocument:
    """Recipe sections from ``doc`` plus the fragment tables."""
    kinds = {"category", "monoidal", "action", "data", "relations"}
    out = PresentationDocument(preamble=list(doc.preamble))
    out.sections = [s for s in doc.sections if s.kind in kinds]
    fs = Section("fragment", name)
    fs.entries.append(Entry("build", tuple(build)))
    fs.entries.append(Entry("bound", (str(bound),)))
    fs.entries += [Entry("flag", (f,)) for f in flags]
    out.sections.append(fs)
    out.objects = {k: v for k, v in doc.objects.items() if k[0] in kinds}
    out.objects[("fragment", name)] = _build_fragment(out, fs)
    if frag is None:
        frag = load_fragment(out)
    out.sections += _tables(frag, name)
    # re-parse so ``objects`` is populated and the document is canonical
    return parse(print_document(out))


def _tables(frag, name):
    cls = Section("classes", name)
    for k, c in enumerate(frag.classes()):
        cls.entries.append(Entry("raw", (f"c{k} g{c[0].grade}: " + " | ".join(t.text() for t in c),)))
    st = Section("structure", name)
    for kind, table in (("alpha", frag.cells.alpha), ("lambda", frag.cells.lam), ("rho", frag.cells.rho)):
        for c, ci in table.values():
            st.entries.append(Entry("raw", (f"{c.text()} / {ci.text()}",)))
    hs = Section("homs", name)
    obs = [o.name for o in frag.data.objects()]
    for a, b in product(obs, repeat=2):
        h = hom_category(frag, a, b)
        if h.one_cells:
            hs.entries.append(Entry("raw", (
                f"{a} {b}: {len(h.one_cells)} 1-cells, {len(h.two_cells)} 2-cells, "
                f"largest hom {h.max_hom_size()}",)))
    return [cls, st, hs]


def load_fragment(doc: PresentationDocument):
    """Rebuild the fragment a document describes; stored class tables
    must agree with the rebuilt ones."""
    s = doc.section("fragment")
    recipe = doc.objects[("fragment", s.name)]
    kind, *args = recipe["build"]
    bound, flags = recipe["bound"], recipe["flags"]
    if kind == "quotient":
        frag = build_quotient(doc.action(args[0]), bound, lax="lax" in flags)
    else:
        R = doc.relations(args[1]) if len(args) > 1 else None
        frag = build_2cat(doc.data(args[0]), R, bound)
    if "collapse" in flags:
        frag = collapse_preorder(frag)
    stored = [sec for sec in doc.sections if sec.kind == "classes"]
    if stored and len(stored[0].entries) != len(frag.classes()):
        raise InputError(f"fragment {s.name!r}: stored class table does not match the rebuilt fragment")
    return frag
