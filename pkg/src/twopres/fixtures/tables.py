"""Five valid strict 2-category tables and single-entry mutations of them.

A k-cell is its own identity at level k+1, so every table lists objects,
1-cells and 2-cells as plain elements.
"""

from dataclasses import dataclass

from ..graded import make_table


def _idmaps(elements, src0, tgt0, src1=None, tgt1=None):
    src1 = dict(src1 or {})
    tgt1 = dict(tgt1 or {})
    for x in elements:
        src1.setdefault(x, x)
        tgt1.setdefault(x, x)
    return [src0, src1], [tgt0, tgt1]


def _diag(elements, extra=None):
    comp = {(x, x): x for x in elements}
    comp.update(extra or {})
    return comp


def terminal():
    src, tgt = _idmaps(["*"], {"*": "*"}, {"*": "*"})
    return make_table(["*"], src, tgt, [{("*", "*"): "*"}, {("*", "*"): "*"}])


def arrow():
    """a --f--> b with identity 2-cells only."""
    els = ["a", "b", "f"]
    src, tgt = _idmaps(els, {"a": "a", "b": "b", "f": "a"}, {"a": "a", "b": "b", "f": "b"})
    comp0 = {("a", "a"): "a", ("b", "b"): "b", ("f", "a"): "f", ("b", "f"): "f"}
    return make_table(els, src, tgt, [comp0, _diag(els)])


def cyclic3():
    """Z/3 as a one-object 2-category: loops g, h with g g = h."""
    els = ["o", "g", "h"]
    one = {x: "o" for x in els}
    src, tgt = _idmaps(els, one, dict(one))
    mul = {"o": 0, "g": 1, "h": 2}
    back = {v: k for k, v in mul.items()}
    comp0 = {(x, y): back[(mul[x] + mul[y]) % 3] for x in els for y in els}
    return make_table(els, src, tgt, [comp0, _diag(els)])


def eckmann_hilton():
    """One object o, an idempotent loop f and a 2-cell e: f => f with e e = f
    under both compositions."""
    els = ["o", "f", "e"]
    one = {x: "o" for x in els}
    src, tgt = _idmaps(els, one, dict(one), {"e": "f"}, {"e": "f"})
    comp0 = {}
    for x in els:
        comp0[("o", x)] = x
        comp0[(x, "o")] = x
    comp0.update({("f", "f"): "f", ("f", "e"): "e", ("e", "f"): "e", ("e", "e"): "f"})
    comp1 = {("o", "o"): "o", ("f", "f"): "f", ("e", "f"): "e", ("f", "e"): "e", ("e", "e"): "f"}
    return make_table(els, src, tgt, [comp0, comp1])


def walking_cell():
    """Parallel f, g: a -> b and a 2-cell u: f => g."""
    els = ["a", "b", "f", "g", "u"]
    src0 = {"a": "a", "b": "b", "f": "a", "g": "a", "u": "a"}
    tgt0 = {"a": "a", "b": "b", "f": "b", "g": "b", "u": "b"}
    src, tgt = _idmaps(els, src0, tgt0, {"u": "f"}, {"u": "g"})
    comp0 = {("a", "a"): "a", ("b", "b"): "b"}
    for x in ("f", "g", "u"):
        comp0[(x, "a")] = x
        comp0[("b", x)] = x
    comp1 = _diag(["a", "b", "f", "g"], {("u", "f"): "u", ("g", "u"): "u"})
    return make_table(els, src, tgt, [comp0, comp1])


TABLES = {
    "terminal": terminal,
    "arrow": arrow,
    "cyclic3": cyclic3,
    "eckmann_hilton": eckmann_hilton,
    "walking_cell": walking_cell,
}


@dataclass(frozen=True)
class Mutation:
    table: str
    where: str  # "comp", "src" or "tgt"
    level: int
    key: object  # pair for comp, element otherwise
    value: str
    axiom: str  # the id that must be reported

    def label(self):
        return f"{self.table}:{self.where}{self.level}[{self.key}]={self.value}"

    def apply(self):
        t = TABLES[self.table]()
        src = [dict(m) for m in t.base.src]
        tgt = [dict(m) for m in t.base.tgt]
        comp = [dict(m) for m in t.comp]
        target = {"comp": comp, "src": src, "tgt": tgt}[self.where][self.level]
        if self.key not in target or target[self.key] == self.value:
            raise ValueError(f"{self.label()} is not a single-entry change")
        target[self.key] = self.value
        return make_table(t.elements, src, tgt, comp)


MUTATIONS = [
    # units
    Mutation("walking_cell", "comp", 0, ("f", "a"), "g", "1.a.ii"),
    Mutation("walking_cell", "comp", 1, ("u", "f"), "g", "1.a.ii"),
    Mutation("walking_cell", "comp", 0, ("b", "u"), "f", "1.a.ii"),
    Mutation("walking_cell", "comp", 1, ("g", "u"), "f", "1.a.ii"),
    Mutation("eckmann_hilton", "comp", 0, ("e", "o"), "f", "1.a.ii"),
    # associativity
    Mutation("cyclic3", "comp", 0, ("g", "h"), "g", "1.a.iii"),
    Mutation("cyclic3", "comp", 0, ("h", "g"), "h", "1.a.iii"),
    Mutation("cyclic3", "comp", 0, ("h", "h"), "o", "1.a.iii"),
    Mutation("eckmann_hilton", "comp", 0, ("f", "e"), "f", "1.a.iii"),
    # boundaries of a composite
    Mutation("arrow", "comp", 0, ("b", "f"), "b", "1.a.iv"),
    Mutation("arrow", "comp", 0, ("f", "a"), "b", "1.a.iv"),
    Mutation("arrow", "comp", 0, ("f", "a"), "a", "1.a.iv"),
    Mutation("walking_cell", "comp", 1, ("u", "f"), "b", "1.a.iv"),
    # higher boundaries distribute over lower composition
    Mutation("walking_cell", "comp", 0, ("u", "a"), "f", "1.b.iii"),
    Mutation("walking_cell", "comp", 0, ("b", "u"), "g", "1.b.iii"),
    Mutation("walking_cell", "comp", 0, ("g", "a"), "f", "1.b.iii"),
    # interchange
    Mutation("eckmann_hilton", "comp", 1, ("e", "e"), "e", "1.b.iv"),
    Mutation("eckmann_hilton", "comp", 0, ("e", "e"), "e", "1.b.iv"),
    # globularity of the base
    Mutation("arrow", "tgt", 0, "a", "b", "1.a.i"),
    Mutation("walking_cell", "tgt", 1, "f", "u", "1.a.i"),
    Mutation("walking_cell", "src", 0, "f", "u", "1.b.i"),
    Mutation("eckmann_hilton", "src", 1, "o", "e", "1.b.i"),
    Mutation("walking_cell", "src", 1, "u", "b", "1.b.ii"),
    Mutation("walking_cell", "src", 0, "g", "b", "1.b.ii"),
]
