"""Finite graded sets, composition tables and their axiom checkers.

A k-cell doubles as the identity (k+1)-cell, so tables have no separate
identity elements.  Axiom ids are flat labels:

========  =====================================================================
1.a.i     s_i and t_i are idempotent on i-cells
1.a.ii    unit laws for *_i
1.a.iii   associativity of *_i
1.a.iv    boundaries of a composite
1.b.i     s_j, t_j fix the image of s_i, t_i (i < j)
1.b.ii    s_i, t_i ignore a prior s_j, t_j (i < j)
1.b.iii   s_j, t_j distribute over *_i (i < j)
1.b.iv    interchange of *_i and *_j (i < j), whenever the left side is defined
========  =====================================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import InputError

AXIOMS = ("1.a.i", "1.a.ii", "1.a.iii", "1.a.iv", "1.b.i", "1.b.ii", "1.b.iii", "1.b.iv")


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""


@dataclass
class AxiomReport:
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def axioms(self):
        return sorted({v.axiom for v in self.violations}, key=_axiom_rank)

    def __bool__(self):
        return self.passed


def _axiom_rank(a):
    return AXIOMS.index(a) if a in AXIOMS else len(AXIOMS)


@dataclass(frozen=True)
class GradedSetTable:
    """Elements with source and target maps s_i, t_i for i < n."""

    elements: tuple
    n: int
    src: tuple  # src[i]: dict element -> element
    tgt: tuple

    def s(self, i, x):
        return self.src[i][x]

    def t(self, i, x):
        return self.tgt[i][x]

    def cells(self, k):
        """Elements that are k-cells: fixed by s_k (all elements when k >= n)."""
        if k >= self.n:
            return list(self.elements)
        return [x for x in self.elements if self.src[k][x] == x]


@dataclass(frozen=True)
class CompositionTable:
    base: GradedSetTable
    comp: tuple  # comp[i]: dict (a, b) -> a *_i b

    @property
    def elements(self):
        return self.base.elements

    @property
    def n(self):
        return self.base.n

    def s(self, i, x):
        return self.base.src[i][x]

    def t(self, i, x):
        return self.base.tgt[i][x]

    def c(self, i, a, b):
        return self.comp[i].get((a, b))


def make_table(elements, src, tgt, comp=None):
    """Build a table from lists of dicts, checking ids and lengths."""
    elements = tuple(elements)
    n = len(src)
    if len(tgt) != n:
        raise InputError("src and tgt must have the same number of levels")
    base = GradedSetTable(elements, n, tuple(dict(m) for m in src), tuple(dict(m) for m in tgt))
    _check_ids(base)
    if comp is None:
        return base
    if len(comp) != n:
        raise InputError("one composition map per level is required")
    table = CompositionTable(base, tuple(dict(m) for m in comp))
    _check_comp_ids(table)
    return table


def _check_ids(g: GradedSetTable):
    known = set(g.elements)
    if len(known) != len(g.elements):
        raise InputError("duplicate element ids")
    for i in range(g.n):
        for maps, name in ((g.src, "src"), (g.tgt, "tgt")):
            m = maps[i]
            for x in g.elements:
                if x not in m:
                    raise InputError(f"{name}{i} undefined on {x!r}")
            for x, y in m.items():
                if x not in known or y not in known:
                    raise InputError(f"{name}{i} references unknown element {x if x not in known else y!r}")


def _check_comp_ids(t: CompositionTable):
    known = set(t.elements)
    for i in range(t.n):
        for (a, b), c in t.comp[i].items():
            for x in (a, b, c):
                if x not in known:
                    raise InputError(f"comp{i} references unknown element {x!r}")


def _check_domains(t: CompositionTable):
    for i in range(t.n):
        m = t.comp[i]
        for (a, b) in m:
            if t.s(i, a) != t.t(i, b):
                raise InputError(f"comp{i} defined on non-composable pair ({a!r}, {b!r})")
        for a in t.elements:
            for b in t.elements:
                if t.s(i, a) == t.t(i, b) and (a, b) not in m:
                    raise InputError(f"comp{i} missing for composable pair ({a!r}, {b!r})")


# checkers --------------------------------------------------------------------

def _graded_violations(g: GradedSetTable):
    out = []
    names = ("s", "t")
    for i in range(g.n):
        maps = (g.src[i], g.tgt[i])
        for x in g.elements:
            for (rn, r), (sn, s) in product(zip(names, maps), repeat=2):
                if r[s[x]] != s[x]:
                    out.append(Violation("1.a.i", (x,), f"{rn}{i}({sn}{i}({x})) != {sn}{i}({x})"))
    for i in range(g.n):
        for j in range(i + 1, g.n):
            lo, hi = (g.src[i], g.tgt[i]), (g.src[j], g.tgt[j])
            for x in g.elements:
                for (rn, r), (sn, s) in product(zip(names, hi), zip(names, lo)):
                    if r[s[x]] != s[x]:
                        out.append(Violation("1.b.i", (x,), f"{rn}{j}({sn}{i}({x})) != {sn}{i}({x})"))
            for x in g.elements:
                for (sn, s), (rn, r) in product(zip(names, lo), zip(names, hi)):
                    if s[r[x]] != s[x]:
                        out.append(Violation("1.b.ii", (x,), f"{sn}{i}({rn}{j}({x})) != {sn}{i}({x})"))
    return out


def check_graded(table) -> AxiomReport:
    g = table.base if isinstance(table, CompositionTable) else table
    _check_ids(g)
    return AxiomReport(_graded_violations(g))


def _pre_violations(t: CompositionTable):
    out = []
    for i in range(t.n):
        for (a, b), c in t.comp[i].items():
            if t.s(i, c) != t.s(i, b):
                out.append(Violation("1.a.iv", (a, b), f"s{i}({c}) != s{i}({b})"))
            if t.t(i, c) != t.t(i, a):
                out.append(Violation("1.a.iv", (a, b), f"t{i}({c}) != t{i}({a})"))
    for i in range(t.n):
        for j in range(i + 1, t.n):
            for (a, b), c in t.comp[i].items():
                for rn, r in (("s", t.base.src[j]), ("t", t.base.tgt[j])):
                    d = t.comp[i].get((r[a], r[b]))
                    if d is None or r[c] != d:
                        out.append(Violation("1.b.iii", (a, b),
                                             f"{rn}{j}({a} *{i} {b}) != {rn}{j}({a}) *{i} {rn}{j}({b})"))
    return out


def check_pre_n(table: CompositionTable) -> AxiomReport:
    _check_ids(table.base)
    _check_comp_ids(table)
    _check_domains(table)
    return AxiomReport(_pre_violations(table))


def _strict_violations(t: CompositionTable):
    out = []
    n = t.n
    for i in range(n):
        m = t.comp[i]
        for a in t.elements:
            if m.get((a, t.s(i, a))) != a:
                out.append(Violation("1.a.ii", (a,), f"{a} *{i} s{i}({a}) != {a}"))
            if m.get((t.t(i, a), a)) != a:
                out.append(Violation("1.a.ii", (a,), f"t{i}({a}) *{i} {a} != {a}"))
    for i in range(n):
        m = t.comp[i]
        right_of: dict = {}
        for (a, b) in m:
            right_of.setdefault(a, []).append(b)
        for (a, b), ab in m.items():
            for c in right_of.get(b, ()):
                bc = m[(b, c)]
                l, r = m.get((ab, c)), m.get((a, bc))
                if l is None or r is None or l != r:
                    out.append(Violation("1.a.iii", (a, b, c), f"({a} *{i} {b}) *{i} {c} != {a} *{i} ({b} *{i} {c})"))
    for i in range(n):
        for j in range(i + 1, n):
            mi, mj = t.comp[i], t.comp[j]
            # quadruples where the left side is defined; a defined right
            # side alone does not force the left one (b *1 f is never
            # defined for an object b and a 1-cell f, yet b *0 f is)
            seen = set()
            for (a, b), ab in mj.items():
                for (al, be), albe in mj.items():
                    if (ab, albe) in mi:
                        seen.add((a, b, al, be))
            for (a, b, al, be) in sorted(seen, key=lambda q: tuple(t.elements.index(x) for x in q)):
                ab, albe = mj.get((a, b)), mj.get((al, be))
                lhs = mi.get((ab, albe)) if ab is not None and albe is not None else None
                aal, bbe = mi.get((a, al)), mi.get((b, be))
                rhs = mj.get((aal, bbe)) if aal is not None and bbe is not None else None
                if lhs != rhs:
                    out.append(Violation("1.b.iv", (a, b, al, be),
                                         f"({a} *{j} {b}) *{i} ({al} *{j} {be}) != ({a} *{i} {al}) *{j} ({b} *{i} {be})"))
    return out


def check_strict_n(table: CompositionTable) -> AxiomReport:
    _check_ids(table.base)
    _check_comp_ids(table)
    graded = _graded_violations(table.base)
    # composability is only meaningful on a globular base
    if not graded:
        _check_domains(table)
    vs = graded + _pre_violations(table) + _strict_violations(table)
    vs.sort(key=lambda v: _axiom_rank(v.axiom))
    return AxiomReport(vs)


# finite categories ------------------------------------------------------------

class FiniteCategory:
    """A finite category whose identities are its objects.

    ``compose`` entries map (g, f) to g o f, i.e. f first.  Pairs that
    involve an identity may be omitted.
    """

    def __init__(self, objects, morphisms=(), compose=None, name=""):
        self.name = name
        self.objects = list(objects)
        self.arrows = {}  # non-identity morphisms: name -> (src, tgt)
        for m, s, t in morphisms:
            self.arrows[m] = (s, t)
        self.entries = dict(compose or {})
        obj = set(self.objects)
        if len(obj) != len(self.objects):
            raise InputError("duplicate object")
        for m, (s, t) in self.arrows.items():
            if m in obj:
                raise InputError(f"morphism {m!r} reuses an object name")
            if s not in obj or t not in obj:
                raise InputError(f"morphism {m!r} has unknown endpoint")
        self.table = self._table()
        rep = check_strict_n(self.table)
        if not rep.passed:
            v = rep.violations[0]
            raise InputError(f"category {name!r} violates {v.axiom} at {v.witness}: {v.detail}")

    def _table(self):
        els = list(self.objects) + list(self.arrows)
        src = {o: o for o in self.objects}
        tgt = {o: o for o in self.objects}
        for m, (s, t) in self.arrows.items():
            src[m], tgt[m] = s, t
        comp = {}
        for g in els:
            for f in els:
                if src[g] != tgt[f]:
                    continue
                if f in src and f in self.objects:
                    comp[(g, f)] = g
                elif g in self.objects:
                    comp[(g, f)] = f
                elif (g, f) in self.entries:
                    comp[(g, f)] = self.entries[(g, f)]
                else:
                    raise InputError(f"category {self.name!r}: composite {g} o {f} not given")
        for (g, f), h in self.entries.items():
            if comp.get((g, f)) != h:
                raise InputError(f"category {self.name!r}: bad composite entry {g} o {f} = {h}")
        return make_table(els, [src], [tgt], [comp])

    # accessors -----------------------------------------------------------
    @property
    def morphisms(self):
        return list(self.table.elements)

    def src(self, f):
        return self.table.s(0, f)

    def tgt(self, f):
        return self.table.t(0, f)

    def is_identity(self, f):
        return f in self.objects

    def compose(self, g, f):
        h = self.table.c(0, g, f)
        if h is None:
            raise InputError(f"{g} o {f} is not composable")
        return h

    def hom(self, a, b):
        return [f for f in self.morphisms if self.src(f) == a and self.tgt(f) == b]

    def composable_pairs(self):
        """All (g, f) with g o f defined, identities included."""
        return sorted(self.table.comp[0], key=lambda p: (self.morphisms.index(p[0]), self.morphisms.index(p[1])))

    def inverse(self, f):
        for g in self.hom(self.tgt(f), self.src(f)):
            if self.compose(g, f) == self.src(f) and self.compose(f, g) == self.tgt(f):
                return g
        return None

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, {len(self.objects)} objects, {len(self.arrows)} arrows)"
