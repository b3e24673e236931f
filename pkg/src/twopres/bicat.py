"""Weak 2-categories from generators and relations.

The generating data is extended with associators, unitors and their
inverses for every 1-cell class within the bound, and the relation set
with the invertibility pairs and the coherence laws.  Orientation:

    alpha[h,g,f] : (h *0 g) *0 f  =>  h *0 (g *0 f)
    lambda[f]    : t0(f) *0 f     =>  f
    rho[f]       : f *0 s0(f)     =>  f
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .congruence import (QuotientFragment, gc_paused, RelationSet, _as_relations, _gate_cells,
                         _quotient_1cells, _run_stage2)
from .errors import BoundError, CompositionError, InputError
from .terms import STRUCTURE_KINDS, GeneratingData, parse_expr

INVERSE = {"alpha": "alpha_inv", "lambda": "lambda_inv", "rho": "rho_inv"}


def cell_name(kind, args):
    return f"{kind}[{','.join(a.text() for a in args)}]"


def structure_boundary(kind, args):
    """(source, target) 1-cell terms of a structure cell."""
    mk = args[0].algebra.make
    base = kind[:-4] if kind.endswith("_inv") else kind
    if base == "alpha":
        h, g, f = args
        s, t = mk(0, mk(0, h, g), f), mk(0, h, mk(0, g, f))
    elif base == "lambda":
        (f,) = args
        s, t = mk(0, f.tgt(0), f), f
    elif base == "rho":
        (f,) = args
        s, t = mk(0, f, f.src(0)), f
    else:
        raise InputError(f"unknown structure kind {kind!r}")
    return (t, s) if kind.endswith("_inv") else (s, t)


def declare_cell(Y: GeneratingData, kind, args):
    """The structure cell ``kind[args]`` of Y, declared on first use."""
    name = cell_name(kind, args)
    if name in Y:
        return Y.gen(name)
    s, t = structure_boundary(kind, args)
    return Y.add_cell(name, s, t, cell=(kind, tuple(args)), check=False)


@dataclass
class StructureCells:
    """Lookup tables keyed by representative 1-cells; values are
    (cell, inverse) pairs."""

    alpha: dict = field(default_factory=dict)
    lam: dict = field(default_factory=dict)
    rho: dict = field(default_factory=dict)

    def pairs(self):
        yield from self.alpha.values()
        yield from self.lam.values()
        yield from self.rho.values()

    def cells(self):
        for c, ci in self.pairs():
            yield c
            yield ci

    def __len__(self):
        return 2 * (len(self.alpha) + len(self.lam) + len(self.rho))


def one_cell_reps(stage1, bound):
    """Representatives of the 1-cell classes that have a member within bound."""
    reps = set()
    for c in stage1.classes():
        r = c[0]
        if r.grade <= 1 and r.leaves <= bound:
            reps.add(r)
    return sorted(reps, key=lambda t: (t.grade, t.key))


def augment(Xp: GeneratingData, bound, stage1):
    """Add structure cells for the 1-cell classes within bound.

    Returns (Y, I, cells, extra) where ``extra`` relates structure cells
    already present in X' to the representative-indexed ones."""
    Y = Xp.extended()
    cells = StructureCells()
    reps = one_cell_reps(stage1, bound)
    for f in reps:
        cells.lam[f] = (declare_cell(Y, "lambda", (f,)), declare_cell(Y, "lambda_inv", (f,)))
        cells.rho[f] = (declare_cell(Y, "rho", (f,)), declare_cell(Y, "rho_inv", (f,)))
    by_tgt: dict = {}
    for f in reps:
        by_tgt.setdefault(f.tgt(0), []).append(f)
    for h in reps:
        for g in by_tgt.get(h.src(0), ()):
            if h.leaves + g.leaves >= bound:
                continue
            for f in by_tgt.get(g.src(0), ()):
                if h.leaves + g.leaves + f.leaves <= bound:
                    args = (h, g, f)
                    cells.alpha[args] = (declare_cell(Y, "alpha", args),
                                         declare_cell(Y, "alpha_inv", args))
    # structure cells supplied with the data
    extra = RelationSet()
    for d in list(Xp.decls.values()):
        if d.grade != 2 or d.cell is None:
            continue
        kind, args = d.cell
        base = kind[:-4] if kind.endswith("_inv") else kind
        rargs = tuple(stage1.rep(a) for a in args)
        table = {"alpha": cells.alpha, "lambda": cells.lam, "rho": cells.rho}[base]
        key = rargs if base == "alpha" else rargs[0]
        if key not in table:
            table[key] = (declare_cell(Y, base, rargs), declare_cell(Y, INVERSE[base], rargs))
        canon = table[key][1 if kind.endswith("_inv") else 0]
        mine = Y.gen(d.name)
        if canon is not mine:
            extra.add(mine, canon, "coh")
    I = RelationSet()
    mk = Y.algebra.make
    for c, ci in cells.pairs():
        s, t = c.decl.src, c.decl.tgt
        I.add(mk(1, c, ci), t, "inv")
        I.add(mk(1, ci, c), s, "inv")
    return Y, I, cells, extra


def coherence_relations(Y, cells: StructureCells, stage1, bound, user_cells=None, check=False):
    """Bicategory laws instantiated over the cells within bound.

    The terms are composable by construction; ``check=True`` verifies
    each composition against the stage-one classes anyway."""
    out = RelationSet()
    same = stage1.same
    rep = stage1.rep
    alg = Y.algebra

    def mk(i, x, y):
        if not check:
            return alg.make(i, x, y)
        if i == 0:
            ok = x.src(0) is y.tgt(0)
        else:
            ok = same(x.src(1), y.tgt(1))
        if not ok:
            raise CompositionError(f"coherence term {x} *{i} {y} is not composable", x, y)
        return alg.make(i, x, y)

    A = cells.alpha
    # pentagon
    by_src: dict = {}
    for f in cells.lam:
        by_src.setdefault(f.src(0), []).append(f)
    for (h, g, f) in A:
        for k in by_src.get(h.tgt(0), ()):
            if k.leaves + h.leaves + g.leaves + f.leaves > bound:
                continue
            hg, gf, kh = rep(alg.make(0, h, g)), rep(alg.make(0, g, f)), rep(alg.make(0, k, h))
            try:
                a1, a2, a3 = A[(h, g, f)][0], A[(k, hg, f)][0], A[(k, h, g)][0]
                b1, b2 = A[(k, h, gf)][0], A[(kh, g, f)][0]
            except KeyError:
                continue
            lhs = mk(1, mk(1, mk(0, k, a1), a2), mk(0, a3, f))
            rhs = mk(1, b1, b2)
            out.add(lhs, rhs, "pentagon")
    # triangle
    for (g, b, f), (a, _) in A.items():
        if b.grade == 0 and g.src(0) is b:
            lhs = mk(1, mk(0, g, cells.lam[f][0]), a)
            rhs = mk(0, cells.rho[g][0], f)
            out.add(lhs, rhs, "triangle")
    # laws of *1 on generators
    W = list(user_cells) if user_cells is not None else [
        t for t in Y.generators(2) if t.decl.cell is None]
    for c in list(W) + list(cells.cells()):
        out.add(mk(1, c.tgt(1), c), c, "unit1")
        out.add(mk(1, c, c.src(1)), c, "unit1")
    for f in cells.lam:
        out.add(mk(1, f, f), f, "unit1")
    for a, b, c in product(W, repeat=3):
        if same(a.src(1), b.tgt(1)) and same(b.src(1), c.tgt(1)):
            out.add(mk(1, mk(1, a, b), c), mk(1, a, mk(1, b, c)), "assoc1")
    # naturality against the user 2-cells
    by_slot = ({}, {}, {})
    for (h, g, f) in A:
        by_slot[0].setdefault(h, []).append((g, f))
        by_slot[1].setdefault(g, []).append((h, f))
        by_slot[2].setdefault(f, []).append((h, g))
    for tau in W:
        u, v = rep(tau.src(1)), rep(tau.tgt(1))
        for g, f in by_slot[0].get(u, ()):
            if (v, g, f) in A:
                out.add(mk(1, mk(0, tau, mk(0, g, f)), A[(u, g, f)][0]),
                        mk(1, A[(v, g, f)][0], mk(0, mk(0, tau, g), f)), "naturality")
        for h, f in by_slot[1].get(u, ()):
            if (h, v, f) in A:
                out.add(mk(1, mk(0, h, mk(0, tau, f)), A[(h, u, f)][0]),
                        mk(1, A[(h, v, f)][0], mk(0, mk(0, h, tau), f)), "naturality")
        for h, g in by_slot[2].get(u, ()):
            if (h, g, v) in A:
                out.add(mk(1, mk(0, h, mk(0, g, tau)), A[(h, g, u)][0]),
                        mk(1, A[(h, g, v)][0], mk(0, mk(0, h, g), tau)), "naturality")
        if u in cells.lam and v in cells.lam:
            B, S = tau.tgt(0), tau.src(0)
            out.add(mk(1, tau, cells.lam[u][0]), mk(1, cells.lam[v][0], mk(0, B, tau)), "naturality")
            out.add(mk(1, tau, cells.rho[u][0]), mk(1, cells.rho[v][0], mk(0, tau, S)), "naturality")
    # interchange and whiskering on the user 2-cells
    for s, t in product(W, repeat=2):
        if s.src(0) is not t.tgt(0):
            continue
        st = mk(0, s, t)
        out.add(mk(1, mk(0, s, t.tgt(1)), mk(0, s.src(1), t)), st, "interchange")
        out.add(mk(1, mk(0, s.tgt(1), t), mk(0, s, t.src(1))), st, "interchange")
    for a, b in product(W, repeat=2):
        if not same(a.src(1), b.tgt(1)):
            continue
        for c, d in product(W, repeat=2):
            if same(c.src(1), d.tgt(1)) and a.src(0) is c.tgt(0):
                out.add(mk(0, mk(1, a, b), mk(1, c, d)), mk(1, mk(0, a, c), mk(0, b, d)), "interchange")
        ab = mk(1, a, b)
        for f in cells.lam:
            if f.grade == 1 and f.leaves < bound:
                if f.src(0) is a.tgt(0):
                    out.add(mk(0, f, ab), mk(1, mk(0, f, a), mk(0, f, b)), "whisker")
                if f.tgt(0) is a.src(0):
                    out.add(mk(0, ab, f), mk(1, mk(0, a, f), mk(0, b, f)), "whisker")
    return out


class BicatFragment(QuotientFragment):
    """Bounded fragment of the 2-category presented by (X, C)."""

    def __init__(self, data, relations, bound, stage1, cells, source_relations=None):
        super().__init__(data, relations, bound, stage1)
        self.cells = cells
        self.source_relations = source_relations if source_relations is not None else relations

    def lookup(self, name):
        if name in self.data:
            return self.data.gen(name)
        e = parse_expr(name)
        if e[0] == "n" and e[2] in STRUCTURE_KINDS:
            args = tuple(self.stage1.rep(self._resolve(a)) for a in e[3])
            canon = cell_name(e[2], args)
            if canon in self.data:
                return self.data.gen(canon)
            raise BoundError(f"structure cell {name} is not generated within bound {self.bound}")
        return self.data.gen(name)

    def _resolve(self, e):
        if e[0] == "n":
            return self.lookup(e[1])
        return self.compose(e[1], self._resolve(e[2]), self._resolve(e[3]))

    def _cell(self, table, key, inv, what):
        try:
            return table[key][1 if inv else 0]
        except KeyError:
            raise BoundError(f"{what} is not generated within bound {self.bound}") from None

    def alpha(self, h, g, f, inv=False):
        key = tuple(self.stage1.rep(self.own(x)) for x in (h, g, f))
        return self._cell(self.cells.alpha, key, inv, f"alpha[{h},{g},{f}]")

    def lam(self, f, inv=False):
        return self._cell(self.cells.lam, self.stage1.rep(self.own(f)), inv, f"lambda[{f}]")

    def rho(self, f, inv=False):
        return self._cell(self.cells.rho, self.stage1.rep(self.own(f)), inv, f"rho[{f}]")

    def one_cells(self):
        return [c for c in self.classes() if c[0].grade <= 1]

    def two_cells(self):
        return [c for c in self.classes() if c[0].grade == 2]


def build_2cat(X: GeneratingData, C=None, bound=3, check=False) -> BicatFragment:
    """Bounded fragment of the 2-category generated by X subject to C.

    Relations from C are always checked for parallelism; the generated
    families are parallel by construction and are re-checked only with
    ``check=True``."""
    with gc_paused():
        return _build_2cat(X, C, bound, check)


def _build_2cat(X, C, bound, check):
    C = _as_relations(C)
    E1, Xp, C1 = _quotient_1cells(X, C, bound)
    Y, I, cells, extra = augment(Xp, bound, E1)
    user = [t for t in Y.generators(2) if t.decl.cell is None]
    coh = coherence_relations(Y, cells, E1, bound, user, check=check)
    full = RelationSet()
    full.extend(C1)
    full.extend(extra)
    _gate_cells(E1, full)
    full.extend(I)
    full.extend(coh)
    if check:
        _gate_cells(E1, full)
    frag = BicatFragment(Y, full, bound, E1, cells, source_relations=C1)
    frag.generated = len(full) - len(C1)
    seeds = list(E1.terms) + Y.generators()
    _run_stage2(frag, full, seeds)
    return frag


# the two composites attached to a transformation ------------------------------------

def unit_eta(frag: BicatFragment, zeta):
    """lambda_inv[z] *1 rho[z] : z *0 s0(z) => t0(z) *0 z."""
    return frag.compose(1, frag.lam(zeta, inv=True), frag.rho(zeta))


def eq2_term(compose, alpha, eta_g, eta_f, Gg, Gf, Fg, Ff, zx, zy, zz):
    """Five-fold vertical composite for the component at g o f.

    ``alpha(h, g, f, inv)`` supplies associators; ``compose`` decides
    composability and raises with the seam named in the message.
    """
    parts = [alpha(Gg, Gf, zx, True),
             compose(0, Gg, eta_f),
             alpha(Gg, zy, Ff, False),
             compose(0, eta_g, Ff),
             alpha(zz, Fg, Ff, True)]
    acc = parts[0]
    for k, p in enumerate(parts[1:], start=1):
        try:
            acc = compose(1, acc, p)
        except CompositionError as e:
            raise CompositionError(f"seam {k} of the pasting composite: {e}", acc, p) from None
    return acc


def pasting_composite(frag: BicatFragment, eta_g, eta_f, Gg, Gf, Fg, Ff, zx, zy, zz):
    return eq2_term(frag.compose, frag.alpha, eta_g, eta_f, Gg, Gf, Fg, Ff, zx, zy, zz)
