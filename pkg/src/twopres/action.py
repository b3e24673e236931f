"""Monoidal actions on finite categories and their quotient 2-categories.

Conventions (``g o f`` means f first):

    beta[a,b,c]      : (a (x) b) (x) c -> a (x) (b (x) c)
    lunit[a]         : 1 (x) a -> a
    runit[a]         : a (x) 1 -> a
    beta*[m,n,a]     : (m (x) n).a -> m.(n.a)
    u[a]             : 1.a -> a

In the quotient the generators are the objects and morphisms of C,
``zeta[m,a] : a -> m.a`` and the 2-cells

    eta_c[m,x] : zeta[m,b] *0 x  =>  (m.x) *0 zeta[m,a]      x : a -> b
    eta_m[f,a] : zeta[n,a] *0 a  =>  (f.a) *0 zeta[m,a]      f : m -> n

with ``eta_c_inv``/``eta_m_inv`` as inverses unless the lax reading is
asked for.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product

from .bicat import BicatFragment, build_2cat, declare_cell, eq2_term
from .congruence import RelationSet, rep_order
from .errors import BoundError, InputError
from .graded import AxiomReport, FiniteCategory, Violation
from .terms import GeneratingData, is_within

# clause attached to each relation tag of an emitted presentation
CLAUSES = {"strict": "Q1", "Q3": "Q3", "Q4": "Q4", "Q5": "Q5", "Q6": "Q6", "inv": "inv"}


# monoidal structures ---------------------------------------------------------------

@dataclass
class MonoidalPresentation:
    base: FiniteCategory
    tensor: dict  # (f, g) -> f (x) g over all pairs of morphisms
    unit: str
    beta: dict  # (a, b, c) -> morphism
    lunit: dict  # a -> morphism
    runit: dict  # a -> morphism
    symmetry: dict | None = None  # (a, b) -> a (x) b -> b (x) a, never used downstream
    name: str = ""

    def t(self, f, g):
        try:
            return self.tensor[(f, g)]
        except KeyError:
            raise InputError(f"monoidal {self.name!r}: tensor of {f} and {g} is missing") from None


@dataclass
class ActionPresentation:
    cat: FiniteCategory
    mon: MonoidalPresentation
    act: dict  # (f in M, x in C) -> morphism of C
    beta: dict  # (m, n, a) -> morphism of C
    u: dict  # a -> morphism of C
    name: str = ""

    def a(self, f, x):
        try:
            return self.act[(f, x)]
        except KeyError:
            raise InputError(f"action {self.name!r}: {f}.{x} is missing") from None


class _Checker:
    """Collects violations; compositions that fail become violations too."""

    def __init__(self, cat: FiniteCategory):
        self.cat = cat
        self.report = AxiomReport()

    def fail(self, axiom, witness, detail=""):
        self.report.violations.append(Violation(axiom, tuple(witness), detail))

    def comp(self, *fs):
        """Composite of fs (rightmost first), or None if undefined."""
        acc = fs[-1]
        for g in reversed(fs[:-1]):
            acc = self.cat.table.c(0, g, acc)
            if acc is None:
                return None
        return acc

    def hom(self, f, s, t):
        return self.cat.src(f) == s and self.cat.tgt(f) == t

    def equal(self, axiom, witness, lhs, rhs):
        if lhs is None or rhs is None:
            self.fail(axiom, witness, "sides are not composable")
        elif lhs != rhs:
            self.fail(axiom, witness, f"{lhs} != {rhs}")

    def invertible(self, axiom, witness, f):
        if self.cat.inverse(f) is None:
            self.fail(axiom, witness, f"{f} has no inverse")


def _require_total(name, table, keys, values):
    for k in keys:
        if k not in table:
            raise InputError(f"{name}: entry for {k} is missing")
        if table[k] not in values:
            raise InputError(f"{name}: entry {k} -> {table[k]!r} is not a morphism")


def _check_functor(ck, name, F, cat_l, cat_r, target):
    """F: cat_l x cat_r -> target given as a dict on morphism pairs."""
    for f, g in product(cat_l.morphisms, cat_r.morphisms):
        h = F[(f, g)]
        if cat_l.is_identity(f) and cat_r.is_identity(g) and not target.is_identity(h):
            ck.fail(f"{name}.identity", (f, g), f"{h} is not an identity")
        s = F[(cat_l.src(f), cat_r.src(g))]
        t = F[(cat_l.tgt(f), cat_r.tgt(g))]
        if target.src(h) != s or target.tgt(h) != t:
            ck.fail(f"{name}.boundary", (f, g), f"{h} is not {s} -> {t}")
    for (f2, f1), (g2, g1) in product(cat_l.composable_pairs(), cat_r.composable_pairs()):
        lhs = F[(cat_l.compose(f2, f1), cat_r.compose(g2, g1))]
        rhs = target.table.c(0, F[(f2, g2)], F[(f1, g1)])
        ck.equal(f"{name}.composition", (f2, f1, g2, g1), lhs, rhs)


def validate_monoidal(M: MonoidalPresentation) -> AxiomReport:
    """Exhaustive check of functoriality, naturality, invertibility and
    the pentagon (AA) and triangle (AU) identities."""
    B = M.base
    obs, mor = B.objects, set(B.morphisms)
    if M.unit not in obs:
        raise InputError(f"monoidal {M.name!r}: unit {M.unit!r} is not an object")
    _require_total(f"monoidal {M.name!r} tensor", M.tensor, product(B.morphisms, repeat=2), mor)
    _require_total(f"monoidal {M.name!r} beta", M.beta, product(obs, repeat=3), mor)
    _require_total(f"monoidal {M.name!r} lunit", M.lunit, obs, mor)
    _require_total(f"monoidal {M.name!r} runit", M.runit, obs, mor)
    if M.symmetry is not None:
        _require_total(f"monoidal {M.name!r} symmetry", M.symmetry, product(obs, repeat=2), mor)
    ck = _Checker(B)
    T, one = M.t, M.unit
    _check_functor(ck, "tensor", M.tensor, B, B, B)
    if ck.report.violations:
        return ck.report
    src, tgt = B.src, B.tgt

    for a, b, c in product(obs, repeat=3):
        f = M.beta[(a, b, c)]
        if not ck.hom(f, T(T(a, b), c), T(a, T(b, c))):
            ck.fail("beta.boundary", (a, b, c), f"{f}")
        ck.invertible("beta.invertible", (a, b, c), f)
    for a in obs:
        for nm, tab, s in (("lunit", M.lunit, T(one, a)), ("runit", M.runit, T(a, one))):
            if not ck.hom(tab[a], s, a):
                ck.fail(f"{nm}.boundary", (a,), f"{tab[a]}")
            ck.invertible(f"{nm}.invertible", (a,), tab[a])
    if ck.report.violations:
        return ck.report
    for f, g, h in product(B.morphisms, repeat=3):
        lhs = ck.comp(M.beta[(tgt(f), tgt(g), tgt(h))], T(T(f, g), h))
        rhs = ck.comp(T(f, T(g, h)), M.beta[(src(f), src(g), src(h))])
        ck.equal("beta.natural", (f, g, h), lhs, rhs)
    for f in B.morphisms:
        ck.equal("lunit.natural", (f,), ck.comp(M.lunit[tgt(f)], T(one, f)), ck.comp(f, M.lunit[src(f)]))
        ck.equal("runit.natural", (f,), ck.comp(M.runit[tgt(f)], T(f, one)), ck.comp(f, M.runit[src(f)]))
    beta = M.beta
    for a, b, c, d in product(obs, repeat=4):
        lhs = ck.comp(beta[(a, b, T(c, d))], beta[(T(a, b), c, d)])
        rhs = ck.comp(T(a, beta[(b, c, d)]), beta[(a, T(b, c), d)], T(beta[(a, b, c)], d))
        ck.equal("AA", (a, b, c, d), lhs, rhs)
    for a, b in product(obs, repeat=2):
        ck.equal("AU", (a, b), ck.comp(T(a, M.lunit[b]), beta[(a, one, b)]), T(M.runit[a], b))
    if M.symmetry is not None:
        _check_symmetry(ck, M)
    return ck.report


def _check_symmetry(ck, M):
    B, T, S = M.base, M.t, M.symmetry
    obs = B.objects
    for a, b in product(obs, repeat=2):
        if not ck.hom(S[(a, b)], T(a, b), T(b, a)):
            ck.fail("symmetry.boundary", (a, b), S[(a, b)])
            return
        ck.equal("symmetry.involutive", (a, b), ck.comp(S[(b, a)], S[(a, b)]), T(a, b))
    for f, g in product(B.morphisms, repeat=2):
        lhs = ck.comp(S[(B.tgt(f), B.tgt(g))], T(f, g))
        rhs = ck.comp(T(g, f), S[(B.src(f), B.src(g))])
        ck.equal("symmetry.natural", (f, g), lhs, rhs)
    beta = M.beta
    for a, b, c in product(obs, repeat=3):
        lhs = ck.comp(beta[(b, c, a)], S[(a, T(b, c))], beta[(a, b, c)])
        rhs = ck.comp(T(b, S[(a, c)]), beta[(b, a, c)], T(S[(a, b)], c))
        ck.equal("hexagon", (a, b, c), lhs, rhs)


def validate_action(A: ActionPresentation) -> AxiomReport:
    """Exhaustive check of the action: functoriality, naturality and
    invertibility of beta* and u, the pentagon (AA) and triangle (AU).
    Violations of the monoidal structure are reported first, prefixed
    with ``monoidal:``."""
    M, C = A.mon, A.cat
    mrep = validate_monoidal(M)
    if not mrep.passed:
        return AxiomReport([Violation("monoidal:" + v.axiom, v.witness, v.detail)
                            for v in mrep.violations])
    B = M.base
    mor = set(C.morphisms)
    _require_total(f"action {A.name!r} act", A.act, product(B.morphisms, C.morphisms), mor)
    _require_total(f"action {A.name!r} beta*", A.beta, product(B.objects, B.objects, C.objects), mor)
    _require_total(f"action {A.name!r} u", A.u, C.objects, mor)
    ck = _Checker(C)
    _check_functor(ck, "act", A.act, B, C, C)
    if ck.report.violations:
        return ck.report
    act, T, one = A.a, M.t, M.unit
    for m, n, a in product(B.objects, B.objects, C.objects):
        f = A.beta[(m, n, a)]
        if not ck.hom(f, act(T(m, n), a), act(m, act(n, a))):
            ck.fail("beta*.boundary", (m, n, a), f)
        ck.invertible("beta*.invertible", (m, n, a), f)
    for a in C.objects:
        if not ck.hom(A.u[a], act(one, a), a):
            ck.fail("u.boundary", (a,), A.u[a])
        ck.invertible("u.invertible", (a,), A.u[a])
    if ck.report.violations:
        return ck.report
    sB, tB, sC, tC = B.src, B.tgt, C.src, C.tgt
    for f, g, x in product(B.morphisms, B.morphisms, C.morphisms):
        lhs = ck.comp(A.beta[(tB(f), tB(g), tC(x))], act(T(f, g), x))
        rhs = ck.comp(act(f, act(g, x)), A.beta[(sB(f), sB(g), sC(x))])
        ck.equal("beta*.natural", (f, g, x), lhs, rhs)
    for x in C.morphisms:
        ck.equal("u.natural", (x,), ck.comp(A.u[tC(x)], act(one, x)), ck.comp(x, A.u[sC(x)]))
    bs = A.beta
    for l, m, n, a in product(B.objects, B.objects, B.objects, C.objects):
        lhs = ck.comp(bs[(l, m, act(n, a))], bs[(T(l, m), n, a)])
        rhs = ck.comp(act(l, bs[(m, n, a)]), bs[(l, T(m, n), a)], act(M.beta[(l, m, n)], a))
        ck.equal("AA", (l, m, n, a), lhs, rhs)
    for m, a in product(B.objects, C.objects):
        ck.equal("AU", (m, a), ck.comp(act(m, A.u[a]), bs[(m, one, a)]), act(M.runit[m], a))
    return ck.report


# the quotient presentation ---------------------------------------------------------

def zeta_name(m, a):
    return f"zeta[{m},{a}]"


def eta_name(kind, i, j, inv=False):
    """``eta_c[m,x]`` (kind "c") or ``eta_m[f,a]`` (kind "m")."""
    return f"eta_{kind}{'_inv' if inv else ''}[{i},{j}]"


@dataclass
class QuotientPresentation:
    action: ActionPresentation
    data: GeneratingData
    relations: RelationSet
    lax: bool = False

    def gen(self, name):
        return self.data.gen(name)


def emit_quotient_presentation(A: ActionPresentation, lax=False) -> QuotientPresentation:
    """Generating data and relations whose 2-category is the quotient C/M.

    The structure cells used by the relations are declared up front, so
    the presentation does not depend on the closure bound."""
    C, M = A.cat, A.mon
    B = M.base
    X = GeneratingData()
    for a in C.objects:
        X.add_object(a)
    for x, (s, t) in C.arrows.items():
        X.add_arrow(x, s, t)
    mk = X.algebra.make
    pi = X.gen
    zeta = {}
    for m, a in product(B.objects, C.objects):
        zeta[(m, a)] = X.add_arrow(zeta_name(m, a), a, A.a(m, a))
    eta = {}

    def add_eta(kind, i, j, s, t):
        eta[(kind, i, j)] = X.add_cell(eta_name(kind, i, j), s, t, check=False)
        if not lax:
            X.add_cell(eta_name(kind, i, j, True), t, s, check=False)

    for m, x in product(B.objects, C.morphisms):
        a, b = C.src(x), C.tgt(x)
        add_eta("c", m, x, mk(0, zeta[(m, b)], pi(x)), mk(0, pi(A.a(m, x)), zeta[(m, a)]))
    for f, a in product(B.morphisms, C.objects):
        m, n = B.src(f), B.tgt(f)
        add_eta("m", f, a, mk(0, zeta[(n, a)], pi(a)), mk(0, pi(A.a(f, a)), zeta[(m, a)]))

    def alpha(h, g, f, inv=False):
        return declare_cell(X, "alpha_inv" if inv else "alpha", (h, g, f))

    R = RelationSet()
    seen = set()

    def rel(l, r, tag):
        if l is not r and (l, r) not in seen:
            seen.add((l, r))
            R.add(l, r, tag)

    # strictness of the image of C
    pairs = C.composable_pairs()
    for g, f in pairs:
        rel(mk(0, pi(g), pi(f)), pi(C.compose(g, f)), "strict")
    for h, g in pairs:
        for g2, f in pairs:
            if g2 == g:
                rel(mk(0, mk(0, pi(h), pi(g)), pi(f)), mk(0, pi(h), mk(0, pi(g), pi(f))), "strict")
    for f in C.morphisms:
        rel(mk(0, pi(f), pi(C.src(f))), pi(f), "strict")
        rel(mk(0, pi(C.tgt(f)), pi(f)), pi(f), "strict")
    for h, g in pairs:
        for g2, f in pairs:
            if g2 == g:
                rel(alpha(pi(h), pi(g), pi(f)), pi(C.compose(C.compose(h, g), f)), "strict")
    for f in C.morphisms:
        rel(declare_cell(X, "lambda", (pi(f),)), pi(f), "strict")
        rel(declare_cell(X, "rho", (pi(f),)), pi(f), "strict")

    def eq2(eg, ef, Gg, Gf, Fg, Ff, zx, zy, zz):
        return eq2_term(mk, alpha, eg, ef, pi(Gg), pi(Gf), pi(Fg), pi(Ff), zx, zy, zz)

    # Q3: functoriality in C
    for m in B.objects:
        for y, x in pairs:
            a, b, c = C.src(x), C.tgt(x), C.tgt(y)
            rhs = eq2(eta[("c", m, y)], eta[("c", m, x)], A.a(m, y), A.a(m, x), y, x,
                      zeta[(m, a)], zeta[(m, b)], zeta[(m, c)])
            rel(eta[("c", m, C.compose(y, x))], rhs, "Q3")
    # Q4: functoriality in M
    for a in C.objects:
        for g, f in B.composable_pairs():
            l, m, n = B.src(f), B.tgt(f), B.tgt(g)
            rhs = eq2(eta[("m", g, a)], eta[("m", f, a)], A.a(g, a), A.a(f, a), a, a,
                      zeta[(l, a)], zeta[(m, a)], zeta[(n, a)])
            rel(eta[("m", B.compose(g, f), a)], rhs, "Q4")
    # Q5: the two families agree at identities and equal the unit composite
    for m, a in product(B.objects, C.objects):
        z = zeta[(m, a)]
        unit = mk(1, declare_cell(X, "lambda_inv", (z,)), declare_cell(X, "rho", (z,)))
        rel(eta[("c", m, a)], eta[("m", m, a)], "Q5")
        rel(eta[("c", m, a)], unit, "Q5")
    # Q6: both decompositions of (f, x)
    for f, x in product(B.morphisms, C.morphisms):
        m, n, a, b = B.src(f), B.tgt(f), C.src(x), C.tgt(x)
        d1 = eq2(eta[("c", n, x)], eta[("m", f, a)], A.a(n, x), A.a(f, a), x, a,
                 zeta[(m, a)], zeta[(n, a)], zeta[(n, b)])
        d2 = eq2(eta[("m", f, b)], eta[("c", m, x)], A.a(f, b), A.a(m, x), b, x,
                 zeta[(m, a)], zeta[(m, b)], zeta[(n, b)])
        rel(d1, d2, "Q6")
    # invertibility
    if not lax:
        for (kind, i, j), e in eta.items():
            ei = X.gen(eta_name(kind, i, j, True))
            rel(mk(1, e, ei), e.tgt(1), "inv")
            rel(mk(1, ei, e), e.src(1), "inv")
    return QuotientPresentation(A, X, R, lax)


def build_quotient(A: ActionPresentation, bound, lax=False) -> BicatFragment:
    """Bounded fragment of C/M; checks that pi stays injective."""
    P = emit_quotient_presentation(A, lax)
    frag = build_2cat(P.data, P.relations, bound)
    frag.presentation = P
    C = A.cat
    seen = {}
    for x in C.morphisms:
        k = frag.stage1.classify(frag.lookup(x))
        if k in seen:
            raise InputError(f"pi identifies the distinct morphisms {seen[k]} and {x} of C")
        seen[k] = x
    return frag


# views of a built quotient ------------------------------------------------------------

def _action(frag):
    P = getattr(frag, "presentation", None)
    if P is None:
        raise InputError("fragment was not built from an action")
    return P.action


def pi(frag, x):
    return frag.lookup(x)


def zeta(frag, m, a):
    return frag.lookup(zeta_name(m, a))


def eta(frag, kind, i, j, inv=False):
    return frag.lookup(eta_name(kind, i, j, inv))


@dataclass
class LawScan:
    """Per-family counts of checked and failing instances; instances
    that need structure cells outside the bound are skipped."""

    checked: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def _note(self, tag, ok, witness):
        self.checked[tag] = self.checked.get(tag, 0) + 1
        if not ok:
            self.failures.append((tag, witness))

    @property
    def passed(self):
        return not self.failures


def scan_quotient_laws(frag) -> LawScan:
    """Rebuild every Q3-Q6 instance and the functoriality of pi with the
    fragment's checked composition and compare classes."""
    A = _action(frag)
    C, B = A.cat, A.mon.base
    out = LawScan()
    comp, same = frag.compose, frag.same
    P = lambda x: pi(frag, x)  # noqa: E731
    Z = lambda m, a: zeta(frag, m, a)  # noqa: E731

    def run(tag, witness, thunk):
        try:
            lhs, rhs = thunk()
        except BoundError:
            out.skipped[tag] = out.skipped.get(tag, 0) + 1
            return
        out._note(tag, same(lhs, rhs), witness)

    def eq2(eg, ef, Gg, Gf, Fg, Ff, zx, zy, zz):
        return eq2_term(comp, frag.alpha, eg, ef, P(Gg), P(Gf), P(Fg), P(Ff), zx, zy, zz)

    for g, f in C.composable_pairs():
        run("pi", (g, f), lambda: (comp(0, P(g), P(f)), P(C.compose(g, f))))
    for m in B.objects:
        for y, x in C.composable_pairs():
            a, b, c = C.src(x), C.tgt(x), C.tgt(y)
            run("Q3", (m, y, x), lambda: (
                eta(frag, "c", m, C.compose(y, x)),
                eq2(eta(frag, "c", m, y), eta(frag, "c", m, x), A.a(m, y), A.a(m, x), y, x,
                    Z(m, a), Z(m, b), Z(m, c))))
    for a in C.objects:
        for g, f in B.composable_pairs():
            l, m, n = B.src(f), B.tgt(f), B.tgt(g)
            run("Q4", (g, f, a), lambda: (
                eta(frag, "m", B.compose(g, f), a),
                eq2(eta(frag, "m", g, a), eta(frag, "m", f, a), A.a(g, a), A.a(f, a), a, a,
                    Z(l, a), Z(m, a), Z(n, a))))
    for m, a in product(B.objects, C.objects):
        run("Q5", (m, a), lambda: (eta(frag, "c", m, a), eta(frag, "m", m, a)))
        run("Q5", (m, a), lambda: (eta(frag, "c", m, a), comp(
            1, frag.lam(Z(m, a), inv=True), frag.rho(Z(m, a)))))
    for f, x in product(B.morphisms, C.morphisms):
        m, n, a, b = B.src(f), B.tgt(f), C.src(x), C.tgt(x)
        run("Q6", (f, x), lambda: (
            eq2(eta(frag, "c", n, x), eta(frag, "m", f, a), A.a(n, x), A.a(f, a), x, a,
                Z(m, a), Z(n, a), Z(n, b)),
            eq2(eta(frag, "m", f, b), eta(frag, "c", m, x), A.a(f, b), A.a(m, x), b, x,
                Z(m, a), Z(m, b), Z(n, b))))
    return out


# hom-categories -----------------------------------------------------------------------

@dataclass
class HomCategoryFragment:
    """1-cell classes a -> b within the bound, 2-cell classes between them
    and the vertical composition table where the composite is known.

    ``two_cells`` holds (i, j, rep) for a 2-cell from one_cells[i] to
    one_cells[j]; ``vertical`` maps (p, q) to r, indices into
    ``two_cells`` with q applied first."""

    source: str
    target: str
    bound: int
    one_cells: list
    two_cells: list
    vertical: dict

    def hom(self, i, j):
        return [c for (p, q, c) in self.two_cells if (p, q) == (i, j)]

    def max_hom_size(self):
        sizes: dict = {}
        for i, j, _ in self.two_cells:
            sizes[(i, j)] = sizes.get((i, j), 0) + 1
        return max(sizes.values(), default=0)


def hom_category(frag, a, b, bound=None) -> HomCategoryFragment:
    bound = frag.bound if bound is None else bound
    objs = {o.name for o in frag.data.objects()}
    for o in (a, b):
        if o not in objs:
            raise InputError(f"unknown object {o!r}")
    A, Bo = frag.lookup(a), frag.lookup(b)
    P = frag.partition
    one, index = [], {}
    for cls in frag.classes():
        r = cls[0]
        if r.grade > 1 or r.src(0) is not A or r.tgt(0) is not Bo:
            continue
        if not any(t.grade <= 1 and is_within(t, bound) for t in cls):
            continue
        index[P.find(r)] = len(one)
        one.append(r)
    cells = []
    for cls in frag.classes():
        r = cls[0]
        if r.src(0) is not A or r.tgt(0) is not Bo:
            continue
        i, j = index.get(P.find(r.src(1))), index.get(P.find(r.tgt(1)))
        if i is None or j is None:
            continue
        cells.append((i, j, r))
    cells.sort(key=lambda c: (c[0], c[1], rep_order(c[2])))
    by_key = {P.find(c[2]): k for k, c in enumerate(cells)}
    mk = frag.data.algebra.make
    vertical = {}
    for p, (i, j, x) in enumerate(cells):
        for q, (i2, j2, y) in enumerate(cells):
            if j2 != i:
                continue
            key = P.classify(mk(1, x, y))
            if key[0] == "c" and key[1] in by_key:
                vertical[(p, q)] = by_key[key[1]]
    return HomCategoryFragment(a, b, bound, one, cells, vertical)


# the universal property ---------------------------------------------------------------

@dataclass
class TwoCategoryTable:
    """A finite (partial) 2-category given by tables.

    Objects double as identity 1-cells and 1-cells as identity 2-cells.
    ``bounds`` maps a 1-cell to its objects and a 2-cell to its 1-cells;
    ``comp`` maps (level, x, y) to the composite with y applied first;
    structure tables map 1-cell tuples to (cell, inverse)."""

    grade: dict
    bounds: dict
    comp: dict
    alpha: dict
    lam: dict
    rho: dict

    def cell_bounds(self, e):
        return self.bounds[e] if self.grade[e] == 2 else (e, e)

    def compose(self, level, x, y):
        z = self.comp.get((level, x, y))
        if z is None and level == 1:
            if self.grade[x] <= 1 and self.cell_bounds(y)[1] == x:
                return y
            if self.grade[y] <= 1 and self.cell_bounds(x)[0] == y:
                return x
        return z


@dataclass
class Candidate:
    """A 2-category with images for pi, zeta and eta; ``assign`` maps
    generator names of the quotient presentation to table elements."""

    table: TwoCategoryTable
    assign: dict


def candidate_from_fragment(frag) -> Candidate:
    """The fragment's classes as a table; elements are representative texts."""
    P = frag.partition
    name = {}

    def e(t):
        r = P.find(t)
        v = name.get(r)
        if v is None:
            v = name[r] = P.terms[P._best[r]].text()
        return v

    grade, bounds, comp = {}, {}, {}
    for t in P.terms:
        rep = P.rep(t)
        x = e(t)
        grade[x] = rep.grade
        if rep.grade == 1:
            bounds[x] = (e(rep.src(0)), e(rep.tgt(0)))
        elif rep.grade == 2:
            bounds[x] = (e(rep.src(1)), e(rep.tgt(1)))
        if t.decl is None:
            comp[(t.level, e(t.left), e(t.right))] = x
    cells = frag.cells

    def table(src):
        out = {}
        for k, (c, ci) in src.items():
            key = tuple(e(a) for a in k) if isinstance(k, tuple) else e(k)
            out[key] = (e(c), e(ci))
        return out

    T = TwoCategoryTable(grade, bounds, comp, table(cells.alpha), table(cells.lam), table(cells.rho))
    assign = {d.name: e(frag.data.gen(d.name)) for d in frag.data.decls.values()
              if d.cell is None}
    return Candidate(T, assign)


class Factorization(Enum):
    UNIQUE_FACTORIZATION = "UNIQUE_FACTORIZATION"
    NO_FACTORIZATION = "NO_FACTORIZATION"
    NON_UNIQUE = "NON_UNIQUE"


@dataclass
class UniversalResult:
    verdict: Factorization
    factor: dict | None = None  # class representative text -> candidate element
    witnesses: list = field(default_factory=list)

    def __bool__(self):
        return self.verdict is Factorization.UNIQUE_FACTORIZATION


class _Undefined(Exception):
    pass


def _evaluator(T: TwoCategoryTable, assign: dict):
    memo = {}

    def ev(t):
        v = memo.get(t)
        if v is not None:
            return v
        d = t.decl
        if d is None:
            v = T.compose(t.level, ev(t.left), ev(t.right))
        elif d.cell is not None:
            kind, args = d.cell
            base = kind[:-4] if kind.endswith("_inv") else kind
            vals = tuple(ev(a) for a in args)
            tab = {"alpha": T.alpha, "lambda": T.lam, "rho": T.rho}[base]
            pair = tab.get(vals if base == "alpha" else vals[0])
            v = None if pair is None else pair[1 if kind.endswith("_inv") else 0]
        else:
            v = assign.get(d.name)
        if v is None:
            raise _Undefined(t)
        memo[t] = v
        return v

    return ev


def _validate_candidate(frag, cand: Candidate):
    """Q1-Q6 on the candidate; raises InputError naming the clause."""
    A = _action(frag)
    T, assign = cand.table, cand.assign
    C, B = A.cat, A.mon.base
    for x in C.morphisms:
        if x not in assign:
            raise InputError(f"candidate violates Q1: no image for {x}")
    for m, a in product(B.objects, C.objects):
        z = assign.get(zeta_name(m, a))
        if z is None or T.grade.get(z) not in (0, 1) or \
                T.bounds.get(z, (z, z)) != (assign[a], assign[A.a(m, a)]):
            raise InputError(f"candidate violates Q2: bad image for {zeta_name(m, a)}")
    ev = _evaluator(T, assign)
    for d in frag.data.decls.values():
        if d.grade == 2 and d.cell is None and d.name in assign:
            clause = "Q3" if d.name.startswith("eta_c") else "Q4"
            try:
                ok = T.cell_bounds(assign[d.name]) == (ev(d.src), ev(d.tgt))
            except _Undefined:
                ok = False
            if not ok:
                raise InputError(f"candidate violates {clause}: boundary of {d.name}")
    for (l, r), tag in zip(frag.source_relations.pairs, frag.source_relations.tags):
        clause = CLAUSES.get(tag, tag)
        try:
            ok = ev(l) == ev(r)
        except _Undefined as u:
            if any(g.name not in assign and g.decl.cell is None for g in (set(l.gens()) | set(r.gens()))):
                continue  # involves a searched generator
            raise InputError(f"candidate violates {clause}: {u.args[0]} has no value") from None
        if not ok:
            raise InputError(f"candidate violates {clause}: {l} = {r} fails")


def verify_universal(frag, cand: Candidate, bound=None) -> UniversalResult:
    """Search for the maps from the fragment to the candidate that agree
    with pi', zeta' and eta' and respect every class."""
    _validate_candidate(frag, cand)
    T = cand.table
    P = frag.partition
    forced = dict(cand.assign)
    free = [t for t in frag.data.generators(2)
            if t.decl.cell is None and t.name not in forced]
    rels = list(frag.relations)
    ev0 = _evaluator(T, forced)
    options = []
    for g in free:
        try:
            want = (ev0(g.src(1)), ev0(g.tgt(1)))
        except _Undefined:
            return UniversalResult(Factorization.NO_FACTORIZATION)
        opts = []
        local = [(l, r) for l, r in rels
                 if all(h.name in forced or h.decl.cell is not None or h is g
                        for h in (set(l.gens()) | set(r.gens())))
                 and g in (set(l.gens()) | set(r.gens()))]
        for e in sorted(T.grade):
            if T.cell_bounds(e) != want:
                continue
            ev = _evaluator(T, {**forced, g.name: e})
            try:
                if all(ev(l) == ev(r) for l, r in local):
                    opts.append(e)
            except _Undefined:
                continue
        options.append(opts)
    found = []
    for choice in product(*options):
        assign = dict(forced)
        assign.update({g.name: e for g, e in zip(free, choice)})
        ev = _evaluator(T, assign)
        factor = {}
        try:
            for t in P.terms:
                r = P.rep(t).text()
                v = ev(t)
                if factor.setdefault(r, v) != v:
                    raise _Undefined(t)
        except _Undefined:
            continue
        if factor not in found:
            found.append(factor)
        if len(found) > 1:
            break
    if not found:
        return UniversalResult(Factorization.NO_FACTORIZATION)
    if len(found) == 1:
        return UniversalResult(Factorization.UNIQUE_FACTORIZATION, found[0])
    return UniversalResult(Factorization.NON_UNIQUE, None, found)
