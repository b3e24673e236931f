"""Congruence closure over bounded term fragments.

:class:`Partition` is a union-find with a signature table: merging two
classes re-examines the composites that use them (closure under
composition) and merges their boundary images (closure under source and
target).  Every effective merge is logged with its reason, which gives
merge-trace certificates.

Two modes: a *fixed* universe, where composites and boundary images
outside the universe are ignored, and an *extendable* one, which keeps
itself closed under subterms and boundaries as terms are added.
"""

from __future__ import annotations

import copy as _copy
import gc
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum

from .errors import BoundError, CompositionError, InconsistencyError, InputError
from .terms import GeneratingData, Term, enumerate_free, is_within, parse_expr, resolve, strata, translate


@dataclass
class RelationSet:
    """Ordered term pairs, closed symmetrically by the closures."""

    pairs: list = field(default_factory=list)
    tags: list = field(default_factory=list)

    def add(self, lhs, rhs, tag=""):
        self.pairs.append((lhs, rhs))
        self.tags.append(tag)

    def extend(self, other):
        for (l, r), tag in zip(other.pairs, other.tags):
            self.add(l, r, tag)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def tagged(self, tag):
        return [p for p, t in zip(self.pairs, self.tags) if t == tag]


def _as_relations(C):
    if C is None:
        return RelationSet()
    if isinstance(C, RelationSet):
        return C
    rs = RelationSet()
    for l, r in C:
        rs.add(l, r)
    return rs


@contextmanager
def gc_paused():
    """Pause cyclic garbage collection while a fragment is built.

    Builds allocate hundreds of thousands of hash-consed terms that live as
    long as their algebra, so collector passes only cost time."""
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def rep_order(t):
    """Representative order: lowest grade first, then canonical key."""
    return (t.grade, t.key)


class Partition:
    """Union-find over terms, closed under boundaries and composition."""

    def __init__(self, universe=(), *, extendable=False):
        self.extendable = extendable
        self.terms: list[Term] = []
        self.index: dict[Term, int] = {}
        self._parent: list[int] = []
        self._members: list = []
        self._uses: list = []
        self._best: list[int] = []
        self._img: list = []
        self._sig: dict = {}
        self._edges: dict = {}
        self._pending: list = []
        self.merges = 0
        if extendable:
            for t in universe:
                self.add(t)
        else:
            self._load_fixed(list(dict.fromkeys(universe)))
        self.process()

    # construction --------------------------------------------------------
    def _register(self, t):
        i = len(self.terms)
        self.terms.append(t)
        self.index[t] = i
        self._parent.append(i)
        self._members.append([i])
        self._uses.append([])
        self._best.append(i)
        return i

    def _ckey(self, c):
        j = self.index.get(c)
        return self.find_idx(j) if j is not None else -1 - c.uid

    def _hook(self, i):
        t = self.terms[i]
        key = (t.level, self._ckey(t.left), self._ckey(t.right))
        q = self._sig.get(key)
        if q is None:
            self._sig[key] = i
        else:
            self._pending.append((i, q, ("P3",)))
        for c in (t.left, t.right):
            j = self.index.get(c)
            if j is not None:
                self._uses[self.find_idx(j)].append(i)

    def _load_fixed(self, universe):
        for t in universe:
            self._register(t)
        for i, t in enumerate(universe):
            self._img.append([self.index.get(b, -1) if b is not t else i
                              for b in t.boundaries()])
            if t.decl is None:
                self._hook(i)

    def add(self, t) -> int:
        """Insert t (extendable mode) with its subterms and boundaries."""
        index = self.index
        i = index.get(t)
        if i is not None:
            return i
        if not self.extendable:
            raise InputError(f"term {t} is outside the fixed universe")
        # iterative post-order over subterms and boundaries
        stack = [(t, False)]
        while stack:
            u, ready = stack.pop()
            if u in index:
                continue
            if ready:
                j = self._register(u)
                if u.decl is None:
                    self._hook(j)
                continue
            stack.append((u, True))
            for b in u.boundaries():
                if b is not u and b not in index:
                    stack.append((b, False))
            if u.decl is None:
                if u.right not in index:
                    stack.append((u.right, False))
                if u.left not in index:
                    stack.append((u.left, False))
        return index[t]

    # union-find ----------------------------------------------------------
    def find_idx(self, i):
        parent = self._parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, a: Term, b: Term, reason=("seed",)):
        ia, ib = self.index.get(a), self.index.get(b)
        if ia is None or ib is None:
            missing = a if ia is None else b
            if not self.extendable:
                raise InputError(f"relation term {missing} is outside the universe")
            ia, ib = self.add(a), self.add(b)
        self._pending.append((ia, ib, reason))

    def process(self):
        pending = self._pending
        parent, members, uses = self._parent, self._members, self._uses
        find = self.find_idx
        while pending:
            a, b, why = pending.pop()
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            self.merges += 1
            self._edges.setdefault(a, []).append((b, why))
            self._edges.setdefault(b, []).append((a, why))
            # boundary images
            if self.extendable:
                ta, tb = self.terms[a], self.terms[b]
                for k, (x, y) in enumerate(zip(ta.boundaries(), tb.boundaries())):
                    if x is not y:
                        pending.append((self.index[x], self.index[y], ("P2", k, a, b)))
            else:
                ia, ib = self._img[ra], self._img[rb]
                for k in range(4):
                    if ia[k] >= 0 and ib[k] >= 0:
                        pending.append((ia[k], ib[k], ("P2", k, a, b)))
                    elif ia[k] < 0:
                        ia[k] = ib[k]
            if len(members[ra]) < len(members[rb]):
                ra, rb = rb, ra
                if not self.extendable:
                    self._img[ra] = self._img[rb]
            parent[rb] = ra
            members[ra].extend(members[rb])
            members[rb] = None
            if rep_order(self.terms[self._best[rb]]) < rep_order(self.terms[self._best[ra]]):
                self._best[ra] = self._best[rb]
            # composites that used the absorbed class get new signatures
            sig, index, terms = self._sig, self.index, self.terms
            for p in uses[rb]:
                t = terms[p]
                jl, jr = index.get(t.left), index.get(t.right)
                kl = find(jl) if jl is not None else -1 - t.left.uid
                kr = find(jr) if jr is not None else -1 - t.right.uid
                key = (t.level, kl, kr)
                q = sig.get(key)
                if q is None:
                    sig[key] = p
                elif find(q) != find(p):
                    pending.append((p, q, ("P3",)))
            uses[ra].extend(uses[rb])
            uses[rb] = None

    def merge_all(self, pairs, reason_prefix="rel"):
        for k, (a, b) in enumerate(pairs):
            self.union(a, b, (reason_prefix, k))
        self.process()

    # queries -------------------------------------------------------------
    def __contains__(self, t):
        return t in self.index

    def __len__(self):
        return len(self.terms)

    def find(self, t) -> int:
        return self.find_idx(self.index[t])

    def same(self, a, b) -> bool:
        return self.classify(a) == self.classify(b)

    def rep(self, t) -> Term:
        return self.terms[self._best[self.find(t)]]

    def members(self, t) -> list:
        return sorted((self.terms[j] for j in self._members[self.find(t)]), key=rep_order)

    def roots(self):
        return [i for i in range(len(self.terms)) if self._parent[i] == i]

    def classes(self) -> list:
        out = []
        for r in self.roots():
            out.append(sorted((self.terms[j] for j in self._members[r]), key=rep_order))
        out.sort(key=lambda c: rep_order(c[0]))
        return out

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(self.terms[j] for j in self._members[r]) for r in self.roots())

    def restricted(self, pred) -> frozenset:
        out = set()
        for r in self.roots():
            s = frozenset(self.terms[j] for j in self._members[r] if pred(self.terms[j]))
            if s:
                out.add(s)
        return frozenset(out)

    def classify(self, t):
        """Class key of t without inserting it.

        Terms outside the universe get a structural key built from the
        classes of their children, so two such keys agree exactly when
        congruence forces the terms together.
        """
        i = self.index.get(t)
        if i is not None:
            return ("c", self.find_idx(i))
        if t.decl is not None:
            return ("g", t.decl.name)
        kl, kr = self.classify(t.left), self.classify(t.right)
        if kl[0] == "c" and kr[0] == "c":
            q = self._sig.get((t.level, kl[1], kr[1]))
            if q is not None:
                return ("c", self.find_idx(q))
        return ("v", t.level, kl, kr)

    # certificates --------------------------------------------------------
    def _path(self, i, j):
        if i == j:
            return []
        prev = {i: None}
        dq = deque([i])
        while dq:
            u = dq.popleft()
            if u == j:
                break
            for v, why in self._edges.get(u, ()):
                if v not in prev:
                    prev[v] = (u, why)
                    dq.append(v)
        if j not in prev:
            return None
        steps, v = [], j
        while prev[v] is not None:
            u, why = prev[v]
            steps.append((self.terms[u], self.terms[v], why))
            v = u
        steps.reverse()
        return steps

    def _anchor(self, t):
        """A universe member congruent to t, with the steps that show it."""
        i = self.index.get(t)
        if i is not None:
            return t, []
        if t.decl is None:
            l, sl = self._anchor(t.left)
            r, sr = self._anchor(t.right)
            if l is not None and r is not None:
                q = self._sig.get((t.level, self.find(l), self.find(r)))
                if q is not None:
                    u = self.terms[q]
                    steps = sl + sr + self.explain(l, u.left) + self.explain(r, u.right)
                    return u, steps + [(t, u, ("P3",))]
        return None, []

    def explain(self, a, b):
        """Merge trace showing a ~ b, or None when they are not related."""
        if a is b:
            return []
        ia, ib = self.index.get(a), self.index.get(b)
        if ia is not None and ib is not None:
            return self._path(ia, ib)
        ua, sa = self._anchor(a)
        ub, sb = self._anchor(b)
        if ua is not None and ub is not None:
            mid = self._path(self.index[ua], self.index[ub])
            if mid is None:
                return None
            back = [(y, x, why) for x, y, why in reversed(sb)]
            return sa + mid + back
        if a.decl is None and b.decl is None and a.level == b.level:
            sl = self.explain(a.left, b.left)
            sr = self.explain(a.right, b.right)
            if sl is not None and sr is not None:
                return sl + sr + [(a, b, ("P3",))]
        return None

    def certificate(self, a, b, depth=8):
        """Like :meth:`explain`, with congruence steps preceded by the
        steps relating the factors."""
        steps = self.explain(a, b)
        if steps is None or depth == 0:
            return steps
        out = []
        for x, y, why in steps:
            if why[0] == "P3" and x.decl is None and y.decl is None:
                for u, v in ((x.left, y.left), (x.right, y.right)):
                    sub = self.certificate(u, v, depth - 1)
                    if sub:
                        out.extend(sub)
            out.append((x, y, why))
        return out

    def copy(self):
        other = _copy.copy(self)
        other.terms = list(self.terms)
        other.index = dict(self.index)
        other._parent = list(self._parent)
        other._members = [list(m) if m is not None else None for m in self._members]
        other._uses = [list(u) if u is not None else None for u in self._uses]
        other._best = list(self._best)
        other._img = [list(x) for x in self._img]
        other._sig = dict(self._sig)
        other._edges = {k: list(v) for k, v in self._edges.items()}
        other._pending = list(self._pending)
        return other


def describe_step(step, relation_names=None, terms=None):
    a, b, why = step
    kind = why[0]
    if kind == "rel":
        label = f"relation {why[1]}"
        if relation_names and why[1] < len(relation_names) and relation_names[why[1]]:
            label += f" [{relation_names[why[1]]}]"
    elif kind == "P2":
        label = ("source", "target")[why[1] % 2] + f" at level {why[1] // 2}"
        if len(why) > 3 and terms is not None:
            label += f" of {terms[why[2]]} = {terms[why[3]]}"
    elif kind == "P3":
        label = "congruence"
    elif kind == "S":
        label = "parallel collapse"
    else:
        label = kind
    return f"{a} = {b}  by {label}"


# the two closures -------------------------------------------------------------

def _check_inside(universe_set, C):
    for l, r in C:
        for t in (l, r):
            if t not in universe_set:
                raise InputError(f"relation term {t} is outside the universe")


def close_p0p3(universe, C) -> Partition:
    """Finest partition of the universe containing C, closed under
    boundaries and composition within the universe."""
    universe = list(dict.fromkeys(universe))
    C = _as_relations(C)
    _check_inside(set(universe), C)
    p = Partition(universe)
    p.merge_all(C.pairs)
    return p


class _Labels:
    """Plain labelling, the answer format of :func:`naive_fixpoint`."""

    def __init__(self, terms, label):
        self.terms = terms
        self.label = label

    def as_sets(self):
        groups: dict = {}
        for t, l in zip(self.terms, self.label):
            groups.setdefault(l, set()).add(t)
        return frozenset(frozenset(g) for g in groups.values())


def naive_fixpoint(universe, C):
    """Reference closure: apply every rule to every tuple until stable."""
    terms = list(dict.fromkeys(universe))
    C = _as_relations(C)
    _check_inside(set(terms), C)
    n = len(terms)
    pos = {t: i for i, t in enumerate(terms)}
    label = list(range(n))

    def relabel(i, j):
        old, new = label[j], label[i]
        if old == new:
            return False
        for k in range(n):
            if label[k] == old:
                label[k] = new
        return True

    def related(x, y):
        if x is y:
            return True
        i, j = pos.get(x), pos.get(y)
        return i is not None and j is not None and label[i] == label[j]

    for l, r in C:
        relabel(pos[l], pos[r])
    comps = [i for i, t in enumerate(terms) if t.decl is None]
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                if label[i] != label[j]:
                    continue
                for x, y in zip(terms[i].boundaries(), terms[j].boundaries()):
                    a, b = pos.get(x), pos.get(y)
                    if a is not None and b is not None and label[a] != label[b]:
                        changed |= relabel(a, b)
        for a in comps:
            for b in comps:
                if b <= a or label[a] == label[b]:
                    continue
                s, t = terms[a], terms[b]
                if s.level == t.level and related(s.left, t.left) and related(s.right, t.right):
                    changed |= relabel(a, b)
    return _Labels(terms, label)


# staged quotient ---------------------------------------------------------------

def _low_parts(t, out):
    """Collect the grade-<=1 pieces of t: its 1-cell subterms and the
    1-cell boundaries of its 2-cell subterms."""
    if t.grade <= 1:
        out.append(t)
        return
    out.append(t.src(1))
    out.append(t.tgt(1))
    if t.decl is None:
        _low_parts(t.left, out)
        _low_parts(t.right, out)


def _merge_objects(X: GeneratingData, C: RelationSet):
    """Identify objects related by C; returns (X_obj, C_obj, renaming)."""
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    for l, r in C:
        if l.grade == 0 and r.grade == 0 and l.decl is not None and r.decl is not None:
            a, b = find(l.name), find(r.name)
            if a != b:
                lo, hi = sorted((a, b))
                parent[hi] = lo
    if not parent:
        return X, C, {}
    rename = {o.name: find(o.name) for o in X.objects()}
    Y = GeneratingData()
    for name, d in X.decls.items():
        if d.grade == 0:
            if rename[name] == name:
                Y.add_object(name)
        elif d.grade == 1:
            Y.add_arrow(name, rename[d.src], rename[d.tgt])
    for name, d in X.decls.items():
        if d.grade == 2:
            s = translate(d.src, Y, rename)
            t = translate(d.tgt, Y, rename)
            Y.add_cell(name, s, t, _translate_cell(d.cell, Y, rename), check=False)
    C2 = RelationSet()
    for (l, r), tag in zip(C.pairs, C.tags):
        C2.add(translate(l, Y, rename), translate(r, Y, rename), tag)
    return Y, C2, rename


def _translate_cell(cell, Y, rename=None):
    if cell is None:
        return None
    kind, args = cell
    return (kind, tuple(translate(a, Y, rename) for a in args))


def _check_objects_parallel(l, r, k):
    if l.src(0) is not r.src(0) or l.tgt(0) is not r.tgt(0):
        raise InconsistencyError(
            f"relation {k} identifies {l} ({l.src(0)} -> {l.tgt(0)}) with "
            f"{r} ({r.src(0)} -> {r.tgt(0)}): not parallel")


def _stage1(X, C, bound, extra=()):
    E1 = Partition(enumerate_free(X, bound, 1), extendable=True)
    low = []
    for d in X.decls.values():
        if d.grade == 2:
            low += [d.src, d.tgt]
    for l, r in C:
        _low_parts(l, low)
        _low_parts(r, low)
    for t in extra:
        _low_parts(t, low)
    for t in low:
        E1.add(t)
    for k, (l, r) in enumerate(C.pairs):
        if max(l.grade, r.grade) <= 1:
            _check_objects_parallel(l, r, k)
            E1.union(l, r, ("rel", k))
    E1.process()
    return E1


def _gate_cells(E1, C):
    for k, (l, r) in enumerate(C.pairs):
        if max(l.grade, r.grade) == 2:
            _check_objects_parallel(l, r, k)
            for i in (0, 1):
                a, b = (l.src(1), r.src(1)) if i == 0 else (l.tgt(1), r.tgt(1))
                if not E1.same(a, b):
                    side = ("source", "target")[i]
                    raise InconsistencyError(
                        f"relation {k} relates {l} and {r} whose 1-cell {side}s "
                        f"{a} and {b} are not identified at the 1-cell stage")


def _quotient_1cells(X, C, bound):
    C = _as_relations(C)
    Xo, Co, rename = _merge_objects(X, C)
    E1 = _stage1(Xo, Co, bound)
    _gate_cells(E1, Co)
    changed = bool(rename)
    new_bounds = {}
    for name, d in Xo.decls.items():
        if d.grade == 2:
            s, t = E1.rep(d.src), E1.rep(d.tgt)
            new_bounds[name] = (s, t)
            if s is not d.src or t is not d.tgt:
                changed = True
    if not changed:
        return E1, X, C
    if Xo is X:
        Xo = None
    Xp = GeneratingData()
    src = X if Xo is None else Xo
    for name, d in src.decls.items():
        if d.grade < 2:
            Xp.add_decl(d)
    for name, d in src.decls.items():
        if d.grade == 2:
            s, t = new_bounds[name]
            Xp.add_cell(name, translate(s, Xp), translate(t, Xp),
                        _translate_cell(d.cell, Xp), check=False)
    Cp = RelationSet()
    for (l, r), tag in zip(Co.pairs, Co.tags):
        Cp.add(translate(l, Xp), translate(r, Xp), tag)
    return _stage1(Xp, Cp, bound), Xp, Cp


def quotient_1cells(X: GeneratingData, C, bound):
    """Stage one: identify 1-cells.  Returns (stage1 partition, X')."""
    E1, Xp, _ = _quotient_1cells(X, C, bound)
    return E1, Xp


class Verdict(Enum):
    EQUAL = "EQUAL"
    DISTINCT = "DISTINCT"
    UNKNOWN_AT_BOUND = "UNKNOWN_AT_BOUND"


@dataclass
class Decision:
    verdict: Verdict
    certificate: list = field(default_factory=list)

    def __bool__(self):
        return self.verdict is Verdict.EQUAL


class QuotientFragment:
    """Bounded fragment of the quotient pre-2-category.

    ``stage1`` holds the 1-cell classes, ``partition`` the full classes.
    Level-1 composability is decided modulo ``stage1``.
    """

    def __init__(self, data, relations, bound, stage1, partition=None):
        self.data = data
        self.relations = relations
        self.bound = bound
        self.stage1 = stage1
        self.partition = partition if partition is not None else Partition(extendable=True)
        self.collapsed = False
        self.generated = 0  # count of relations added beyond ``relations``

    # term building -------------------------------------------------------
    def own(self, t):
        """t itself, or its re-reading here when it was built over the
        caller's data before stage one rebuilt it."""
        if t.algebra is self.data.algebra:
            return t
        return self.term(t.text())

    def compose(self, i, x, y):
        x, y = self.own(x), self.own(y)
        if i == 0:
            ok = x.src(0) is y.tgt(0)
        elif i == 1:
            ok = self.stage1.same(x.src(1), y.tgt(1))
        else:
            ok = False
        if not ok:
            raise CompositionError(
                f"cannot compose {x} and {y} at level {i}: {x.src(i) if i in (0, 1) else '?'} "
                f"vs {y.tgt(i) if i in (0, 1) else '?'}", x, y)
        return self.data.algebra.make(i, x, y)

    def lookup(self, name):
        return self.data.gen(name)

    def term(self, text) -> Term:
        return resolve(parse_expr(text), self.lookup, self.compose)

    # classes -------------------------------------------------------------
    def same(self, a, b) -> bool:
        return self.partition.same(self.own(a), self.own(b))

    def rep(self, t):
        return self.partition.rep(self.own(t))

    def classes(self):
        return self.partition.classes()

    def cell_classes(self, grade):
        return [c for c in self.classes() if c[0].grade == grade]

    def low_partition(self):
        return self.partition.restricted(lambda t: t.grade <= 1)

    def check_p4(self):
        """Stage-2 classes restricted to 1-cells equal the stage-1 classes."""
        for r in self.partition.roots():
            keys = {self.stage1.classify(self.partition.terms[j])
                    for j in self.partition._members[r]
                    if self.partition.terms[j].grade <= 1}
            if len(keys) > 1:
                return False
        return True

    def is_free(self):
        return len(self.relations) == 0 and self.generated == 0 and not self.collapsed


def _closure_terms(frag, enumerate_cells):
    E1 = frag.stage1
    yield from E1.terms
    if enumerate_cells:
        S = strata(frag.data.generators(), frag.bound, (0, 1), key=E1.classify)
        for n in sorted(S):
            yield from S[n]
    else:
        yield from frag.data.generators()


def close_staged(X: GeneratingData, C, bound, *, enumerate_cells=True) -> QuotientFragment:
    """Two-stage closure: 1-cells first, then 2-cells between
    stage-one-parallel boundaries."""
    E1, Xp, Cp = _quotient_1cells(X, C, bound)
    frag = QuotientFragment(Xp, Cp, bound, E1)
    _run_stage2(frag, Cp, _closure_terms(frag, enumerate_cells))
    return frag


def _run_stage2(frag, C, seeds):
    P = frag.partition
    for t in seeds:
        P.add(t)
    # stage-one merges first, so 1-cells agree before 2-cell relations act
    E1 = frag.stage1
    for r in E1.roots():
        ms = E1._members[r]
        for j in ms[1:]:
            P.union(E1.terms[ms[0]], E1.terms[j], ("stage1",))
    P.process()
    for k, (l, r) in enumerate(C.pairs):
        P.union(l, r, ("rel", k))
    P.process()
    if not frag.check_p4():
        raise InconsistencyError("closure identified distinct 1-cells")


def collapse_preorder(frag: QuotientFragment) -> QuotientFragment:
    """Identify all parallel cells, leaving at most one 2-cell per
    ordered pair of 1-cell classes."""
    out = _copy.copy(frag)
    P = frag.partition.copy()
    out.partition = P
    while True:
        groups: dict = {}
        for r in P.roots():
            t = P.terms[P._best[r]]
            key = (P.find(t.src(1)), P.find(t.tgt(1)))
            groups.setdefault(key, []).append(t)
        before = P.merges
        for ts in groups.values():
            for t in ts[1:]:
                P.union(ts[0], t, ("S",))
        P.process()
        if P.merges == before:
            break
    out.collapsed = True
    if not out.check_p4():
        raise InconsistencyError("collapse identified distinct 1-cells")
    return out


def decide_equal(frag: QuotientFragment, t1: Term, t2: Term) -> Decision:
    t1, t2 = frag.own(t1), frag.own(t2)
    for t in (t1, t2):
        frag.data.require(t)
        if not is_within(t, frag.bound):
            raise BoundError(f"term {t} exceeds the fragment bound {frag.bound}")
    if frag.same(t1, t2):
        return Decision(Verdict.EQUAL, frag.partition.certificate(t1, t2) or [])
    if frag.is_free():
        return Decision(Verdict.DISTINCT)
    return Decision(Verdict.UNKNOWN_AT_BOUND)
