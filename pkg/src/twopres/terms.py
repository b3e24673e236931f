"""Free pre-2-category terms: hash-consed composition trees.

A term is a generator leaf or a binary node ``(x *i y)`` at level 0 or 1.
Nodes are interned per :class:`TermAlgebra`, so structural equality is
object identity and terms can be used directly as dict keys.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable

from .errors import CompositionError, InputError, ParseError, UnresolvedError

# names of the structure-cell families added by augmentation
STRUCTURE_KINDS = ("alpha", "alpha_inv", "lambda", "lambda_inv", "rho", "rho_inv")


@dataclass(frozen=True)
class GeneratorDecl:
    """One generator.  Grade-1 boundaries are object names, grade-2
    boundaries are terms of grade at most 1."""

    name: str
    grade: int
    src: object = None
    tgt: object = None
    cell: tuple | None = None  # (kind, args) for structure cells


class Term:
    __slots__ = ("uid", "level", "left", "right", "decl", "leaves", "grade",
                 "key", "algebra", "_bnd", "_text")

    def __init__(self, algebra, uid, level, left, right, decl):
        self.algebra = algebra
        self.uid = uid
        self.level = level
        self.left = left
        self.right = right
        self.decl = decl
        self._bnd = None
        self._text = None
        if decl is not None:
            self.leaves = 1
            self.grade = decl.grade
            self.key = (1, (0, decl.name))
        else:
            self.leaves = left.leaves + right.leaves
            self.grade = max(left.grade, right.grade, level + 1)
            self.key = (self.leaves, (1, level, left.key[1], right.key[1]))

    @property
    def is_gen(self):
        return self.decl is not None

    @property
    def name(self):
        return self.decl.name if self.decl is not None else None

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Term({self.text()})"

    def __str__(self):
        return self.text()

    def text(self):
        if self._text is None:
            if self.decl is not None:
                self._text = self.decl.name
            else:
                self._text = f"({self.left.text()} *{self.level} {self.right.text()})"
        return self._text

    # boundaries ----------------------------------------------------------
    def boundaries(self):
        """Return (s0, t0, s1, t1)."""
        if self._bnd is None:
            self._bnd = self.algebra._boundaries(self)
        return self._bnd

    def src(self, i):
        return self.boundaries()[2 * i]

    def tgt(self, i):
        return self.boundaries()[2 * i + 1]

    def gens(self):
        """Generator leaves from left to right."""
        out, stack = [], [self]
        while stack:
            t = stack.pop()
            if t.decl is not None:
                out.append(t)
            else:
                stack.append(t.right)
                stack.append(t.left)
        return out


class TermAlgebra:
    """Intern table for one family of generator declarations."""

    def __init__(self):
        self._gens: dict[str, Term] = {}
        self._nodes: dict[tuple, Term] = {}
        self._next = 0

    def __len__(self):
        return len(self._gens) + len(self._nodes)

    def gen_node(self, decl: GeneratorDecl) -> Term:
        t = self._gens.get(decl.name)
        if t is not None:
            if t.decl != decl:
                raise InputError(f"generator {decl.name!r} redeclared differently")
            return t
        t = Term(self, self._next, None, None, None, decl)
        self._next += 1
        self._gens[decl.name] = t
        return t

    def lookup(self, name):
        return self._gens.get(name)

    def make(self, level, x, y) -> Term:
        """Intern x *level y without a composability check."""
        k = (level, x.uid, y.uid)
        t = self._nodes.get(k)
        if t is None:
            t = Term(self, self._next, level, x, y, None)
            self._next += 1
            self._nodes[k] = t
        return t

    def _boundaries(self, t):
        if t.decl is not None:
            d = t.decl
            if d.grade == 0:
                return (t, t, t, t)
            if d.grade == 1:
                return (self._gens[d.src], self._gens[d.tgt], t, t)
            s1, t1 = d.src, d.tgt
            return (s1.src(0), s1.tgt(0), s1, t1)
        x, y, lv = t.left, t.right, t.level
        if lv == 0:
            s0, t0 = y.src(0), x.tgt(0)
            if t.grade <= 1:
                return (s0, t0, t, t)
            return (s0, t0, self.make(0, x.src(1), y.src(1)),
                    self.make(0, x.tgt(1), y.tgt(1)))
        # level 1: objects are those of the right factor
        return (y.src(0), y.tgt(0), y.src(1), x.tgt(1))


def source(i, t):
    return t.src(i)


def target(i, t):
    return t.tgt(i)


class GeneratingData:
    """Graded generators over a shared intern table.

    Built incrementally with ``add_object``/``add_arrow``/``add_cell``;
    treat as immutable once handed to other modules.  ``extended`` makes
    a larger view that shares the intern table.
    """

    def __init__(self, algebra=None):
        self.algebra = algebra if algebra is not None else TermAlgebra()
        self.decls: dict[str, GeneratorDecl] = {}

    # construction --------------------------------------------------------
    def _add(self, decl):
        if decl.name in self.decls:
            raise InputError(f"duplicate generator {decl.name!r}")
        t = self.algebra.gen_node(decl)
        self.decls[decl.name] = decl
        return t

    def add_object(self, name):
        return self._add(GeneratorDecl(name, 0))

    def add_arrow(self, name, src, tgt):
        for o in (src, tgt):
            d = self.decls.get(o)
            if d is None or d.grade != 0:
                raise InputError(f"arrow {name!r}: {o!r} is not a declared object")
        return self._add(GeneratorDecl(name, 1, src, tgt))

    def add_cell(self, name, src1, tgt1, cell=None, check=True):
        for b in (src1, tgt1):
            if b.algebra is not self.algebra or b.grade > 1:
                raise InputError(f"cell {name!r}: boundary {b} is not a 1-cell term")
            if check:
                self.require(b)
        if src1.src(0) is not tgt1.src(0) or src1.tgt(0) is not tgt1.tgt(0):
            raise InputError(f"cell {name!r}: boundaries {src1} and {tgt1} are not parallel")
        return self._add(GeneratorDecl(name, 2, src1, tgt1, cell))

    def add_decl(self, decl):
        if decl.grade == 0:
            return self.add_object(decl.name)
        if decl.grade == 1:
            return self.add_arrow(decl.name, decl.src, decl.tgt)
        return self.add_cell(decl.name, decl.src, decl.tgt, decl.cell, check=False)

    def extended(self):
        other = GeneratingData(self.algebra)
        other.decls = dict(self.decls)
        return other

    # queries -------------------------------------------------------------
    def __contains__(self, name):
        return name in self.decls

    def gen(self, name) -> Term:
        if name not in self.decls:
            raise UnresolvedError(f"undeclared generator {name!r}")
        return self.algebra.lookup(name)

    def generators(self, grade=None):
        ts = [self.algebra.lookup(n) for n in self.decls]
        if grade is not None:
            ts = [t for t in ts if t.grade == grade]
        return ts

    def objects(self):
        return self.generators(0)

    def require(self, t):
        """Raise unless every leaf of t is declared here."""
        if t.algebra is not self.algebra:
            raise InputError(f"term {t} belongs to another generating data")
        for g in t.gens():
            if g.name not in self.decls:
                raise UnresolvedError(f"undeclared generator {g.name!r} in {t}")
        return t

    def compose(self, i, x, y) -> Term:
        """Checked composition in the free pre-2-category."""
        if i not in (0, 1):
            raise CompositionError(f"level must be 0 or 1, got {i}", x, y)
        a, b = x.src(i), y.tgt(i)
        if a is not b:
            raise CompositionError(
                f"cannot compose at level {i}: source {a} of {x} differs from target {b} of {y}",
                a, b)
        return self.algebra.make(i, x, y)

    def parse(self, text) -> Term:
        return resolve(parse_expr(text), self.gen, self.compose)

    def __repr__(self):
        return f"GeneratingData({len(self.decls)} generators)"


def compose(i, x, y):
    """Checked composition of two terms of the same algebra."""
    a, b = x.src(i), y.tgt(i)
    if a is not b:
        raise CompositionError(
            f"cannot compose at level {i}: source {a} of {x} differs from target {b} of {y}", a, b)
    return x.algebra.make(i, x, y)


# enumeration ---------------------------------------------------------------

def strata(gens, max_leaves, levels, key=None):
    """Chain strata S_1..S_max as a dict n -> list of terms.

    x *i y is formed when ``key(src_i x) == key(tgt_i y)``; the default
    key is the term itself, i.e. the syntactic composability rule.
    """
    if key is None:
        def key(t):
            return t.uid
    gens = list(gens)
    if not gens:
        return {n: [] for n in range(1, max_leaves + 1)}
    alg = gens[0].algebra
    S = {1: sorted(gens, key=lambda t: t.key)}
    for n in range(2, max_leaves + 1):
        layer = []
        for p in range(1, n):
            right = S[n - p]
            for lv in levels:
                buckets: dict = {}
                for y in right:
                    buckets.setdefault(key(y.tgt(lv)), []).append(y)
                for x in S[p]:
                    ys = buckets.get(key(x.src(lv)))
                    if ys:
                        for y in ys:
                            layer.append(alg.make(lv, x, y))
        layer.sort(key=lambda t: t.key)
        S[n] = layer
    return S


def enumerate_free(X: GeneratingData, max_leaves: int, grade: int,
                   object_leaves: bool = True) -> list:
    """All terms over X with at most ``max_leaves`` generator leaves.

    Generators of grade <= ``grade`` are leaves; composition happens at
    the levels below max(grade, 1).  With ``object_leaves=False`` objects
    are left out as leaves at grades 1 and 2 (they still occur as
    boundaries).  Output is in canonical order.
    """
    if max_leaves < 1:
        raise InputError("max_leaves must be at least 1")
    gens = [g for g in X.generators() if g.grade <= grade]
    if not object_leaves and grade > 0:
        gens = [g for g in gens if g.grade > 0]
    levels = (0,) if grade <= 1 else (0, 1)
    S = strata(gens, max_leaves, levels)
    out = []
    for n in range(1, max_leaves + 1):
        out.extend(S[n])
    return out


def translate(t, data: GeneratingData, rename=None, make=None):
    """Rebuild t over ``data`` by generator name (unchecked composition)."""
    make = make or data.algebra.make
    memo = {}

    def go(u):
        r = memo.get(u)
        if r is not None:
            return r
        if u.decl is not None:
            n = u.decl.name
            if rename is not None:
                n = rename.get(n, n)
            r = data.gen(n)
        else:
            r = make(u.level, go(u.left), go(u.right))
        memo[u] = r
        return r

    return go(t)


# canonical syntax ----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\*[01])|([A-Za-z0-9_][A-Za-z0-9_'.]*)|(.))")


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("op", m.group(1), start))
        elif m.group(2):
            out.append(("id", m.group(2), start))
        else:
            out.append(("p", m.group(3), start))
        pos = m.end()
    return out


class _ExprParser:
    def __init__(self, text, line=None, col0=0):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.line = line
        self.col0 = col0

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, self.line, self.col0 + pos + 1)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of term")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            self.error(f"unexpected {tok[1]!r}")
        self.i += 1
        return tok

    def name(self):
        base = self.take("id")[1]
        tok = self.peek()
        if tok is not None and tok[1] == "[":
            self.i += 1
            args = [self.expr()]
            while self.peek() is not None and self.peek()[1] == ",":
                self.i += 1
                args.append(self.expr())
            self.take("p", "]")
            return ("n", base + "[" + ",".join(expr_text(a) for a in args) + "]",
                    base, tuple(args))
        return ("n", base, base, ())

    def expr(self):
        tok = self.peek()
        if tok is None:
            self.error("expected a term")
        if tok[1] == "(":
            self.i += 1
            left = self.expr()
            op = self.take("op")[1]
            right = self.expr()
            self.take("p", ")")
            return ("c", int(op[1]), left, right)
        if tok[0] == "id":
            return self.name()
        self.error(f"unexpected {tok[1]!r}")

    def full(self):
        e = self.expr()
        if self.i != len(self.toks):
            self.error("trailing input after term")
        return e


def parse_expr(text, line=None, col=0):
    """Parse canonical term syntax into a plain tuple tree.

    Leaves are ``("n", name, base, args)`` where ``name`` is the full
    canonical generator name, e.g. ``alpha[h,g,f]``; nodes are
    ``("c", level, left, right)``.
    """
    return _ExprParser(text, line, col).full()


def expr_text(e):
    if e[0] == "n":
        return e[1]
    return f"({expr_text(e[2])} *{e[1]} {expr_text(e[3])})"


def resolve(e, lookup: Callable, compose: Callable):
    if e[0] == "n":
        return lookup(e[1])
    return compose(e[1], resolve(e[2], lookup, compose), resolve(e[3], lookup, compose))


def term_text(t):
    return t.text()


def is_within(t, bound):
    """True when every maximal grade-<=1 subterm has at most ``bound`` leaves."""
    if t.grade <= 1:
        return t.leaves <= bound
    if t.decl is not None:
        return True
    return is_within(t.left, bound) and is_within(t.right, bound)


def sorted_terms(ts: Iterable) -> list:
    return sorted(ts, key=lambda t: t.key)
