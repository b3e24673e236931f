import pytest
from hypothesis import assume, given, strategies as st

from conftest import chain
from oracles import CATALAN, bracketings, free_terms_by_brute_force
from twopres.errors import CompositionError, InputError, ParseError, UnresolvedError
from twopres.fixtures.tables import eckmann_hilton
from twopres.terms import GeneratingData, enumerate_free, source, strata, target


def full_chain_terms(k):
    X, _, arrows = chain(k)
    names = {a.name for a in arrows}
    return [t for t in enumerate_free(X, k, 1)
            if t.leaves == k and {g.name for g in t.gens()} == names]


def test_boundaries_of_a_composite():
    X = GeneratingData()
    for o in "abc":
        X.add_object(o)
    x = X.add_arrow("x", "a", "b")
    y = X.add_arrow("y", "b", "c")
    yx = X.compose(0, y, x)
    assert source(0, yx) is X.gen("a")
    assert target(0, yx) is X.gen("c")
    assert target(1, x) is x


def test_level_one_boundary_of_whiskered_cells():
    X, _, (f, g) = chain(2)
    al = X.add_cell("al", f, f)
    be = X.add_cell("be", g, g)
    w = X.compose(0, be, al)
    assert w.src(1) is X.compose(0, g, f)
    assert w.src(0) is X.gen("o0") and w.tgt(0) is X.gen("o2")


def test_loop_composite_is_not_collapsed():
    X = GeneratingData()
    X.add_object("a")
    x = X.add_arrow("x", "a", "a")
    xx = X.compose(0, x, x)
    assert xx is not x
    assert xx.grade == 1 and xx.leaves == 2


def test_non_composable_pair():
    X, _, (f, g) = chain(2)
    with pytest.raises(CompositionError):
        X.compose(0, f, g)
    a = X.add_cell("a", f, f)
    b = X.add_cell("b", g, g)
    with pytest.raises(CompositionError):
        X.compose(1, a, b)


def test_hash_consing():
    X, _, (f, g) = chain(2)
    assert X.compose(0, g, f) is X.compose(0, g, f)
    assert X.parse("(g *0 f)") is X.compose(0, g, f)


def test_single_object_strata():
    X = GeneratingData()
    X.add_object("a")
    ts = enumerate_free(X, 3, 0)
    assert [t.text() for t in ts] == ["a", "(a *0 a)", "(a *0 (a *0 a))", "((a *0 a) *0 a)"]


def test_four_chain_full_terms():
    ts = full_chain_terms(4)
    assert len(ts) == 5
    assert {t.text() for t in ts} == set(bracketings(("k", "h", "g", "f")))


@pytest.mark.parametrize("k", range(2, 8))
def test_catalan_counts(k):
    assert len(full_chain_terms(k)) == CATALAN[k - 1]


@pytest.mark.parametrize("k,n", [(1, 3), (2, 3), (3, 4), (4, 4)])
def test_enumeration_matches_brute_force(k, n):
    X, objs, arrows = chain(k)
    got = {t.text() for t in enumerate_free(X, n, 1)}
    want = free_terms_by_brute_force([o.name for o in objs],
                                     {a.name: (a.decl.src, a.decl.tgt) for a in arrows}, n)
    assert got == want


def test_cell_self_composition_rule():
    X, _, (f,) = chain(1)
    g = X.add_arrow("g2", "o0", "o1")
    loop = X.add_cell("eta", f, f)
    step = X.add_cell("theta", f, g)
    ts = set(enumerate_free(X, 2, 2))
    assert X.algebra.make(1, loop, loop) in ts
    assert all(not (t.level == 1 and t.left is step and t.right is step)
               for t in ts if not t.is_gen)


def test_stratum_recursion():
    X, _, (f, g) = chain(2)
    X.add_cell("u", f, f)
    X.add_cell("v", g, g)
    S = strata(X.generators(), 4, (0, 1))
    for n in range(2, 5):
        count = 0
        for p in range(1, n):
            for lv in (0, 1):
                count += sum(1 for x in S[p] for y in S[n - p] if x.src(lv) is y.tgt(lv))
        assert len(S[n]) == count


def test_canonical_order():
    X, _, _ = chain(3)
    ts = enumerate_free(X, 3, 1)
    assert ts == sorted(ts, key=lambda t: t.key)
    assert [t.leaves for t in ts] == sorted(t.leaves for t in ts)


def test_max_leaves_must_be_positive():
    X, _, _ = chain(1)
    with pytest.raises(InputError):
        enumerate_free(X, 0, 1)


def test_parse_errors_carry_position():
    X, _, _ = chain(2)
    with pytest.raises(ParseError) as e:
        X.parse("(g *0 f")
    assert e.value.col == len("(g *0 f") + 1
    with pytest.raises(UnresolvedError):
        X.parse("(g *0 zz)")


def test_cell_boundaries_must_be_parallel():
    X, _, (f, g) = chain(2)
    with pytest.raises(InputError):
        X.add_cell("bad", f, g)


# properties --------------------------------------------------------------------------------

@st.composite
def quivers(draw):
    X = GeneratingData()
    n_obj = draw(st.integers(1, 3))
    objs = [f"o{i}" for i in range(n_obj)]
    for o in objs:
        X.add_object(o)
    arrows = []
    for i in range(draw(st.integers(0, 3))):
        s, t = draw(st.sampled_from(objs)), draw(st.sampled_from(objs))
        arrows.append(X.add_arrow(f"x{i}", s, t))
    for i in range(draw(st.integers(0, 2))):
        if not arrows:
            break
        a = draw(st.sampled_from(arrows))
        par = [b for b in arrows if b.src(0) is a.src(0) and b.tgt(0) is a.tgt(0)]
        X.add_cell(f"c{i}", a, draw(st.sampled_from(par)))
    return X


@given(quivers(), st.integers(1, 3))
def test_enumerated_terms_form_a_graded_set(X, n):
    for t in enumerate_free(X, n, 2):
        for i in (0, 1):
            for b in (t.src(i), t.tgt(i)):
                # 1.a.i: boundaries are fixed by both boundary maps
                assert b.src(i) is b and b.tgt(i) is b
        for b in (t.src(0), t.tgt(0)):
            # 1.b.i
            assert b.src(1) is b and b.tgt(1) is b
        for b in (t.src(1), t.tgt(1)):
            # 1.b.ii
            assert b.src(0) is t.src(0) and b.tgt(0) is t.tgt(0)


@given(quivers(), st.integers(1, 3))
def test_printed_terms_parse_back(X, n):
    for t in enumerate_free(X, n, 2):
        assert X.parse(t.text()) is t


@given(quivers())
def test_enumeration_is_monotone_in_the_bound(X):
    small = enumerate_free(X, 2, 2)
    big = enumerate_free(X, 3, 2)
    assert big[:len(small)] == small


# freeness against a finite target -----------------------------------------------------------

def _source_data():
    X = GeneratingData()
    X.add_object("a")
    X.add_object("b")
    x = X.add_arrow("x", "a", "b")
    y = X.add_arrow("y", "b", "a")
    z = X.add_arrow("z", "a", "a")
    X.add_cell("eta", X.compose(0, y, x), z)
    return X


@given(st.data())
def test_unique_extension_into_a_finite_table(data):
    D = eckmann_hilton()
    X = _source_data()
    F = {"a": "o", "b": "o"}
    for n in ("x", "y", "z"):
        F[n] = data.draw(st.sampled_from(["o", "f"]), label=n)
    src_img = D.c(0, F["y"], F["x"])
    cands = [c for c in D.elements if D.s(1, c) == src_img and D.t(1, c) == F["z"]]
    assume(cands)
    F["eta"] = data.draw(st.sampled_from(cands), label="eta")

    def ev(t):
        if t.is_gen:
            return F[t.name]
        v = D.c(t.level, ev(t.left), ev(t.right))
        assert v is not None
        return v

    for t in enumerate_free(X, 3, 2):
        v = ev(t)
        for i in (0, 1):
            assert D.s(i, v) == ev(t.src(i))
            assert D.t(i, v) == ev(t.tgt(i))
