import pytest

from conftest import chain
from twopres.bicat import build_2cat, declare_cell, eq2_term, pasting_composite, unit_eta
from twopres.congruence import RelationSet
from twopres.errors import BoundError, CompositionError
from twopres.terms import GeneratingData


def _no_objects(t):
    """True when no object occurs in t or in any structure-cell argument."""
    for g in t.gens():
        if g.grade == 0:
            return False
        if g.decl.cell is not None and not all(_no_objects(a) for a in g.decl.cell[1]):
            return False
    return True


def test_single_object_gets_degenerate_cells():
    X = GeneratingData()
    a = X.add_object("a")
    frag = build_2cat(X, None, 3)
    assert (a, a, a) in frag.cells.alpha
    assert a in frag.cells.lam and a in frag.cells.rho
    assert frag.alpha(a, a, a).name == "alpha[a,a,a]"


def test_three_chain_has_one_arrow_triple():
    X, _, (f, g, h) = chain(3)
    frag = build_2cat(X, None, 3)
    arrow_triples = [k for k in frag.cells.alpha if all(_no_objects(x) for x in k)]
    assert arrow_triples == [(h, g, f)]
    a, ai = frag.alpha(h, g, f), frag.alpha(h, g, f, inv=True)
    hgf = X.compose(0, h, X.compose(0, g, f))
    assert (frag.compose(1, a, ai), hgf) in frag.relations.tagged("inv")


def test_unitor_counts():
    X, _, _ = chain(2)
    frag = build_2cat(X, None, 2)
    reps = {c[0] for c in frag.stage1.classes() if c[0].grade <= 1 and c[0].leaves <= 2}
    assert set(frag.cells.lam) == reps == set(frag.cells.rho)
    lam = [g for g in frag.data.generators(2) if g.decl.cell[0].startswith("lambda")]
    assert len(lam) == 2 * len(reps)


def test_four_chain_pentagon():
    X, _, (f, g, h, k) = chain(4)
    frag = build_2cat(X, None, 4)
    pents = [p for p in frag.relations.tagged("pentagon") if _no_objects(p[0])]
    assert len(pents) == 1
    c = frag.compose
    hg, gf, kh = c(0, h, g), c(0, g, f), c(0, k, h)
    lhs = c(1, c(1, c(0, k, frag.alpha(h, g, f)), frag.alpha(k, hg, f)), c(0, frag.alpha(k, h, g), f))
    rhs = c(1, frag.alpha(k, h, gf), frag.alpha(kh, g, f))
    assert pents[0] == (lhs, rhs)
    assert frag.same(lhs, rhs)


def test_triangle_instances_hold():
    X, objs, (f, g) = chain(2)
    frag = build_2cat(X, None, 3)
    b = objs[1]
    c = frag.compose
    lhs = c(1, c(0, g, frag.lam(f)), frag.alpha(g, b, f))
    rhs = c(0, frag.rho(g), f)
    assert frag.same(lhs, rhs)
    assert frag.relations.tagged("triangle")


def test_no_user_cells_means_no_naturality():
    X, _, _ = chain(3)
    frag = build_2cat(X, None, 3)
    assert frag.relations.tagged("naturality") == []


def test_bracketings_stay_distinct():
    X, _, (f, g, h) = chain(3)
    frag = build_2cat(X, None, 4)
    assert not frag.same(X.compose(0, X.compose(0, h, g), f), X.compose(0, h, X.compose(0, g, f)))
    assert frag.check_p4()


def test_parallel_arrows_merge_before_augmentation():
    X = GeneratingData()
    X.add_object("a")
    X.add_object("b")
    x = X.add_arrow("x", "a", "b")
    y = X.add_arrow("y", "a", "b")
    frag = build_2cat(X, [(x, y)], 2)
    assert frag.same(x, y)
    assert frag.lam(x) is frag.lam(y)
    assert len([k for k in frag.cells.lam if k.leaves == 1 and k.grade == 1]) == 1


@pytest.mark.parametrize("k,bound", [(2, 3), (3, 4)])
def test_every_emitted_relation_holds(k, bound):
    X, _, arrows = chain(k)
    X.add_cell("u", arrows[0], arrows[0])
    frag = build_2cat(X, None, bound)
    for (l, r), tag in zip(frag.relations.pairs, frag.relations.tags):
        assert frag.same(l, r), tag


def test_checked_build_agrees():
    X, _, _ = chain(3)
    a = build_2cat(X, None, 3)
    b = build_2cat(X, None, 3, check=True)
    assert a.partition.as_sets() == {frozenset(c) for c in b.partition.as_sets()}


def test_structure_cells_beyond_bound():
    X, _, (f, g, h) = chain(3)
    frag = build_2cat(X, None, 2)
    with pytest.raises(BoundError):
        frag.alpha(h, g, f)


# the unit and pasting composites -----------------------------------------------------

def test_unit_eta_boundaries():
    X, objs, (f,) = chain(1)
    frag = build_2cat(X, None, 2)
    e = unit_eta(frag, f)
    assert e.src(1) is X.compose(0, f, objs[0])
    assert e.tgt(1) is X.compose(0, objs[1], f)
    a = objs[0]
    assert unit_eta(frag, a).text() == "(lambda_inv[o0] *1 rho[o0])"


def test_unit_eta_is_trivial_once_unitors_are():
    X, objs, (f,) = chain(1)
    lam = declare_cell(X, "lambda", (f,))
    rho = declare_cell(X, "rho", (f,))
    C = RelationSet()
    C.add(X.compose(0, objs[1], f), f, "strict")
    C.add(X.compose(0, f, objs[0]), f, "strict")
    C.add(lam, f, "strict")
    C.add(rho, f, "strict")
    frag = build_2cat(X, C, 2)
    assert frag.same(unit_eta(frag, f), f)


def _square_data():
    X = GeneratingData()
    for o in ("X0", "Y0", "Z0", "X1", "Y1", "Z1"):
        X.add_object(o)
    F = (X.add_arrow("Ff", "X0", "Y0"), X.add_arrow("Fg", "Y0", "Z0"))
    G = (X.add_arrow("Gf", "X1", "Y1"), X.add_arrow("Gg", "Y1", "Z1"))
    z = (X.add_arrow("zx", "X0", "X1"), X.add_arrow("zy", "Y0", "Y1"),
         X.add_arrow("zz", "Z0", "Z1"))
    c = X.compose
    ef = X.add_cell("ef", c(0, z[1], F[0]), c(0, G[0], z[0]))
    eg = X.add_cell("eg", c(0, z[2], F[1]), c(0, G[1], z[1]))
    return X, F, G, z, ef, eg


def test_pasting_composite_shape():
    X, (Ff, Fg), (Gf, Gg), (zx, zy, zz), ef, eg = _square_data()
    frag = build_2cat(X, None, 3)
    p = pasting_composite(frag, eg, ef, Gg, Gf, Fg, Ff, zx, zy, zz)
    c = X.compose
    assert frag.stage1.same(p.src(1), c(0, zz, c(0, Fg, Ff)))
    assert frag.stage1.same(p.tgt(1), c(0, c(0, Gg, Gf), zx))
    assert p.text() == ("((((alpha_inv[Gg,Gf,zx] *1 (Gg *0 ef)) *1 alpha[Gg,zy,Ff])"
                        " *1 (eg *0 Ff)) *1 alpha_inv[zz,Fg,Ff])")


def test_pasting_composite_names_the_bad_seam():
    X, (Ff, Fg), (Gf, Gg), (zx, zy, zz), ef, eg = _square_data()
    loop = X.add_cell("loop", X.compose(0, zy, Ff), X.compose(0, zy, Ff))
    frag = build_2cat(X, None, 3)
    with pytest.raises(CompositionError, match="seam 1"):
        pasting_composite(frag, eg, loop, Gg, Gf, Fg, Ff, zx, zy, zz)


def test_eq2_is_left_associated():
    calls = []

    def compose(i, x, y):
        calls.append(i)
        return f"({x} *{i} {y})"

    t = eq2_term(compose, lambda h, g, f, inv: f"a{'-' if inv else ''}[{h}{g}{f}]",
                 "eg", "ef", "G", "H", "F", "E", "x", "y", "z")
    assert t == "((((a-[GHx] *1 (G *0 ef)) *1 a[GyE]) *1 (eg *0 E)) *1 a-[zFE])"
    assert calls.count(1) == 4
