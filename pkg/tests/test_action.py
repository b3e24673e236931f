from dataclasses import replace

import pytest

from conftest import load
from oracles import one_cell_word_count
from twopres.action import (Factorization, build_quotient, candidate_from_fragment,
                            emit_quotient_presentation, eta, hom_category, pi,
                            scan_quotient_laws, validate_action, validate_monoidal,
                            verify_universal, zeta)
from twopres.bicat import build_2cat
from twopres.congruence import RelationSet, collapse_preorder
from twopres.errors import InputError


def action(name):
    return load(name).action()


# validators -----------------------------------------------------------------------------

@pytest.mark.parametrize("fx", ["z2_swap.2pres", "trivial_point.2pres", "z2_point.2pres",
                                "trivial_arrow.2pres", "sign.2pres"])
def test_fixture_actions_validate(fx):
    A = action(fx)
    assert validate_monoidal(A.mon).passed
    assert validate_action(A).passed


def test_sign_group_is_monoidal():
    assert validate_monoidal(load("sign.2pres").monoidal("B")).passed


def test_perturbed_associator_breaks_the_pentagon():
    B = load("sign.2pres").monoidal("B")
    bad = replace(B, beta={**B.beta, ("*", "*", "*"): "s"})
    rep = validate_monoidal(bad)
    assert "AA" in rep.axioms()
    assert all(len(v.witness) == 4 for v in rep.violations if v.axiom == "AA")


def test_perturbed_action_associator():
    A = load("sign.2pres").action("A")
    bad = replace(A, beta={**A.beta, ("1", "g", "p"): "t"})
    rep = validate_action(bad)
    assert "AA" in rep.axioms()
    assert any(v.witness == ("g", "1", "g", "p") for v in rep.violations if v.axiom == "AA")


@pytest.mark.parametrize("bits", range(16))
def test_twisted_associators_pass_iff_normalized_cocycle(bits):
    # beta*_{m,n,p} = t^c(m,n) for c: Z/2 x Z/2 -> Z/2
    A = load("sign.2pres").action("A")
    M = ("1", "g")
    pairs = [(m, n) for m in M for n in M]
    c = {mn: (bits >> k) & 1 for k, mn in enumerate(pairs)}
    mul = {("1", "1"): "1", ("1", "g"): "g", ("g", "1"): "g", ("g", "g"): "1"}
    cocycle = all((c[(l, m)] + c[(mul[(l, m)], n)]) % 2 == (c[(m, n)] + c[(l, mul[(m, n)])]) % 2
                  for l in M for m in M for n in M)
    normalized = all(c[(m, "1")] == 0 for m in M)
    twisted = replace(A, beta={(m, n, "p"): "t" if c[(m, n)] else "p" for m, n in pairs})
    assert validate_action(twisted).passed == (cocycle and normalized)


def test_perturbed_unit_constraint():
    A = load("sign.2pres").action("A")
    bad = replace(A, u={"p": "t"})
    assert not validate_action(bad).passed


def test_table_gap_is_input_error():
    M = action("z2_swap.2pres").mon
    tensor = dict(M.tensor)
    del tensor[("g", "g")]
    with pytest.raises(InputError):
        validate_monoidal(replace(M, tensor=tensor))


def test_symmetry_is_validated():
    M = action("z2_swap.2pres").mon
    assert M.symmetry is not None
    bad = replace(M, symmetry={**M.symmetry, ("1", "g"): "1"})
    assert "symmetry.boundary" in validate_monoidal(bad).axioms()


def test_monoidal_failures_are_prefixed_in_action_reports():
    A = load("sign.2pres").action("A")
    mon = replace(A.mon, beta={**A.mon.beta, ("g", "g", "g"): "1"})
    rep = validate_action(replace(A, mon=mon))
    assert any(a.startswith("monoidal:") for a in rep.axioms())


# the emitted presentation -------------------------------------------------------------------

def test_one_zeta_per_object_pair():
    P = emit_quotient_presentation(action("z2_swap.2pres"))
    zetas = [n for n in P.data.decls if n.startswith("zeta")]
    assert sorted(zetas) == ["zeta[1,x]", "zeta[1,y]", "zeta[g,x]", "zeta[g,y]"]


def test_discrete_case_has_etas_only_at_identities():
    P = emit_quotient_presentation(action("z2_swap.2pres"))
    etas = [n for n in P.data.decls if n.startswith("eta")]
    assert len(etas) == 2 * 2 * 2 * 2  # two families, |M0||C0| each, with inverses
    frag = build_quotient(action("z2_swap.2pres"), 2)
    for m in ("1", "g"):
        for a in ("x", "y"):
            assert frag.same(eta(frag, "c", m, a), eta(frag, "m", m, a))


def test_unit_composite_relation_is_emitted():
    P = emit_quotient_presentation(action("trivial_point.2pres"))
    texts = {(l.text(), r.text()) for l, r in P.relations.tagged("Q5")}
    assert ("eta_c[1,p]", "(lambda_inv[zeta[1,p]] *1 rho[zeta[1,p]])") in texts


def test_lax_reading_has_no_inverses():
    P = emit_quotient_presentation(action("trivial_arrow.2pres"), lax=True)
    assert not any("_inv" in n for n in P.data.decls if n.startswith("eta"))
    assert P.relations.tagged("inv") == []


def test_relations_are_parallel_after_stage_one():
    P = emit_quotient_presentation(action("trivial_arrow.2pres"))
    frag = build_2cat(P.data, P.relations, 2, check=True)
    assert frag.check_p4()


# the built quotient ------------------------------------------------------------------------

@pytest.mark.parametrize("fx", ["z2_swap.2pres", "trivial_point.2pres", "trivial_arrow.2pres",
                                "z2_point.2pres"])
def test_pi_is_a_functor(fx):
    A = action(fx)
    frag = build_quotient(A, 2)
    C = A.cat
    for g, f in C.composable_pairs():
        assert frag.same(frag.compose(0, pi(frag, g), pi(frag, f)), pi(frag, C.compose(g, f)))
    for a in C.objects:
        assert pi(frag, a).grade == 0


@pytest.mark.parametrize("fx,bound", [("z2_swap.2pres", 2), ("trivial_arrow.2pres", 2),
                                      ("trivial_point.2pres", 3)])
def test_law_scan_passes(fx, bound):
    scan = scan_quotient_laws(build_quotient(action(fx), bound))
    assert scan.passed, scan.failures
    assert scan.checked.get("Q5")


def test_eta_connects_both_sides_of_the_square():
    frag = build_quotient(action("trivial_arrow.2pres"), 2)
    e, ei = eta(frag, "c", "1", "f"), eta(frag, "c", "1", "f", inv=True)
    left = frag.compose(0, zeta(frag, "1", "b"), pi(frag, "f"))
    right = frag.compose(0, pi(frag, "f"), zeta(frag, "1", "a"))
    assert frag.same(e.src(1), left) and frag.same(e.tgt(1), right)
    assert frag.same(frag.compose(1, ei, e), left)
    assert frag.same(frag.compose(1, e, ei), right)


def test_word_count_on_a_trivially_acted_point():
    A = action("z2_point.2pres")
    frag = build_quotient(A, 2)
    h = hom_category(frag, "p", "p", 2)
    ends = {"p": ("p", "p"), "zeta[1,p]": ("p", "p"), "zeta[g,p]": ("p", "p")}
    want = one_cell_word_count({"p"}, {"zeta[1,p]", "zeta[g,p]"}, ends, 2,
                               lambda x, y: A.cat.compose(x, y))
    assert len(h.one_cells) == want == 11


def test_pi_stays_injective():
    frag = build_quotient(action("sign.2pres"), 2)
    assert not frag.same(pi(frag, "t"), pi(frag, "p"))


# hom-categories ------------------------------------------------------------------------------

def test_hom_of_the_trivial_point():
    frag = build_quotient(action("trivial_point.2pres"), 1)
    h = hom_category(frag, "p", "p", 1)
    assert [u.text() for u in h.one_cells] == ["p", "zeta[1,p]"]


def test_hom_of_the_swap_action():
    frag = build_quotient(action("z2_swap.2pres"), 1)
    assert "zeta[g,x]" in [u.text() for u in hom_category(frag, "x", "y").one_cells]
    assert "zeta[1,x]" in [u.text() for u in hom_category(frag, "x", "x").one_cells]


def test_collapsed_homs_are_subsingletons():
    frag = build_quotient(action("z2_swap.2pres"), 3)
    before = hom_category(frag, "x", "y")
    after = hom_category(collapse_preorder(frag), "x", "y")
    assert before.max_hom_size() > 1
    assert after.max_hom_size() <= 1


def test_vertical_table_is_closed():
    frag = build_quotient(action("trivial_arrow.2pres"), 2)
    h = hom_category(frag, "a", "b")
    for (p, q), r in h.vertical.items():
        assert h.two_cells[q][1] == h.two_cells[p][0]
        assert h.two_cells[r][:2] == (h.two_cells[q][0], h.two_cells[p][1])


def test_unknown_object():
    frag = build_quotient(action("trivial_point.2pres"), 1)
    with pytest.raises(InputError):
        hom_category(frag, "p", "nowhere")


# the universal property ------------------------------------------------------------------------

@pytest.mark.parametrize("fx", ["z2_swap.2pres", "trivial_point.2pres"])
def test_identity_factorization(fx):
    frag = build_quotient(action(fx), 2)
    res = verify_universal(frag, candidate_from_fragment(frag))
    assert res.verdict is Factorization.UNIQUE_FACTORIZATION
    assert all(k == v for k, v in res.factor.items())


@pytest.mark.parametrize("fx", ["z2_swap.2pres", "trivial_point.2pres"])
def test_collapse_factorization(fx):
    frag = build_quotient(action(fx), 2)
    col = collapse_preorder(frag)
    res = verify_universal(frag, candidate_from_fragment(col))
    assert res.verdict is Factorization.UNIQUE_FACTORIZATION
    for t in frag.partition.terms:
        assert res.factor[frag.rep(t).text()] == col.rep(t).text()


def test_smaller_candidate_has_no_factorization():
    A = action("trivial_point.2pres")
    res = verify_universal(build_quotient(A, 2), candidate_from_fragment(build_quotient(A, 1)))
    assert res.verdict is Factorization.NO_FACTORIZATION


def _candidate_with_spare(A, bound, name):
    """Candidate with a second cell parallel to ``name`` obeying copies of its relations."""
    P = emit_quotient_presentation(A)
    X = P.data.extended()
    inv = name.replace("[", "_inv[", 1)
    e, ei = X.gen(name), X.gen(inv)
    X.add_cell("spare", e.src(1), e.tgt(1))
    X.add_cell("spare_inv", ei.src(1), ei.tgt(1))
    R = RelationSet()
    R.extend(P.relations)

    def sub(s):
        return s.replace(inv, "spare_inv").replace(name, "spare")

    for (l, r), tag in zip(P.relations.pairs, P.relations.tags):
        if sub(l.text() + r.text()) != l.text() + r.text():
            R.add(X.parse(sub(l.text())), X.parse(sub(r.text())), tag)
    return candidate_from_fragment(build_2cat(X, R, bound)), inv


def test_free_eta_with_two_images_is_not_unique():
    A = action("trivial_arrow.2pres")
    frag = build_quotient(A, 2)
    cand, inv = _candidate_with_spare(A, 2, "eta_c[1,f]")
    assert verify_universal(frag, cand).verdict is Factorization.UNIQUE_FACTORIZATION
    del cand.assign["eta_c[1,f]"], cand.assign[inv]
    res = verify_universal(frag, cand)
    assert res.verdict is Factorization.NON_UNIQUE
    assert len(res.witnesses) == 2


def test_candidate_with_a_bad_eta_boundary_cites_q3():
    A = action("trivial_arrow.2pres")
    frag = build_quotient(A, 2)
    cand = candidate_from_fragment(frag)
    cand.assign["eta_c[1,f]"] = cand.assign["f"]
    with pytest.raises(InputError, match="Q3"):
        verify_universal(frag, cand)
    cand = candidate_from_fragment(frag)
    cand.assign["eta_m[1,a]"] = cand.assign["a"]
    with pytest.raises(InputError, match="Q4"):
        verify_universal(frag, cand)


def test_candidate_breaking_a_relation_names_its_clause():
    A = action("trivial_arrow.2pres")
    frag = build_quotient(A, 2)
    cand, inv = _candidate_with_spare(A, 2, "eta_c[1,f]")
    cand.assign["eta_c[1,f]"] = cand.assign["spare"]
    with pytest.raises(InputError, match="violates inv"):
        verify_universal(frag, cand)


def test_candidate_missing_pi_image():
    frag = build_quotient(action("trivial_point.2pres"), 1)
    cand = candidate_from_fragment(frag)
    del cand.assign["p"]
    with pytest.raises(InputError, match="Q1"):
        verify_universal(frag, cand)
