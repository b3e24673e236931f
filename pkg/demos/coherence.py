"""Bicategory coherence on a chain of four arrows.

A chain o0 -f-> o1 -g-> o2 -h-> o3 -k-> o4 presents a 2-category whose
only 2-cells are the structure cells.  Composition of 1-cells is free,
so the five bracketings of k h g f stay distinct, while the associator
and unitors make every pentagon and triangle commute.
"""

from twopres.bicat import build_2cat
from twopres.terms import GeneratingData

X = GeneratingData()
objs = [X.add_object(f"o{i}") for i in range(5)]
f, g, h, k = (X.add_arrow(n, f"o{i}", f"o{i + 1}") for i, n in enumerate("fghk"))

frag = build_2cat(X, None, bound=6)
c = frag.compose
print(f"fragment at bound 6: {len(frag.classes())} classes, {len(frag.relations)} relations")

# the five ways to bracket k h g f
brackets = ["(((k *0 h) *0 g) *0 f)", "((k *0 (h *0 g)) *0 f)", "((k *0 h) *0 (g *0 f))",
            "(k *0 ((h *0 g) *0 f))", "(k *0 (h *0 (g *0 f)))"]
reps = {frag.rep(frag.term(b)).text() for b in brackets}
print(f"distinct bracketings: {len(reps)} of {len(brackets)}")

# the pentagon, pasted by hand from associators
a = frag.alpha
lhs = c(1, c(1, c(0, k, a(h, g, f)), a(k, c(0, h, g), f)), c(0, a(k, h, g), f))
rhs = c(1, a(k, h, c(0, g, f)), a(c(0, k, h), g, f))
print("pentagon holds:", frag.same(lhs, rhs))
print("  one side:", lhs.text())

# the triangle through o1
tri_l = c(1, c(0, g, frag.lam(f)), a(g, objs[1], f))
tri_r = c(0, frag.rho(g), f)
print("triangle holds:", frag.same(tri_l, tri_r))

# associators are invertible
inv = c(1, frag.term("alpha_inv[h,g,f]"), a(h, g, f))
print("alpha_inv . alpha is an identity:", frag.same(inv, frag.rep(inv.src(1))))
