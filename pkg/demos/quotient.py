"""Quotienting a category by a monoidal action.

Z/2 acts on the discrete category {x, y} by swapping the two points.
The quotient identifies nothing on the nose: it adds a 1-cell
zeta[m,a]: a -> m.a for every group element and point, and 2-cells that
make those 1-cells natural.  Afterwards we check the laws, look at a
hom-category, and confirm the universal property against the quotient
itself and against its collapse to a locally posetal 2-category.
"""

from twopres import presio
from twopres.action import (build_quotient, candidate_from_fragment, hom_category,
                            scan_quotient_laws, validate_action, verify_universal)
from twopres.congruence import collapse_preorder, decide_equal
from twopres.fixtures import path

A = presio.read(path("z2_swap.2pres")).action()
print("action tables valid:", validate_action(A).passed)

frag = build_quotient(A, bound=2)
print(f"quotient at bound 2: {len(frag.classes())} classes")

scan = scan_quotient_laws(frag)
print("law instances checked:", dict(sorted(scan.checked.items())), "failures:", len(scan.failures))

# zeta[g,x] goes from x to g.x = y, so the quotient connects the two points
h = hom_category(frag, "x", "y")
print(f"hom(x, y): {len(h.one_cells)} 1-cells, {len(h.two_cells)} 2-cells")
for u in h.one_cells:
    print("  ", u.text())

# the naturality 2-cell for the unit agrees with the unitor composite
d = decide_equal(frag, frag.term("eta_c[1,x]"), frag.term("eta_m[1,x]"))
print("eta_c[1,x] = eta_m[1,x]:", d.verdict.value)

res = verify_universal(frag, candidate_from_fragment(frag))
print("against itself:", res.verdict.value)

col = collapse_preorder(frag)
res = verify_universal(frag, candidate_from_fragment(col))
print("against its collapse:", res.verdict.value)
