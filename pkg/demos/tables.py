"""Checking a hand-written strict 2-category table.

Z/3 as a one-object 2-category: a single object o and loops g, h with
g g = h.  The table passes every axiom.  Breaking one composite makes
the checker name the violated axiom and a witness.
"""

from twopres.graded import check_strict_n, make_table

els = ["o", "g", "h"]
ident = {x: x for x in els}
src = [{x: "o" for x in els}, dict(ident)]
tgt = [{x: "o" for x in els}, dict(ident)]
power = {"o": 0, "g": 1, "h": 2}
name = {v: k for k, v in power.items()}
comp0 = {(x, y): name[(power[x] + power[y]) % 3] for x in els for y in els}
comp1 = {(x, x): x for x in els}

good = make_table(els, src, tgt, [comp0, comp1])
print("Z/3:", "passed" if check_strict_n(good).passed else "FAILED")

# claim g h = g instead of o
comp0[("g", "h")] = "g"
report = check_strict_n(make_table(els, src, tgt, [comp0, comp1]))
print("after breaking g h:", sorted(report.axioms()))
for v in report.violations[:3]:
    print(f"  {v.axiom} at {v.witness}")
