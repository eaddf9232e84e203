"""Norms of free bases: the dual Steenrod truncation and BBU_R over C4."""
from equihom.freebasis import norm_orbits
from equihom.grading import pretty
from equihom.groups import cyclic
from equihom.purering import expand_basis, load_builtin
from equihom.specseq import bbur_presentation, coinduce_result

ds = load_builtin("dual_steenrod")
B = expand_basis(ds, 4)
print("N_e^C2 of F2[xi1] (x) E(tau0), underlying degree <= 4")
for o in norm_orbits(1, cyclic(2), B, 4):
    print(f"  {o.cell.label:<22} orbit size {o.size}  {pretty(o.cell.degree)}")

_, pres = bbur_presentation(load_builtin("bur"), 6)
print("\nN_C2^C4 of the BBU_R basis, truncation 6")
for c in coinduce_result(pres, cyclic(4), 6).cells:
    print(f"  {c.label:<18} C4/C{c.stab}  {pretty(c.degree)}")
