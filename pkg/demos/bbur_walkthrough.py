"""From the BU_R model to the BBU_R presentation, one step at a time."""
from equihom.freebasis import geometric_fixed_basis
from equihom.grading import pretty
from equihom.purering import dyer_lashof, expand_basis, load_builtin, norm_element
from equihom.specseq import algebra_from_model, bar_e2, collapse_and_extend

TRUNC = 10

md = load_builtin("bur")
print("BU_R basis up to underlying degree", TRUNC)
for c in expand_basis(md, TRUNC).cells:
    print(f"  {c.label:<16} {pretty(c.degree)}")

print("\nnorms of the underlying generators")
for i in range(1, 5):
    print(f"  N(a{i}) = {norm_element(md.element(f'abar{i}', 'e'))}")

F2 = md.mod2()
print("\nDyer-Lashof operations on the generators (mod 2)")
for n in range(1, 4):
    print(f"  Q^({n + 1}rho)(abar{n}) = {dyer_lashof(n + 1, 0, F2.gen_element(f'abar{n}'))}")

page = bar_e2(algebra_from_model(md, TRUNC), trunc=TRUNC)
print("\nbar spectral sequence,", page.marker)
for (s, D), e in page.sorted_items():
    print(f"  ({s:>2}, {pretty(D):<5}) rank {e.rank}: {', '.join(e.labels)}")

pres = collapse_and_extend(page, md)
print("\ncollapse certified:", pres.collapse)
for lhs, rhs in pres.relations:
    print(f"  {lhs} = {rhs}")

phi = geometric_fixed_basis(pres.basis(TRUNC))
dims = sorted(c.dim for c in phi.basis.cells)
print("\ngeometric fixed points: cell dimensions", dims)
