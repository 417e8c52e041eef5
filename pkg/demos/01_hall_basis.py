"""Tour of the Hall basis: layers, order, membership, decomposition.

Run:  python3 demos/01_hall_basis.py
"""

from lietool import basis_of_bidegree, decompose, enumerate_basis, hall_compare
from lietool.trees import D, M, P, W, X0, X1, display_form, parse_tree

print("=" * 72)
print("The Hall basis adapted to trailing X0 factors")
print("=" * 72)

print("""
Elements are bracket trees over X0, X1.  Writing b = germ 0^nu (peel the
trailing right X0 factors), the order compares the control degree of the
germ, then its left and right factors, then nu.  X1 is minimal and X0
maximal, so every basis element other than X0 stays strictly below X0 and
the basis is closed under b -> (b, X0).
""")

print("Layers by exact bidegree (n1 = control slots, n0 = drift slots):")
for n1 in range(1, 5):
    for n0 in range(0, 4):
        elements = basis_of_bidegree(n1, n0)
        if elements:
            names = ", ".join(display_form(e.tree) for e in elements)
            print(f"  ({n1},{n0}): {names}")

print("""
Each layer is generated by a handful of named families:
  M(nu)            = X1 0^nu                      (single control slot)
  W(j,nu)          = (M(j-1), M(j)) 0^nu          (squares)
  P(j,k,nu)        = (M(k-1), W(j)) 0^nu          (cubic)
  Q, Qs, Qf        = quartic families
  R, Rs            = quintic families
  D                = second iterate of P(1,1) on X0 (order six)
""")

print("Order spot checks (-1 means 'less'):")
pairs = [(X1, M(1)), (M(5), W(1, 0)), (W(1, 3), W(2, 0)),
         (P(1, 1, 0), P(1, 2, 0)), (W(2, 0), X0)]
for a, b in pairs:
    print(f"  compare({display_form(a)}, {display_form(b)}) = "
          f"{hall_compare(a, b)}")

print("\nDecomposition of non-basis brackets (exact rational coefficients):")
for text in ["(M(1),W(1,0))", "(X1,W(1,1))", "(X1,(W(1,0),P(1,1,1)))"]:
    element = decompose(parse_tree(text))
    terms = " + ".join(f"({c})*{display_form(e.tree)}"
                       for e, c in element.items_sorted())
    print(f"  {text} = {terms}")

print("\nThe order-6 germ D appears with coefficient +1 in the last one:")
print(f"  D = {display_form(D())} = {D().text}")

total = len(enumerate_basis(5, 6))
print(f"\nElements with n1 <= 5 and n0 <= 6: {total}")
