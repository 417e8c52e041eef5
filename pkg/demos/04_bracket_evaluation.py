"""Evaluating formal brackets on polynomial vector fields.

Run:  python3 demos/04_bracket_evaluation.py
"""

from lietool import decompose, eval_bracket, eval_lie, zoo, zoo_names
from lietool.hall import basis_up_to_length
from lietool.trees import display_form, parse_tree

print("=" * 72)
print("The substitution homomorphism X0 -> f0, X1 -> f1 at the origin")
print("=" * 72)

print("\nCatalog of benchmark systems:")
print("  " + ", ".join(zoo_names()))

sys = zoo("easy")
print(f"""
System "{sys.name}" (dimension {sys.dim}):
  xdot1 = u,  xdot2 = x1,  xdot3 = x1^2 - x2^2 - x1^3 - 4 x1 x2

Nonzero bracket values at the origin (all exact):""")
for text, value in sys.expected_values.items():
    pretty = "(" + ", ".join(str(v) for v in value) + ")"
    print(f"  f_{display_form(parse_tree(text)):<8}(0) = {pretty}")

print("""
Every other basis bracket vanishes at 0; checked here to length 8:""")
nonzero = 0
for element in basis_up_to_length(8):
    if any(eval_bracket(sys, element.tree)):
        nonzero += 1
print(f"  brackets with nonzero value: {nonzero} "
      f"(= {len(sys.expected_values)} listed)")

print("""
Evaluation factors through the basis decomposition: expanding an arbitrary
bracket on the basis and evaluating term by term gives the same vector.""")
tree = parse_tree("((X1,(X1,X0)),((X1,X0),X0))")
direct = eval_bracket(sys, tree)
via_basis = eval_lie(sys, decompose(tree))
print(f"  {tree.text}:")
print(f"  direct      = {tuple(str(v) for v in direct)}")
print(f"  via basis   = {tuple(str(v) for v in via_basis)}")

print("""
The order-6 benchmark pair: identical systems except the competing power.""")
for p in (7, 8):
    s = zoo("sextic", p=p)
    d_val = tuple(str(v) for v in eval_bracket(s, "D"))
    from lietool.trees import M, X0, ad
    c_val = tuple(str(v) for v in eval_bracket(s, ad(M(1), p, X0)))
    print(f"  p = {p}: f_D(0) = {d_val}, competitor value = {c_val}")
