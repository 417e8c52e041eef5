"""Coordinates of the second kind: exact values, closed forms, inequalities.

Run:  python3 demos/02_coordinates.py
"""

from fractions import Fraction

from lietool import chen_coefficient, check_inequalities, xi, xi_closed_form
from lietool.controls import PiecewisePolyControl, Poly
from lietool.trees import D, parse_tree

print("=" * 72)
print("Iterated-integral coordinates of a control")
print("=" * 72)

u = PiecewisePolyControl((0, Fraction(1, 2), 1),
                         (Poly((1,)), Poly((-1, 2))))
print("""
Control on [0,1]: u = 1 on [0,1/2], then -1 + 2(s - 1/2) on [1/2,1].
Every coordinate below is an exact rational, computed twice: once through
the defining recursion xi_b = (1/m!) int xi_{b1}^m d xi_{b2}, once through
the closed-form kernel integrals of the named families.
""")

for text in ["X1", "M(1)", "W(1,0)", "W(2,1)", "P(1,1,0)", "Q(1,1,2,0)",
             "Qf(1,0,0)", "Rs(1,1,1,1,0)"]:
    tree = parse_tree(text)
    a = xi(tree, u).exact
    b = xi_closed_form(tree, u).exact
    marker = "ok" if a == b else "BUG"
    print(f"  xi_{text:<14} = {str(a):>20}   closed form agrees: {marker}")

print("\nThe order-6 coordinate is a square, hence nonnegative for every u:")
print(f"  xi_D = (1/72) int (int u1^3)^2 = {xi(D(), u).exact}")

print("\nWord coefficients of the state series (last letter = outer integral):")
for word in [(0,), (1,), (1, 1), (1, 0), (0, 1)]:
    names = " ".join(f"X{g}" for g in word)
    print(f"  coefficient of {names:<6} = {chen_coefficient(word, u).exact}")

print("\nConstant-explicit inequality report on this control:")
for result in check_inequalities(u):
    print("  " + result.line())
