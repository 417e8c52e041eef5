"""Three exact views of the state series and the cross-term identity.

Run:  python3 demos/03_expansions.py
"""

from fractions import Fraction

from lietool import (cross_term_check, formal_state, interaction_log,
                     magnus_log, ordered_product)
from lietool.controls import PiecewisePolyControl, primitive
from lietool.coord import chen_coefficient
from lietool.trees import M, W, X0, X1
from lietool.words import all_words, word_text

print("=" * 72)
print("State expansions for a piecewise-constant control")
print("=" * 72)

u = PiecewisePolyControl.piecewise_constant(
    (0, Fraction(1, 3), Fraction(2, 3), 1),
    (1, Fraction(-1, 2), 2))
print("""
Control on [0,1]: values 1, -1/2, 2 on thirds.  The truncated state series
is computed three ways; all must agree coefficient by coefficient:
  (a) product of piece exponentials exp(dt (X0 + u X1)),
  (b) iterated integrals word by word,
  (c) the ordered product of Hall exponentials exp(xi_b E(b)).
""")

cutoff = 4
state = formal_state(u, cutoff)
product = ordered_product(u, cutoff)
agree_chen = all(state.series[w] == chen_coefficient(w, u).exact
                 for w in all_words(cutoff))
print(f"  (a) == (b): {agree_chen}")
print(f"  (a) == (c): {state.series == product}")

print("\nA few coefficients:")
for word in [(0,), (1,), (1, 0), (1, 1, 0)]:
    print(f"  {word_text(word):<10} -> {state.series[word]}")

print("""
Factoring exp(t X0) out on the left and taking the logarithm gives a Lie
series; its Hall coefficients are the interaction coordinates eta_b.  The
X0 coefficient cancels exactly and the X1 one is the first primitive:
""")
eta = interaction_log(u, cutoff)
print(f"  eta_X0   = {eta[X0]}")
print(f"  eta_X1   = {eta[X1]}   (u1(t) = {primitive(u, 1).end_value()})")
print(f"  eta_M(1) = {eta[M(1)]}   (no cross terms at this bidegree)")
print(f"  eta_W(1,0) = {eta[W(1, 0)]}  (differs from xi by cross terms)")

zeta = magnus_log(u, cutoff)
print(f"\nPlain logarithm (no factoring): zeta_X0 = {zeta[X0]} = t")

print("""
The difference eta_b - xi_b is a finite sum of products of lower xi values
with universal bracket coefficients extracted from the ordered product's
logarithm.  Verified element by element up to length 4:
""")
for report in cross_term_check(u, cutoff=4):
    print("  " + report.line())
