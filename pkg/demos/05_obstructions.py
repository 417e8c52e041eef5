"""The necessary-condition checkers across the benchmark catalog.

Run:  python3 demos/05_obstructions.py
"""

from fractions import Fraction

from lietool import (ag_screen, ag_weight, check_n2, check_n3, check_sextic,
                     check_sussmann_stefani, check_wk_loose, pi_threshold,
                     zoo)

print("=" * 72)
print("Span-membership obstructions to small-time local controllability")
print("=" * 72)

print("""
Each check asks whether a bad bracket's value at 0 lies in the span of the
values of an admissible neutralizing family.  'violated' comes with a
separating linear functional, 'satisfied' with an exact combination of the
span generators; both certificates are re-verified internally.
""")

print("Order-2k conditions (square of the control vector field):")
for name, k in [("easy", 1), ("jakubczyk", 1)]:
    report = check_sussmann_stefani(zoo(name), k)
    print(f"  {report.summary()}")

print("\nAdmissible-layer thresholds 1 + ceil((2k-2)/(m+1)):")
row = "  k\\m " + "".join(f"{m:>6}" for m in range(0, 4))
print(row)
for k in range(1, 5):
    cells = "".join(f"{pi_threshold(k, m):>6}" for m in range(0, 4))
    print(f"  {k:>3} {cells}")

print("\nLoose order-4 checks (layers up to the threshold, layer 2 removed):")
for name, kwargs in [("w2_vs_q111", {}), ("jakubczyk", {}),
                     ("wk_prototype", dict(k=2, p=5))]:
    report = check_wk_loose(zoo(name, **kwargs), 2, 0)
    print(f"  {report.summary()}")

print("\nRefined minimal lists for the order-4 and order-6 squares:")
for name in ["w2_vs_q111", "jakubczyk"]:
    print(f"  {check_n2(zoo(name)).summary()}")
for name in ["w3_vs_q111", "w3_vs_qb10", "w3_vs_qb12", "w3_time"]:
    print(f"  {check_n3(zoo(name)).summary()}")

print("\nThe order-6 germ D against everything up to layer 7:")
for p in (7, 8):
    print(f"  {check_sextic(zoo('sextic', p=p)).summary()}")

print("""
Bracket weights for the sufficiency-side screen (weight = length - layer,
layers counted over a free generating set):""")
for name in ["W(3,0)", "P(1,1,0)", "P(1,2,0)", "P(1,3,0)", "P(1,4,0)",
             "Q(1,1,2,0)", "R(1,1,1,1,0)", "Rs(1,1,1,1,0)"]:
    layer, weight = ag_weight(name)
    print(f"  {name:<14} layer {layer}, weight {weight}")

print("\nScreen on the quartic counterexample (r = 6):")
for entry in ag_screen(zoo("w3_vs_q111"), r=Fraction(6)):
    if entry.compensated is not None:
        print("  " + entry.line())
