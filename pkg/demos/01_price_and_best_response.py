"""How the price schedule and a single agent's best response interact.

The unit price rises quadratically with total use, so each agent's optimal
draw shrinks as the group takes more.  A per-unit charge has the same
damping effect as a higher price; a lump charge changes the attained value
but not the chosen quantity.
"""

import numpy as np

from normsim import Fixed, ModelParams, Proportional, best_response, equilibrium_value_oracle, unit_price, value

params = ModelParams()

print("price schedule p(z) = 0.001 z^2 + 1")
for z in (0.0, 1.0, 5.0, 10.0, 20.0):
    print(f"  z = {z:5.1f}  ->  p = {unit_price(z, params):.4f}")

print()
print("best response of an agent with ability a at price p, per-unit charge n")
for a in (0.3, 0.5, 0.8):
    for n in (0.0, 0.2):
        x = best_response(a, 1.001, n, params)
        v = equilibrium_value_oracle(a, 1.001, n, 0.0, params)
        print(f"  a = {a:.1f}  n = {n:.1f}  ->  x* = {x:.5f}   v* = {v:.5f}")

print()
print("a lump charge moves value one-for-one but leaves the chosen x alone:")
a, p = 0.5, 1.001
x_star = best_response(a, p, 0.0, params)
for n3 in (0.0, 0.01, 0.05):
    v = value(Fixed(n3), a, x_star, p, n3, params)
    print(f"  n3 = {n3:.2f}  ->  x* = {x_star:.5f}   v = {v:.5f}")

print()
print("doubling the effective price quarters the draw (s = 0.5):")
x1 = best_response(0.5, 1.0, 0.0, params)
x2 = best_response(0.5, 2.0, 0.0, params)
print(f"  x(p=1) = {x1:.5f}   x(p=2) = {x2:.5f}   ratio = {x1 / x2:.1f}")

print()
print("closed form matches a brute-force scan of the value curve:")
a, p, n = 0.6, 1.2, 0.1
grid = np.linspace(1e-6, 1.0, 200_001)
vals = a * np.sqrt(grid) - (p + n) * grid
x_scan = grid[np.argmax(vals)]
x_cf = best_response(a, p, n, params)
print(f"  scan argmax = {x_scan:.6f}   closed form = {x_cf:.6f}")
