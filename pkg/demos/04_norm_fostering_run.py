"""One fostering run, watched step by step.

Per-agent norm coefficients start at zero and drift by +/- delta from
neighbor comparisons of value/ability ratios.  Total use falls, the price
follows, and the spread of the ratios collapses toward equity.
"""

import numpy as np

from normsim import (
    ModelParams,
    Progressive,
    equity_dispersion,
    generate_ba,
    run,
    sample_normal_actions,
)

n_agents = 100
params = ModelParams(n_agents=n_agents, t_max=100)
pop = sample_normal_actions(n_agents, mu=0.5, sigma=0.1, seed=1000)
graph = generate_ba(n_agents, 2, seed=2000)

trace = run(params, pop, Progressive(), graph=graph)

print("t    total use z    price p     mean n     ratio spread")
for t in (0, 1, 2, 5, 10, 20, 50, 100):
    disp = equity_dispersion(pop.actions, trace.v[t])
    print(f"{t:3d}   {trace.z[t]:10.4f}   {trace.p[t]:.5f}   {trace.n[t].mean():.4f}   {disp:.4f}")

final = trace.final_state()
print()
print(f"final per-agent coefficients: min {final.n.min():.3f}  "
      f"mean {final.n.mean():.3f}  max {final.n.max():.3f}")
print(f"agents pinned at zero charge: {int(np.sum(final.n == 0.0))}")
print(f"total fostered charge sum n_i * x_i: {float(np.sum(final.n * final.x)):.4f}")

rich = int(np.argmax(pop.actions))
poor = int(np.argmin(pop.actions))
print()
print("the fostered charge tracks ability (progressive taxation):")
for label, i in (("most able", rich), ("least able", poor)):
    print(f"  {label} agent {i}: a = {pop.actions[i]:.3f}  "
          f"n = {final.n[i]:.3f}  v = {final.v[i]:.4f}  v/a = {final.v[i] / pop.actions[i]:.4f}")
