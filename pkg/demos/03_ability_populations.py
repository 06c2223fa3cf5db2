"""The two ability distributions and their inequality.

A near-symmetric normal population and a heavy-tailed power-law population
with the same median.  The Gini coefficient of abilities is the baseline
against which the fairness of each norm regime is judged.
"""

import numpy as np

from normsim import gini, histogram, powerlaw_min, sample_normal_actions, sample_powerlaw_actions

normal = sample_normal_actions(100, mu=0.5, sigma=0.1, seed=42)
powerlaw = sample_powerlaw_actions(100, k=2.0, median=0.5, seed=42)

for pop in (normal, powerlaw):
    a = pop.actions
    print(f"{pop.distribution:9s} n={pop.n}  mean={a.mean():.3f}  median={np.median(a):.3f}  "
          f"max={a.max():.3f}  gini={gini(a):.3f}")

print()
print(f"power-law lower cutoff for k=2, median 0.5: {powerlaw_min(2.0, 0.5)}")
print("the unbounded tail occasionally produces extreme abilities:")
big = sample_powerlaw_actions(100_000, k=2.0, median=0.5, seed=1)
print(f"  99th percentile: {np.percentile(big.actions, 99):8.2f}")
print(f"  largest of 1e5:  {big.actions.max():8.2f}")

capped = sample_powerlaw_actions(100_000, k=2.0, median=0.5, seed=1, a_max=1.5)
print(f"with a_max=1.5 the draw is from the truncated law: max = {capped.actions.max():.3f}")

print()
print("normal abilities, 0.025-wide bins (counts):")
h = histogram(normal.actions, bin_width=0.025)
for lo, hi, count in h.rows():
    print(f"  [{lo:.3f}, {hi:.3f}) | {'#' * count}")
