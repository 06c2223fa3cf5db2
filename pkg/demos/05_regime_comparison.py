"""The full experiment: three regimes, two populations, matched budgets.

The fostering run fixes the total normative charge; the shared per-unit
and lump charges are then calibrated to collect the same amount, so the
regimes differ only in how the burden is distributed.  Writes the CSV
bundle to ./demo-out and prints the comparison table.
"""

from normsim import make_config, run_matrix

config = make_config({}, {"n_agents": 100, "iterations": 100, "out": "demo-out"})
results = run_matrix(config)

print(f"{'population':10s} {'regime':13s} {'charge':>8s} {'total v':>9s} "
      f"{'total z':>9s} {'v per z':>8s} {'gini(v)':>8s} {'gini(a)':>8s} {'collected':>10s}")
for r in results:
    charge = "fostered" if r.norm_param is None else f"{r.norm_param:.4f}"
    print(f"{r.distribution:10s} {r.regime:13s} {charge:>8s} {r.total_value:9.3f} "
          f"{r.total_resources:9.3f} {r.resource_productivity:8.3f} "
          f"{r.gini_values:8.3f} {r.gini_actions:8.3f} {r.normative_cost:10.3f}")

print()
print("reading the table:")
print(" - value per unit of resource (sustainability) is highest under the")
print("   fostered per-agent charge and lowest under the lump charge")
print(" - the fostered charge also keeps the Gini of values closest to the")
print("   Gini of the underlying abilities; the lump charge amplifies it")
print(" - the lump charge maximizes raw totals: it does not distort the")
print("   per-unit incentive, so agents draw more and burn the surplus")
print()
print("CSV bundle written to demo-out/ (agents, traces, steps, histograms,")
print("fits, summary.csv, comparison.csv); rerunning reproduces it byte for")
print("byte, and `normsim figures-data demo-out` rebuilds the derived files.")
