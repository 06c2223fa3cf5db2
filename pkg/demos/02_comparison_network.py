"""The comparison network: who measures themselves against whom.

Agents compare value/ability ratios with their graph neighbors.  The graph
is grown by preferential attachment, so a few well-connected hubs emerge
while most agents keep the minimum degree.
"""

from normsim import degree_histogram, generate_ba

g = generate_ba(100, 2, seed=7)

print(f"nodes: {g.n_nodes}   edges: {g.n_edges}   connected: {g.is_connected()}")
print(f"degree range: {int(g.degrees.min())} .. {int(g.degrees.max())}")
print()

print("degree histogram (a text bar per degree):")
hist = degree_histogram(g)
for degree in sorted(hist):
    print(f"  {degree:3d} | {'#' * hist[degree]}")

hub = int(g.degrees.argmax())
print()
print(f"hub agent {hub} compares against {len(g.neighbors(hub))} neighbors:")
print(f"  {sorted(int(j) for j in g.neighbors(hub))}")

leaf = int(g.degrees.argmin())
print(f"typical agent {leaf} compares against just {sorted(int(j) for j in g.neighbors(leaf))}")

print()
print("the same seed always grows the same graph:")
again = generate_ba(100, 2, seed=7)
print(f"  identical edge lists: {sorted(g.edges()) == sorted(again.edges())}")
