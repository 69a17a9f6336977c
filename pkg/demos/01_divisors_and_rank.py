"""Chip-firing on K4: reduced divisors, rank, and the Riemann-Roch identity.

Run: python3 demos/01_divisors_and_rank.py
"""

from orient_rr import divisors
from orient_rr.graph_core import Divisor, Multigraph, canonical_divisor, fire, spanning_tree_count

# %% the complete graph on four vertices
k4 = Multigraph.from_edges([("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")])
print("genus", k4.genus, "spanning trees", spanning_tree_count(k4))
print("Laplacian\n", k4.laplacian())

# %% firing a vertex moves chips but keeps the degree
d = Divisor.from_mapping(k4, {"a": 3, "b": -1})
print("D            ", d)
print("fire a once  ", fire(d, {"a": 1}))

# %% every class has one a-reduced representative; the script replays it
red = divisors.reduce(k4, d)
print("a-reduced    ", red.divisor, "firing", red.firing_dict())
assert red.replay() == d

# %% rank: how many chips an adversary must remove before D stops being winnable
for vals in [(0, 0, 0, 0), (1, 1, 0, 0), (1, 1, 1, 1), (3, 0, 0, 0)]:
    d = Divisor(k4, vals)
    cert = divisors.rank(k4, d)
    print(vals, "rank", cert.rank, "losing removal", cert.losing_removal.as_dict())

# %% r(D) - r(K - D) = deg D - g + 1 for a few divisors
k = canonical_divisor(k4)
for vals in [(-1, 0, 0, 0), (2, 0, 0, 0), (1, 1, 1, 2), (5, -2, 0, 0)]:
    out = divisors.rr_verify(k4, Divisor(k4, vals))
    print(vals, out)
