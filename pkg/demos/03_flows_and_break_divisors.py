"""Max flow, orientability by flows, break divisors and the torsor action.

Run: python3 demos/03_flows_and_break_divisors.py
"""

import itertools

from orient_rr import divisors
from orient_rr.flows import (
    FlowNetwork,
    base_orientation,
    break_divisor,
    is_orientable,
    max_flow,
    mfmc_via_orientability,
    orient_via_flow,
    torsor_act,
)
from orient_rr.graph_core import Divisor, Multigraph, chi_global, spanning_tree_count

# %% a small network whose minimum cut has capacity 4
net = FlowNetwork.from_arcs([("s", "a", 2), ("s", "b", 3), ("a", "b", 1), ("a", "t", 1), ("b", "t", 3)], "s", "t")
flow, cut = max_flow(net)
print("max flow", flow.value, "cut", sorted(cut), "support", flow.support())
print("same value through orientability:", mfmc_via_orientability(net)[0])

# %% orient K4 so that every vertex has a prescribed indegree
k4 = Multigraph.from_edges(list(itertools.combinations("abcd", 2)))
base = base_orientation(k4)
target = Divisor(k4, (1, 1, 0, 0))
print("base D_O", base.divisor, "target", target)
print("orientable:", is_orientable(k4, target), "chi min", chi_global(k4, target)[0])
o = orient_via_flow(k4, target, base)
print(o.ascii())

# %% break divisors pick one representative per degree-g class
image = {}
for vals in itertools.product(range(-1, 3), repeat=4):
    if sum(vals) == k4.genus:
        d = Divisor(k4, vals)
        image[break_divisor(k4, d).values] = d
print(len(image), "break divisors;", spanning_tree_count(k4), "spanning trees")
for b in sorted(image)[:5]:
    print("  ", b)

# %% degree-zero divisors act on classes of full orientations
z = Divisor.from_mapping(k4, {"b": 1, "a": -1})
moved, cert = torsor_act(o, z)
print("acted by (b)-(a):", moved.divisor, "moves", [m.kind for m in cert.moves])
assert divisors.linearly_equivalent(k4, moved.divisor, o.divisor + z)
