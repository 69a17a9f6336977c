"""Partial orientations: unfurling, construction and rank through path reversals.

Run: python3 demos/02_orientations.py
"""

from orient_rr.graph_core import Divisor, Multigraph
from orient_rr.orientations import PartialOrientation, classify, replay
from orient_rr.reversal_engine import (
    construct_orientation,
    oriented_dhar,
    q_connected_realization,
    rank_via_path_reversals,
    unfurl,
)

# %% a triangle b-c-d with a pendant vertex a, oriented a->b->c->d->b
g = Multigraph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")])
o = PartialOrientation.from_arcs(g, [("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")])
print(o.ascii())
print("D_O", o.divisor, classify(o).as_json())

# %% Dhar's search from the source gets stuck behind the directed triangle
res = oriented_dhar(o)
print("oriented Dhar:", res.outcome, sorted(res.locked))

# %% reversing the saturated cut around a leaves a sourceless orientation
res = unfurl(o)
print("unfurl:", res.outcome, [m.as_json() for m in res.certificate.moves])
print(res.orientation.ascii())
assert replay(res.certificate, o) == res.orientation

# %% rank of D_O as the number of path reversals needed to reach an acyclic class
res = rank_via_path_reversals(o)
print("rank", res.rank, "pairs", res.pairs, "path reversals", res.certificate.count("PathReversal"))
print(res.orientation.ascii())

# %% building a partial orientation for a divisor from nothing
for vals in [(0, 0, 0, -1), (-2, 1, 0, 0), (-3, 0, 0, 1)]:
    d = Divisor(g, vals)
    c = construct_orientation(g, d)
    print(vals, c.outcome, "D_O", c.orientation.divisor.as_dict(), "moves", len(c.certificate.moves))

# %% q-connected representatives exist exactly when D + (q) is winnable
for q in g.vertices:
    got = q_connected_realization(g, Divisor(g, (0, -1, 0, 0)), q)
    print("q =", q, "->", None if got is None else got[0].as_symbols())
