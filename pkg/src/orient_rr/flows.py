"""Integer max-flow and its uses for orientations.

Covers orientability of divisors (Euler characteristic test, realised by a
flow), partial orientability, break divisors, the action of degree-zero
divisors on classes of full orientations, and a max-flow routine that goes
through orientability instead of augmenting paths.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import caps
from .errors import CapacityTooLarge, Infeasible, ParseError, UnknownVertex, WrongDegree
from .divisors import linearly_equivalent
from .graph_core import Divisor, Multigraph, chi_global, fire_set
from .orientations import TO_FIRST, TO_SECOND, PartialOrientation, PathReversal, Recorder, shortest_path
from .reversal_engine import _Budget, _to_q_connected, realize_exactly


@dataclass(frozen=True)
class FlowNetwork:
    """Directed network with integer capacities; ``arcs`` holds ``(tail, head)`` index pairs."""

    vertices: tuple
    arcs: tuple
    capacity: tuple
    s: int
    t: int

    def __post_init__(self):
        if self.s == self.t:
            raise ValueError("source and sink must differ")
        if len(self.capacity) != len(self.arcs):
            raise ValueError("one capacity per arc is required")
        if any(c < 0 for c in self.capacity):
            raise ValueError("capacities must be nonnegative")

    @classmethod
    def from_arcs(cls, triples, s, t):
        names = []
        index = {}
        arcs, cap = [], []
        for u, v, c in triples:
            for x in (str(u), str(v)):
                if x not in index:
                    index[x] = len(names)
                    names.append(x)
            arcs.append((index[str(u)], index[str(v)]))
            cap.append(int(c))
        for x in (str(s), str(t)):
            if x not in index:
                raise UnknownVertex(x)
        return cls(tuple(names), tuple(arcs), tuple(cap), index[str(s)], index[str(t)])

    @property
    def n(self):
        return len(self.vertices)

    def cut_capacity(self, side) -> int:
        return sum(c for (u, v), c in zip(self.arcs, self.capacity) if u in side and v not in side)


@dataclass(frozen=True)
class IntegerFlow:
    network: FlowNetwork
    values: tuple

    def __post_init__(self):
        net = self.network
        for f, c in zip(self.values, net.capacity):
            if not 0 <= f <= c:
                raise AssertionError("flow violates a capacity")
        bal = self.balance()
        for v in range(net.n):
            if v not in (net.s, net.t) and bal[v]:
                raise AssertionError(f"flow not conserved at {net.vertices[v]!r}")

    def balance(self):
        """Net outflow per vertex."""
        bal = [0] * self.network.n
        for (u, v), f in zip(self.network.arcs, self.values):
            bal[u] += f
            bal[v] -= f
        return bal

    @property
    def value(self) -> int:
        return self.balance()[self.network.s]

    def support(self):
        net = self.network
        return [[net.vertices[u], net.vertices[v], f] for (u, v), f in zip(net.arcs, self.values) if f]


def load_network(text: str, s, t) -> FlowNetwork:
    """Parse ``u v capacity`` lines (``#`` comments allowed)."""
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError(f"line {lineno}: expected 'u v capacity'")
        try:
            c = int(tokens[2])
        except ValueError:
            raise ParseError(f"line {lineno}: capacity {tokens[2]!r} is not an integer") from None
        if c < 0:
            raise ParseError(f"line {lineno}: negative capacity")
        triples.append((tokens[0], tokens[1], c))
    return FlowNetwork.from_arcs(triples, s, t)


def _edmonds_karp(n, arcs, capacity, s, t):
    """Shortest augmenting paths; returns (flow per arc, residual-reachable set)."""
    flow = [0] * len(arcs)
    adj = [[] for _ in range(n)]
    for k, (u, v) in enumerate(arcs):
        adj[u].append((k, 1))
        adj[v].append((k, -1))
    for row in adj:
        row.sort()
    while True:
        parent = {s: None}
        todo = deque([s])
        while todo and t not in parent:
            u = todo.popleft()
            for k, d in adj[u]:
                a, b = arcs[k]
                w, room = (b, capacity[k] - flow[k]) if d == 1 else (a, flow[k])
                if room > 0 and w not in parent:
                    parent[w] = (k, d, u)
                    todo.append(w)
        if t not in parent:
            return flow, set(parent)
        path = []
        x = t
        while parent[x] is not None:
            k, d, u = parent[x]
            path.append((k, d))
            x = u
        push = min(capacity[k] - flow[k] if d == 1 else flow[k] for k, d in path)
        for k, d in path:
            flow[k] += push * d


def max_flow(net: FlowNetwork):
    """Maximum integral flow and a minimum cut (names on the source side)."""
    flow, side = _edmonds_karp(net.n, net.arcs, net.capacity, net.s, net.t)
    result = IntegerFlow(net, tuple(flow))
    if net.cut_capacity(side) != result.value:
        raise AssertionError("cut capacity differs from flow value")
    return result, frozenset(net.vertices[v] for v in side)


# -- orientability ------------------------------------------------------------


def base_orientation(graph: Multigraph) -> PartialOrientation:
    """Every edge directed from its lower-index endpoint to its higher-index one."""
    return PartialOrientation(graph, tuple(TO_SECOND if i < j else TO_FIRST for i, j in graph.edges))


def _flow_repair(o: PartialOrientation, target: Divisor):
    """Flip a maximum flow of edges so ``o.divisor`` moves toward ``target``.

    Returns ``(orientation, complete, stuck)`` where ``stuck`` is the set of
    graph vertices reachable from the auxiliary source in the final residual
    network.
    """
    g = o.graph
    gap = [a - b for a, b in zip(target.values, o.divisor.values)]
    s, t = g.n, g.n + 1
    arcs = [(o.tail(e), o.head(e)) for e in range(g.m)]
    cap = [1] * g.m
    for v in range(g.n):
        if gap[v] > 0:
            arcs.append((s, v))
            cap.append(gap[v])
        elif gap[v] < 0:
            arcs.append((v, t))
            cap.append(-gap[v])
    flow, side = _edmonds_karp(g.n + 2, arcs, cap, s, t)
    value = sum(f for (u, _), f in zip(arcs, flow) if u == s)
    flipped = o.with_state({e: -o.state[e] for e in range(g.m) if flow[e]})
    return flipped, value == sum(x for x in gap if x > 0), frozenset(v for v in side if v < g.n)


def _need_degree(graph, divisor, want, what):
    if divisor.degree != want:
        raise WrongDegree(f"{what} needs degree {want}, got {divisor.degree}")


def orient_via_flow(graph: Multigraph, divisor: Divisor, base: PartialOrientation | None = None) -> PartialOrientation:
    """Full orientation with divisor exactly ``divisor``, found as a max flow.

    Raises :class:`Infeasible` when the flow falls short, i.e. the divisor is
    not orientable.
    """
    _need_degree(graph, divisor, graph.genus - 1, "orient_via_flow")
    o = base if base is not None else base_orientation(graph)
    out, ok, _ = _flow_repair(o, divisor)
    if not ok:
        raise Infeasible("divisor is not orientable")
    if out.divisor != divisor:
        raise AssertionError("flipped orientation has the wrong divisor")
    return out


def is_orientable(graph: Multigraph, divisor: Divisor) -> bool:
    _need_degree(graph, divisor, graph.genus - 1, "is_orientable")
    _, ok, _ = _flow_repair(base_orientation(graph), divisor)
    if graph.n <= caps.get("chi_vertices"):
        chi_min = chi_global(graph, divisor)[0]
        if ok != (chi_min >= 0):
            raise AssertionError("flow test and Euler characteristic test disagree")
    return ok


def is_partially_orientable(graph: Multigraph, divisor: Divisor) -> bool:
    if any(x < -1 for x in divisor.values) or divisor.degree > graph.genus - 1:
        return False
    if graph.n <= caps.get("chi_vertices"):
        return chi_global(graph, divisor)[1] >= 0
    try:
        realize_exactly(graph, divisor)
    except Infeasible:
        return False
    return True


# -- break divisors and the torsor action ---------------------------------------


def orientation_in_class(graph: Multigraph, divisor: Divisor, *, budget=None, cancel=None) -> PartialOrientation:
    """Full orientation whose divisor is equivalent to the degree g-1 ``divisor``.

    Alternates maximum flows with firing the set the flow cannot leave.
    """
    _need_degree(graph, divisor, graph.genus - 1, "orientation_in_class")
    bud = _Budget(budget, cancel)
    o = base_orientation(graph)
    target = divisor
    while True:
        bud.tick()
        o, ok, stuck = _flow_repair(o, target)
        if ok:
            assert o.divisor == target
            return o
        target = fire_set(target, stuck)


def break_divisor(graph: Multigraph, divisor: Divisor, q=None, *, budget=None, cancel=None) -> Divisor:
    """The break divisor equivalent to ``divisor`` (degree g)."""
    _need_degree(graph, divisor, graph.genus, "break_divisor")
    qi = graph.base_vertex if q is None else graph.vertex(q)
    bud = _Budget(budget, cancel)
    o = orientation_in_class(graph, divisor - Divisor.point(graph, qi), budget=budget, cancel=cancel)
    rec = Recorder(o)
    _to_q_connected(rec, qi, bud)
    return rec.current.divisor + Divisor.point(graph, qi)


def torsor_act(o: PartialOrientation, z: Divisor, *, budget=None, cancel=None):
    """Act on the class of the full orientation ``o`` by the degree-zero divisor ``z``.

    Returns ``(orientation, certificate)``; the new divisor is equivalent to
    ``o.divisor + z``.
    """
    g = o.graph
    if not o.is_full:
        raise ValueError("torsor action needs a full orientation")
    _need_degree(g, z, 0, "torsor_act")
    bud = _Budget(budget, cancel)
    ps = [v for v in g.order for _ in range(max(z.values[v], 0))]
    qs = [v for v in g.order for _ in range(max(-z.values[v], 0))]
    rec = Recorder(o)
    for p, q in zip(ps, qs):
        _to_q_connected(rec, p, bud)
        _, _, path = shortest_path(rec.current, [p], [q])
        rec.apply(PathReversal(tuple(path)))
    if not linearly_equivalent(g, rec.current.divisor, o.divisor + z):
        raise AssertionError("torsor action left the expected class")
    return rec.current, rec.certificate()


# -- max flow through orientability -----------------------------------------------


def mfmc_via_orientability(net: FlowNetwork):
    """Maximum flow value obtained from orientability of a shifted divisor.

    Each arc of capacity c becomes c parallel edges oriented like the arc.
    The largest k for which ``D_N + k(s) - k(t)`` is orientable is the flow
    value, and the edges where the realising orientation differs from the
    network form a flow.  Returns ``(value, IntegerFlow)``.
    """
    total = sum(net.capacity)
    limit = caps.get("mfmc_capacity")
    if total > limit:
        raise CapacityTooLarge(f"total capacity {total} exceeds {limit}")
    live = [(k, u, v) for k, ((u, v), c) in enumerate(zip(net.arcs, net.capacity)) if c and u != v]
    comp = {net.s}
    grew = True
    while grew:
        grew = False
        for _, u, v in live:
            if (u in comp) != (v in comp):
                comp.update((u, v))
                grew = True
    zero = IntegerFlow(net, (0,) * len(net.arcs))
    if net.t not in comp:
        return 0, zero
    keep = sorted(comp)
    local = {v: k for k, v in enumerate(keep)}
    edges, owner = [], []
    for k, u, v in live:
        if u in comp:
            for _ in range(net.capacity[k]):
                edges.append((local[u], local[v]))
                owner.append(k)
    graph = Multigraph(tuple(net.vertices[v] for v in keep), tuple(edges))
    as_net = PartialOrientation(graph, (TO_SECOND,) * graph.m)
    s, t = local[net.s], local[net.t]
    base = as_net.divisor
    k = 0
    while True:
        shifted = base + Divisor.point(graph, s, k + 1) - Divisor.point(graph, t, k + 1)
        if chi_global(graph, shifted)[0] < 0:
            break
        k += 1
    target = base + Divisor.point(graph, s, k) - Divisor.point(graph, t, k)
    o, _ = realize_exactly(graph, target)
    values = [0] * len(net.arcs)
    for e, arc in enumerate(owner):
        if o.state[e] != TO_SECOND:
            values[arc] += 1
    flow = IntegerFlow(net, tuple(values))
    if flow.value != k:
        raise AssertionError("symmetric difference does not carry the expected value")
    return k, flow
