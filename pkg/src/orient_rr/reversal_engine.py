"""Algorithms on the generalized cycle-cocycle reversal system.

Every routine returns a :class:`~orient_rr.orientations.MoveCertificate`
that replays from its input orientation.  Ties are always broken by vertex
name and then by edge id.

Long searches take an optional ``budget`` (maximum number of outer steps)
and ``cancel`` (any object with an ``is_set()`` method, such as
:class:`threading.Event`).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import divisors
from .errors import BudgetExceeded, Cancelled, DegreeTooHigh, Infeasible, PreconditionViolated
from .graph_core import Divisor, Multigraph
from .orientations import (
    UNORIENTED,
    CutReversal,
    EdgePivot,
    JacobsLadder,
    MoveCertificate,
    OrientEdge,
    PartialOrientation,
    PathReversal,
    Recorder,
    UnorientEdge,
    find_cycle,
    reachable_indices,
    same_graph,
    shortest_path,
)

ACYCLIC = "Acyclic"
SOURCELESS = "Sourceless"
CYCLE_LOCKED = "CycleLocked"
EDGE_INTO_S = "EdgeIntoS"

DEFAULT_BUDGET = 1_000_000


class _Budget:
    def __init__(self, steps=None, cancel=None):
        self.left = DEFAULT_BUDGET if steps is None else steps
        self.cancel = cancel

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise BudgetExceeded("step budget exhausted")
        if self.cancel is not None and self.cancel.is_set():
            raise Cancelled("cancelled by caller")


@dataclass(frozen=True)
class DichotomyResult:
    outcome: str
    orientation: PartialOrientation
    certificate: MoveCertificate
    locked: frozenset = frozenset()  # the set X for CycleLocked outcomes

    def as_json(self):
        out = {"outcome": self.outcome, "certificate": self.certificate.as_json()}
        if self.outcome == CYCLE_LOCKED:
            out["locked"] = sorted(self.locked)
        return out


def _names(graph, idx):
    return tuple(graph.names(idx))


def _cut_reversal(rec, side):
    return rec.apply(CutReversal(_names(rec.current.graph, side)))


def _boundary_pivot(o: PartialOrientation, inside: set):
    """First edge pivot at a vertex outside ``inside`` that pulls an unoriented
    cut edge inward while releasing an in-edge whose tail is also outside."""
    g = o.graph
    for v in g.order:
        if v in inside:
            continue
        cut_free = [e for e, w in g.incidence[v] if w in inside and o.state[e] == UNORIENTED]
        if not cut_free:
            continue
        inner = [e for e in o.in_edges(v) if o.tail(e) not in inside]
        if inner:
            return EdgePivot(g.vertices[v], inner[0], cut_free[0])
    return None


def _pivot_boundary(rec, inside, budget):
    while True:
        move = _boundary_pivot(rec.current, inside)
        if move is None:
            return
        budget.tick()
        rec.apply(move)


def _dhar(rec: Recorder, budget) -> set:
    o = rec.current
    g = o.graph
    grown = set(o.sources())
    if not grown:
        return grown
    while True:
        budget.tick()
        _pivot_boundary(rec, grown, budget)
        o = rec.current
        added = []
        for v in g.order:
            if v in grown:
                continue
            if not any(w in grown for _, w in g.incidence[v]):
                continue
            if not any(o.tail(e) not in grown for e in o.in_edges(v)):
                added.append(v)
        if not added:
            return grown
        grown.update(added)
        if len(grown) == g.n:
            return grown


def oriented_dhar(o: PartialOrientation, *, budget=None, cancel=None) -> DichotomyResult:
    """Grow the source set through edge pivots until acyclic or cycle-locked.

    ``Acyclic``: the returned orientation has the same divisor and no directed
    cycle.  ``CycleLocked``: the cut around ``locked`` is saturated away from it
    and the rest is sourceless, so every orientation with this divisor has a
    directed cycle.  An already acyclic input is returned untouched; a
    sourceless input is ``CycleLocked`` with an empty ``locked`` set.
    """
    rec = Recorder(o)
    bud = _Budget(budget, cancel)
    if find_cycle(o) is None:
        return DichotomyResult(ACYCLIC, o, rec.certificate())
    grown = _dhar(rec, bud)
    g = o.graph
    if len(grown) == g.n:
        return DichotomyResult(ACYCLIC, rec.current, rec.certificate())
    return DichotomyResult(CYCLE_LOCKED, rec.current, rec.certificate(), frozenset(g.names(grown)))


def _unfurl(rec: Recorder, budget) -> str:
    g = rec.current.graph
    while True:
        budget.tick()
        if find_cycle(rec.current) is None:
            return ACYCLIC
        grown = _dhar(rec, budget)
        if not grown:
            return SOURCELESS
        if len(grown) == g.n:
            return ACYCLIC
        _cut_reversal(rec, grown)


def unfurl(o: PartialOrientation, *, budget=None, cancel=None) -> DichotomyResult:
    """Alternate oriented Dhar runs and cut reversals until acyclic or sourceless."""
    rec = Recorder(o)
    outcome = _unfurl(rec, _Budget(budget, cancel))
    return DichotomyResult(outcome, rec.current, rec.certificate())


def _check_source_set(o, members):
    g = o.graph
    if not members:
        raise PreconditionViolated("modified_unfurl", "source set is empty")
    srcs = o.sources()
    if not members <= srcs:
        bad = g.names(members - srcs)
        raise PreconditionViolated("modified_unfurl", f"not sources: {bad}")
    start = min(members)
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for _, w in g.incidence[u]:
            if w in members and w not in seen:
                seen.add(w)
                todo.append(w)
    if seen != members:
        raise PreconditionViolated("modified_unfurl", "source set does not induce a connected subgraph")


def _modified_unfurl(rec: Recorder, members: frozenset, budget) -> str:
    g = rec.current.graph
    _check_source_set(rec.current, members)
    grown = set(members)
    while True:
        budget.tick()
        if len(grown) == g.n:
            return ACYCLIC
        _pivot_boundary(rec, grown, budget)
        o = rec.current
        free = [(e, i, j) for e, (i, j) in enumerate(g.edges)
                if (i in grown) != (j in grown) and o.state[e] == UNORIENTED]
        if free:
            _, i, j = free[0]
            grown.add(j if i in grown else i)
            continue
        o = _cut_reversal(rec, grown)
        if any(o.in_edges(s) for s in members):
            return EDGE_INTO_S
        grown = set(members)


def modified_unfurl(o: PartialOrientation, sources, *, budget=None, cancel=None) -> DichotomyResult:
    """Search the class of ``o`` for an edge pointing into the source set ``sources``.

    ``EdgeIntoS``: such an orientation was found.  ``Acyclic``: no equivalent
    orientation has an edge into ``sources``.
    """
    members = frozenset(o.graph.vertex(x) for x in sources)
    rec = Recorder(o)
    outcome = _modified_unfurl(rec, members, _Budget(budget, cancel))
    return DichotomyResult(outcome, rec.current, rec.certificate())


@dataclass(frozen=True)
class Construction:
    """Outcome of :func:`construct_orientation`.

    ``Realized``: ``orientation.divisor`` is equivalent to the input.
    ``Obstructed``: ``divisor`` is equivalent to the input and strictly below
    the divisor of the acyclic ``orientation``.
    """

    outcome: str
    orientation: PartialOrientation
    certificate: MoveCertificate
    divisor: Divisor

    @property
    def realized(self) -> bool:
        return self.outcome == "Realized"

    def as_json(self):
        return {
            "outcome": self.outcome,
            "divisor": self.divisor.as_pairs(),
            "orientation_divisor": self.orientation.divisor.as_pairs(),
            "certificate": self.certificate.as_json(),
        }


def _component(graph, members, start):
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for _, w in graph.incidence[u]:
            if w in members and w not in seen:
                seen.add(w)
                todo.append(w)
    return frozenset(seen)


def _construct(rec: Recorder, target: Divisor, budget, allow_cuts=True):
    g = target.graph
    chips = [a - b for a, b in zip(target.values, rec.current.divisor.values)]
    while any(chips):
        budget.tick()
        o = rec.current
        pos = {v for v in range(g.n) if chips[v] > 0}
        neg = {v for v in range(g.n) if chips[v] < 0}
        if pos and not o.is_full:
            free = {v for v in range(g.n) if o.unoriented_at(v)}
            found = shortest_path(o, pos, free)
            if found is not None:
                s, t, path = found
                if path:
                    rec.apply(JacobsLadder(tuple(path), o.unoriented_at(t)[0]))
                    first = path[0]
                else:
                    first = o.unoriented_at(s)[0]
                rec.apply(OrientEdge(first, g.vertices[s]))
                chips[s] -= 1
                continue
            if not allow_cuts:
                raise Infeasible("a cut reversal would be required")
            _cut_reversal(rec, reachable_indices(o, pos))
        elif pos and neg:
            found = shortest_path(o, pos, neg)
            if found is None:
                if not allow_cuts:
                    raise Infeasible("a cut reversal would be required")
                _cut_reversal(rec, reachable_indices(o, pos))
                continue
            s, r, path = found
            rec.apply(PathReversal(tuple(path)))
            chips[s] -= 1
            chips[r] += 1
        elif neg:
            hit = next(((r, o.in_edges(r)[0]) for r in g.order if r in neg and o.in_edges(r)), None)
            if hit is not None:
                r, e = hit
                rec.apply(UnorientEdge(e))
                chips[r] += 1
                continue
            start = next(r for r in g.order if r in neg)
            block = _component(g, neg, start)
            if _modified_unfurl(rec, block, budget) == ACYCLIC:
                return chips
        else:
            raise AssertionError("positive chips left over on a full orientation")
    return chips


def construct_orientation(graph: Multigraph, divisor: Divisor, *, start=None,
                          budget=None, cancel=None) -> Construction:
    """Find a partial orientation whose divisor is equivalent to ``divisor``.

    Works on pairs (orientation, leftover chips) whose sum stays in the class of
    ``divisor``, starting from ``start`` (default: the empty orientation).
    """
    if divisor.degree > graph.genus - 1:
        raise DegreeTooHigh(f"degree {divisor.degree} exceeds g-1 = {graph.genus - 1}")
    rec = Recorder(start if start is not None else PartialOrientation.empty(graph))
    chips = _construct(rec, divisor, _Budget(budget, cancel))
    o = rec.current
    leftover = Divisor(graph, tuple(chips))
    if any(chips):
        return Construction("Obstructed", o, rec.certificate(), o.divisor + leftover)
    return Construction("Realized", o, rec.certificate(), o.divisor)


def realize_exactly(graph: Multigraph, divisor: Divisor, *, budget=None, cancel=None):
    """Partial orientation with divisor exactly ``divisor`` built from the empty
    orientation by edge orientations and Jacob's ladder cascades only.

    Raises :class:`Infeasible` when a cut reversal would be required, which for
    divisors bounded below by -1 means the divisor is not partially orientable.
    """
    if any(x < -1 for x in divisor.values):
        raise Infeasible("some vertex has fewer than -1 chips")
    if divisor.degree > graph.genus - 1:
        raise Infeasible("degree exceeds g-1")
    rec = Recorder(PartialOrientation.empty(graph))
    _construct(rec, divisor, _Budget(budget, cancel), allow_cuts=False)
    assert rec.current.divisor == divisor
    return rec.current, rec.certificate()


def _to_q_connected(rec: Recorder, q: int, budget):
    o = rec.current
    g = o.graph
    if not o.is_full:
        extra = o.sources() - {q}
        if extra:
            raise PreconditionViolated(
                "to_q_connected",
                f"partial orientation has sources other than q: {g.names(extra)}",
            )
    while True:
        budget.tick()
        o = rec.current
        reach = reachable_indices(o, [q])
        if len(reach) == g.n:
            return
        move = _boundary_pivot(o, reach)
        if move is not None:
            rec.apply(move)
            continue
        _cut_reversal(rec, reach)


def to_q_connected(o: PartialOrientation, q, *, budget=None, cancel=None):
    """Move ``o`` within its class to a q-connected partial orientation.

    Accepts full orientations, sourceless ones, and ones whose only source is q.
    """
    rec = Recorder(o)
    _to_q_connected(rec, o.graph.vertex(q), _Budget(budget, cancel))
    return rec.current, rec.certificate()


def q_connected_realization(graph: Multigraph, divisor: Divisor, q=None, *, budget=None, cancel=None):
    """A q-connected partial orientation whose divisor is equivalent to ``divisor``.

    Returns ``(orientation, certificate)`` with the certificate starting from
    the empty orientation, or ``None`` when no such orientation exists.
    """
    qi = graph.base_vertex if q is None else graph.vertex(q)
    if divisor.degree > graph.genus - 1:
        raise DegreeTooHigh(f"degree {divisor.degree} exceeds g-1 = {graph.genus - 1}")
    bud = _Budget(budget, cancel)
    rec = Recorder(PartialOrientation.empty(graph))
    if divisor.degree == graph.genus - 1:
        if any(_construct(rec, divisor, bud)):
            raise AssertionError("degree g-1 divisor was not realized")
        _to_q_connected(rec, qi, bud)
        return rec.current, rec.certificate()
    if any(_construct(rec, divisor + Divisor.point(graph, qi), bud)):
        return None
    if _unfurl(rec, bud) == ACYCLIC:
        return None
    rec.apply(UnorientEdge(rec.current.in_edges(qi)[0]))
    _to_q_connected(rec, qi, bud)
    return rec.current, rec.certificate()


def equivalent(o1: PartialOrientation, o2: PartialOrientation) -> bool:
    same_graph(o1, o2)
    return divisors.linearly_equivalent(o1.graph, o1.divisor, o2.divisor)


def acyclic_orientation_from_reduced(graph: Multigraph, divisor: Divisor, q=None) -> PartialOrientation:
    """The q-connected acyclic partial orientation read off Dhar's burning order.

    ``divisor`` must be q-reduced with exactly -1 chips at q.
    """
    qi = graph.base_vertex if q is None else graph.vertex(q)
    if divisor.values[qi] != -1 or not divisors.is_q_reduced(graph, divisor, qi):
        raise PreconditionViolated("acyclic_orientation_from_reduced", "divisor is not q-reduced with -1 at q")
    order, _ = divisors.burn(graph, divisor.values, qi)
    position = {v: k for k, v in enumerate(order)}
    state = [UNORIENTED] * graph.m
    for v in order[1:]:
        need = divisor.values[v] + 1
        for e, w in graph.incidence[v]:
            if need == 0:
                break
            if position[w] < position[v]:
                i, j = graph.edges[e]
                state[e] = 1 if j == v else -1
                need -= 1
    return PartialOrientation(graph, tuple(state))


@dataclass(frozen=True)
class PathReversalRank:
    rank: int
    orientation: PartialOrientation
    certificate: MoveCertificate
    pairs: tuple  # ((p_i, q_i) names) with the q_i -> p_i paths reversed in order

    def as_json(self):
        return {
            "rank": self.rank,
            "pairs": [list(p) for p in self.pairs],
            "path_reversals": self.certificate.count("PathReversal"),
            "certificate": self.certificate.as_json(),
        }


def _greedy_noneffective_extension(graph, nu, chips, cache):
    """Add ``chips`` chips to the rank -1 divisor ``nu`` keeping rank -1."""
    added = [0] * graph.n
    cur = nu
    for _ in range(chips):
        for v in graph.order:
            trial = cur + Divisor.point(graph, v)
            if divisors.rank(graph, trial, cache=cache).rank == -1:
                cur = trial
                added[v] += 1
                break
        else:
            raise AssertionError("no noneffective extension found")
    return Divisor(graph, tuple(added))


def rank_via_path_reversals(o: PartialOrientation, *, cache=None, budget=None, cancel=None) -> PathReversalRank:
    """Rank of ``o.divisor`` witnessed by ``rank + 1`` directed path reversals.

    The chips to move come from a minimal losing removal ``E1`` and a
    noneffective completion ``E2`` of ``D - E1``; chip ``i`` of ``E2`` is joined
    to chip ``i`` of ``E1`` (both sorted by vertex name) and each pair is
    handled by unfurling to a sourceless orientation, normalising to
    ``q_i``-connected and reversing a shortest directed ``q_i -> p_i`` path.
    The final orientation unfurls to an acyclic one.
    """
    g = o.graph
    bud = _Budget(budget, cancel)
    cert = divisors.rank(g, o.divisor, cache=cache)
    r = cert.rank
    rec = Recorder(o)
    pairs = []
    if r >= 0:
        e1 = cert.losing_removal
        e2 = _greedy_noneffective_extension(g, o.divisor - e1, e1.degree, cache)
        if any(a and b for a, b in zip(e1.values, e2.values)):
            raise AssertionError("removal and completion share support")
        ps = [v for v in g.order for _ in range(e1.values[v])]
        qs = [v for v in g.order for _ in range(e2.values[v])]
        for p, q in zip(ps, qs):
            if _unfurl(rec, bud) != SOURCELESS:
                raise AssertionError("expected a sourceless representative while rank is nonnegative")
            _to_q_connected(rec, q, bud)
            _, _, path = shortest_path(rec.current, [q], [p])
            rec.apply(PathReversal(tuple(path)))
            pairs.append((g.vertices[p], g.vertices[q]))
    if _unfurl(rec, bud) != ACYCLIC:
        raise AssertionError("path reversals did not reach an acyclic class")
    return PathReversalRank(r, rec.current, rec.certificate(), tuple(pairs))
