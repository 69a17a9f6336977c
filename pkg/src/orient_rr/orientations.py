"""Partial orientations and the local moves of the reversal system.

Edge state is stored per edge id: ``0`` unoriented, ``+1`` oriented towards
the second endpoint of the edge, ``-1`` oriented towards the first endpoint.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import FingerprintMismatch, GraphMismatch, ParseError, PreconditionViolated
from .graph_core import Divisor, Multigraph

UNORIENTED = 0
TO_SECOND = 1
TO_FIRST = -1

_SYMBOL = {TO_SECOND: ">", TO_FIRST: "<", UNORIENTED: "-"}
_STATE = {v: k for k, v in _SYMBOL.items()}


@dataclass(frozen=True)
class PartialOrientation:
    graph: Multigraph
    state: tuple

    def __post_init__(self):
        if len(self.state) != self.graph.m:
            raise ValueError("one state per edge is required")
        if any(s not in (UNORIENTED, TO_SECOND, TO_FIRST) for s in self.state):
            raise ValueError("edge states must be -1, 0 or 1")

    @classmethod
    def empty(cls, graph):
        return cls(graph, (UNORIENTED,) * graph.m)

    @classmethod
    def from_heads(cls, graph, heads: dict):
        """``heads`` maps edge id to the name (or index) of its head."""
        state = [UNORIENTED] * graph.m
        for e, h in heads.items():
            state[e] = _toward(graph, e, graph.vertex(h))
        return cls(graph, tuple(state))

    @classmethod
    def from_arcs(cls, graph, arcs: Iterable):
        """Orient edges by ``(tail, head)`` name pairs, consuming parallel edges in order."""
        state = [UNORIENTED] * graph.m
        for tail, head in arcs:
            t, h = graph.vertex(tail), graph.vertex(head)
            for e, (i, j) in enumerate(graph.edges):
                if state[e] == UNORIENTED and {i, j} == {t, h}:
                    state[e] = _toward(graph, e, h)
                    break
            else:
                raise ValueError(f"no free edge between {tail!r} and {head!r}")
        return cls(graph, tuple(state))

    def head(self, e):
        s = self.state[e]
        if s == UNORIENTED:
            return None
        i, j = self.graph.edges[e]
        return j if s == TO_SECOND else i

    def tail(self, e):
        s = self.state[e]
        if s == UNORIENTED:
            return None
        i, j = self.graph.edges[e]
        return i if s == TO_SECOND else j

    def with_state(self, changes: dict) -> "PartialOrientation":
        state = list(self.state)
        for e, s in changes.items():
            state[e] = s
        return PartialOrientation(self.graph, tuple(state))

    @property
    def is_full(self) -> bool:
        return UNORIENTED not in self.state

    @property
    def oriented_count(self) -> int:
        return sum(1 for s in self.state if s != UNORIENTED)

    def indegrees(self) -> list:
        indeg = [0] * self.graph.n
        for e in range(self.graph.m):
            h = self.head(e)
            if h is not None:
                indeg[h] += 1
        return indeg

    @property
    def divisor(self) -> Divisor:
        return Divisor(self.graph, tuple(d - 1 for d in self.indegrees()))

    def sources(self) -> frozenset:
        return frozenset(v for v, d in enumerate(self.indegrees()) if d == 0)

    def out_arcs(self, v):
        """``(edge, head)`` for every edge oriented away from ``v``, in edge order."""
        return [(e, w) for e, w in self.graph.incidence[v] if self.tail(e) == v]

    def in_edges(self, v):
        return [e for e, _ in self.graph.incidence[v] if self.head(e) == v]

    def unoriented_at(self, v):
        return [e for e, _ in self.graph.incidence[v] if self.state[e] == UNORIENTED]

    def fingerprint(self) -> str:
        blob = repr((self.graph.vertices, self.graph.edges, self.state)).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def as_symbols(self) -> list:
        return [_SYMBOL[s] for s in self.state]

    def ascii(self) -> str:
        g = self.graph
        lines = []
        for e, (i, j) in enumerate(g.edges):
            u, v = g.vertices[i], g.vertices[j]
            s = self.state[e]
            arrow = {TO_SECOND: f"{u} -> {v}", TO_FIRST: f"{u} <- {v}", UNORIENTED: f"{u} -- {v}"}[s]
            lines.append(f"e{e}: {arrow}")
        return "\n".join(lines)


def _toward(graph, e, h):
    i, j = graph.edges[e]
    if h == j:
        return TO_SECOND
    if h == i:
        return TO_FIRST
    raise ValueError(f"vertex {graph.vertices[h]!r} is not an endpoint of edge {e}")


def load_orientation(graph: Multigraph, text: str) -> PartialOrientation:
    """Parse ``edgeIndex >|<|-`` lines; edges not listed stay unoriented."""
    state = [UNORIENTED] * graph.m
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2 or tokens[1] not in _STATE:
            raise ParseError(f"line {lineno}: expected 'edgeIndex >|<|-'")
        try:
            e = int(tokens[0])
        except ValueError:
            raise ParseError(f"line {lineno}: bad edge index {tokens[0]!r}") from None
        if not 0 <= e < graph.m:
            raise ParseError(f"line {lineno}: edge index {e} out of range")
        state[e] = _STATE[tokens[1]]
    return PartialOrientation(graph, tuple(state))


def format_orientation(o: PartialOrientation) -> str:
    return "".join(f"{e} {sym}\n" for e, sym in enumerate(o.as_symbols()))


def indegree_divisor(o: PartialOrientation) -> Divisor:
    return o.divisor


# -- reachability and classification ---------------------------------------------


def reachable_indices(o: PartialOrientation, start: Iterable[int]) -> set:
    seen = set(start)
    todo = deque(sorted(seen))
    while todo:
        u = todo.popleft()
        for _, w in o.out_arcs(u):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def reachable(o: PartialOrientation, names: Iterable) -> frozenset:
    start = {o.graph.vertex(x) for x in names}
    if not start:
        raise ValueError("start set must be nonempty")
    return frozenset(o.graph.names(reachable_indices(o, start)))


def shortest_path(o: PartialOrientation, sources, targets):
    """Shortest directed path (edge ids) from any source to any target, or None.

    Sources are scanned in name order and arcs in edge order, so the result is
    deterministic.  A source that is itself a target yields ``(s, s, [])``.
    """
    g = o.graph
    targets = set(targets)
    starts = sorted(set(sources), key=g.order.index)
    parent = {}
    todo = deque()
    for s in starts:
        if s in targets:
            return s, s, []
        parent[s] = None
        todo.append(s)
    while todo:
        u = todo.popleft()
        for e, w in o.out_arcs(u):
            if w in parent:
                continue
            parent[w] = (e, u)
            if w in targets:
                path = []
                x = w
                while parent[x] is not None:
                    e2, x2 = parent[x]
                    path.append(e2)
                    x = x2
                return x, w, path[::-1]
            todo.append(w)
    return None


def find_cycle(o: PartialOrientation):
    """Edge ids of some directed cycle, or None when the orientation is acyclic."""
    g = o.graph
    color = [0] * g.n  # 0 new, 1 on stack, 2 done
    for root in range(g.n):
        if color[root]:
            continue
        color[root] = 1
        stack = [(root, iter(o.out_arcs(root)))]
        via = []  # edge used to enter stack[k+1]
        while stack:
            v, arcs = stack[-1]
            step = next(arcs, None)
            if step is None:
                color[v] = 2
                stack.pop()
                if via:
                    via.pop()
                continue
            e, w = step
            if color[w] == 1:
                k = next(idx for idx, (x, _) in enumerate(stack) if x == w)
                return via[k:] + [e]
            if color[w] == 0:
                color[w] = 1
                stack.append((w, iter(o.out_arcs(w))))
                via.append(e)
    return None


@dataclass(frozen=True)
class Classification:
    acyclic: bool
    sourceless: bool
    full: bool
    connected_from: frozenset  # names q for which the orientation is q-connected

    def q_connected(self, q) -> bool:
        return str(q) in self.connected_from

    def as_json(self):
        return {
            "acyclic": self.acyclic,
            "sourceless": self.sourceless,
            "full": self.full,
            "q_connected": sorted(self.connected_from),
        }


def classify(o: PartialOrientation) -> Classification:
    g = o.graph
    sourceless = not o.sources()
    if sourceless != o.divisor.is_effective():
        raise AssertionError("sourceless flag disagrees with effectivity of the divisor")
    roots = frozenset(g.vertices[q] for q in range(g.n) if len(reachable_indices(o, [q])) == g.n)
    return Classification(find_cycle(o) is None, sourceless, o.is_full, roots)


# -- moves ----------------------------------------------------------------------


@dataclass(frozen=True)
class EdgePivot:
    vertex: str
    in_edge: int
    un_edge: int
    kind = "EdgePivot"

    def as_json(self):
        return {"kind": self.kind, "vertex": self.vertex, "in_edge": self.in_edge, "un_edge": self.un_edge}


@dataclass(frozen=True)
class CycleReversal:
    edges: tuple
    kind = "CycleReversal"

    def as_json(self):
        return {"kind": self.kind, "edges": list(self.edges)}


@dataclass(frozen=True)
class CutReversal:
    vertices: tuple
    kind = "CutReversal"

    def as_json(self):
        return {"kind": self.kind, "vertices": list(self.vertices)}


@dataclass(frozen=True)
class PathReversal:
    edges: tuple
    kind = "PathReversal"

    def as_json(self):
        return {"kind": self.kind, "edges": list(self.edges)}


@dataclass(frozen=True)
class JacobsLadder:
    edges: tuple
    terminal_edge: int
    kind = "JacobsLadder"

    def as_json(self):
        return {"kind": self.kind, "edges": list(self.edges), "terminal_edge": self.terminal_edge}


@dataclass(frozen=True)
class UnorientEdge:
    edge: int
    kind = "UnorientEdge"

    def as_json(self):
        return {"kind": self.kind, "edge": self.edge}


@dataclass(frozen=True)
class OrientEdge:
    edge: int
    head: str
    kind = "OrientEdge"

    def as_json(self):
        return {"kind": self.kind, "edge": self.edge, "head": self.head}


MOVE_TYPES = {
    cls.kind: cls
    for cls in (EdgePivot, CycleReversal, CutReversal, PathReversal, JacobsLadder, UnorientEdge, OrientEdge)
}


def move_from_json(obj) -> object:
    try:
        cls = MOVE_TYPES[obj["kind"]]
    except (KeyError, TypeError):
        raise ParseError(f"unknown move {obj!r}") from None
    args = {k: v for k, v in obj.items() if k != "kind"}
    for key in ("edges", "vertices"):
        if key in args:
            args[key] = tuple(args[key])
    return cls(**args)


def _trail(o, edges, kind):
    """Check that ``edges`` form a directed trail; return its vertex sequence."""
    if not edges:
        raise PreconditionViolated(kind, "empty edge sequence")
    if len(set(edges)) != len(edges):
        raise PreconditionViolated(kind, "edges repeat")
    walk = []
    for e in edges:
        if not 0 <= e < o.graph.m:
            raise PreconditionViolated(kind, f"edge {e} does not exist")
        t = o.tail(e)
        if t is None:
            raise PreconditionViolated(kind, f"edge {e} is unoriented")
        if walk and walk[-1] != t:
            raise PreconditionViolated(kind, f"edge {e} does not continue the directed path")
        if not walk:
            walk.append(t)
        walk.append(o.head(e))
    return walk


def _flip(o, edges):
    return {e: -o.state[e] for e in edges}


def apply_move(o: PartialOrientation, move) -> PartialOrientation:
    """Apply one move after checking all of its preconditions."""
    g = o.graph
    kind = getattr(move, "kind", type(move).__name__)
    if isinstance(move, EdgePivot):
        v = g.vertex(move.vertex)
        if o.head(move.in_edge) != v:
            raise PreconditionViolated(kind, f"edge {move.in_edge} is not oriented towards {move.vertex!r}")
        if o.state[move.un_edge] != UNORIENTED or v not in g.edges[move.un_edge]:
            raise PreconditionViolated(kind, f"edge {move.un_edge} is not an unoriented edge at {move.vertex!r}")
        return o.with_state({move.in_edge: UNORIENTED, move.un_edge: _toward(g, move.un_edge, v)})
    if isinstance(move, CycleReversal):
        walk = _trail(o, move.edges, kind)
        if walk[0] != walk[-1]:
            raise PreconditionViolated(kind, "edges do not close up into a directed cycle")
        return o.with_state(_flip(o, move.edges))
    if isinstance(move, PathReversal):
        _trail(o, move.edges, kind)
        return o.with_state(_flip(o, move.edges))
    if isinstance(move, CutReversal):
        side = g.subset(move.vertices)
        if not side or len(side) == g.n:
            raise PreconditionViolated(kind, "cut side must be a nonempty proper subset")
        cut = [e for e, (i, j) in enumerate(g.edges) if (i in side) != (j in side)]
        heads_inside = set()
        for e in cut:
            h = o.head(e)
            if h is None:
                raise PreconditionViolated(kind, f"cut edge {e} is unoriented")
            heads_inside.add(h in side)
        if len(heads_inside) != 1:
            raise PreconditionViolated(kind, "cut is not consistently oriented")
        return o.with_state(_flip(o, cut))
    if isinstance(move, JacobsLadder):
        walk = _trail(o, move.edges, kind)
        end = walk[-1]
        t = move.terminal_edge
        if o.state[t] != UNORIENTED or end not in g.edges[t]:
            raise PreconditionViolated(kind, f"edge {t} is not unoriented at the end of the path")
        changes = {t: _toward(g, t, end), move.edges[0]: UNORIENTED}
        for k in range(1, len(move.edges)):
            changes[move.edges[k]] = _toward(g, move.edges[k], walk[k])
        return o.with_state(changes)
    if isinstance(move, UnorientEdge):
        if o.state[move.edge] == UNORIENTED:
            raise PreconditionViolated(kind, f"edge {move.edge} is already unoriented")
        return o.with_state({move.edge: UNORIENTED})
    if isinstance(move, OrientEdge):
        if o.state[move.edge] != UNORIENTED:
            raise PreconditionViolated(kind, f"edge {move.edge} is already oriented")
        try:
            state = _toward(g, move.edge, g.vertex(move.head))
        except ValueError as exc:
            raise PreconditionViolated(kind, str(exc)) from None
        return o.with_state({move.edge: state})
    raise TypeError(f"not a move: {move!r}")


# -- certificates ---------------------------------------------------------------


@dataclass(frozen=True)
class MoveCertificate:
    initial: str
    moves: tuple
    final: str

    def as_json(self):
        return {"initial": self.initial, "moves": [m.as_json() for m in self.moves], "final": self.final}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["initial"], tuple(move_from_json(m) for m in obj["moves"]), obj["final"])

    def count(self, kind) -> int:
        return sum(1 for m in self.moves if m.kind == kind)


def replay(cert: MoveCertificate, o: PartialOrientation) -> PartialOrientation:
    if o.fingerprint() != cert.initial:
        raise FingerprintMismatch("orientation does not match the certificate's initial fingerprint")
    cur = o
    for step, move in enumerate(cert.moves):
        try:
            cur = apply_move(cur, move)
        except PreconditionViolated as exc:
            raise PreconditionViolated(exc.kind, exc.detail, step) from None
    if cur.fingerprint() != cert.final:
        raise FingerprintMismatch("replayed orientation does not match the certificate's final fingerprint")
    return cur


class Recorder:
    """Mutable cursor used by the algorithms to apply and log moves."""

    def __init__(self, o: PartialOrientation):
        self.start = o
        self.current = o
        self.moves = []

    def apply(self, move):
        self.current = apply_move(self.current, move)
        self.moves.append(move)
        return self.current

    def certificate(self) -> MoveCertificate:
        return MoveCertificate(self.start.fingerprint(), tuple(self.moves), self.current.fingerprint())


def same_graph(o1: PartialOrientation, o2: PartialOrientation):
    if o1.graph != o2.graph:
        raise GraphMismatch("orientations live on different graphs")
