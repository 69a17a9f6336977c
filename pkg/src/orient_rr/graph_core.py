"""Multigraphs, divisors, the Laplacian action and Euler-characteristic functionals."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import caps
from .errors import (
    Disconnected,
    EmptyGraph,
    EmptySubset,
    GraphMismatch,
    LoopEdge,
    ParseError,
    TooLarge,
    UnknownVertex,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _checked(value):
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError(f"chip count {value} does not fit in 64 bits")
    return value


@dataclass(frozen=True)
class Multigraph:
    """A loopless connected undirected multigraph.

    ``vertices`` holds the vertex names in declaration order and ``edges`` holds
    one ``(i, j)`` pair of vertex indices per edge.  The position of an edge in
    ``edges`` is its identifier; parallel edges are distinct entries.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        if not self.vertices:
            raise EmptyGraph("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ParseError("duplicate vertex identifiers")
        n = len(self.vertices)
        for k, (i, j) in enumerate(self.edges):
            if not (0 <= i < n and 0 <= j < n):
                raise UnknownVertex(f"edge {k} refers to a missing vertex")
            if i == j:
                raise LoopEdge(f"edge {k} is a loop at {self.vertices[i]!r}")
        seen = {0}
        todo = [0]
        while todo:
            u = todo.pop()
            for _, w in self.incidence[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        if len(seen) != n:
            missing = sorted(self.vertices[i] for i in range(n) if i not in seen)
            raise Disconnected(f"vertices unreachable from {self.vertices[0]!r}: {missing}")

    @classmethod
    def from_edges(cls, pairs: Iterable, vertices: Iterable | None = None) -> "Multigraph":
        """Build from ``(u, v)`` name pairs; vertices default to first-appearance order."""
        pairs = [(str(u), str(v)) for u, v in pairs]
        names = [str(v) for v in vertices] if vertices is not None else []
        known = set(names)
        for u, v in pairs:
            for x in (u, v):
                if x not in known:
                    if vertices is not None:
                        raise UnknownVertex(x)
                    known.add(x)
                    names.append(x)
        index = {name: k for k, name in enumerate(names)}
        return cls(tuple(names), tuple((index[u], index[v]) for u, v in pairs))

    # -- cached structure ---------------------------------------------------

    @cached_property
    def index(self) -> dict:
        return {name: k for k, name in enumerate(self.vertices)}

    @cached_property
    def incidence(self) -> tuple:
        """``incidence[v]`` lists ``(edge_id, other_endpoint)`` in edge order."""
        inc = [[] for _ in self.vertices]
        for k, (i, j) in enumerate(self.edges):
            inc[i].append((k, j))
            inc[j].append((k, i))
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbors(self) -> tuple:
        """``neighbors[v]`` lists ``(w, multiplicity)`` sorted by ``w``."""
        out = []
        for v in range(self.n):
            counts = {}
            for _, w in self.incidence[v]:
                counts[w] = counts.get(w, 0) + 1
            out.append(tuple(sorted(counts.items())))
        return tuple(out)

    @cached_property
    def degrees(self) -> tuple:
        return tuple(len(x) for x in self.incidence)

    @cached_property
    def order(self) -> tuple:
        """Vertex indices sorted by name; the canonical tie-break order."""
        return tuple(sorted(range(self.n), key=lambda k: self.vertices[k]))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def genus(self) -> int:
        return self.m - self.n + 1

    @property
    def base_vertex(self) -> int:
        """Lexicographically least vertex, the default ``q`` for normal forms."""
        return self.order[0]

    def vertex(self, name) -> int:
        """Index of a vertex given by name (or already an index)."""
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if 0 <= name < self.n:
                return int(name)
            raise UnknownVertex(str(name))
        try:
            return self.index[str(name)]
        except KeyError:
            raise UnknownVertex(str(name)) from None

    def subset(self, names: Iterable) -> frozenset:
        return frozenset(self.vertex(x) for x in names)

    def names(self, idx: Iterable) -> list:
        return sorted(self.vertices[k] for k in idx)

    def laplacian(self) -> np.ndarray:
        lap = np.zeros((self.n, self.n), dtype=np.int64)
        for i, j in self.edges:
            lap[i, i] += 1
            lap[j, j] += 1
            lap[i, j] -= 1
            lap[j, i] -= 1
        return lap

    def edges_within(self, members) -> int:
        return sum(1 for i, j in self.edges if i in members and j in members)

    def __repr__(self):
        return f"Multigraph(|V|={self.n}, |E|={self.m})"


@dataclass(frozen=True)
class Divisor:
    """Integer chip counts on the vertices of a fixed graph."""

    graph: Multigraph
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.graph.n:
            raise ValueError("divisor length does not match the vertex count")
        object.__setattr__(self, "values", tuple(_checked(int(x)) for x in self.values))

    @classmethod
    def zero(cls, graph):
        return cls(graph, (0,) * graph.n)

    @classmethod
    def constant(cls, graph, c):
        return cls(graph, (c,) * graph.n)

    @classmethod
    def point(cls, graph, v, k=1):
        vals = [0] * graph.n
        vals[graph.vertex(v)] = k
        return cls(graph, tuple(vals))

    @classmethod
    def from_mapping(cls, graph, mapping: Mapping):
        vals = [0] * graph.n
        for name, value in mapping.items():
            vals[graph.vertex(name)] = int(value)
        return cls(graph, tuple(vals))

    def __getitem__(self, v):
        return self.values[self.graph.vertex(v)]

    def __iter__(self):
        return iter(self.values)

    @property
    def degree(self) -> int:
        return _checked(sum(self.values))

    @property
    def deg_plus(self) -> int:
        return sum(x for x in self.values if x > 0)

    @property
    def deg_minus(self) -> int:
        return -sum(x for x in self.values if x < 0)

    def is_effective(self) -> bool:
        return all(x >= 0 for x in self.values)

    def restrict_degree(self, members) -> int:
        return sum(self.values[k] for k in members)

    def _other(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphMismatch("divisors live on different graphs")
        return other.values

    def __add__(self, other):
        vals = self._other(other)
        if vals is NotImplemented:
            return vals
        return Divisor(self.graph, tuple(a + b for a, b in zip(self.values, vals)))

    def __sub__(self, other):
        vals = self._other(other)
        if vals is NotImplemented:
            return vals
        return Divisor(self.graph, tuple(a - b for a, b in zip(self.values, vals)))

    def __neg__(self):
        return Divisor(self.graph, tuple(-a for a in self.values))

    # pointwise partial order
    def __le__(self, other):
        return all(a <= b for a, b in zip(self.values, self._other(other)))

    def __ge__(self, other):
        return all(a >= b for a, b in zip(self.values, self._other(other)))

    def __lt__(self, other):
        return self <= other and self.values != other.values

    def __gt__(self, other):
        return self >= other and self.values != other.values

    def as_dict(self) -> dict:
        return {self.graph.vertices[k]: self.values[k] for k in self.graph.order}

    def as_pairs(self) -> list:
        """``[[name, value], ...]`` sorted by vertex name (the JSON encoding)."""
        return [[self.graph.vertices[k], self.values[k]] for k in self.graph.order]

    def __repr__(self):
        body = ", ".join(f"{k}:{v}" for k, v in self.as_dict().items())
        return f"Divisor({body})"


@dataclass(frozen=True)
class SubsetReport:
    subset: frozenset
    chi: int
    chi_bar: int


# -- parsing ------------------------------------------------------------------


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def load_graph(text: str) -> Multigraph:
    """Parse an edge-list document: one ``u v`` pair per line, ``#`` comments."""
    pairs = []
    for lineno, tokens in _content_lines(text):
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected two vertex names, got {len(tokens)}")
        if tokens[0] == tokens[1]:
            raise LoopEdge(f"line {lineno}: loop at {tokens[0]!r}")
        pairs.append((tokens[0], tokens[1]))
    if not pairs:
        raise EmptyGraph("no edges in graph document")
    return Multigraph.from_edges(pairs)


def load_divisor(graph: Multigraph, text: str) -> Divisor:
    """Parse ``vertex integer`` lines; vertices not mentioned get 0."""
    vals = [0] * graph.n
    seen = set()
    for lineno, tokens in _content_lines(text):
        if len(tokens) != 2:
            raise ParseError(f"line {lineno}: expected 'vertex integer'")
        name, raw = tokens
        k = graph.vertex(name)
        if k in seen:
            raise ParseError(f"line {lineno}: vertex {name!r} given twice")
        seen.add(k)
        try:
            vals[k] = int(raw)
        except ValueError:
            raise ParseError(f"line {lineno}: {raw!r} is not an integer") from None
    return Divisor(graph, tuple(vals))


def format_divisor(divisor: Divisor) -> str:
    return "".join(f"{name} {value}\n" for name, value in divisor.as_pairs())


# -- basic invariants -----------------------------------------------------------


def genus(graph: Multigraph) -> int:
    return graph.genus


def canonical_divisor(graph: Multigraph) -> Divisor:
    return Divisor(graph, tuple(d - 2 for d in graph.degrees))


def fire(divisor: Divisor, firing) -> Divisor:
    """Return ``D - L f`` for an integer firing vector ``f``.

    ``firing`` is either a mapping from vertex name to integer (missing
    vertices fire 0 times) or a sequence aligned with ``graph.vertices``.
    """
    g = divisor.graph
    if isinstance(firing, Mapping):
        f = [0] * g.n
        for name, times in firing.items():
            f[g.vertex(name)] = int(times)
    else:
        f = [int(x) for x in firing]
        if len(f) != g.n:
            raise ValueError("firing vector length does not match the vertex count")
    vals = list(divisor.values)
    for v in range(g.n):
        acc = vals[v] - g.degrees[v] * f[v]
        for w, mult in g.neighbors[v]:
            acc += mult * f[w]
        vals[v] = acc
    return Divisor(g, tuple(vals))


def fire_set(divisor: Divisor, members) -> Divisor:
    g = divisor.graph
    f = [0] * g.n
    for k in members:
        f[g.vertex(k)] = 1
    return fire(divisor, f)


def _indices(graph, subset):
    members = frozenset(graph.vertex(x) for x in subset)
    if not members:
        raise EmptySubset("subset must be nonempty")
    return members


def chi_report(graph: Multigraph, divisor: Divisor, subset: Iterable) -> SubsetReport:
    members = _indices(graph, subset)
    inside = graph.edges_within(members)
    complement = frozenset(range(graph.n)) - members
    outside = graph.edges_within(complement)
    deg_s = divisor.restrict_degree(members)
    chi = deg_s + len(members) - inside
    chi_bar = graph.m - outside - len(members) - deg_s
    return SubsetReport(frozenset(graph.names(members)), chi, chi_bar)


def _subset_tables(graph, divisor):
    n = graph.n
    masks = np.arange(1, 1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)
    size = bits.sum(axis=1)
    deg = bits @ np.asarray(divisor.values, dtype=np.int64)
    inside = np.zeros_like(masks)
    outside = np.zeros_like(masks)
    for i, j in graph.edges:
        inside += bits[:, i] & bits[:, j]
        outside += (1 - bits[:, i]) & (1 - bits[:, j])
    chi = deg + size - inside
    chi_bar = graph.m - outside - size - deg
    return masks, chi, chi_bar


def chi_global(graph: Multigraph, divisor: Divisor, cap: int | None = None):
    """Minimise both functionals over all nonempty vertex subsets.

    Returns ``(chi_min, chi_bar_min, chi_witness, chi_bar_witness)``; the
    witnesses are sorted lists of vertex names.
    """
    cap = caps.get("chi_vertices") if cap is None else cap
    if graph.n > cap:
        raise TooLarge(f"{graph.n} vertices exceeds the subset enumeration cap {cap}")
    masks, chi, chi_bar = _subset_tables(graph, divisor)
    a = int(np.argmin(chi))
    b = int(np.argmin(chi_bar))

    def names(mask):
        return graph.names(k for k in range(graph.n) if mask >> k & 1)

    return int(chi[a]), int(chi_bar[b]), names(int(masks[a])), names(int(masks[b]))


def spanning_tree_count(graph: Multigraph) -> int:
    """Determinant of the reduced Laplacian by fraction-free (Bareiss) elimination."""
    n = graph.n - 1
    if n == 0:
        return 1
    lap = graph.laplacian()
    a = [[int(lap[i][j]) for j in range(1, n + 1)] for i in range(1, n + 1)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
