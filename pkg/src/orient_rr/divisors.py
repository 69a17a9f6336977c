"""Chip-firing normal forms: Dhar's burning algorithm, q-reduced divisors and rank."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import RRViolation, TooLarge
from .graph_core import Divisor, Multigraph, canonical_divisor


@dataclass(frozen=True)
class ReducedForm:
    """``divisor`` is q-reduced and ``input == divisor + L @ firing``.

    ``firing`` is normalised so that ``firing[q] == 0``; other entries may be
    negative (see README, "Normal forms").
    """

    divisor: Divisor
    firing: tuple
    q: int

    def firing_dict(self):
        g = self.divisor.graph
        return {g.vertices[k]: self.firing[k] for k in g.order}

    def replay(self) -> Divisor:
        g = self.divisor.graph
        vals = list(self.divisor.values)
        for v in range(g.n):
            acc = g.degrees[v] * self.firing[v]
            for w, mult in g.neighbors[v]:
                acc -= mult * self.firing[w]
            vals[v] += acc
        return Divisor(g, tuple(vals))


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    losing_removal: Divisor
    winning_removals: tuple = field(default=(), compare=False)

    def as_json(self):
        return {
            "rank": self.rank,
            "losing_removal": self.losing_removal.as_pairs(),
            "winning_removals": [
                {"removed": e.as_pairs(), "effective": w.as_pairs()}
                for e, w in self.winning_removals
            ],
        }


def _resolve_q(graph, q):
    return graph.base_vertex if q is None else graph.vertex(q)


def burn(graph: Multigraph, values, q: int):
    """Run the burning process from ``q``.

    Returns ``(burn_order, unburnt)`` where ``burn_order`` lists vertex
    indices in the order they caught fire (the lexicographically least
    eligible vertex burns first) and ``unburnt`` is the set left standing.
    """
    rank_of = {v: k for k, v in enumerate(graph.order)}
    burnt = [False] * graph.n
    burnt[q] = True
    order = [q]
    exposure = [0] * graph.n
    heap = []
    queued = [False] * graph.n

    def expose(u):
        for w, mult in graph.neighbors[u]:
            if burnt[w]:
                continue
            exposure[w] += mult
            if not queued[w] and exposure[w] > values[w]:
                queued[w] = True
                heapq.heappush(heap, (rank_of[w], w))

    expose(q)
    while heap:
        _, v = heapq.heappop(heap)
        burnt[v] = True
        order.append(v)
        expose(v)
    unburnt = frozenset(v for v in range(graph.n) if not burnt[v])
    return order, unburnt


def is_q_reduced(graph: Multigraph, divisor: Divisor, q=None) -> bool:
    qi = _resolve_q(graph, q)
    if any(x < 0 for k, x in enumerate(divisor.values) if k != qi):
        return False
    _, unburnt = burn(graph, divisor.values, qi)
    return not unburnt


def _reduce(graph, values, q, firing=None):
    """Core of :func:`reduce` on plain lists; mutates and returns ``values``."""
    deg = graph.degrees
    nbrs = graph.neighbors
    order = graph.order
    # out-of-debt phase: batched borrowing obeys the least action principle
    while True:
        debtor = next((v for v in order if v != q and values[v] < 0), None)
        if debtor is None:
            break
        k = -(values[debtor] // deg[debtor])
        values[debtor] += k * deg[debtor]
        for w, mult in nbrs[debtor]:
            values[w] -= k * mult
        if firing is not None:
            firing[debtor] -= k
    # Dhar phase: fire the unburnt set as often as it stays debt free
    while True:
        _, unburnt = burn(graph, values, q)
        if not unburnt:
            return values
        out = {}
        for v in unburnt:
            c = sum(mult for w, mult in nbrs[v] if w not in unburnt)
            if c:
                out[v] = c
        times = min(values[v] // c for v, c in out.items())
        for v, c in out.items():
            values[v] -= times * c
            for w, mult in nbrs[v]:
                if w not in unburnt:
                    values[w] += times * mult
        if firing is not None:
            for v in unburnt:
                firing[v] += times


def reduce(graph: Multigraph, divisor: Divisor, q=None) -> ReducedForm:
    """The unique q-reduced divisor equivalent to ``divisor`` plus a firing script."""
    qi = _resolve_q(graph, q)
    firing = [0] * graph.n
    values = _reduce(graph, list(divisor.values), qi, firing)
    shift = firing[qi]
    script = tuple(f - shift for f in firing)
    return ReducedForm(Divisor(graph, tuple(values)), script, qi)


def reduced_values(graph: Multigraph, values, q=None) -> tuple:
    return tuple(_reduce(graph, list(values), _resolve_q(graph, q)))


def linearly_equivalent(graph: Multigraph, d1: Divisor, d2: Divisor) -> bool:
    if d1.degree != d2.degree:
        return False
    q = graph.base_vertex
    return reduced_values(graph, d1.values, q) == reduced_values(graph, d2.values, q)


def is_winnable(graph: Multigraph, divisor: Divisor) -> bool:
    """True when the divisor is equivalent to an effective one."""
    q = graph.base_vertex
    return reduced_values(graph, divisor.values, q)[q] >= 0


class _RankSearch:
    def __init__(self, graph, cache):
        self.graph = graph
        self.q = graph.base_vertex
        self.memo = cache if cache is not None else {}
        owner = self.memo.setdefault("__graph__", graph)
        if owner != graph:
            raise ValueError("rank cache was created for a different graph")

    def run(self, values):
        g = self.graph
        q = self.q
        stack = [reduced_values(g, values, q)]
        # explicit stack: ranks of large-degree divisors recurse deeply
        while stack:
            red = stack[-1]
            if red in self.memo:
                stack.pop()
                continue
            if red[q] < 0:
                self.memo[red] = (-1, ())
                stack.pop()
                continue
            floor = max(0, sum(red) - g.genus)
            best = None
            pending = None
            for v in g.order:
                child = list(red)
                child[v] -= 1
                child = reduced_values(g, child, q)
                got = self.memo.get(child)
                if got is None:
                    pending = child
                    break
                cand = got[0] + 1
                if best is None or cand < best[0]:
                    best = (cand, (v,) + got[1])
                    if cand == floor:
                        break
            if pending is not None and (best is None or best[0] != floor):
                stack.append(pending)
                continue
            self.memo[red] = best
            stack.pop()
        return self.memo[reduced_values(g, values, q)]


def rank(graph: Multigraph, divisor: Divisor, *, cache: dict | None = None,
         certify: bool = False, certify_limit: int = 20000) -> RankCertificate:
    """Baker-Norine rank by recursive single-chip removal over reduced forms.

    ``cache`` may be shared between calls on the same graph to memoise ranks
    of divisor classes.  With ``certify=True`` every effective removal of
    degree ``rank`` is listed with the effective divisor it stays equivalent to.
    """
    search = _RankSearch(graph, cache)
    r, removal = search.run(divisor.values)
    losing = [0] * graph.n
    for v in removal:
        losing[v] += 1
    cert = RankCertificate(r, Divisor(graph, tuple(losing)))
    deg = divisor.degree
    if not (max(-1, deg - graph.genus) <= r <= max(-1, deg)):
        raise AssertionError(f"rank {r} violates the degree bounds for degree {deg}")
    if certify and r >= 0:
        winners = []
        for count, combo in enumerate(combinations_with_replacement(range(graph.n), r)):
            if count >= certify_limit:
                raise TooLarge(f"more than {certify_limit} removals to certify")
            e = [0] * graph.n
            for v in combo:
                e[v] += 1
            e = Divisor(graph, tuple(e))
            w = reduce(graph, divisor - e).divisor
            assert w.is_effective()
            winners.append((e, w))
        cert = RankCertificate(r, cert.losing_removal, tuple(winners))
    return cert


def rr_verify(graph: Multigraph, divisor: Divisor, *, cache: dict | None = None) -> dict:
    """Compute ``r(D)`` and ``r(K - D)`` independently and check Riemann-Roch."""
    k = canonical_divisor(graph)
    r = rank(graph, divisor, cache=cache).rank
    r_dual = rank(graph, k - divisor, cache=cache).rank
    rhs = divisor.degree - graph.genus + 1
    if r - r_dual != rhs:
        raise RRViolation(f"r(D)={r}, r(K-D)={r_dual}, deg(D)-g+1={rhs}")
    return {
        "rank": r,
        "rank_dual": r_dual,
        "degree": divisor.degree,
        "genus": graph.genus,
        "holds": True,
    }
