"""Brute-force ground truth on tiny graphs.

Everything here is deliberately naive and shares no search code with the
production modules: winnability uses the greedy borrowing game, ranks use
exhaustive removal, and equivalence classes of orientations are built by
closing the literal move set (pivots, cycle reversals, cut reversals) with a
union-find.  The ``verify`` entry point compares production results against
these and reports the first disagreement.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass
from itertools import combinations_with_replacement, permutations, product

from . import caps
from .errors import TooLarge
from .graph_core import Divisor, Multigraph
from .orientations import PartialOrientation

STATE_ORDER = (0, 1, -1)  # unoriented, toward second endpoint, toward first endpoint


def _cap(name, value, what):
    limit = caps.get(name)
    if value > limit:
        raise TooLarge(f"{what} {value} exceeds the oracle cap {limit} ({name})")


# -- divisors --------------------------------------------------------------------


def winnable(graph: Multigraph, values) -> bool:
    """Greedy borrowing: a debtor borrows until no debt remains or everyone has borrowed."""
    vals = list(values)
    if sum(vals) < 0:
        return False
    borrowed = set()
    while True:
        debtor = next((v for v in range(graph.n) if vals[v] < 0), None)
        if debtor is None:
            return True
        if len(borrowed) == graph.n:
            return False
        vals[debtor] += graph.degrees[debtor]
        for _, w in graph.incidence[debtor]:
            vals[w] -= 1
        borrowed.add(debtor)


def brute_rank(graph: Multigraph, divisor: Divisor) -> int:
    _cap("brute_rank_vertices", graph.n, "vertex count")
    _cap("brute_rank_degree", abs(divisor.degree), "absolute degree")
    vals = divisor.values
    if not winnable(graph, vals):
        return -1
    for k in range(1, divisor.degree + 2):
        for combo in combinations_with_replacement(range(graph.n), k):
            trial = list(vals)
            for v in combo:
                trial[v] -= 1
            if not winnable(graph, trial):
                return k - 1
    raise AssertionError("unreachable: removing deg+1 chips always loses")


def chi_tables(graph: Multigraph, values):
    """``(min chi, min chi_bar)`` over nonempty subsets, by direct enumeration."""
    best_chi = best_bar = None
    for mask in range(1, 1 << graph.n):
        inside = {v for v in range(graph.n) if mask >> v & 1}
        e_in = sum(1 for i, j in graph.edges if i in inside and j in inside)
        e_out = sum(1 for i, j in graph.edges if i not in inside and j not in inside)
        deg = sum(values[v] for v in inside)
        chi = deg + len(inside) - e_in
        bar = graph.m - e_out - len(inside) - deg
        best_chi = chi if best_chi is None else min(best_chi, chi)
        best_bar = bar if best_bar is None else min(best_bar, bar)
    return best_chi, best_bar


# -- orientations as raw state tuples ---------------------------------------------


def _heads(graph, state):
    for e, s in enumerate(state):
        if s:
            i, j = graph.edges[e]
            yield e, (j if s == 1 else i), (i if s == 1 else j)


def state_divisor(graph, state) -> tuple:
    indeg = [-1] * graph.n
    for _, h, _ in _heads(graph, state):
        indeg[h] += 1
    return tuple(indeg)


def is_acyclic_state(graph, state) -> bool:
    indeg = [0] * graph.n
    out = [[] for _ in range(graph.n)]
    for _, h, t in _heads(graph, state):
        indeg[h] += 1
        out[t].append(h)
    todo = [v for v in range(graph.n) if indeg[v] == 0]
    done = 0
    while todo:
        v = todo.pop()
        done += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                todo.append(w)
    return done == graph.n


def _toward(graph, e, v):
    return 1 if graph.edges[e][1] == v else -1


def _simple_paths(graph, state):
    """Every simple directed path (as an edge tuple) plus a flag for closed cycles."""
    out = [[] for _ in range(graph.n)]
    for e, h, t in _heads(graph, state):
        out[t].append((e, h))
    for start in range(graph.n):
        stack = [(start, (), frozenset([start]))]
        while stack:
            v, path, seen = stack.pop()
            for e, w in out[v]:
                if e in path:
                    continue
                if w == start:
                    yield path + (e,), True
                elif w not in seen:
                    yield path + (e,), False
                    stack.append((w, path + (e,), seen | {w}))


def _flip(state, edges):
    s = list(state)
    for e in edges:
        s[e] = -s[e]
    return tuple(s)


def neighbors_by_moves(graph, state, *, pivots=True):
    """States one pivot, cycle reversal or saturated cut reversal away."""
    if pivots:
        for v in range(graph.n):
            ins = [e for e, w in graph.incidence[v] if state[e] and _head(graph, state, e) == v]
            free = [e for e, _ in graph.incidence[v] if state[e] == 0]
            for a in ins:
                for b in free:
                    s = list(state)
                    s[a] = 0
                    s[b] = _toward(graph, b, v)
                    yield tuple(s)
    for path, closed in _simple_paths(graph, state):
        if closed:
            yield _flip(state, path)
    for mask in range(1, (1 << graph.n) - 1):
        cut = [e for e, (i, j) in enumerate(graph.edges) if (mask >> i & 1) != (mask >> j & 1)]
        if not cut or any(state[e] == 0 for e in cut):
            continue
        into = {bool(mask >> _head(graph, state, e) & 1) for e in cut}
        if len(into) == 1:
            yield _flip(state, cut)


def _head(graph, state, e):
    i, j = graph.edges[e]
    return j if state[e] == 1 else i


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def enumerate_partial_orientations(graph: Multigraph):
    """All 3^|E| partial orientations, edge states cycling unoriented, '>' then '<'."""
    _cap("partial_edges", graph.m, "edge count")
    for state in product(STATE_ORDER, repeat=graph.m):
        yield PartialOrientation(graph, state)


def enumerate_full_orientations(graph: Multigraph):
    _cap("partial_edges", graph.m, "edge count")
    for state in product((1, -1), repeat=graph.m):
        yield PartialOrientation(graph, state)


@dataclass(frozen=True)
class ClassTable:
    """Equivalence classes keyed by the lexicographically least member divisor."""

    keys: tuple
    classes: tuple  # tuples of PartialOrientation, aligned with keys

    @property
    def count(self) -> int:
        return len(self.classes)

    def class_of(self, o: PartialOrientation) -> int:
        for k, members in enumerate(self.classes):
            if o in members:
                return k
        raise KeyError("orientation is not in the table")


def _classes(graph, states, pivots):
    index = {s: k for k, s in enumerate(states)}
    uf = _UnionFind(len(states))
    for k, s in enumerate(states):
        for t in neighbors_by_moves(graph, s, pivots=pivots):
            uf.union(k, index[t])
    buckets = {}
    for k, s in enumerate(states):
        buckets.setdefault(uf.find(k), []).append(s)
    return list(buckets.values())


def _table(graph, groups):
    rows = []
    for members in groups:
        key = min(state_divisor(graph, s) for s in members)
        rows.append((key, tuple(PartialOrientation(graph, s) for s in members)))
    rows.sort(key=lambda r: r[0])
    return ClassTable(tuple(r[0] for r in rows), tuple(r[1] for r in rows))


def class_table_full(graph: Multigraph) -> ClassTable:
    """Classes of full orientations under cycle and cut reversals."""
    _cap("class_table_edges", graph.m, "edge count")
    states = list(product((1, -1), repeat=graph.m))
    return _table(graph, _classes(graph, states, pivots=False))


@functools.lru_cache(maxsize=64)
def _partial_universe(graph: Multigraph):
    states = list(product(STATE_ORDER, repeat=graph.m))
    groups = _classes(graph, states, pivots=True)
    label = {}
    for k, members in enumerate(groups):
        for s in members:
            label[s] = k
    return groups, label


def class_table_partial(graph: Multigraph) -> ClassTable:
    """Classes of partial orientations under pivots, cycle and cut reversals."""
    _cap("partial_edges", graph.m, "edge count")
    groups, _ = _partial_universe(graph)
    return _table(graph, groups)


def partial_class_label(graph: Multigraph, o: PartialOrientation) -> int:
    _cap("partial_edges", graph.m, "edge count")
    return _partial_universe(graph)[1][o.state]


@functools.lru_cache(maxsize=64)
def _distances(graph: Multigraph):
    groups, label = _partial_universe(graph)
    adj = [set() for _ in groups]
    for k, members in enumerate(groups):
        for s in members:
            for path, _ in _simple_paths(graph, s):
                adj[k].add(label[_flip(s, path)])
    dist = {}
    todo = deque()
    for k, members in enumerate(groups):
        if any(is_acyclic_state(graph, s) for s in members):
            dist[k] = 0
            todo.append(k)
    while todo:
        k = todo.popleft()
        for j in adj[k]:
            if j not in dist:
                dist[j] = dist[k] + 1
                todo.append(j)
    return dist


def path_reversal_distance(graph: Multigraph, o: PartialOrientation) -> int:
    """Directed path reversals needed to reach a class containing an acyclic orientation."""
    _cap("path_distance_edges", graph.m, "edge count")
    return _distances(graph)[_partial_universe(graph)[1][o.state]]


# -- graph generation ------------------------------------------------------------


def _canon(n, edges):
    # only permute vertices sharing an isomorphism invariant
    deg = [0] * n
    nbrs = [[] for _ in range(n)]
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
        nbrs[i].append(j)
        nbrs[j].append(i)
    inv = [(deg[v], tuple(sorted(deg[w] for w in nbrs[v]))) for v in range(n)]
    groups = {}
    for v in range(n):
        groups.setdefault(inv[v], []).append(v)
    blocks = [groups[k] for k in sorted(groups)]
    best = None
    for choice in product(*(permutations(b) for b in blocks)):
        perm = [0] * n
        label = 0
        for block in choice:
            for v in block:
                perm[v] = label
                label += 1
        form = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in edges))
        if best is None or form < best:
            best = form
    return best


def multigraphs(max_edges: int):
    """Connected loopless multigraphs with 1..max_edges edges, one per isomorphism class."""
    level = {(2, ((0, 1),))}
    out = []
    for _ in range(max_edges):
        out.extend(sorted(level))
        nxt = set()
        for n, edges in level:
            for i in range(n):
                for j in range(i + 1, n):
                    nxt.add((n, _canon(n, edges + ((i, j),))))
                nxt.add((n + 1, _canon(n + 1, edges + ((i, n),))))
        level = nxt
    names = "abcdefghijklmnop"
    for n, edges in out:
        yield Multigraph(tuple(names[:n]), edges)


# -- verification suites -----------------------------------------------------------


def _divisor_box(graph, lo, hi):
    for vals in product(range(lo, hi + 1), repeat=graph.n):
        yield Divisor(graph, vals)


def _suite_rr(graph, bound):
    from .divisors import rank, rr_verify
    from .graph_core import canonical_divisor
    from .errors import RRViolation

    cache = {}
    k = canonical_divisor(graph)
    checked = 0
    for d in _divisor_box(graph, -bound, bound):
        checked += 1
        try:
            rr_verify(graph, d, cache=cache)
        except RRViolation as exc:
            return checked, {"divisor": d.as_pairs(), "reason": str(exc)}
        for x in (d, k - d):
            if graph.n <= caps.get("brute_rank_vertices") and abs(x.degree) <= caps.get("brute_rank_degree"):
                r = rank(graph, x, cache=cache).rank
                b = brute_rank(graph, x)
                if r != b:
                    return checked, {"divisor": x.as_pairs(), "rank": r, "brute_rank": b}
    return checked, None


def _suite_gioan(graph, bound):
    from .divisors import reduced_values
    from .graph_core import spanning_tree_count

    table = class_table_full(graph)
    trees = spanning_tree_count(graph)
    if table.count != trees:
        return 1, {"classes": table.count, "spanning_trees": trees}
    seen = {}
    for key, members in zip(table.keys, table.classes):
        reds = {reduced_values(graph, o.divisor.values) for o in members}
        if len(reds) != 1:
            return 1, {"class": list(key), "reason": "class spans several divisor classes"}
        red = reds.pop()
        if red in seen:
            return 1, {"class": list(key), "reason": "two classes share a divisor class"}
        seen[red] = key
    return 1, None


def _suite_eulerpar(graph, bound):
    from .flows import is_partially_orientable

    image = {o.divisor.values for o in enumerate_partial_orientations(graph)}
    checked = 0
    ranges = [range(-1, graph.degrees[v]) for v in range(graph.n)]
    for vals in product(*ranges):
        checked += 1
        _, bar = chi_tables(graph, vals)
        predicted = bar >= 0
        if predicted != (vals in image):
            return checked, {"divisor": list(vals), "chi_bar_min": bar, "in_image": vals in image}
        if is_partially_orientable(graph, Divisor(graph, vals)) != predicted:
            return checked, {"divisor": list(vals), "reason": "is_partially_orientable disagrees"}
    return checked, None


def _suite_rank_distance(graph, bound):
    from .orientations import replay
    from .reversal_engine import rank_via_path_reversals

    cache = {}
    checked = 0
    for o in enumerate_partial_orientations(graph):
        checked += 1
        res = rank_via_path_reversals(o, cache=cache)
        dist = path_reversal_distance(graph, o)
        final = replay(res.certificate, o)
        bad = (
            res.rank != dist - 1
            or res.certificate.count("PathReversal") != dist
            or not is_acyclic_state(graph, final.state)
        )
        if bad:
            return checked, {"orientation": o.as_symbols(), "rank": res.rank, "distance": dist}
    return checked, None


def _suite_torsor(graph, bound):
    from .flows import torsor_act
    from .graph_core import spanning_tree_count

    table = class_table_full(graph)
    label = {}
    for k, members in enumerate(table.classes):
        for o in members:
            label[o.state] = k
    if table.count != spanning_tree_count(graph):
        return 0, {"reason": "class count differs from the spanning tree count"}
    checked = 0
    for a, members in enumerate(table.classes):
        for b, targets in enumerate(table.classes):
            z = targets[0].divisor - members[0].divisor
            landed = set()
            for o in members:
                checked += 1
                out, _ = torsor_act(o, z)
                landed.add(label[out.state])
            if landed != {b}:
                return checked, {"from": list(table.keys[a]), "to": list(table.keys[b]),
                                 "landed": sorted(list(table.keys[x]) for x in landed)}
    return checked, None


SUITES = {
    "rr": _suite_rr,
    "gioan": _suite_gioan,
    "eulerpar": _suite_eulerpar,
    "rank-distance": _suite_rank_distance,
    "torsor": _suite_torsor,
}


def verify(graph: Multigraph, suite: str, *, bound: int = 2) -> dict:
    """Run one comparison suite; returns pass/fail with the first counterexample."""
    try:
        run = SUITES[suite]
    except KeyError:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}") from None
    checked, counterexample = run(graph, bound)
    return {"suite": suite, "passed": counterexample is None, "checked": checked,
            "counterexample": counterexample}
