"""Intersection and contact graphs, biclique search, planarity, KST yardstick."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx

from .errors import ResourceError
from .geometry import CurveFamily
from .incidence import FamilyIncidences, compute_incidences


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected graph on integer vertex ids; no loops, no multi-edges."""
    vertices: Tuple[int, ...]
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices)))
        object.__setattr__(self, "vertices", vs)
        vset = set(vs)
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("loop edge")
            if u not in vset or v not in vset:
                raise ValueError(f"edge ({u},{v}) endpoint not a vertex")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))
        adj: Dict[int, set] = {v: set() for v in vs}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in adj.items()})

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def subgraph(self, keep: Iterable[int]) -> "SimpleGraph":
        ks = set(keep)
        return SimpleGraph(
            vertices=tuple(v for v in self.vertices if v in ks),
            edges=frozenset(e for e in self.edges if e[0] in ks and e[1] in ks))


def graph_from_edges(edges: Iterable[Tuple[int, int]], vertices: Iterable[int] = ()) -> SimpleGraph:
    es = [tuple(e) for e in edges]
    vs = set(vertices)
    for u, v in es:
        vs.add(u)
        vs.add(v)
    return SimpleGraph(vertices=tuple(sorted(vs)), edges=frozenset(
        (min(u, v), max(u, v)) for u, v in es))


@dataclass(frozen=True)
class FamilyStats:
    """Headline counts: curves, touching pairs, intersection points, degree."""
    n: int
    T: int
    X: int
    d: int


def intersection_graph_from(fi: FamilyIncidences) -> SimpleGraph:
    return SimpleGraph(
        vertices=fi.curve_ids,
        edges=frozenset(pair for pair, incs in fi.pairs.items() if incs))


def contact_graph_from(fi: FamilyIncidences) -> SimpleGraph:
    return SimpleGraph(vertices=fi.curve_ids, edges=frozenset(fi.touching_pairs()))


def build_intersection_graph(family: CurveFamily) -> SimpleGraph:
    """Edge {i,j} iff curves i and j meet at least once."""
    return intersection_graph_from(compute_incidences(family))


def build_contact_graph(family: CurveFamily) -> SimpleGraph:
    """Edge {i,j} iff i and j form a touching pair."""
    return contact_graph_from(compute_incidences(family))


def stats_from(fi: FamilyIncidences, n: int) -> FamilyStats:
    X = len(fi.all_incidences())
    return FamilyStats(n=n, T=fi.T, X=X, d=X // n if n else 0)


def family_stats(family: CurveFamily) -> FamilyStats:
    """n, touching-pair count T, total intersection points X, d = floor(X/n)."""
    return stats_from(compute_incidences(family), family.n)


def find_biclique(g: SimpleGraph, s: int, t: int,
                  budget: int = 5_000_000) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Lexicographically first complete bipartite K_{s,t} witness, or None.

    Exhaustive over s-subsets of the vertex set with common-neighborhood
    pruning. The right side returned is the t lexicographically least common
    neighbors.
    """
    if s < 1 or t < 1:
        raise ValueError("s and t must be positive")
    if comb(g.n, s) > budget:
        raise ResourceError(f"C({g.n},{s}) exceeds biclique budget {budget}")
    order = g.vertices

    def extend(start: int, chosen: List[int], common: Optional[FrozenSet[int]]):
        if len(chosen) == s:
            rest = sorted(common - set(chosen))
            if len(rest) >= t:
                return (tuple(chosen), tuple(rest[:t]))
            return None
        need = s - len(chosen)
        for idx in range(start, len(order) - need + 1):
            v = order[idx]
            nxt = g.neighbors(v) if common is None else (common & g.neighbors(v))
            # the right side must stay disjoint from the left
            if len(nxt.difference(chosen, (v,))) < t:
                continue
            chosen.append(v)
            hit = extend(idx + 1, chosen, nxt)
            if hit:
                return hit
            chosen.pop()
        return None

    return extend(0, [], None)


def max_common_neighborhood(g: SimpleGraph, s: int,
                            budget: int = 5_000_000) -> Tuple[int, Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]]:
    """Largest t with K_{s,t} in g, plus one witness; (0, None) when none.

    Same search as find_biclique but maximizing the right side.
    """
    if s < 1:
        raise ValueError("s must be positive")
    if comb(g.n, s) > budget:
        raise ResourceError(f"C({g.n},{s}) exceeds biclique budget {budget}")
    order = g.vertices
    best: List = [0, None]

    def extend(start: int, chosen: List[int], common: Optional[FrozenSet[int]]):
        if len(chosen) == s:
            rest = sorted(common - set(chosen))
            if len(rest) > best[0]:
                best[0] = len(rest)
                best[1] = (tuple(chosen), tuple(rest))
            return
        need = s - len(chosen)
        for idx in range(start, len(order) - need + 1):
            v = order[idx]
            nxt = g.neighbors(v) if common is None else (common & g.neighbors(v))
            if len(nxt) <= best[0]:
                continue
            chosen.append(v)
            extend(idx + 1, chosen, nxt)
            chosen.pop()

    extend(0, [], None)
    return best[0], best[1]


def _integer_kth_root(x: int, k: int) -> int:
    """floor(x**(1/k)) by binary search; exact integer arithmetic."""
    if x < 0:
        raise ValueError("negative radicand")
    if x in (0, 1) or k == 1:
        return x
    hi = 1 << (x.bit_length() // k + 2)
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid
    return lo


_KST_SCALE = 10 ** 40


def kst_bound(n: int, s: int, t: int, c: Fraction) -> Fraction:
    """Yardstick c * n^(2 - 1/s), computed to 40 decimal digits.

    Exact whenever n^(2s-1) is a perfect s-th power; otherwise rounded down
    at the scale. t is part of the contract (the bound's constant depends on
    it) but does not enter the formula; callers fold it into c.
    """
    if n < 1 or s < 1 or t < 1:
        raise ValueError("n, s, t must be >= 1")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    radicand = n ** (2 * s - 1) * _KST_SCALE ** s
    root = _integer_kth_root(radicand, s)
    return c * Fraction(root, _KST_SCALE)


def check_planarity(g: SimpleGraph) -> bool:
    """True iff g is planar. Fast Euler-count rejection, then a certified
    planarity algorithm; the two must agree on the rejection side."""
    if g.n >= 3 and g.n_edges > 3 * g.n - 6:
        return False
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices)
    ng.add_edges_from(g.edges)
    planar, _ = nx.check_planarity(ng)
    if planar and g.n >= 3:
        assert g.n_edges <= 3 * g.n - 6
    return planar


def dump_edges(g: SimpleGraph) -> str:
    """Edge-list export: 'n=<count>' then one 'u v' line per edge, ascending."""
    lines = [f"n={g.n}"]
    for u, v in sorted(g.edges):
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"
