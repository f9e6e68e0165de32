"""Finite graphs with loops and multi-edges and a fixed edge order."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the smaller vertex as root so roots are component minima
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Graph:
    """Vertices 0..n-1 in their natural order.

    Edges are stored as (u, v) with u <= v, sorted by (u, v); parallel edges
    keep their input order.  Ground-set element k of M(G) is edge k-1.
    """

    vertices: int
    edges: tuple[tuple[int, int], ...]

    @classmethod
    def build(cls, vertices: int, edges: Iterable[Sequence[int]]) -> "Graph":
        norm = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise ValueError(f"edge {tuple(e)} has an endpoint outside 0..{vertices - 1}")
            norm.append((min(u, v), max(u, v)))
        order = sorted(range(len(norm)), key=lambda k: (norm[k], k))
        return cls(vertices, tuple(norm[k] for k in order))

    @property
    def m(self) -> int:
        return len(self.edges)

    def components(self, mask: int) -> list[int]:
        """Component label (its minimal vertex) for every vertex of [G : mask]."""
        uf = UnionFind(self.vertices)
        for k, (u, v) in enumerate(self.edges):
            if mask >> k & 1:
                uf.union(u, v)
        return [uf.find(x) for x in range(self.vertices)]

    def component_count(self, mask: int) -> int:
        return len(set(self.components(mask)))

    def is_connected(self) -> bool:
        return self.vertices > 0 and self.component_count((1 << self.m) - 1) == 1

    def is_bridge(self, k: int) -> bool:
        full = (1 << self.m) - 1
        return self.component_count(full & ~(1 << k)) > self.component_count(full)

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}


def complete_graph(n: int) -> Graph:
    return Graph.build(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.build(n, [(k, (k + 1) % n) for k in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.build(n, [(k, k + 1) for k in range(n - 1)])


def chromatic_polynomial(g: Graph):
    """P(G; x) by deletion-contraction on the edge list."""
    from .poly import IntPoly

    memo: dict = {}

    def rec(n: int, edges: tuple) -> IntPoly:
        key = (n, edges)
        if key in memo:
            return memo[key]
        if not edges:
            out = IntPoly.monomial(n)
        else:
            (u, v), rest = edges[0], edges[1:]
            if u == v:
                out = IntPoly()
            else:
                # contract v into u, relabel to keep vertices 0..n-2
                def relabel(x):
                    x = u if x == v else x
                    return x - 1 if x > v else x

                merged = tuple(sorted((min(relabel(a), relabel(b)), max(relabel(a), relabel(b))) for a, b in rest))
                out = rec(n, rest) - rec(n - 1, merged)
        memo[key] = out
        return out

    return rec(g.vertices, tuple(sorted(g.edges)))


def count_colorings(g: Graph, colors: int) -> int:
    """Brute-force proper colorings; small graphs only."""
    from itertools import product

    if any(u == v for u, v in g.edges):
        return 0
    return sum(
        1
        for f in product(range(colors), repeat=g.vertices)
        if all(f[u] != f[v] for u, v in g.edges)
    )
