"""The commutator graph on a set of rich lines and its components."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from richlines.errors import InvariantViolation, PreconditionError
from richlines.families import line_set
from richlines.grid import GroundSet, ceil_threshold, richness
from richlines.lines import invert, star

__all__ = ["CommutatorGraph", "UnionFind", "commutator_graph", "component_analysis"]

SIDE_LL = "L*L"
SIDE_INV = "L^-1*L^-1"


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        self.size = {}
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self) -> list:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted((sorted(g) for g in out.values()), key=lambda g: (-len(g), g))


@dataclass
class CommutatorGraph:
    """Vertices are (side, Line) pairs; edges are sorted vertex pairs.

    ``provenance`` maps each edge to the index pairs (i, j) into the
    canonical LineSet that produce it.  ``commuting`` lists the edges whose
    two endpoints are the same line (f and g commute).
    """

    vertices: tuple
    edges: tuple
    provenance: dict = field(default_factory=dict)
    threshold: int = 0
    commuting: tuple = ()


def commutator_graph(L, A: GroundSet, delta: float) -> CommutatorGraph:
    """Edges {f*g, g^{-1}*f^{-1}} over ordered pairs (f, g) in L x L where
    both endpoints are ceil(n^{1-5 delta})-rich in A x A."""
    L = line_set(L)
    if len(L) < 2:
        raise PreconditionError("commutator graph needs |L| >= 2")
    t = ceil_threshold(A.n ** (1 - 5 * delta))
    inverses = [invert(l) for l in L]
    rich_cache: dict = {}

    def rich(l):
        r = rich_cache.get(l)
        if r is None:
            r = rich_cache[l] = richness(l, A)
        return r

    vertices = set()
    provenance = defaultdict(list)
    for i, f in enumerate(L):
        for j, g in enumerate(L):
            u = star(f, g)
            v = star(inverses[j], inverses[i])
            if rich(u) >= t and rich(v) >= t:
                a, b = (SIDE_LL, u), (SIDE_INV, v)
                vertices.update((a, b))
                provenance[(a, b)].append((i, j))
    edges = tuple(sorted(provenance))
    for e in edges:
        if e[0][1].slope != e[1][1].slope:
            raise InvariantViolation(f"commutator edge joins different slopes: {e}")
    return CommutatorGraph(
        vertices=tuple(sorted(vertices)),
        edges=edges,
        provenance={e: provenance[e] for e in edges},
        threshold=t,
        commuting=tuple(e for e in edges if e[0][1] == e[1][1]),
    )


def component_analysis(G: CommutatorGraph) -> dict:
    """Connected components; each must sit inside a single slope class."""
    uf = UnionFind(G.vertices)
    for a, b in G.edges:
        uf.add(a)
        uf.add(b)
        uf.union(a, b)
    comps = uf.groups()
    for comp in comps:
        if len({v[1].slope for v in comp}) != 1:
            raise InvariantViolation("component spans more than one slope class")
    slopes = {v[1].slope for v in uf.parent}
    return {
        "vertex_count": len(uf.parent),
        "edge_count": len(G.edges),
        "component_count": len(comps),
        "max_component": max((len(c) for c in comps), default=0),
        "slope_classes": len(slopes),
        "components": comps,
    }
