"""Fixed bipartite graphs the structure theory is anchored to."""

from __future__ import annotations

from functools import lru_cache

from .bipartite import BipartiteGraph, Edge


@lru_cache(maxsize=1)
def k33() -> BipartiteGraph:
    side_a = ("x0", "x1", "x2")
    side_b = ("y0", "y1", "y2")
    edges = tuple(
        Edge(f"e{i}{j}", f"x{i}", f"y{j}") for i in range(3) for j in range(3)
    )
    return BipartiteGraph(side_a, side_b, edges)


@lru_cache(maxsize=1)
def cube() -> BipartiteGraph:
    """1-skeleton of the 3-cube: outer square u1..u4, inner square w1..w4,
    rungs u_i w_i.  8 vertices, 12 edges, planar, bipartite."""
    side_a = ("u1", "u3", "w2", "w4")
    side_b = ("u2", "u4", "w1", "w3")
    edges = []
    for i in range(4):
        j = (i + 1) % 4 + 1
        edges.append(Edge(f"s{i + 1}", f"u{i + 1}", f"u{j}"))
        edges.append(Edge(f"g{i + 1}", f"w{i + 1}", f"w{j}"))
        edges.append(Edge(f"r{i + 1}", f"u{i + 1}", f"w{i + 1}"))
    fixed = []
    aset = set(side_a)
    for e in edges:
        if e.a in aset:
            fixed.append(e)
        else:
            fixed.append(Edge(e.id, e.b, e.a))
    return BipartiteGraph(side_a, side_b, tuple(fixed))


@lru_cache(maxsize=1)
def heawood() -> BipartiteGraph:
    """The 14-cycle plus distance-5 chords at even positions: bipartite,
    3-regular, girth 6."""
    side_a = tuple(f"h{i}" for i in range(0, 14, 2))
    side_b = tuple(f"h{i}" for i in range(1, 14, 2))
    edges = []
    for i in range(14):
        u, v = i, (i + 1) % 14
        if u % 2 == 1:
            u, v = v, u
        edges.append(Edge(f"r{i}", f"h{u}", f"h{v}"))
    for i in range(0, 14, 2):
        edges.append(Edge(f"c{i}", f"h{i}", f"h{(i + 5) % 14}"))
    return BipartiteGraph(side_a, side_b, tuple(edges))
