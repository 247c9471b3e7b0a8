"""Translations between digraphs and bipartite graphs with matchings."""

from __future__ import annotations

from .bipartite import BipartiteGraph, Edge, Matching, is_perfect
from .digraph import Arc, Digraph
from .errors import PreconditionError


def _fresh(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def bipartite_double(d: Digraph) -> tuple[BipartiteGraph, Matching]:
    """Split every vertex v into a tail copy and a head copy joined by a
    matching edge; every arc u->v becomes an edge from u's tail copy to v's
    head copy.  Contracting the matching recovers the digraph."""
    side_a = tuple(f"{v}.a" for v in d.vertices)
    side_b = tuple(f"{v}.b" for v in d.vertices)
    taken = set(a.id for a in d.arcs)
    match_ids = {}
    edges = []
    for v in d.vertices:
        mid = _fresh(f"{v}.m", taken)
        match_ids[v] = mid
        edges.append(Edge(mid, f"{v}.a", f"{v}.b"))
    for a in d.arcs:
        edges.append(Edge(a.id, f"{a.tail}.a", f"{a.head}.b"))
    g = BipartiteGraph(side_a, side_b, tuple(edges))
    return g, Matching.of(match_ids.values())


def dgm(g: BipartiteGraph, m: Matching) -> Digraph:
    """Direct every edge from side A to side B and contract the perfect
    matching ``m``.  Digraph vertices are named by their matching edge ids."""
    if not is_perfect(g, m):
        raise PreconditionError("dgm requires a perfect matching")
    cover = {}
    vertex_order = []
    for e in g.edges:
        if e.id in m:
            cover[e.a] = e.id
            cover[e.b] = e.id
            vertex_order.append(e.id)
    arcs = []
    for e in g.edges:
        if e.id not in m:
            arcs.append(Arc(e.id, cover[e.a], cover[e.b]))
    return Digraph(tuple(vertex_order), tuple(arcs))


def vertex_split(d: Digraph) -> tuple[Digraph, dict]:
    """Split each vertex v into v (head side) and v' (tail side).

    Each arc u->v is rerouted to run u'->v and every vertex gets an internal
    arc v->v' of weight 1, while rerouted arcs get weight |E(H)|.  Circuits
    of the result correspond to circuits of the input, and minimum-weight
    arc transversals pick only internal arcs, one per original vertex.
    """
    taken = set(d.vertices)
    prime = {v: _fresh(f"{v}'", taken) for v in d.vertices}
    vertices = tuple(d.vertices) + tuple(prime[v] for v in d.vertices)
    arc_ids = set(a.id for a in d.arcs)
    arcs = [Arc(a.id, prime[a.tail], a.head) for a in d.arcs]
    weights = {}
    total = d.n_arcs + d.n_vertices
    for a in d.arcs:
        weights[a.id] = total
    for v in d.vertices:
        aid = _fresh(f"{v}~", arc_ids)
        arcs.append(Arc(aid, v, prime[v]))
        weights[aid] = 1
    return Digraph(vertices, tuple(arcs)), weights
