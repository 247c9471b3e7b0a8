"""Exact planarity tests and the head-interval planarity notion for digraphs.

The main test delegates to networkx's left-right planarity check after
reducing to a simple graph; parallel edges and loops never change the
answer.  A self-contained rotation-system oracle is provided for
small-scale cross-checks: it enumerates combinatorial embeddings and
tests the Euler relation, which is exact but exponential.
"""

from __future__ import annotations

import itertools

import networkx as nx

from .bipartite import BipartiteGraph
from .digraph import Digraph
from .transform import bipartite_double


def _simple_edges(pairs) -> set:
    simple = set()
    for u, v in pairs:
        if u != v:
            simple.add((u, v) if u <= v else (v, u))
    return simple


def planar(g) -> bool:
    """Exact planarity of the underlying simple graph of a bipartite graph
    or digraph."""
    if isinstance(g, BipartiteGraph):
        vertices = g.vertices
        pairs = [(e.a, e.b) for e in g.edges]
    elif isinstance(g, Digraph):
        vertices = g.vertices
        pairs = [(a.tail, a.head) for a in g.arcs]
    else:
        raise TypeError(f"planar() expects a graph, got {type(g).__name__}")
    graph = nx.Graph()
    graph.add_nodes_from(vertices)
    graph.add_edges_from(_simple_edges(pairs))
    ok, _ = nx.check_planarity(graph, counterexample=False)
    return ok


def strongly_planar(d: Digraph) -> bool:
    """True iff the digraph has a planar drawing in which the in-arcs at
    every vertex are consecutive; decided via the split-vertex double."""
    g, _ = bipartite_double(d)
    return planar(g)


# -- rotation-system oracle (test-scale only) ----------------------------


def _components(vertices, pairs):
    adj = {v: set() for v in vertices}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    seen = set()
    comps = []
    for v0 in vertices:
        if v0 in seen:
            continue
        comp = {v0}
        stack = [v0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _count_faces(rotation, twin):
    """Number of orbits of next := rotation-successor of the twin dart."""
    succ = {}
    for darts in rotation.values():
        k = len(darts)
        for i, dart in enumerate(darts):
            succ[dart] = darts[(i + 1) % k]
    faces = 0
    unvisited = set(succ)
    while unvisited:
        d0 = unvisited.pop()
        d = succ[twin[d0]]
        while d != d0:
            unvisited.discard(d)
            d = succ[twin[d]]
        faces += 1
    return faces


def _rotations_planar(vertices, edges, dart_groups=None) -> bool:
    """True iff some rotation system embeds the multigraph in the plane.

    ``edges`` is a list of (id, u, v); loops allowed.  ``dart_groups``
    optionally constrains the rotation at each vertex: a map
    vertex -> (group label per dart) demanding that darts of the same
    label be consecutive in the cyclic order.
    """
    darts_at = {v: [] for v in vertices}
    twin = {}
    for eid, u, v in edges:
        d0, d1 = (eid, 0), (eid, 1)
        darts_at[u].append(d0)
        darts_at[v].append(d1)
        twin[d0] = d1
        twin[d1] = d0

    for comp in _components(vertices, [(u, v) for _, u, v in edges]):
        comp_set = set(comp)
        comp_edges = [(e, u, v) for e, u, v in edges if u in comp_set]
        if not comp_edges:
            continue
        ne = len(comp_edges)
        nv = len(comp)

        def vertex_orders(v):
            darts = darts_at[v]
            if len(darts) <= 1:
                yield tuple(darts)
                return
            if dart_groups is None:
                first = darts[0]
                for rest in itertools.permutations(darts[1:]):
                    yield (first,) + rest
                return
            labels = dart_groups[v]
            groups: dict = {}
            for dart in darts:
                groups.setdefault(labels[dart], []).append(dart)
            blocks = [groups[k] for k in sorted(groups)]
            if len(blocks) == 1:
                first = blocks[0][0]
                for rest in itertools.permutations(blocks[0][1:]):
                    yield (first,) + rest
                return
            # each label class contiguous: permute inside blocks, then
            # arrange the blocks cyclically (first block pinned)
            for insides in itertools.product(*(itertools.permutations(b) for b in blocks)):
                for block_rest in itertools.permutations(insides[1:]):
                    order = list(insides[0])
                    for b in block_rest:
                        order.extend(b)
                    yield tuple(order)

        found = False
        for choice in itertools.product(*(vertex_orders(v) for v in comp)):
            rotation = dict(zip(comp, choice))
            faces = _count_faces(rotation, twin)
            if nv - ne + faces == 2:
                found = True
                break
        if not found:
            return False
    return True


def planar_by_rotations(g) -> bool:
    """Embedding-enumeration planarity oracle (exponential; tiny inputs)."""
    if isinstance(g, BipartiteGraph):
        return _rotations_planar(g.vertices, [(e.id, e.a, e.b) for e in g.edges])
    return _rotations_planar(g.vertices, [(a.id, a.tail, a.head) for a in g.arcs])


def strongly_planar_by_rotations(d: Digraph) -> bool:
    """Embedding oracle for the head-interval property: searches rotations
    where the head-side darts at each vertex are consecutive."""
    groups = {}
    for v in d.vertices:
        labels = {}
        for a in d.out_arcs[v]:
            labels[(a.id, 0)] = "out"
        for a in d.in_arcs[v]:
            labels[(a.id, 1)] = "in"
        groups[v] = labels
    return _rotations_planar(
        d.vertices, [(a.id, a.tail, a.head) for a in d.arcs], dart_groups=groups
    )
