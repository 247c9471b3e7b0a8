"""Composition and decomposition: 0-/1-sums of digraphs, 4-sums and trisums
of bipartite graphs along central 4-circuits, and the recursive split of a
brace down to planar leaves or a named containment obstruction."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .bipartite import BipartiteGraph, Edge, Matching, has_perfect_matching, validate_matching
from .budget import Budget, ensure_budget
from .canonical import bipartite_isomorphic
from .circuits import strongly_connected, strongly_connected_components
from .digraph import Arc, Digraph
from .errors import InternalConsistencyError, PreconditionError
from .matching import contains, contains_heawood, contains_k33, is_brace
from .named_graphs import cube, heawood, k33
from .planarity import planar

# -- digraph 0-sum -----------------------------------------------------------


def zero_sum(d1: Digraph, d2: Digraph) -> Digraph:
    """Disjoint union."""
    if d1.vertex_set & d2.vertex_set:
        raise PreconditionError("0-sum parts must have disjoint vertex sets")
    if set(d1.arc_by_id) & set(d2.arc_by_id):
        raise PreconditionError("0-sum parts must have disjoint arc ids")
    return Digraph(d1.vertices + d2.vertices, d1.arcs + d2.arcs)


def split_zero_sum(d: Digraph) -> tuple[Digraph, Digraph] | None:
    """Split a non-strongly-connected digraph into (D|X1, D|X2) where no
    arc runs from X1 into X2; X1 is the sink component holding the smallest
    vertex.  None when strongly connected (or too small)."""
    if d.n_vertices < 2 or strongly_connected(d):
        return None
    comps = strongly_connected_components(d)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    has_out = [False] * len(comps)
    for a in d.arcs:
        if comp_of[a.tail] != comp_of[a.head]:
            has_out[comp_of[a.tail]] = True
    sinks = [i for i in range(len(comps)) if not has_out[i]]
    x1 = min((comps[i] for i in sinks), key=lambda c: min(c))
    x2 = d.vertex_set - x1
    return d.induced(x1), d.induced(x2)


# -- digraph 1-sum -----------------------------------------------------------


def one_sum(d1: Digraph, d2: Digraph, v: str) -> Digraph:
    """Glue two digraphs at the vertex v.  Arcs shared by id form the seam
    set F: each must have head v in the first part and tail v in the second;
    in the result it runs from its first-part tail to its second-part head."""
    if v not in d1.vertex_set or v not in d2.vertex_set:
        raise PreconditionError(f"shared vertex {v!r} missing from a part")
    if d1.vertex_set & d2.vertex_set != {v}:
        raise PreconditionError("1-sum parts must share exactly the glue vertex")
    shared = set(d1.arc_by_id) & set(d2.arc_by_id)
    for f in shared:
        a1, a2 = d1.arc_by_id[f], d2.arc_by_id[f]
        if a1.head != v or a1.tail == v:
            raise PreconditionError(f"shared arc {f!r} must have head {v!r} in the first part")
        if a2.tail != v or a2.head == v:
            raise PreconditionError(f"shared arc {f!r} must have tail {v!r} in the second part")
    vertices = d1.vertices + tuple(w for w in d2.vertices if w != v)
    arcs = []
    for a in d1.arcs:
        if a.id in shared:
            arcs.append(Arc(a.id, a.tail, d2.arc_by_id[a.id].head))
        else:
            arcs.append(a)
    for a in d2.arcs:
        if a.id not in shared:
            arcs.append(a)
    return Digraph(vertices, tuple(arcs))


def split_one_sum(d: Digraph) -> tuple[Digraph, Digraph, str] | None:
    """Split a strongly connected digraph at its smallest cut vertex; the
    seam arcs keep their ids in both parts.  None when there is no cut
    vertex or the digraph is not strongly connected (0-sum splits win)."""
    if not strongly_connected(d) or d.n_vertices < 3:
        return None
    for v in sorted(d.vertices):
        rest = d.delete_vertices([v])
        if rest.n_vertices < 2 or strongly_connected(rest):
            continue
        comps = strongly_connected_components(rest)
        comp_of = {}
        for i, comp in enumerate(comps):
            for w in comp:
                comp_of[w] = i
        has_out = [False] * len(comps)
        for a in rest.arcs:
            if comp_of[a.tail] != comp_of[a.head]:
                has_out[comp_of[a.tail]] = True
        sinks = [i for i in range(len(comps)) if not has_out[i]]
        x2 = min((comps[i] for i in sinks), key=lambda c: min(c))
        x1 = rest.vertex_set - x2
        d1_vertices = tuple(w for w in d.vertices if w in x1 or w == v)
        d2_vertices = tuple(w for w in d.vertices if w in x2 or w == v)
        d1_arcs, d2_arcs = [], []
        for a in d.arcs:
            t_in_1 = a.tail in x1 or a.tail == v
            h_in_1 = a.head in x1 or a.head == v
            t_in_2 = a.tail in x2 or a.tail == v
            h_in_2 = a.head in x2 or a.head == v
            if a.tail in x1 and a.head in x2:
                # seam arc: head becomes v in part 1, tail becomes v in part 2
                d1_arcs.append(Arc(a.id, a.tail, v))
                d2_arcs.append(Arc(a.id, v, a.head))
            elif t_in_1 and h_in_1:
                d1_arcs.append(a)
            elif t_in_2 and h_in_2:
                d2_arcs.append(a)
            else:
                raise InternalConsistencyError("arc from the sink side into the source side")
        return (
            Digraph(d1_vertices, tuple(d1_arcs)),
            Digraph(d2_vertices, tuple(d2_arcs)),
            v,
        )
    return None


# -- bipartite 4-sum and trisum ----------------------------------------------


@dataclass(frozen=True)
class FourCircuit:
    """A seam: four vertices in cyclic order (sides alternating A,B,A,B) and
    the ids of the four circuit edges joining consecutive pairs."""

    vertices: tuple  # (a1, b1, a2, b2)
    edge_ids: tuple  # ids of edges a1-b1, b1-a2, a2-b2, b2-a1

    def pairs(self):
        a1, b1, a2, b2 = self.vertices
        return [(a1, b1), (a2, b1), (a2, b2), (a1, b2)]


def _validate_sum_parts(parts, c: FourCircuit):
    if len(set(c.vertices)) != 4 or len(set(c.edge_ids)) != 4:
        raise PreconditionError("seam must have four distinct vertices and edges")
    a1, b1, a2, b2 = c.vertices
    expected = dict(zip(c.edge_ids, c.pairs()))
    for g in parts:
        if a1 not in g._aset or a2 not in g._aset or b1 not in g._bset or b2 not in g._bset:
            raise PreconditionError("seam vertices must alternate sides A,B,A,B in every part")
        for eid, (ea, eb) in expected.items():
            e = g.edge_by_id.get(eid)
            if e is None or e.a != ea or e.b != eb:
                raise PreconditionError(f"seam edge {eid!r} missing or mismatched in a part")
    seam_v = set(c.vertices)
    seam_e = set(c.edge_ids)
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            gi, gj = parts[i], parts[j]
            if gi.vertex_set & gj.vertex_set != seam_v:
                raise PreconditionError("parts must intersect exactly in the seam vertices")
            shared_edges = set(gi.edge_by_id) & set(gj.edge_by_id)
            if shared_edges != seam_e:
                raise PreconditionError("parts must intersect exactly in the seam edges")
            if not (gi.vertex_set - gj.vertex_set) or not (gj.vertex_set - gi.vertex_set):
                raise PreconditionError("every part needs a private vertex")


def _sum_union(parts, c: FourCircuit) -> BipartiteGraph:
    seen_v: set = set()
    side_a, side_b = [], []
    edges = []
    seen_e: set = set()
    for g in parts:
        for v in g.side_a:
            if v not in seen_v:
                seen_v.add(v)
                side_a.append(v)
        for v in g.side_b:
            if v not in seen_v:
                seen_v.add(v)
                side_b.append(v)
        for e in g.edges:
            if e.id not in seen_e:
                seen_e.add(e.id)
                edges.append(e)
    return BipartiteGraph(tuple(side_a), tuple(side_b), tuple(edges))


def _compose_sum(parts, c: FourCircuit) -> BipartiteGraph:
    _validate_sum_parts(parts, c)
    g0 = _sum_union(parts, c)
    if not has_perfect_matching(g0.delete_vertices(c.vertices)):
        raise PreconditionError("seam circuit is not central in the composed graph")
    return g0.delete_edges(c.edge_ids)


def four_sum(g1: BipartiteGraph, g2: BipartiteGraph, c: FourCircuit) -> BipartiteGraph:
    """Union of two graphs meeting exactly in a central 4-circuit, with the
    circuit's edges deleted."""
    return _compose_sum((g1, g2), c)


def trisum(g1: BipartiteGraph, g2: BipartiteGraph, g3: BipartiteGraph, c: FourCircuit) -> BipartiteGraph:
    """Union of three graphs pairwise meeting exactly in a central
    4-circuit, with the circuit's edges deleted."""
    return _compose_sum((g1, g2, g3), c)


@dataclass(frozen=True)
class Imprint:
    """Per-part matchings induced by a matching of a sum across its seam."""

    matchings: tuple  # one Matching per part


def imprint(m: Matching, parts, c: FourCircuit) -> Imprint:
    """Restrict a perfect matching of the composed graph to each part:
    matching edges of the part with an end off the seam, plus the seam
    edges parallel to a matching edge."""
    _validate_sum_parts(parts, c)
    g0 = _sum_union(parts, c)
    for eid in m.edges:
        if eid not in g0.edge_by_id or eid in set(c.edge_ids):
            raise PreconditionError(f"matching edge {eid!r} is not an edge of the sum")
    by_pair = {}
    for eid in m.edges:
        e = g0.edge_by_id[eid]
        by_pair[(e.a, e.b)] = eid
    seam_parallel = []
    a1, b1, a2, b2 = c.vertices
    for eid, (ea, eb) in zip(c.edge_ids, c.pairs()):
        if (ea, eb) in by_pair:
            seam_parallel.append(eid)
    seam_v = set(c.vertices)
    result = []
    for g in parts:
        own = [
            eid for eid in m.edges
            if eid in g.edge_by_id
            and not (g.edge_by_id[eid].a in seam_v and g.edge_by_id[eid].b in seam_v)
        ]
        result.append(Matching.of(own + seam_parallel))
    return Imprint(tuple(result))


# -- decomposition ------------------------------------------------------------


def _fresh_ids(prefix, count, taken):
    out = []
    i = 0
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in taken:
            taken.add(name)
            out.append(name)
        i += 1
    return out


def _candidate_splits(g: BipartiteGraph, n_parts: int, budget: Budget):
    """Yield (parts, seam) decompositions of g into n_parts subgraphs glued
    along a re-added central 4-circuit, in a deterministic order."""
    averts = sorted(g.side_a)
    bverts = sorted(g.side_b)
    from itertools import combinations

    for a1, a2 in combinations(averts, 2):
        for b1, b2 in combinations(bverts, 2):
            budget.spend()
            seam_vs = (a1, b1, a2, b2)
            seam_set = set(seam_vs)
            rest = g.delete_vertices(seam_set)
            if not has_perfect_matching(rest):
                continue  # seam would not be central
            comps = rest.components()
            if len(comps) < n_parts:
                continue
            inner_edges = [
                e for e in g.edges if e.a in seam_set and e.b in seam_set
            ]
            taken = set(e.id for e in g.edges)
            seam_ids = tuple(_fresh_ids("seam.", 4, taken))
            seam = FourCircuit(seam_vs, seam_ids)
            seam_edges = [
                Edge(eid, ea, eb) for eid, (ea, eb) in zip(seam_ids, seam.pairs())
            ]
            for grouping in _groupings(len(comps), n_parts):
                for assignment in product(range(n_parts), repeat=len(inner_edges)):
                    budget.spend()
                    parts = []
                    for part_idx in range(n_parts):
                        part_vs = set(seam_vs)
                        for ci, gi in enumerate(grouping):
                            if gi == part_idx:
                                part_vs |= comps[ci]
                        edges = [
                            e for e in g.edges
                            if e.a in part_vs and e.b in part_vs
                            and not (e.a in seam_set and e.b in seam_set)
                        ]
                        edges += [
                            inner_edges[i] for i in range(len(inner_edges))
                            if assignment[i] == part_idx
                        ]
                        edges += seam_edges
                        order = {e.id: i for i, e in enumerate(g.edges)}
                        edges.sort(key=lambda e: order.get(e.id, len(order)))
                        parts.append(BipartiteGraph(
                            tuple(v for v in g.side_a if v in part_vs),
                            tuple(v for v in g.side_b if v in part_vs),
                            tuple(edges),
                        ))
                    try:
                        _validate_sum_parts(tuple(parts), seam)
                    except PreconditionError:
                        continue
                    yield tuple(parts), seam


def _groupings(n_items, n_groups):
    """Surjections of items onto groups, deduplicated up to group renaming
    (the first item of each new group appears in group order)."""
    def rec(i, assignment, used):
        if i == n_items:
            if used == n_groups:
                yield tuple(assignment)
            return
        for grp in range(min(used + 1, n_groups)):
            assignment.append(grp)
            yield from rec(i + 1, assignment, max(used, grp + 1))
            assignment.pop()

    yield from rec(0, [], 0)


def find_trisum_split(g: BipartiteGraph, budget: Budget | None = None):
    """First trisum split (three parts) whose parts are all braces, then the
    first such 4-sum split (two parts), else None.  Parts include the
    re-added seam edges; brace parts are what the decomposition recurses on."""
    if not is_brace(g):
        raise PreconditionError("splits are searched on braces only")
    budget = ensure_budget(budget)
    for parts, seam in _candidate_splits(g, 3, budget):
        if all(is_brace(p) for p in parts):
            return parts + (seam,)
    for parts, seam in _candidate_splits(g, 2, budget):
        if all(is_brace(p) for p in parts):
            return parts + (seam,)
    return None


@dataclass(frozen=True)
class DecompositionTree:
    """Result of recursively splitting a brace.

    kinds: leaf-planar, leaf-heawood, trisum, four-sum, zero-sum, one-sum,
    obstructed.  Every node snapshots its graph; sum nodes carry the seam.
    """

    kind: str
    graph: object  # BipartiteGraph or Digraph snapshot
    children: tuple = ()
    seam: FourCircuit | None = None
    cut_vertex: str | None = None
    obstruction: str | None = None  # "k33" | "heawood"
    obstruction_witness: object = None

    def to_dict(self) -> dict:
        from .bipartite import bipartite_to_json
        from .digraph import digraph_to_json
        import json

        if isinstance(self.graph, BipartiteGraph):
            graph_payload = json.loads(bipartite_to_json(self.graph))
        elif isinstance(self.graph, Digraph):
            graph_payload = json.loads(digraph_to_json(self.graph))
        else:
            graph_payload = None
        out = {"kind": self.kind, "graph": graph_payload}
        if self.seam is not None:
            out["seam"] = {
                "vertices": list(self.seam.vertices),
                "edges": list(self.seam.edge_ids),
            }
        if self.cut_vertex is not None:
            out["cut_vertex"] = self.cut_vertex
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
            out["obstruction_witness"] = self.obstruction_witness.to_dict()
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out


def trisum_decompose(g: BipartiteGraph, budget: Budget | None = None) -> DecompositionTree:
    """Split a brace recursively along central 4-circuits until every leaf
    is planar (or the 14-vertex exceptional brace); when no split exists the
    graph must contain one of the two obstructions, which is witnessed."""
    if not is_brace(g):
        raise PreconditionError("decomposition requires a brace")
    budget = ensure_budget(budget)
    return _decompose(g, budget)


def _decompose(g: BipartiteGraph, budget: Budget) -> DecompositionTree:
    if planar(g):
        return DecompositionTree("leaf-planar", g)
    if bipartite_isomorphic(g, heawood()):
        return DecompositionTree("leaf-heawood", g)
    for n_parts, kind in ((3, "trisum"), (2, "four-sum")):
        for parts, seam in _candidate_splits(g, n_parts, budget):
            if all(is_brace(p) for p in parts):
                children = tuple(_decompose(p, budget) for p in parts)
                return DecompositionTree(kind, g, children, seam=seam)
    w = contains(g, k33(), budget)
    if w is not None:
        return DecompositionTree("obstructed", g, obstruction="k33", obstruction_witness=w)
    w = contains(g, heawood(), budget)
    if w is not None:
        return DecompositionTree("obstructed", g, obstruction="heawood", obstruction_witness=w)
    raise InternalConsistencyError(
        "unsplittable nonplanar brace without either containment obstruction"
    )


def replay_tree(tree: DecompositionTree) -> object:
    """Re-compose a decomposition tree bottom-up; returns a graph that must
    be isomorphic to the root snapshot."""
    if tree.kind in ("leaf-planar", "leaf-heawood", "obstructed"):
        return tree.graph
    if tree.kind in ("trisum", "four-sum"):
        parts = tuple(replay_tree(c) for c in tree.children)
        return _compose_sum(parts, tree.seam)
    if tree.kind == "zero-sum":
        parts = [replay_tree(c) for c in tree.children]
        return zero_sum(parts[0], parts[1])
    if tree.kind == "one-sum":
        parts = [replay_tree(c) for c in tree.children]
        return one_sum(parts[0], parts[1], tree.cut_vertex)
    raise PreconditionError(f"unknown node kind {tree.kind!r}")


def sum_decompose(d: Digraph) -> DecompositionTree:
    """Split a digraph along 0-sums, then 1-sums, recursively; leaves are
    strongly connected digraphs with no cut vertex."""
    zs = split_zero_sum(d)
    if zs is not None:
        return DecompositionTree(
            "zero-sum", d, tuple(sum_decompose(p) for p in zs)
        )
    os_ = split_one_sum(d)
    if os_ is not None:
        d1, d2, v = os_
        return DecompositionTree(
            "one-sum", d, (sum_decompose(d1), sum_decompose(d2)), cut_vertex=v
        )
    return DecompositionTree("leaf-digraph", d)


def check_part_min_edges(g: BipartiteGraph) -> bool:
    """Every trisum part carries at least 12 edges, with equality exactly
    for the cube; returns False on any violation."""
    if g.n_edges < 12:
        return False
    if g.n_edges == 12:
        return bipartite_isomorphic(g, cube())
    return True


# -- fixture: the trisum of three cubes ---------------------------------------


def trisum_of_three_cubes() -> tuple[BipartiteGraph, Matching]:
    """Three cubes glued along a shared central 4-circuit, seam edges
    deleted, with the perfect matching that pairs the seam vertices into the
    first cube and matches the other private faces internally."""
    seam_vs = ("u1", "u2", "u3", "u4")
    seam_ids = ("s1", "s2", "s3", "s4")
    seam = FourCircuit(seam_vs, seam_ids)
    seam_pairs = dict(zip(seam_ids, seam.pairs()))

    def cube_part(tag):
        side_a = ("u1", "u3", f"{tag}w2", f"{tag}w4")
        side_b = ("u2", "u4", f"{tag}w1", f"{tag}w3")
        edges = []
        for eid, (ea, eb) in seam_pairs.items():
            edges.append(Edge(eid, ea, eb))
        aset = set(side_a)
        for i in range(4):
            j = (i + 1) % 4 + 1
            pair = (f"{tag}w{i + 1}", f"{tag}w{j}")
            if pair[0] not in aset:
                pair = (pair[1], pair[0])
            edges.append(Edge(f"{tag}g{i + 1}", pair[0], pair[1]))
            rung = (f"u{i + 1}", f"{tag}w{i + 1}")
            if rung[0] not in aset:
                rung = (rung[1], rung[0])
            edges.append(Edge(f"{tag}r{i + 1}", rung[0], rung[1]))
        return BipartiteGraph(side_a, side_b, tuple(edges))

    g1, g2, g3 = cube_part("p"), cube_part("q"), cube_part("t")
    g = trisum(g1, g2, g3, seam)
    matching = Matching.of(
        ["pr1", "pr2", "pr3", "pr4", "qg1", "qg3", "tg1", "tg3"]
    )
    validate_matching(g, matching)
    return g, matching
