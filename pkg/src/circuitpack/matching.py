"""Matching-side structure: extendability, braces, alternating circuits,
central circuits, and even-subdivision containment."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bipartite import (
    BipartiteGraph,
    Cycle,
    Matching,
    enumerate_cycles,
    has_perfect_matching,
    is_perfect,
    perfect_matchings,
)
from .budget import Budget, ensure_budget
from .errors import InternalConsistencyError, PreconditionError
from .named_graphs import cube, heawood, k33
from .solvers import SolveResult
from .transform import dgm

__all__ = [
    "k_extendable",
    "is_brace",
    "central_circuits",
    "alternating_cycles",
    "alternating_nu",
    "alternating_tau",
    "ContainmentWitness",
    "contains",
    "contains_k33",
    "contains_heawood",
    "perfect_matchings",
    "heawood",
    "k33",
    "cube",
]


def k_extendable(g: BipartiteGraph, k: int) -> bool:
    """Every matching of size at most k extends to a perfect matching."""
    if k < 0:
        raise PreconditionError(f"k must be >= 0, got {k}")
    if not has_perfect_matching(g):
        return False
    edges = sorted(g.edges, key=lambda e: e.id)

    def extendable(matched_vertices):
        return has_perfect_matching(g.delete_vertices(matched_vertices))

    def grow(start, used, room):
        # checks every matching of size <= k once (edges in index order),
        # testing extendability at each prefix
        if room == 0:
            return True
        for i in range(start, len(edges)):
            e = edges[i]
            if e.a in used or e.b in used:
                continue
            covered = used | {e.a, e.b}
            if not extendable(covered):
                return False
            if not grow(i + 1, covered, room - 1):
                return False
        return True

    return grow(0, frozenset(), k)


def is_brace(g: BipartiteGraph) -> bool:
    """Connected, 2-extendable, with at least two vertices per side.

    Tiny degenerate graphs (a single edge) are excluded by convention.
    """
    if len(g.side_a) < 2 or len(g.side_b) < 2:
        return False
    return g.is_connected() and k_extendable(g, 2)


def central_circuits(g: BipartiteGraph, length: int) -> list[Cycle]:
    """Cycles of the given length whose vertex-deleted remainder still has
    a perfect matching (the empty remainder counts)."""
    return [
        c for c in enumerate_cycles(g, length)
        if has_perfect_matching(g.delete_vertices(c.vertices))
    ]


# -- alternating circuits ---------------------------------------------------


def alternating_cycles(g: BipartiteGraph, m: Matching) -> list[Cycle]:
    """Cycles alternating between matching and non-matching edges."""
    if not is_perfect(g, m):
        raise PreconditionError("alternating circuits need a perfect matching")
    partner = {}
    for eid in m.edges:
        e = g.edge_by_id[eid]
        partner[e.a] = e
        partner[e.b] = e
    rank = {v: i for i, v in enumerate(sorted(g.vertices))}
    out: list[Cycle] = []

    def walk(start, v, need_matched, used, edges, verts):
        for e in sorted(g.incident[v], key=lambda e: e.id):
            if (e.id in m.edges) != need_matched:
                continue
            w = g.other_end(e, v)
            if w == start and not need_matched:
                out.append(Cycle(tuple(edges + [e.id]), tuple(verts)))
                continue
            if w in used or rank[w] <= rank[start]:
                continue
            walk(start, w, not need_matched, used | {w}, edges + [e.id], verts + [w])

    for s in sorted(g.vertices, key=lambda v: rank[v]):
        # normalize: every alternating cycle through its smallest vertex
        # starts with that vertex's matching edge
        walk(s, s, True, {s}, [], [s])
    # each cycle is found once: the direction is fixed by starting on the
    # matched edge at the smallest vertex
    return sorted(out, key=lambda c: (len(c), c.edges))


def alternating_nu(g: BipartiteGraph, m: Matching, budget: Budget | None = None) -> SolveResult:
    """Max pairwise vertex-disjoint alternating circuits, computed natively
    and cross-checked against the contracted digraph."""
    from .solvers import nu

    cycles = alternating_cycles(g, m)
    bit = {v: 1 << i for i, v in enumerate(sorted(g.vertices))}
    masks = []
    for c in cycles:
        mask = 0
        for v in c.vertices:
            mask |= bit[v]
        masks.append(mask)
    best = [0]
    chosen_best: list = []

    def dfs(i, used, chosen):
        if len(chosen) > best[0]:
            best[0] = len(chosen)
            chosen_best[:] = chosen
        if len(chosen) + sum(1 for j in range(i, len(cycles)) if not masks[j] & used) <= best[0]:
            return
        for j in range(i, len(cycles)):
            if not masks[j] & used:
                dfs(j + 1, used | masks[j], chosen + [j])

    dfs(0, 0, [])
    check = nu(dgm(g, m), budget).value
    if check != best[0]:
        raise InternalConsistencyError(
            f"alternating packing {best[0]} != contracted digraph packing {check}"
        )
    return SolveResult(best[0], tuple(cycles[j] for j in chosen_best), 0)


def alternating_tau(g: BipartiteGraph, m: Matching, budget: Budget | None = None) -> SolveResult:
    """Min number of edges whose deletion leaves no alternating circuit,
    cross-checked against the contracted digraph."""
    from .solvers import tau

    cycles = alternating_cycles(g, m)
    esets = [frozenset(c.edges) for c in cycles]
    if not esets:
        result = 0
    else:
        best = [len(set().union(*esets))]

        def disjoint_lb(removed):
            used = set(removed)
            count = 0
            for s in esets:
                if not s & used:
                    used |= s
                    count += 1
            return count

        seen: dict = {}

        def dfs(removed, size):
            first = None
            for s in esets:
                if not s & removed:
                    first = s
                    break
            if first is None:
                best[0] = min(best[0], size)
                return
            if size + disjoint_lb(removed) >= best[0]:
                return
            prev = seen.get(removed)
            if prev is not None and prev <= size:
                return
            seen[removed] = size
            for eid in sorted(first):
                dfs(removed | {eid}, size + 1)

        dfs(frozenset(), 0)
        result = best[0]
    check = tau(dgm(g, m), budget).value
    if check != result:
        raise InternalConsistencyError(
            f"alternating transversal {result} != contracted digraph transversal {check}"
        )
    # lexicographically least optimal edge set
    edge_ids = sorted(e.id for e in g.edges)
    cert = None
    for combo in combinations(edge_ids, result):
        removed = frozenset(combo)
        if all(s & removed for s in esets):
            cert = removed
            break
    return SolveResult(result, cert if cert is not None else frozenset(), 0)


# -- even-subdivision containment -------------------------------------------


@dataclass(frozen=True)
class ContainmentWitness:
    """An even subdivision of the target embedded in the host with a
    perfectly matchable complement."""

    branch_map: tuple  # (target vertex, host vertex) pairs
    paths: tuple  # (target edge id, tuple of host edge ids) pairs
    used_vertices: tuple
    complement_matching: Matching

    def to_dict(self) -> dict:
        return {
            "branch_map": {t: h for t, h in self.branch_map},
            "paths": {eid: list(p) for eid, p in self.paths},
            "used_vertices": list(self.used_vertices),
            "complement_matching": sorted(self.complement_matching.edges),
        }


def _edge_processing_order(h: BipartiteGraph) -> list:
    """Edges ordered so each new edge touches already-seen vertices when
    possible; isolated target vertices go last."""
    remaining = sorted(h.edges, key=lambda e: e.id)
    placed: set = set()
    order = []
    while remaining:
        best_i = 0
        best_key = None
        for i, e in enumerate(remaining):
            known = (e.a in placed) + (e.b in placed)
            key = (-known, -(h.degree(e.a) + h.degree(e.b)), e.id)
            if best_key is None or key < best_key:
                best_key = key
                best_i = i
        e = remaining.pop(best_i)
        placed.add(e.a)
        placed.add(e.b)
        order.append(e)
    return order


def contains(g: BipartiteGraph, h: BipartiteGraph, budget: Budget | None = None) -> ContainmentWitness | None:
    """Does the host have a subgraph that is an even subdivision of the
    target, with the rest of the host perfectly matchable?

    Both side assignments of the target onto the host are tried.  The
    witness maps target edges to odd-length internally disjoint host paths.
    """
    budget = ensure_budget(budget)
    if h.n_vertices > g.n_vertices or h.n_edges > g.n_edges:
        return None
    if (g.n_vertices - h.n_vertices) % 2 != 0:
        # an even subdivision changes the vertex count by an even amount
        # and a perfect matching needs an even complement
        return None
    for d in range(3, max((h.degree(v) for v in h.vertices), default=0) + 1):
        need = sum(1 for v in h.vertices if h.degree(v) >= d)
        have = sum(1 for v in g.vertices if g.degree(v) >= d)
        if have < need:
            return None
    from .planarity import planar

    if not planar(h) and planar(g):
        # a subdivision of a nonplanar graph cannot sit inside a planar one
        return None
    if g is h or (g.side_a == h.side_a and g.side_b == h.side_b and g.edges == h.edges):
        # the whole host is its own even subdivision; the empty complement
        # has the empty perfect matching
        return ContainmentWitness(
            tuple((v, v) for v in g.vertices),
            tuple((e.id, (e.id,)) for e in g.edges),
            tuple(g.vertices),
            Matching.of(()),
        )
    edge_order = _edge_processing_order(h)
    isolated_h = [v for v in h.vertices if h.degree(v) == 0]

    for swap in (False, True):
        side_of_h = {}
        for v in h.side_a:
            side_of_h[v] = "b" if swap else "a"
        for v in h.side_b:
            side_of_h[v] = "a" if swap else "b"
        host_side = {v: "a" for v in g.side_a}
        host_side.update({v: "b" for v in g.side_b})

        placed: dict = {}
        used: set = set()
        paths: dict = {}

        def candidates(hv):
            side = side_of_h[hv]
            pool = g.side_a if side == "a" else g.side_b
            need = h.degree(hv)
            return [w for w in sorted(pool) if w not in used and g.degree(w) >= need]

        def route(idx) -> ContainmentWitness | None:
            budget.spend()
            if idx == len(edge_order):
                return finish()
            e = edge_order[idx]
            u, v = e.a, e.b
            if u not in placed and v not in placed:
                for gu in candidates(u):
                    placed[u] = gu
                    used.add(gu)
                    res = route(idx)
                    if res is not None:
                        return res
                    used.discard(gu)
                    del placed[u]
                return None
            if u not in placed:
                u, v = v, u
            # walk from placed[u] toward v (placed or to be placed)
            target_vertex = placed.get(v)

            def walk(x, interior):
                budget.spend()
                incident = sorted(
                    g.incident[x],
                    key=lambda f: (g.other_end(f, x) != target_vertex, f.id),
                )
                for f in incident:
                    y = g.other_end(f, x)
                    path = interior + [f.id]
                    if target_vertex is not None:
                        if y == target_vertex:
                            paths[e.id] = tuple(path)
                            res = route(idx + 1)
                            if res is not None:
                                return res
                            del paths[e.id]
                            continue
                    else:
                        if (
                            y not in used
                            and side_of_h[v] == host_side[y]
                            and g.degree(y) >= h.degree(v)
                        ):
                            placed[v] = y
                            used.add(y)
                            paths[e.id] = tuple(path)
                            res = route(idx + 1)
                            if res is not None:
                                return res
                            del paths[e.id]
                            used.discard(y)
                            del placed[v]
                    if y not in used and y not in placed.values():
                        used.add(y)
                        res = walk(y, path)
                        if res is not None:
                            return res
                        used.discard(y)
                return None

            return walk(placed[u], [])

        def finish() -> ContainmentWitness | None:
            # place isolated target vertices, then test the complement
            free_a = [w for w in sorted(g.side_a) if w not in used]
            free_b = [w for w in sorted(g.side_b) if w not in used]
            iso_a = [v for v in isolated_h if side_of_h[v] == "a"]
            iso_b = [v for v in isolated_h if side_of_h[v] == "b"]
            if len(iso_a) > len(free_a) or len(iso_b) > len(free_b):
                return None
            for pick_a in combinations(free_a, len(iso_a)):
                for pick_b in combinations(free_b, len(iso_b)):
                    covered = used | set(pick_a) | set(pick_b)
                    rest = g.delete_vertices(covered)
                    if len(rest.side_a) != len(rest.side_b):
                        continue
                    from .bipartite import perfect_matching_or_none

                    pm = perfect_matching_or_none(rest)
                    if pm is None:
                        continue
                    branch = dict(zip(iso_a, pick_a)) | dict(zip(iso_b, pick_b))
                    branch.update(placed)
                    all_used = sorted(covered)
                    return ContainmentWitness(
                        tuple(sorted(branch.items())),
                        tuple(sorted(paths.items())),
                        tuple(all_used),
                        pm,
                    )
            return None

        res = route(0)
        if res is not None:
            return res
    return None


def contains_k33(g: BipartiteGraph, budget: Budget | None = None) -> bool:
    return contains(g, k33(), budget) is not None


def contains_heawood(g: BipartiteGraph, budget: Budget | None = None) -> bool:
    return contains(g, heawood(), budget) is not None


def validate_containment(g: BipartiteGraph, h: BipartiteGraph, w: ContainmentWitness) -> bool:
    """Replay a containment witness: parity, disjointness, complement."""
    branch = dict(w.branch_map)
    if len(set(branch.values())) != len(branch):
        return False
    used = set()
    for t, hv in branch.items():
        used.add(hv)
    path_of = dict(w.paths)
    if set(path_of) != {e.id for e in h.edges}:
        return False
    interior_seen = set()
    for e in h.edges:
        path = path_of[e.id]
        if len(path) % 2 != 1:
            return False
        x = branch[e.a]
        verts = [x]
        for eid in path:
            edge = g.edge_by_id.get(eid)
            if edge is None:
                return False
            if x not in (edge.a, edge.b):
                return False
            x = g.other_end(edge, x)
            verts.append(x)
        if x != branch[e.b]:
            return False
        inner = verts[1:-1]
        for v in inner:
            if v in branch.values() or v in interior_seen:
                return False
        interior_seen.update(inner)
    rest = g.delete_vertices(set(w.used_vertices))
    return is_perfect(rest, w.complement_matching)
