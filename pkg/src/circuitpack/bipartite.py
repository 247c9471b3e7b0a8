"""Two-sided multigraphs, matchings, and their encodings.

Text format::

    a <name>        # vertex on side A
    b <name>        # vertex on side B
    e <name> <endA> <endB>
    m <name>        # flag edge <name> as matched

Parallel edges are allowed; loops are impossible by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import ParseError, PreconditionError


class Edge(NamedTuple):
    id: str
    a: str
    b: str


def _check_name(kind, name):
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise ParseError(f"invalid {kind} name {name!r}: must be a non-empty token")
    return name


@dataclass(frozen=True)
class BipartiteGraph:
    side_a: tuple[str, ...]
    side_b: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        # id-token validity is checked at the parse/build boundary
        seen_a = set(self.side_a)
        seen_b = set(self.side_b)
        if len(seen_a) != len(self.side_a) or len(seen_b) != len(self.side_b) or seen_a & seen_b:
            raise ParseError("duplicate vertex id")
        ids = {e.id for e in self.edges}
        if len(ids) != len(self.edges):
            raise ParseError("duplicate edge id")
        for e in self.edges:
            if e.a not in seen_a or e.b not in seen_b:
                raise ParseError(f"edge {e.id!r} must join side A to side B")

    @staticmethod
    def build(side_a, side_b, edges) -> "BipartiteGraph":
        side_a = tuple(side_a)
        side_b = tuple(side_b)
        edge_tuple = tuple(Edge(*e) for e in edges)
        for v in side_a + side_b:
            _check_name("vertex", v)
        for e in edge_tuple:
            _check_name("edge", e.id)
        return BipartiteGraph(side_a, side_b, edge_tuple)

    @cached_property
    def vertices(self) -> tuple[str, ...]:
        return self.side_a + self.side_b

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def edge_by_id(self) -> Mapping[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> Mapping[str, tuple[Edge, ...]]:
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.a].append(e)
            inc[e.b].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def degree(self, v: str) -> int:
        return len(self.incident[v])

    def side_of(self, v: str) -> str:
        if v in self._aset:
            return "a"
        if v in self._bset:
            return "b"
        raise KeyError(v)

    @cached_property
    def _aset(self) -> frozenset:
        return frozenset(self.side_a)

    @cached_property
    def _bset(self) -> frozenset:
        return frozenset(self.side_b)

    @property
    def n_vertices(self) -> int:
        return len(self.side_a) + len(self.side_b)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def other_end(self, e: Edge, v: str) -> str:
        return e.b if v == e.a else e.a

    # -- structural edits ----------------------------------------------

    def delete_vertices(self, vs) -> "BipartiteGraph":
        drop = set(vs)
        return BipartiteGraph(
            tuple(v for v in self.side_a if v not in drop),
            tuple(v for v in self.side_b if v not in drop),
            tuple(e for e in self.edges if e.a not in drop and e.b not in drop),
        )

    def delete_edges(self, edge_ids) -> "BipartiteGraph":
        drop = set(edge_ids)
        return BipartiteGraph(
            self.side_a, self.side_b, tuple(e for e in self.edges if e.id not in drop)
        )

    def keep_edges(self, edge_ids, drop_isolated: bool = False) -> "BipartiteGraph":
        keep = set(edge_ids)
        edges = tuple(e for e in self.edges if e.id in keep)
        if drop_isolated:
            touched = {e.a for e in edges} | {e.b for e in edges}
            return BipartiteGraph(
                tuple(v for v in self.side_a if v in touched),
                tuple(v for v in self.side_b if v in touched),
                edges,
            )
        return BipartiteGraph(self.side_a, self.side_b, edges)

    def relabel(self, mapping: Mapping[str, str]) -> "BipartiteGraph":
        return BipartiteGraph(
            tuple(mapping.get(v, v) for v in self.side_a),
            tuple(mapping.get(v, v) for v in self.side_b),
            tuple(Edge(e.id, mapping.get(e.a, e.a), mapping.get(e.b, e.b)) for e in self.edges),
        )

    def is_connected(self) -> bool:
        if self.n_vertices <= 1:
            return True
        start = self.vertices[0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self.incident[v]:
                w = self.other_end(e, v)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n_vertices

    def components(self) -> list[frozenset]:
        """Connected components as vertex sets, ordered by first vertex."""
        seen = set()
        comps = []
        for v0 in self.vertices:
            if v0 in seen:
                continue
            comp = {v0}
            stack = [v0]
            while stack:
                v = stack.pop()
                for e in self.incident[v]:
                    w = self.other_end(e, v)
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps


EMPTY_BIPARTITE = BipartiteGraph((), (), ())


@dataclass(frozen=True)
class Matching:
    """A set of pairwise non-adjacent edges of a host bipartite graph."""

    edges: frozenset

    @staticmethod
    def of(edge_ids) -> "Matching":
        return Matching(frozenset(edge_ids))

    def __len__(self):
        return len(self.edges)

    def __contains__(self, edge_id):
        return edge_id in self.edges


def validate_matching(g: BipartiteGraph, m: Matching) -> None:
    used = set()
    for eid in m.edges:
        e = g.edge_by_id.get(eid)
        if e is None:
            raise PreconditionError(f"matching edge {eid!r} not in graph")
        if e.a in used or e.b in used:
            raise PreconditionError(f"matching edges share vertex at {eid!r}")
        used.add(e.a)
        used.add(e.b)


def is_perfect(g: BipartiteGraph, m: Matching) -> bool:
    validate_matching(g, m)
    covered = set()
    for eid in m.edges:
        e = g.edge_by_id[eid]
        covered.add(e.a)
        covered.add(e.b)
    return covered == g.vertex_set


# -- matching machinery ------------------------------------------------


def max_matching(g: BipartiteGraph) -> dict:
    """Maximum matching as a dict A-vertex -> edge, by augmenting paths."""
    match_a: dict = {}
    match_b: dict = {}

    def augment(a, seen_b):
        for e in g.incident[a]:
            b = e.b
            if b in seen_b:
                continue
            seen_b.add(b)
            if b not in match_b or augment(match_b[b].a, seen_b):
                match_a[a] = e
                match_b[b] = e
                return True
        return False

    for a in g.side_a:
        augment(a, set())
    return match_a


def has_perfect_matching(g: BipartiteGraph) -> bool:
    if len(g.side_a) != len(g.side_b):
        return False
    return len(max_matching(g)) == len(g.side_a)


def perfect_matching_or_none(g: BipartiteGraph) -> Matching | None:
    if len(g.side_a) != len(g.side_b):
        return None
    m = max_matching(g)
    if len(m) != len(g.side_a):
        return None
    return Matching.of(e.id for e in m.values())


class MatchingList(list):
    """List of matchings; ``truncated`` is set when a cap stopped enumeration."""

    truncated: bool = False


def perfect_matchings(g: BipartiteGraph, cap: int | None = None) -> MatchingList:
    """All perfect matchings in lexicographic order of sorted edge-id tuples.

    Hits of ``cap`` are flagged via ``.truncated``, not raised.
    """
    out = MatchingList()
    if len(g.side_a) != len(g.side_b):
        return out
    if not g.side_a:
        out.append(Matching.of(()))
        return out
    order = sorted(g.side_a)

    def extend(i, used_b, chosen):
        if out.truncated:
            return
        if i == len(order):
            out.append(Matching.of(chosen))
            if cap is not None and len(out) >= cap:
                out.truncated = True
            return
        a = order[i]
        for e in sorted(g.incident[a], key=lambda e: e.id):
            if e.b not in used_b:
                used_b.add(e.b)
                chosen.append(e.id)
                extend(i + 1, used_b, chosen)
                chosen.pop()
                used_b.discard(e.b)
                if out.truncated:
                    return

    extend(0, set(), [])
    result = MatchingList(sorted(out, key=lambda m: tuple(sorted(m.edges))))
    result.truncated = out.truncated
    return result


# -- undirected cycles -------------------------------------------------


@dataclass(frozen=True)
class Cycle:
    """A simple cycle: edge ids in traversal order, vertex i between edges i-1 and i."""

    edges: tuple[str, ...]
    vertices: tuple[str, ...]

    def __len__(self):
        return len(self.edges)


def _rotate_cycle(edges: list, vertices: list) -> Cycle:
    # canonical form: start at the smallest edge id, in the direction that
    # makes the successor edge id smaller (fixes traversal orientation)
    n = len(edges)
    best = None
    for start in range(n):
        for step in (1, -1):
            es = tuple(edges[(start + i * step) % n] for i in range(n))
            if step == 1:
                vs = tuple(vertices[(start + i) % n] for i in range(n))
            else:
                vs = tuple(vertices[(start + 1 - i) % n] for i in range(n))
            if best is None or es < best[0]:
                best = (es, vs)
    return Cycle(best[0], best[1])


def enumerate_cycles(g: BipartiteGraph, length: int | None = None) -> list[Cycle]:
    """All simple cycles (length 2 = parallel edge pair), deterministic order."""
    order = {v: i for i, v in enumerate(sorted(g.vertices))}
    found = {}

    def extend(start, v, used_vertices, used_edges, edges, vertices):
        for e in sorted(g.incident[v], key=lambda e: e.id):
            if e.id in used_edges:
                continue
            w = g.other_end(e, v)
            if w == start and len(edges) >= 1:
                cyc = _rotate_cycle(edges + [e.id], vertices)
                if length is None or len(cyc) == length:
                    found.setdefault(frozenset(cyc.edges), cyc)
                continue
            if w in used_vertices or order[w] <= order[start]:
                continue
            if length is not None and len(edges) + 1 >= length:
                continue
            extend(start, w, used_vertices | {w}, used_edges | {e.id},
                   edges + [e.id], vertices + [w])

    for start in sorted(g.vertices, key=lambda v: order[v]):
        extend(start, start, {start}, set(), [], [start])
    return sorted(found.values(), key=lambda c: (len(c), c.edges))


# -- text format -------------------------------------------------------


def parse_bipartite(text: str) -> tuple[BipartiteGraph, Matching]:
    side_a: list[str] = []
    side_b: list[str] = []
    edges: list[Edge] = []
    matched: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "a" and len(parts) == 2:
            side_a.append(parts[1])
        elif parts[0] == "b" and len(parts) == 2:
            side_b.append(parts[1])
        elif parts[0] == "e" and len(parts) == 4:
            edges.append(Edge(parts[1], parts[2], parts[3]))
        elif parts[0] == "m" and len(parts) == 2:
            matched.append(parts[1])
        else:
            raise ParseError(f"line {lineno}: malformed bipartite line {raw!r}")
    g = BipartiteGraph(tuple(side_a), tuple(side_b), tuple(edges))
    m = Matching.of(matched)
    for eid in matched:
        if eid not in g.edge_by_id:
            raise ParseError(f"matched edge {eid!r} not declared")
    validate_matching(g, m)
    return g, m


def serialize_bipartite(g: BipartiteGraph, matching: Matching | None = None) -> str:
    lines = [f"a {v}" for v in g.side_a]
    lines += [f"b {v}" for v in g.side_b]
    lines += [f"e {e.id} {e.a} {e.b}" for e in g.edges]
    if matching is not None:
        lines += [f"m {eid}" for eid in sorted(matching.edges)]
    return "\n".join(lines) + ("\n" if lines else "")


def bipartite_to_json(g: BipartiteGraph, matching: Matching | None = None) -> str:
    payload = {
        "side_a": list(g.side_a),
        "side_b": list(g.side_b),
        "edges": [[e.id, e.a, e.b] for e in g.edges],
    }
    if matching is not None:
        payload["matching"] = sorted(matching.edges)
    return json.dumps(payload, sort_keys=True)


def bipartite_from_json(text: str) -> tuple[BipartiteGraph, Matching]:
    try:
        payload = json.loads(text)
        g = BipartiteGraph.build(
            payload["side_a"], payload["side_b"], [tuple(e) for e in payload["edges"]]
        )
        m = Matching.of(payload.get("matching", []))
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad bipartite JSON: {exc}") from exc
    validate_matching(g, m)
    return g, m


def bipartite_to_dot(g: BipartiteGraph, matching: Matching | None = None) -> str:
    matched = matching.edges if matching is not None else frozenset()
    lines = ["graph G {"]
    for v in g.side_a:
        lines.append(f'  "{v}" [shape=box];')
    for v in g.side_b:
        lines.append(f'  "{v}" [shape=ellipse];')
    for e in g.edges:
        style = ', style=bold' if e.id in matched else ""
        lines.append(f'  "{e.a}" -- "{e.b}" [label="{e.id}"{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
