"""Directed multigraphs with loops, and their text/JSON/DOT encodings.

The text format is line based::

    # comment
    v <name>
    e <name> <tail> <head>

Vertex and arc order is the declaration order and survives a
serialize/parse round trip unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import ParseError


class Arc(NamedTuple):
    id: str
    tail: str
    head: str


def _check_name(kind: str, name: str) -> str:
    if not isinstance(name, str) or not name or any(c.isspace() for c in name):
        raise ParseError(f"invalid {kind} name {name!r}: must be a non-empty token")
    return name


@dataclass(frozen=True)
class Digraph:
    """An immutable directed multigraph; loops and parallel arcs allowed."""

    vertices: tuple[str, ...]
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        # id-token validity is checked at the parse/build boundary; the
        # structural invariants are re-checked on every construction
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise ParseError("duplicate vertex id")
        ids = {a.id for a in self.arcs}
        if len(ids) != len(self.arcs):
            raise ParseError("duplicate arc id")
        for a in self.arcs:
            if a.tail not in seen or a.head not in seen:
                raise ParseError(f"arc {a.id!r} has undeclared endpoint")

    @staticmethod
    def build(vertices: Iterable[str], arcs: Iterable[tuple[str, str, str]]) -> "Digraph":
        vertices = tuple(vertices)
        arc_tuple = tuple(Arc(*a) for a in arcs)
        for v in vertices:
            _check_name("vertex", v)
        for a in arc_tuple:
            _check_name("arc", a.id)
        return Digraph(vertices, arc_tuple)

    # -- derived views -------------------------------------------------

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    @cached_property
    def arc_by_id(self) -> Mapping[str, Arc]:
        return {a.id: a for a in self.arcs}

    @cached_property
    def out_arcs(self) -> Mapping[str, tuple[Arc, ...]]:
        out = {v: [] for v in self.vertices}
        for a in self.arcs:
            out[a.tail].append(a)
        return {v: tuple(arcs) for v, arcs in out.items()}

    @cached_property
    def in_arcs(self) -> Mapping[str, tuple[Arc, ...]]:
        inc = {v: [] for v in self.vertices}
        for a in self.arcs:
            inc[a.head].append(a)
        return {v: tuple(arcs) for v, arcs in inc.items()}

    def out_degree(self, v: str) -> int:
        return len(self.out_arcs[v])

    def in_degree(self, v: str) -> int:
        return len(self.in_arcs[v])

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    # -- structural edits (all return new values) ----------------------

    def delete_arcs(self, arc_ids) -> "Digraph":
        drop = set(arc_ids)
        return Digraph(self.vertices, tuple(a for a in self.arcs if a.id not in drop))

    def keep_arcs(self, arc_ids, drop_isolated: bool = False) -> "Digraph":
        """Subdigraph on the given arcs; optionally drop vertices left isolated."""
        keep = set(arc_ids)
        arcs = tuple(a for a in self.arcs if a.id in keep)
        if drop_isolated:
            touched = {a.tail for a in arcs} | {a.head for a in arcs}
            verts = tuple(v for v in self.vertices if v in touched)
        else:
            verts = self.vertices
        return Digraph(verts, arcs)

    def delete_vertices(self, vs) -> "Digraph":
        drop = set(vs)
        verts = tuple(v for v in self.vertices if v not in drop)
        arcs = tuple(a for a in self.arcs if a.tail not in drop and a.head not in drop)
        return Digraph(verts, arcs)

    def induced(self, vs) -> "Digraph":
        keep = set(vs)
        verts = tuple(v for v in self.vertices if v in keep)
        arcs = tuple(a for a in self.arcs if a.tail in keep and a.head in keep)
        return Digraph(verts, arcs)

    def relabel(self, mapping: Mapping[str, str]) -> "Digraph":
        verts = tuple(mapping.get(v, v) for v in self.vertices)
        arcs = tuple(
            Arc(a.id, mapping.get(a.tail, a.tail), mapping.get(a.head, a.head))
            for a in self.arcs
        )
        return Digraph(verts, arcs)

    def is_acyclic(self) -> bool:
        """True iff the digraph has no directed circuit (loops count)."""
        indeg = {v: 0 for v in self.vertices}
        for a in self.arcs:
            if a.tail == a.head:
                return False
            indeg[a.head] += 1
        queue = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for a in self.out_arcs[v]:
                indeg[a.head] -= 1
                if indeg[a.head] == 0:
                    queue.append(a.head)
        return seen == self.n_vertices


EMPTY_DIGRAPH = Digraph((), ())


# -- text format -------------------------------------------------------


def parse_digraph(text: str) -> Digraph:
    vertices: list[str] = []
    arcs: list[Arc] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "v" and len(parts) == 2:
            vertices.append(parts[1])
        elif parts[0] == "e" and len(parts) == 4:
            arcs.append(Arc(parts[1], parts[2], parts[3]))
        else:
            raise ParseError(f"line {lineno}: malformed digraph line {raw!r}")
    return Digraph(tuple(vertices), tuple(arcs))


def serialize_digraph(d: Digraph) -> str:
    lines = [f"v {v}" for v in d.vertices]
    lines += [f"e {a.id} {a.tail} {a.head}" for a in d.arcs]
    return "\n".join(lines) + ("\n" if lines else "")


def digraph_to_json(d: Digraph) -> str:
    payload = {
        "vertices": list(d.vertices),
        "arcs": [[a.id, a.tail, a.head] for a in d.arcs],
    }
    return json.dumps(payload, sort_keys=True)


def digraph_from_json(text: str) -> Digraph:
    try:
        payload = json.loads(text)
        vertices = payload["vertices"]
        arcs = payload["arcs"]
        return Digraph.build(vertices, [tuple(a) for a in arcs])
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad digraph JSON: {exc}") from exc


def digraph_to_dot(d: Digraph) -> str:
    lines = ["digraph G {"]
    for v in d.vertices:
        lines.append(f'  "{v}";')
    for a in d.arcs:
        lines.append(f'  "{a.tail}" -> "{a.head}" [label="{a.id}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
