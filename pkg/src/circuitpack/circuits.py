"""Directed circuits, reachability, and strong connectivity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .budget import Budget
from .digraph import Digraph
from .errors import PreconditionError


@dataclass(frozen=True)
class Circuit:
    """A simple directed circuit.

    ``arcs[i]`` runs from ``vertices[i]`` to ``vertices[(i+1) % len]``; the
    rotation is normalized so ``arcs[0]`` is the smallest arc id.  A loop is
    a circuit of length 1, a digon has length 2.
    """

    arcs: tuple[str, ...]
    vertices: tuple[str, ...]

    def __len__(self):
        return len(self.arcs)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


def make_circuit(arcs: list, vertices: list) -> Circuit:
    k = min(range(len(arcs)), key=lambda i: arcs[i])
    return Circuit(
        tuple(arcs[k:] + arcs[:k]),
        tuple(vertices[k:] + vertices[:k]),
    )


def validate_circuit(d: Digraph, c: Circuit) -> None:
    if len(c.arcs) < 1 or len(c.arcs) != len(c.vertices):
        raise PreconditionError("circuit must have matching arc/vertex counts >= 1")
    if len(set(c.vertices)) != len(c.vertices):
        raise PreconditionError("circuit repeats a vertex")
    n = len(c.arcs)
    for i, aid in enumerate(c.arcs):
        a = d.arc_by_id.get(aid)
        if a is None:
            raise PreconditionError(f"circuit arc {aid!r} not in digraph")
        if a.tail != c.vertices[i] or a.head != c.vertices[(i + 1) % n]:
            raise PreconditionError(f"circuit arc {aid!r} does not match its vertices")


class CircuitList(list):
    """List of circuits; ``truncated`` is set when a cap stopped enumeration."""

    truncated: bool = False


def enumerate_circuits(d: Digraph, cap: int | None = None,
                       budget: Budget | None = None) -> CircuitList:
    """All simple directed circuits of ``d`` in a deterministic order.

    Each circuit appears exactly once (parallel arcs give distinct
    circuits).  If ``cap`` is reached, the list is cut short and flagged as
    truncated rather than failing.
    """
    rank = {v: i for i, v in enumerate(sorted(d.vertices))}
    sorted_out = {
        v: sorted(d.out_arcs[v], key=lambda a: (rank[a.head], a.id))
        for v in d.vertices
    }
    out = CircuitList()

    def walk(start, v, on_path, arcs, verts):
        if out.truncated:
            return
        if budget is not None:
            budget.spend()
        for a in sorted_out[v]:
            if out.truncated:
                return
            if a.head == start:
                out.append(make_circuit(arcs + [a.id], verts))
                if cap is not None and len(out) >= cap:
                    out.truncated = True
                    return
            elif rank[a.head] > rank[start] and a.head not in on_path:
                on_path.add(a.head)
                walk(start, a.head, on_path, arcs + [a.id], verts + [a.head])
                on_path.discard(a.head)

    for s in sorted(d.vertices, key=lambda v: rank[v]):
        if out.truncated:
            break
        walk(s, s, {s}, [], [s])
    result = CircuitList(sorted(out, key=lambda c: (len(c), c.arcs)))
    result.truncated = out.truncated
    return result


@lru_cache(maxsize=4096)
def all_circuits(d: Digraph) -> tuple:
    """Cached full circuit list (no cap) as a tuple."""
    return tuple(enumerate_circuits(d))


# -- strong connectivity ------------------------------------------------


def strongly_connected(d: Digraph) -> bool:
    """True iff every ordered vertex pair is joined by a directed path.

    Empty and single-vertex digraphs count as strongly connected.
    """
    n = d.n_vertices
    if n <= 1:
        return True
    start = d.vertices[0]
    for arcs in (d.out_arcs, d.in_arcs):
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for a in arcs[v]:
                w = a.head if arcs is d.out_arcs else a.tail
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            return False
    return True


def strongly_connected_components(d: Digraph) -> list[frozenset]:
    """SCCs as vertex sets, ordered by smallest member id."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = [0]

    def strong(v0):
        work = [(v0, iter(d.out_arcs[v0]))]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for a in it:
                w = a.head
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(d.out_arcs[w])))
                    advanced = True
                    break
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
            if not advanced:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    comps.append(frozenset(comp))

    for v in d.vertices:
        if v not in index:
            strong(v)
    return sorted(comps, key=lambda c: min(c))


def strongly_k_connected(d: Digraph, k: int) -> bool:
    """True iff deleting any vertex set of size at most k-1 leaves the
    digraph strongly connected."""
    if k < 1:
        raise PreconditionError(f"k must be >= 1, got {k}")
    verts = sorted(d.vertices)
    for size in range(0, k):
        if size > len(verts):
            break
        for t in combinations(verts, size):
            if not strongly_connected(d.delete_vertices(t)):
                return False
    return True


def reachability_closure(d: Digraph) -> dict:
    """Transitive closure as vertex -> frozenset of reachable vertices
    (excluding trivial self-reachability unless on a circuit).  Test oracle."""
    reach = {v: set(a.head for a in d.out_arcs[v]) for v in d.vertices}
    changed = True
    while changed:
        changed = False
        for v in d.vertices:
            add = set()
            for w in reach[v]:
                add |= reach[w]
            if not add <= reach[v]:
                reach[v] |= add
                changed = True
    return {v: frozenset(r) for v, r in reach.items()}
