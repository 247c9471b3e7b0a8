"""Canonical forms and isomorphism for small digraphs and bipartite graphs.

Keys are exact: two graphs get equal keys iff they are isomorphic (as
directed multigraphs with loops, resp. two-sided multigraphs up to side
swap).  Completeness is structural: a key is itself an encoding of a
relabeling of the graph, so equal keys always mean isomorphic graphs.
Soundness comes from minimizing over a relabeling set that is invariant
under isomorphism.

Intended for desk-scale graphs; a size guard rejects anything larger.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .bipartite import BipartiteGraph
from .digraph import Digraph
from .errors import SizeGuardError

MAX_CANONICAL_VERTICES = 16

# permutations tried in the worst (fully symmetric) case
_PERM_CAP = 2_000_000


@lru_cache(maxsize=8)
def mask_perm_tables(n: int):
    """Per-permutation half-mask lookup tables over the n*n arc slots
    (slot of arc (t, h) is t*n + h); shared with the enumeration code."""
    nbits = n * n
    lo_bits = (nbits + 1) // 2
    tables = []
    for perm in itertools.permutations(range(n)):
        moved = [perm[s // n] * n + perm[s % n] for s in range(nbits)]
        lo = [0] * (1 << lo_bits)
        hi = [0] * (1 << (nbits - lo_bits))
        for s in range(lo_bits):
            bit = 1 << moved[s]
            step = 1 << s
            for base in range(0, 1 << lo_bits, step * 2):
                for m in range(base + step, base + step * 2):
                    lo[m] |= bit
        for s in range(lo_bits, nbits):
            bit = 1 << moved[s]
            step = 1 << (s - lo_bits)
            for base in range(0, 1 << (nbits - lo_bits), step * 2):
                for m in range(base + step, base + step * 2):
                    hi[m] |= bit
        tables.append((lo, hi))
    return tables, lo_bits, (1 << lo_bits) - 1


def mask_canonical(n: int, mask: int) -> int:
    """Orbit-minimum of an arc-slot mask under vertex relabeling."""
    tables, lo_bits, lo_mask = mask_perm_tables(n)
    best = mask
    lo_part = mask & lo_mask
    hi_part = mask >> lo_bits
    for lo, hi in tables:
        value = lo[lo_part] | hi[hi_part]
        if value < best:
            best = value
    return best


def _refine_colors(n, colors, out_nbrs, in_nbrs, loops):
    """Iterated degree refinement; returns a stable coloring (list of ints)."""
    while True:
        sigs = []
        for v in range(n):
            sigs.append((
                colors[v],
                loops[v],
                tuple(sorted(colors[w] for w in out_nbrs[v])),
                tuple(sorted(colors[w] for w in in_nbrs[v])),
            ))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _class_perms(colors):
    """All vertex orderings that list color classes in order, classes free inside."""
    n = len(colors)
    classes: dict = {}
    for v in range(n):
        classes.setdefault(colors[v], []).append(v)
    ordered = [classes[c] for c in sorted(classes)]
    total = 1
    for cl in ordered:
        for i in range(2, len(cl) + 1):
            total *= i
        if total > _PERM_CAP:
            raise SizeGuardError("too many symmetric labelings to canonicalize")
    for parts in itertools.product(*(itertools.permutations(cl) for cl in ordered)):
        order = [v for part in parts for v in part]
        # perm[v] = position of vertex v
        perm = [0] * n
        for pos, v in enumerate(order):
            perm[v] = pos
        yield perm


def canonical_form(d: Digraph) -> tuple:
    """Canonical key of a directed multigraph with loops."""
    n = d.n_vertices
    if n > MAX_CANONICAL_VERTICES:
        raise SizeGuardError(f"canonical_form guard: {n} vertices > {MAX_CANONICAL_VERTICES}")
    idx = {v: i for i, v in enumerate(d.vertices)}
    pairs = sorted((idx[a.tail], idx[a.head]) for a in d.arcs)
    if n <= 1 or not pairs:
        return (n, tuple(pairs))
    if n <= 5 and len(set(pairs)) == len(pairs):
        mask = 0
        for t, h in pairs:
            mask |= 1 << (t * n + h)
        return (n, mask_canonical(n, mask))
    return (n, _canon_general(n, pairs))


def _canon_general(n, pairs):
    out_nbrs = [[] for _ in range(n)]
    in_nbrs = [[] for _ in range(n)]
    loops = [0] * n
    for t, h in pairs:
        if t == h:
            loops[t] += 1
        else:
            out_nbrs[t].append(h)
            in_nbrs[h].append(t)
    colors = _refine_colors(n, [0] * n, out_nbrs, in_nbrs, loops)
    best = None
    for perm in _class_perms(colors):
        mapped = sorted((perm[t], perm[h]) for t, h in pairs)
        if best is None or mapped < best:
            best = mapped
    return tuple(best)


def isomorphic(d1: Digraph, d2: Digraph) -> bool:
    if d1.n_vertices != d2.n_vertices or d1.n_arcs != d2.n_arcs:
        return False
    return canonical_form(d1) == canonical_form(d2)


# -- bipartite ----------------------------------------------------------


def _matrix(g: BipartiteGraph):
    """Multiplicity matrix rows=side A, cols=side B."""
    ai = {v: i for i, v in enumerate(g.side_a)}
    bi = {v: i for i, v in enumerate(g.side_b)}
    rows = [[0] * len(g.side_b) for _ in g.side_a]
    for e in g.edges:
        rows[ai[e.a]][bi[e.b]] += 1
    return rows


def _canon_matrix(rows, q):
    """Min over column permutations (constrained to equal column signatures)
    of the row-sorted matrix."""
    p = len(rows)
    if p == 0 or q == 0:
        return tuple(tuple(r) for r in rows)
    col_sigs = []
    for j in range(q):
        col_sigs.append(tuple(sorted(rows[i][j] for i in range(p))))
    classes: dict = {}
    for j in range(q):
        classes.setdefault(col_sigs[j], []).append(j)
    ordered = [classes[s] for s in sorted(classes)]
    total = 1
    for cl in ordered:
        for i in range(2, len(cl) + 1):
            total *= i
        if total > _PERM_CAP:
            raise SizeGuardError("too many symmetric labelings to canonicalize")
    best = None
    for parts in itertools.product(*(itertools.permutations(cl) for cl in ordered)):
        cols = [j for part in parts for j in part]
        mapped = sorted(tuple(row[j] for j in cols) for row in rows)
        if best is None or mapped < best:
            best = mapped
    return tuple(best)


def bipartite_canonical_form(g: BipartiteGraph) -> tuple:
    """Canonical key of a two-sided multigraph, up to swapping the sides."""
    p, q = len(g.side_a), len(g.side_b)
    if max(p, q) > MAX_CANONICAL_VERTICES:
        raise SizeGuardError(f"bipartite canonical guard: side > {MAX_CANONICAL_VERTICES}")
    rows = _matrix(g)
    candidates = []
    if p <= q:
        candidates.append((p, q, rows))
    if q <= p:
        transposed = [[rows[i][j] for i in range(p)] for j in range(q)]
        candidates.append((q, p, transposed))
    keys = [(pp, qq, _canon_matrix(rs, qq)) for pp, qq, rs in candidates]
    return min(keys)


def bipartite_isomorphic(g1: BipartiteGraph, g2: BipartiteGraph) -> bool:
    if sorted((len(g1.side_a), len(g1.side_b))) != sorted((len(g2.side_a), len(g2.side_b))):
        return False
    if g1.n_edges != g2.n_edges:
        return False
    return bipartite_canonical_form(g1) == bipartite_canonical_form(g2)
