"""Exhaustive enumeration of small graphs up to isomorphism, and seeded
random samplers, for the verification harness.

Multiplicity convention: parallel duplicates of an arc (or a loop) change
neither packing values nor the special-arc minor order, so exhaustive
digraph sweeps run over multiplicity-at-most-one digraphs with loops, and
bipartite sweeps over simple bipartite graphs.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

from .bipartite import BipartiteGraph, Edge
from .canonical import bipartite_canonical_form, mask_canonical, mask_perm_tables
from .digraph import Arc, Digraph


def digraph_slots(n: int) -> list:
    return [(t, h) for t in range(n) for h in range(n)]


def mask_to_digraph(n: int, mask: int) -> Digraph:
    slots = digraph_slots(n)
    vertices = tuple(str(i) for i in range(n))
    arcs = []
    for s, (t, h) in enumerate(slots):
        if mask >> s & 1:
            arcs.append(Arc(f"a{t}.{h}", str(t), str(h)))
    return Digraph(vertices, tuple(arcs))


@lru_cache(maxsize=32)
def digraph_classes(max_vertices: int, max_arcs: int | None = None) -> tuple:
    """All isomorphism classes of digraphs with at most the given number of
    vertices (and arcs), one representative each, in deterministic order.
    Parallel arcs are inert for everything the harness verifies and are not
    enumerated; loops are."""
    if max_vertices > 4:
        raise ValueError("exhaustive python enumeration is kept to <= 4 vertices")
    out = []
    for n in range(0, max_vertices + 1):
        nbits = n * n
        for mask in range(1 << nbits):
            if max_arcs is not None and mask.bit_count() > max_arcs:
                continue
            if n > 0 and mask_canonical(n, mask) != mask:
                continue
            out.append(mask_to_digraph(n, mask))
    return tuple(out)


@lru_cache(maxsize=4)
def five_vertex_class_masks(max_arcs: int | None = None) -> tuple:
    """Orbit-minimum masks of all 5-vertex digraph classes, via vectorized
    minimum over the 120 relabelings."""
    import numpy as np

    n = 5
    nbits = 25
    tables, lo_bits, lo_mask = mask_perm_tables(n)
    total = 1 << nbits
    chunk = 1 << 22
    reps = []
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        masks = np.arange(start, stop, dtype=np.uint32)
        canon = masks.copy()
        lo_part = masks & np.uint32(lo_mask)
        hi_part = masks >> np.uint32(lo_bits)
        for lo, hi in tables:
            lo_arr = np.asarray(lo, dtype=np.uint32)
            hi_arr = np.asarray(hi, dtype=np.uint32)
            np.minimum(canon, lo_arr[lo_part] | hi_arr[hi_part], out=canon)
        sel = canon == masks
        if max_arcs is not None:
            counts = np.zeros(stop - start, dtype=np.uint8)
            tmp = masks.copy()
            for _ in range(nbits):
                counts += (tmp & 1).astype(np.uint8)
                tmp >>= np.uint32(1)
            sel &= counts <= max_arcs
        reps.extend(int(m) for m in masks[sel])
    return tuple(reps)


def sample_digraphs(n_vertices: int, count: int, seed: int, max_arcs: int = 12) -> list:
    """Seeded random digraphs on a fixed vertex count (loops allowed, no
    parallel arcs)."""
    rng = random.Random(seed)
    slots = digraph_slots(n_vertices)
    out = []
    for _ in range(count):
        k = rng.randint(0, min(max_arcs, len(slots)))
        chosen = sorted(rng.sample(range(len(slots)), k))
        mask = 0
        for s in chosen:
            mask |= 1 << s
        out.append(mask_to_digraph(n_vertices, mask))
    return out


def planar_digraph_samples(count: int, seed: int, min_vertices: int = 4,
                           max_vertices: int = 8, max_arcs: int = 14) -> list:
    """Seeded random digraphs whose underlying graphs are planar."""
    from .planarity import planar

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(min_vertices, max_vertices)
        slots = digraph_slots(n)
        k = rng.randint(1, min(max_arcs, len(slots)))
        chosen = sorted(rng.sample(range(len(slots)), k))
        mask = 0
        for s in chosen:
            mask |= 1 << s
        d = mask_to_digraph(n, mask)
        if planar(d):
            out.append(d)
    return out


# -- bipartite enumeration ---------------------------------------------------


def _high_prefix(q: int, d: int) -> int:
    return ((1 << q) - 1) ^ ((1 << (q - d)) - 1)


def _row_sorted_matrices(p: int, q: int, min_deg: int):
    """Row tuples (bitmasks over q columns) in non-increasing order with
    every row degree >= min_deg; the first row is normalized to a suffix of
    high bits (always achievable by permuting columns).  Column degrees are
    pruned to reach min_deg."""
    if p == 0:
        yield ()
        return
    all_rows = [m for m in range((1 << q) - 1, 0, -1) if m.bit_count() >= min_deg]

    def colsum_ok(colsums, remaining):
        return all(c + remaining >= min_deg for c in colsums)

    def rec(rows, colsums):
        if len(rows) == p:
            if all(c >= min_deg for c in colsums):
                yield tuple(rows)
            return
        remaining = p - len(rows) - 1
        bound = rows[-1]
        for m in all_rows:
            if m > bound:
                continue
            new = list(colsums)
            for j in range(q):
                if m >> j & 1:
                    new[j] += 1
            if not colsum_ok(new, remaining):
                continue
            rows.append(m)
            yield from rec(rows, new)
            rows.pop()

    for d in range(max(min_deg, 1), q + 1):
        first = _high_prefix(q, d)
        colsums = [first >> j & 1 for j in range(q)]
        if colsum_ok(colsums, p - 1):
            yield from rec([first], colsums)


def _weak_form(rows, q) -> tuple:
    """Cheap deterministic normal form under row/column permutations.

    Not canonical (isomorphic matrices may map to a few distinct forms) but
    always a member of the same class, so distinct classes never collide;
    used to collapse duplicates before exact canonicalization.
    """
    rows = sorted(rows, reverse=True)
    for _ in range(4):
        cols = []
        for j in range(q):
            bits = 0
            for i, r in enumerate(rows):
                if r >> j & 1:
                    bits |= 1 << i
            cols.append((bits.bit_count(), bits, j))
        cols.sort(key=lambda t: (-t[0], -t[1]))
        perm = [j for _, _, j in cols]
        new_rows = sorted(
            (sum(((r >> j) & 1) << k for k, j in enumerate(perm)) for r in rows),
            reverse=True,
        )
        if new_rows == rows:
            break
        rows = new_rows
    return tuple(rows)


def _matrix_connected(rows, q) -> bool:
    p = len(rows)
    if p == 0:
        return True
    seen_rows = {0}
    seen_cols = 0
    frontier = [0]
    while frontier:
        i = frontier.pop()
        new_cols = rows[i] & ~seen_cols
        seen_cols |= new_cols
        for j in range(q):
            if new_cols >> j & 1:
                for i2 in range(p):
                    if i2 not in seen_rows and rows[i2] >> j & 1:
                        seen_rows.add(i2)
                        frontier.append(i2)
    return len(seen_rows) == p and seen_cols == (1 << q) - 1


def _matrix_pm(rows) -> tuple | None:
    """One perfect matching as a column index per row, else None."""
    p = len(rows)

    def assign(i, used):
        if i == p:
            return []
        m = rows[i] & ~used
        while m:
            bit = m & -m
            m ^= bit
            j = bit.bit_length() - 1
            rest = assign(i + 1, used | bit)
            if rest is not None:
                return [j] + rest
        return None

    if not p:
        return ()
    result = assign(0, 0)
    return tuple(result) if result is not None else None


def matrix_to_bipartite(rows, q, tag: str = "") -> BipartiteGraph:
    p = len(rows)
    side_a = tuple(f"{tag}x{i}" for i in range(p))
    side_b = tuple(f"{tag}y{j}" for j in range(q))
    edges = []
    for i in range(p):
        for j in range(q):
            if rows[i] >> j & 1:
                edges.append(Edge(f"{tag}e{i}.{j}", f"{tag}x{i}", f"{tag}y{j}"))
    return BipartiteGraph(side_a, side_b, tuple(edges))


@lru_cache(maxsize=8)
def connected_pm_bipartite_classes(max_vertices: int) -> tuple:
    """Connected simple bipartite graphs with a perfect matching, up to
    isomorphism, with at most the given number of vertices."""
    out = []
    seen = set()
    for p in range(1, max_vertices // 2 + 1):
        weak_seen = set()
        for raw in _row_sorted_matrices(p, p, 1):
            rows = _weak_form(raw, p)
            if rows in weak_seen:
                continue
            weak_seen.add(rows)
            if not _matrix_connected(rows, p):
                continue
            if _matrix_pm(rows) is None:
                continue
            g = matrix_to_bipartite(rows, p)
            key = bipartite_canonical_form(g)
            if key in seen:
                continue
            seen.add(key)
            out.append(g)
    return tuple(out)


@lru_cache(maxsize=8)
def pm_bipartite_classes(max_vertices: int) -> tuple:
    """All simple bipartite graphs with a perfect matching up to
    isomorphism: connected classes plus multiset disjoint unions."""
    connected = connected_pm_bipartite_classes(max_vertices)
    out = [BipartiteGraph((), (), ())]  # the empty graph has the empty matching
    out.extend(connected)
    seen = set(bipartite_canonical_form(g) for g in out)

    def unions(min_index, budget_vertices, parts):
        if len(parts) > 1:
            side_a = tuple(f"u{i}.{v}" for i, g in enumerate(parts) for v in g.side_a)
            side_b = tuple(f"u{i}.{v}" for i, g in enumerate(parts) for v in g.side_b)
            edges = tuple(
                Edge(f"u{i}.{e.id}", f"u{i}.{e.a}", f"u{i}.{e.b}")
                for i, g in enumerate(parts)
                for e in g.edges
            )
            u = BipartiteGraph(side_a, side_b, edges)
            key = bipartite_canonical_form(u)
            if key not in seen:
                seen.add(key)
                out.append(u)
        for i in range(min_index, len(connected)):
            g = connected[i]
            if g.n_vertices <= budget_vertices:
                unions(i, budget_vertices - g.n_vertices, parts + [g])

    unions(0, max_vertices, [])
    return tuple(out)


# -- braces -------------------------------------------------------------------


def _dgm_masks(rows, q, pm_cols):
    """Out-neighbour bitmasks of the matching-contracted digraph."""
    p = len(rows)
    out = []
    for i in range(p):
        mask = 0
        for j in range(p):
            if j != i and rows[i] >> pm_cols[j] & 1:
                mask |= 1 << j
        out.append(mask)
    return out


def _mask_strongly_connected(out_masks, alive: int) -> bool:
    n_alive = alive.bit_count()
    if n_alive <= 1:
        return True
    start = (alive & -alive).bit_length() - 1
    for masks in (out_masks, None):
        if masks is None:
            masks = [0] * len(out_masks)
            for i in range(len(out_masks)):
                if not alive >> i & 1:
                    continue
                m = out_masks[i] & alive
                for j in range(len(out_masks)):
                    if m >> j & 1:
                        masks[j] |= 1 << i
        reached = 1 << start
        frontier = 1 << start
        while frontier:
            i = (frontier & -frontier).bit_length() - 1
            frontier ^= 1 << i
            new = masks[i] & alive & ~reached
            reached |= new
            frontier |= new
        if reached != alive:
            return False
    return True


def _prefilter_brace(rows, q) -> bool:
    """Cheap necessary screen: the matching-contracted digraph must stay
    strongly connected after deleting any single vertex (confirmed against
    the extendability definition downstream)."""
    pm = _matrix_pm(rows)
    if pm is None:
        return False
    out_masks = _dgm_masks(rows, q, pm)
    p = len(rows)
    full = (1 << p) - 1
    if not _mask_strongly_connected(out_masks, full):
        return False
    for i in range(p):
        if not _mask_strongly_connected(out_masks, full ^ (1 << i)):
            return False
    return True


@lru_cache(maxsize=8)
def brace_classes(max_vertices: int) -> tuple:
    """All braces (connected 2-extendable simple bipartite graphs, at least
    two vertices per side) up to isomorphism, within the vertex bound.

    Candidates on six or more vertices are generated with the classical
    minimum-degree-3 property of 2-extendable graphs and screened by the
    contracted-digraph connectivity test; every survivor is confirmed
    against the extendability definition.
    """
    from .matching import is_brace

    out = []
    seen = set()
    for p in range(2, max_vertices // 2 + 1):
        min_deg = 3 if p >= 3 else 2
        weak_seen = set()
        for raw in _row_sorted_matrices(p, p, min_deg):
            rows = _weak_form(raw, p)
            if rows in weak_seen:
                continue
            weak_seen.add(rows)
            if not _prefilter_brace(rows, p):
                continue
            if not _matrix_connected(rows, p):
                continue
            g = matrix_to_bipartite(rows, p)
            key = bipartite_canonical_form(g)
            if key in seen:
                continue
            seen.add(key)
            if is_brace(g):
                out.append(g)
    return tuple(out)
