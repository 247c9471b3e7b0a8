"""The contraction-minor order on digraphs and the two excluded obstructions.

Only special arcs may be contracted: an arc u->v is special when it is the
unique arc into v or the unique arc out of u (multiplicity counts; loops are
never special).  A digraph T is a minor of D when T arises from a subdigraph
of D by repeatedly contracting special arcs.

The obstruction search exploits that both obstruction families are simple
and loopless: a derivation reaching them never benefits from keeping loops,
parallel duplicates, or isolated vertices, so states are normalized by
dropping those, which keeps the memoized state space tiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .bipartite import perfect_matchings
from .budget import Budget, ensure_budget
from .canonical import canonical_form, mask_canonical
from .circuits import strongly_connected_components
from .digraph import Arc, Digraph
from .errors import InternalConsistencyError, PreconditionError
from .named_graphs import heawood
from .transform import dgm


def special_arcs(d: Digraph) -> frozenset:
    """Arc ids that are the unique arc into their head or out of their tail."""
    out = frozenset(
        a.id
        for a in d.arcs
        if a.tail != a.head and (d.in_degree(a.head) == 1 or d.out_degree(a.tail) == 1)
    )
    return out


def contract_special(d: Digraph, arc_id: str) -> Digraph:
    """Contract a special arc: identify its endpoints (the tail's name
    survives) and drop the arc; all other arcs are kept, so parallel arcs
    and loops may appear."""
    a = d.arc_by_id.get(arc_id)
    if a is None:
        raise PreconditionError(f"arc {arc_id!r} not in digraph")
    if a.tail == a.head:
        raise PreconditionError(f"cannot contract loop {arc_id!r}")
    if arc_id not in special_arcs(d):
        raise PreconditionError(f"arc {arc_id!r} is not special")
    u, v = a.tail, a.head
    verts = tuple(w for w in d.vertices if w != v)
    arcs = tuple(
        Arc(x.id, u if x.tail == v else x.tail, u if x.head == v else x.head)
        for x in d.arcs
        if x.id != arc_id
    )
    return Digraph(verts, arcs)


# -- obstruction constructors -------------------------------------------


def odd_double_circuit(k: int) -> Digraph:
    """Odd undirected circuit with every edge replaced by a digon."""
    if k < 3 or k % 2 == 0:
        raise PreconditionError(f"odd double circuit needs odd k >= 3, got {k}")
    vertices = tuple(str(i) for i in range(k))
    arcs = []
    for i in range(k):
        j = (i + 1) % k
        arcs.append(Arc(f"f{i}", str(i), str(j)))
        arcs.append(Arc(f"b{i}", str(j), str(i)))
    return Digraph(vertices, tuple(arcs))


@lru_cache(maxsize=1)
def fano_digraph() -> Digraph:
    """The 7-vertex, 14-arc obstruction: the Heawood graph with a perfect
    matching contracted (edges directed from side A to side B first).

    All perfect matchings give isomorphic digraphs; the lexicographically
    first one is used and the result is relabeled to vertices 0..6.
    """
    g = heawood()
    matchings = perfect_matchings(g)
    d = dgm(g, matchings[0])
    relabel = {v: str(i) for i, v in enumerate(d.vertices)}
    d = d.relabel(relabel)
    arcs = tuple(Arc(f"a{i}", a.tail, a.head) for i, a in enumerate(d.arcs))
    return Digraph(d.vertices, arcs)


@dataclass(frozen=True)
class MinorWitness:
    """A replayable minor derivation: keep a subdigraph of the host, then
    contract the listed arcs in order."""

    kept_vertices: tuple
    kept_arcs: tuple
    contractions: tuple
    image: Digraph

    def to_dict(self) -> dict:
        return {
            "kept_vertices": list(self.kept_vertices),
            "kept_arcs": list(self.kept_arcs),
            "contractions": list(self.contractions),
            "image": {
                "vertices": list(self.image.vertices),
                "arcs": [[a.id, a.tail, a.head] for a in self.image.arcs],
            },
        }


@dataclass(frozen=True)
class Obstruction:
    kind: str  # "odd-double-circuit" | "fano"
    k: int | None
    witness: MinorWitness

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k, "witness": self.witness.to_dict()}


def obstruction_digraph(kind: str, k: int | None = None) -> Digraph:
    if kind == "odd-double-circuit":
        return odd_double_circuit(k)
    if kind == "fano":
        return fano_digraph()
    raise PreconditionError(f"unknown obstruction kind {kind!r}")


def replay_witness(host: Digraph, witness: MinorWitness) -> Digraph:
    """Replay a witness against its host, validating every step."""
    kept_v = set(witness.kept_vertices)
    kept_a = set(witness.kept_arcs)
    if not kept_v <= host.vertex_set:
        raise PreconditionError("witness keeps vertices outside the host")
    for aid in kept_a:
        a = host.arc_by_id.get(aid)
        if a is None or a.tail not in kept_v or a.head not in kept_v:
            raise PreconditionError(f"witness keeps invalid arc {aid!r}")
    cur = Digraph(
        tuple(v for v in host.vertices if v in kept_v),
        tuple(a for a in host.arcs if a.id in kept_a),
    )
    for aid in witness.contractions:
        cur = contract_special(cur, aid)  # validates specialness at its turn
    return cur


def validate_witness(host: Digraph, target: Digraph, witness: MinorWitness) -> bool:
    image = replay_witness(host, witness)
    return canonical_form(image) == canonical_form(target)


# -- normalized reachability engine --------------------------------------

# Obstruction targets are simple and loopless.  Parallel duplicates, loops,
# and isolated vertices of a state can never appear in the image of such a
# derivation, and deleting them commutes with every other step, so states
# are kept in deletion normal form.

_MAX_ODC = 15
_ODC_KINDS = tuple(("odd-double-circuit", k) for k in range(3, _MAX_ODC + 1, 2))
_KINDS = _ODC_KINDS + (("fano", None),)
_KIND_BIT = {kind: 1 << i for i, kind in enumerate(_KINDS)}


def _odd_double_circuit_order(d: Digraph) -> int | None:
    """k when the (simple, loopless) digraph is the doubled odd k-circuit."""
    n = d.n_vertices
    if n < 3 or n % 2 == 0 or n > _MAX_ODC or d.n_arcs != 2 * n:
        return None
    pairs = {(a.tail, a.head) for a in d.arcs}
    if len(pairs) != 2 * n:
        return None
    if any((h, t) not in pairs for t, h in pairs):
        return None
    nbrs = {v: set() for v in d.vertices}
    for t, h in pairs:
        nbrs[t].add(h)
    if any(len(s) != 2 for s in nbrs.values()):
        return None
    # single undirected cycle through all vertices
    start = d.vertices[0]
    prev, cur = None, start
    for _ in range(n):
        nxt = [w for w in nbrs[cur] if w != prev]
        if not nxt:
            return None
        prev, cur = cur, nxt[0]
    return n if cur == start else None


@lru_cache(maxsize=1)
def _fano_key():
    return canonical_form(fano_digraph())


def _state_kind_bits(d: Digraph) -> int:
    k = _odd_double_circuit_order(d)
    if k is not None:
        return _KIND_BIT[("odd-double-circuit", k)]
    if d.n_vertices == 7 and d.n_arcs == 14 and canonical_form(d) == _fano_key():
        return _KIND_BIT[("fano", None)]
    return 0


def _normalize(d: Digraph) -> tuple[Digraph, list, list]:
    """Drop loops, parallel duplicates (smallest arc id survives) and
    isolated vertices.  Returns (digraph, deleted arc ids, deleted vertices)."""
    deleted_arcs = []
    seen_pairs = {}
    kept_arcs = []
    for a in sorted(d.arcs, key=lambda a: a.id):
        if a.tail == a.head:
            deleted_arcs.append(a.id)
        elif (a.tail, a.head) in seen_pairs:
            deleted_arcs.append(a.id)
        else:
            seen_pairs[(a.tail, a.head)] = a.id
            kept_arcs.append(a)
    kept_ids = {a.id for a in kept_arcs}
    arcs = tuple(a for a in d.arcs if a.id in kept_ids)
    touched = {a.tail for a in arcs} | {a.head for a in arcs}
    deleted_vertices = [v for v in d.vertices if v not in touched]
    verts = tuple(v for v in d.vertices if v in touched)
    return Digraph(verts, arcs), deleted_arcs, deleted_vertices


_kind_memo: dict = {}

# The decision search runs on plain arc-pair tuples over int vertices:
# states are simple and loopless by construction and isolated vertices
# cannot exist (vertices are implicit in the pairs).


def _to_state(d: Digraph) -> tuple:
    idx = {v: i for i, v in enumerate(sorted(d.vertices))}
    pairs = {(idx[a.tail], idx[a.head]) for a in d.arcs if a.tail != a.head}
    return tuple(sorted(pairs))


def _s_adj(pairs):
    out: dict = {}
    inc: dict = {}
    for t, h in pairs:
        out.setdefault(t, []).append(h)
        inc.setdefault(h, []).append(t)
        out.setdefault(h, [])
        inc.setdefault(t, [])
    return out, inc


def _s_scc(pairs):
    out, _ = _s_adj(pairs)
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    comps: list = []
    counter = [0]
    for v0 in out:
        if v0 in index:
            continue
        work = [(v0, iter(out[v0]))]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(out[w])))
                    advanced = True
                    break
                elif w in on_stack:
                    if index[w] < low[v]:
                        low[v] = index[w]
            if not advanced:
                work.pop()
                if work:
                    p = work[-1][0]
                    if low[v] < low[p]:
                        low[p] = low[v]
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    comps.append(comp)
    return comps


def _s_acyclic(pairs) -> bool:
    out, inc = _s_adj(pairs)
    indeg = {v: len(inc[v]) for v in out}
    queue = [v for v, d in indeg.items() if d == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == len(out)


def _s_digon_odd_girth(pairs) -> int | None:
    pset = set(pairs)
    nbrs: dict = {}
    for t, h in pairs:
        if t < h and (h, t) in pset:
            nbrs.setdefault(t, []).append(h)
            nbrs.setdefault(h, []).append(t)
    best = None
    for s in nbrs:
        dist = {s: 0}
        frontier = [s]
        depth = 0
        while frontier and (best is None or depth * 2 + 1 < best):
            nxt = []
            for v in frontier:
                for w in nbrs.get(v, ()):
                    if w not in dist:
                        dist[w] = depth + 1
                        nxt.append(w)
                    elif dist[w] == depth:
                        if best is None or 2 * depth + 1 < best:
                            best = 2 * depth + 1
            frontier = nxt
            depth += 1
    return best


def _s_one_vertex_transversal(pairs) -> bool:
    vertices = {t for t, _ in pairs} | {h for _, h in pairs}
    for v in vertices:
        if _s_acyclic(tuple(p for p in pairs if v not in p)):
            return True
    return False


def _s_special(pairs):
    out_deg: dict = {}
    in_deg: dict = {}
    for t, h in pairs:
        out_deg[t] = out_deg.get(t, 0) + 1
        in_deg[h] = in_deg.get(h, 0) + 1
    return [p for p in pairs if in_deg[p[1]] == 1 or out_deg[p[0]] == 1]


def _s_contract(pairs, pair):
    u, v = pair
    merged = set()
    for t, h in pairs:
        if (t, h) == pair:
            continue
        t2 = u if t == v else t
        h2 = u if h == v else h
        if t2 != h2:
            merged.add((t2, h2))
    return tuple(sorted(merged))


def _s_children(pairs):
    """Deterministic moves: contractions first, then single deletions."""
    moves = []
    for p in _s_special(pairs):
        moves.append((("contract", p), _s_contract(pairs, p)))
    for p in pairs:
        moves.append((("delete", p), tuple(q for q in pairs if q != p)))
    return moves


def _s_vertex_count(pairs) -> int:
    return len({t for t, _ in pairs} | {h for _, h in pairs})


def _s_canonical(pairs):
    verts = sorted({t for t, _ in pairs} | {h for _, h in pairs})
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    relabeled = sorted((idx[t], idx[h]) for t, h in pairs)
    if n <= 5:
        mask = 0
        for t, h in relabeled:
            mask |= 1 << (t * n + h)
        return (n, mask_canonical(n, mask))
    from .canonical import _canon_general

    return (n, _canon_general(n, relabeled))


def _s_odc_order(pairs) -> int | None:
    verts = {t for t, _ in pairs} | {h for _, h in pairs}
    n = len(verts)
    if n < 3 or n % 2 == 0 or n > _MAX_ODC or len(pairs) != 2 * n:
        return None
    pset = set(pairs)
    if any((h, t) not in pset for t, h in pairs):
        return None
    nbrs: dict = {}
    for t, h in pairs:
        nbrs.setdefault(t, set()).add(h)
    if any(len(s) != 2 for s in nbrs.values()):
        return None
    start = next(iter(verts))
    prev, cur = None, start
    for _ in range(n):
        nxt = [w for w in nbrs[cur] if w != prev]
        if not nxt:
            return None
        prev, cur = cur, nxt[0]
    return n if cur == start else None


@lru_cache(maxsize=1)
def _fano_state_key():
    return _s_canonical(_to_state(fano_digraph()))


def _s_kind_bits(pairs) -> int:
    k = _s_odc_order(pairs)
    if k is not None:
        return _KIND_BIT[("odd-double-circuit", k)]
    if _s_vertex_count(pairs) == 7 and len(pairs) == 14 and _s_canonical(pairs) == _fano_state_key():
        return _KIND_BIT[("fano", None)]
    return 0


def _kind_reach_state(pairs, kind, budget: Budget) -> bool:
    if kind[0] == "fano":
        min_arcs, min_verts = 14, 7
    elif kind[1] is None:
        min_arcs, min_verts = 6, 3
    else:
        min_arcs, min_verts = 2 * kind[1], kind[1]
    if len(pairs) < min_arcs or _s_acyclic(pairs):
        return False
    comps = _s_scc(pairs)
    if len(comps) > 1:
        for comp in comps:
            if len(comp) >= min_verts:
                sub = tuple(p for p in pairs if p[0] in comp and p[1] in comp)
                if _kind_reach_state(sub, kind, budget):
                    return True
        return False
    if len(comps[0]) < min_verts:
        return False
    if kind[0] == "odd-double-circuit":
        girth = _s_digon_odd_girth(pairs)
        if girth is not None and (kind[1] is None or girth == kind[1]):
            return True
    if _s_one_vertex_transversal(pairs):
        return False
    key = (_s_canonical(pairs), kind)
    hit = _kind_memo.get(key)
    if hit is not None:
        return hit
    budget.spend()
    if kind[1] is None and kind[0] == "odd-double-circuit":
        found = _s_odc_order(pairs) is not None
    else:
        found = bool(_s_kind_bits(pairs) & _KIND_BIT[kind])
    if not found:
        for _, child in _s_children(pairs):
            if _kind_reach_state(child, kind, budget):
                found = True
                break
    _kind_memo[key] = found
    return found


def _kind_reach(d: Digraph, kind, budget: Budget) -> bool:
    """Is the obstruction ``kind`` (or, with k None, any doubled odd
    circuit) a minor of the digraph?"""
    return _kind_reach_state(_to_state(d), kind, budget)


def _state_children(d: Digraph):
    """Deterministic move list on concrete digraphs for witness walks:
    contractions first, then deletions, both normalized."""
    moves = []
    for aid in sorted(special_arcs(d)):
        child, _, _ = _normalize(contract_special(d, aid))
        moves.append((("contract", aid), child))
    for a in sorted(d.arcs, key=lambda a: a.id):
        child, _, _ = _normalize(d.delete_arcs([a.id]))
        moves.append((("delete", a.id), child))
    return moves


def _reconstruct(host: Digraph, kind, budget: Budget) -> MinorWitness:
    """Walk the memoized reachability table to a concrete witness."""
    bit = _KIND_BIT[kind]
    deleted_arcs: set = set()
    deleted_vertices: set = set()
    contractions: list = []
    # arcs contracted inside the blob that a surviving vertex name stands for
    blob_arcs: dict = {v: set() for v in host.vertices}
    blob_vertices: dict = {v: {v} for v in host.vertices}

    cur, del_a, del_v = _normalize(host)
    deleted_arcs.update(del_a)
    for v in del_v:
        deleted_vertices.update(blob_vertices[v])
        deleted_arcs.update(blob_arcs[v])
    while not _s_kind_bits(_to_state(cur)) & bit:
        for move, child in _state_children(cur):
            if _kind_reach(child, kind, budget):
                break
        else:
            raise InternalConsistencyError("reachability table lost the target")
        op, aid = move
        if op == "delete":
            nxt = cur.delete_arcs([aid])
            deleted_arcs.add(aid)
        else:
            a = cur.arc_by_id[aid]
            nxt = contract_special(cur, aid)
            contractions.append(aid)
            blob_arcs[a.tail] = blob_arcs[a.tail] | blob_arcs[a.head] | {aid}
            blob_vertices[a.tail] = blob_vertices[a.tail] | blob_vertices[a.head]
        cur, del_a, del_v = _normalize(nxt)
        deleted_arcs.update(del_a)
        for v in del_v:
            deleted_vertices.update(blob_vertices[v])
            deleted_arcs.update(blob_arcs[v])
            contractions = [c for c in contractions if c not in blob_arcs[v]]
    kept_vertices = tuple(v for v in host.vertices if v not in deleted_vertices)
    kept_arcs = tuple(a.id for a in host.arcs if a.id not in deleted_arcs)
    witness = MinorWitness(kept_vertices, kept_arcs, tuple(contractions), cur)
    image = replay_witness(host, witness)
    if not _s_kind_bits(_to_state(image)) & bit:
        raise InternalConsistencyError("reconstructed witness failed to replay")
    return witness


def find_obstruction(d: Digraph, budget: Budget | None = None) -> Obstruction | None:
    """Smallest odd double circuit (ascending k) or the 7-vertex obstruction
    occurring as a minor, with a replayable witness; None when obstruction-free."""
    budget = ensure_budget(budget)
    state = _to_state(d)
    for kind in _KINDS:
        if kind[0] == "odd-double-circuit" and kind[1] > d.n_vertices:
            continue
        if kind[0] == "fano" and (d.n_vertices < 7 or d.n_arcs < 14):
            continue
        if _kind_reach_state(state, kind, budget):
            witness = _reconstruct(d, kind, budget)
            return Obstruction(kind[0], kind[1], witness)
    return None


def has_odd_double_circuit_minor(d: Digraph, budget: Budget | None = None) -> bool:
    """Does any doubled odd circuit occur as a minor?"""
    budget = ensure_budget(budget)
    return _kind_reach_state(_to_state(d), ("odd-double-circuit", None), budget)


# -- general minor test ---------------------------------------------------

_no_contract_path: set = set()


def _contract_search(state: Digraph, depth: int, target_key, budget: Budget, path: list):
    """DFS over contraction orders; returns True with ``path`` filled in.
    Only failures are memoized (successes end the search)."""
    if depth == 0:
        return canonical_form(state) == target_key
    skey = (canonical_form(state), depth, target_key)
    if skey in _no_contract_path:
        return False
    budget.spend()
    for aid in sorted(special_arcs(state)):
        path.append(aid)
        if _contract_search(contract_special(state, aid), depth - 1, target_key, budget, path):
            return True
        path.pop()
    _no_contract_path.add(skey)
    return False


def is_minor(target: Digraph, host: Digraph, budget: Budget | None = None) -> MinorWitness | None:
    """Exact minor test: search over kept subdigraphs and contraction
    sequences.  Returns a replayable witness, or None."""
    from itertools import combinations

    budget = ensure_budget(budget)
    nt, mt = target.n_vertices, target.n_arcs
    nh, mh = host.n_vertices, host.n_arcs
    if nt > nh or mt > mh:
        return None
    target_key = canonical_form(target)
    arc_ids = sorted(a.id for a in host.arcs)
    vert_ids = sorted(host.vertices)
    for k in range(0, min(nh - nt, mh - mt) + 1):
        for combo in combinations(arc_ids, mt + k):
            keep = set(combo)
            arcs = tuple(a for a in host.arcs if a.id in keep)
            touched = {a.tail for a in arcs} | {a.head for a in arcs}
            if len(touched) > nt + k:
                continue
            extra = [v for v in vert_ids if v not in touched][: nt + k - len(touched)]
            if len(touched) + len(extra) != nt + k:
                continue
            kept_set = touched | set(extra)
            kept = Digraph(
                tuple(v for v in host.vertices if v in kept_set), arcs
            )
            budget.spend()
            path: list = []
            if _contract_search(kept, k, target_key, budget, path):
                partial = MinorWitness(
                    tuple(kept.vertices), tuple(a.id for a in arcs), tuple(path), target
                )
                image = replay_witness(host, partial)
                witness = MinorWitness(
                    partial.kept_vertices, partial.kept_arcs, partial.contractions, image
                )
                if not validate_witness(host, target, witness):
                    raise InternalConsistencyError("minor witness failed to replay")
                return witness
    return None
