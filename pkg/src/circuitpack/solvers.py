"""Exact solvers: circuit packing, transversals, weighted and arc variants,
and the hereditary packing-equality property.

All solvers are branch-and-bound searches over the full circuit list,
return byte-reproducible certificates (lexicographically least among the
optima), and never return an unproven answer: running out of budget raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .budget import Budget, ensure_budget
from .canonical import MAX_CANONICAL_VERTICES, canonical_form
from .circuits import Circuit, all_circuits, strongly_connected_components, validate_circuit
from .digraph import Digraph
from .errors import PreconditionError
from .minors import Obstruction, find_obstruction


@dataclass(frozen=True)
class SolveResult:
    value: int
    certificate: object  # tuple[Circuit] for packings, frozenset for transversals
    nodes: int
    optimal: bool = True

    def to_dict(self) -> dict:
        if isinstance(self.certificate, frozenset):
            cert = {"kind": "transversal", "vertices": sorted(self.certificate)}
        else:
            cert = {
                "kind": "packing",
                "circuits": [
                    {"arcs": list(c.arcs), "vertices": list(c.vertices)}
                    for c in self.certificate
                ],
            }
        return {
            "value": self.value,
            "certificate": cert,
            "optimal": self.optimal,
            "stats": {"nodes": self.nodes},
        }


def validate_packing(d: Digraph, circuits) -> None:
    used = set()
    for c in circuits:
        validate_circuit(d, c)
        if used & c.vertex_set:
            raise PreconditionError("packing circuits share a vertex")
        used |= c.vertex_set
    return None


def validate_transversal(d: Digraph, vertices) -> None:
    for v in vertices:
        if v not in d.vertex_set:
            raise PreconditionError(f"transversal vertex {v!r} not in digraph")
    if not d.delete_vertices(vertices).is_acyclic():
        raise PreconditionError("vertex set does not meet every circuit")


# -- unweighted values (memoized) ----------------------------------------

_values_memo: dict = {}


def _nu_value_search(circuit_masks, nodes) -> int:
    m = len(circuit_masks)
    best = 0
    # greedy incumbent
    used = 0
    for mask in circuit_masks:
        if not used & mask:
            used |= mask
            best += 1

    def compatible(i, used):
        return sum(1 for j in range(i, m) if not circuit_masks[j] & used)

    def dfs(i, used, count):
        nonlocal best
        nodes[0] += 1
        if count > best:
            best = count
        if count + compatible(i, used) <= best:
            return
        for j in range(i, m):
            if not circuit_masks[j] & used:
                dfs(j + 1, used | circuit_masks[j], count + 1)

    dfs(0, 0, 0)
    return best


def _tau_value_search(circuit_vsets, nodes) -> int:
    if not circuit_vsets:
        return 0
    all_vertices = frozenset().union(*circuit_vsets)

    def greedy_cover():
        uncovered = list(circuit_vsets)
        size = 0
        while uncovered:
            counts: dict = {}
            for vs in uncovered:
                for v in vs:
                    counts[v] = counts.get(v, 0) + 1
            pick = min(counts, key=lambda v: (-counts[v], v))
            uncovered = [vs for vs in uncovered if pick not in vs]
            size += 1
        return size

    best = greedy_cover()

    def disjoint_lb(removed):
        used = set(removed)
        count = 0
        for vs in circuit_vsets:
            if not vs & used:
                used |= vs
                count += 1
        return count

    seen: dict = {}

    def dfs(removed, size):
        nonlocal best
        nodes[0] += 1
        if size >= best:
            return
        prev = seen.get(removed)
        if prev is not None and prev <= size:
            return
        seen[removed] = size
        first = None
        for vs in circuit_vsets:
            if not vs & removed:
                first = vs
                break
        if first is None:
            best = size
            return
        if size + disjoint_lb(removed) >= best:
            return
        for v in sorted(first):
            dfs(removed | {v}, size + 1)

    dfs(frozenset(), 0)
    return best


def _circuit_data(d: Digraph):
    circuits = all_circuits(d)
    bit = {v: 1 << i for i, v in enumerate(sorted(d.vertices))}
    masks = []
    for c in circuits:
        m = 0
        for v in c.vertices:
            m |= bit[v]
        masks.append(m)
    return circuits, masks


def solver_values(d: Digraph) -> tuple[int, int]:
    """(max packing, min transversal) values; memoized by canonical form."""
    key = None
    if d.n_vertices <= MAX_CANONICAL_VERTICES:
        key = canonical_form(d)
        hit = _values_memo.get(key)
        if hit is not None:
            return hit
    circuits, masks = _circuit_data(d)
    nodes = [0]
    nu_v = _nu_value_search(masks, nodes)
    tau_v = _tau_value_search([c.vertex_set for c in circuits], nodes)
    assert nu_v <= tau_v, "packing exceeded transversal: solver bug"
    if key is not None:
        _values_memo[key] = (nu_v, tau_v)
    return nu_v, tau_v


def nu(d: Digraph, budget: Budget | None = None) -> SolveResult:
    """Maximum number of pairwise vertex-disjoint circuits, with the
    lexicographically least optimal packing as certificate."""
    circuits, masks = _circuit_data(d)
    nodes = [0]
    target = _nu_value_search(masks, nodes)
    m = len(circuits)
    chosen: list = []

    def compatible(i, used):
        return sum(1 for j in range(i, m) if not masks[j] & used)

    def first_packing(i, used, count):
        nodes[0] += 1
        if count == target:
            return True
        if count + compatible(i, used) < target:
            return False
        for j in range(i, m):
            if not masks[j] & used:
                chosen.append(j)
                if first_packing(j + 1, used | masks[j], count + 1):
                    return True
                chosen.pop()
        return False

    first_packing(0, 0, 0)
    cert = tuple(circuits[j] for j in chosen)
    validate_packing(d, cert)
    return SolveResult(target, cert, nodes[0])


def tau(d: Digraph, budget: Budget | None = None) -> SolveResult:
    """Minimum vertex set meeting every circuit, with the lexicographically
    least optimal transversal as certificate."""
    circuits, _ = _circuit_data(d)
    nodes = [0]
    target = _tau_value_search([c.vertex_set for c in circuits], nodes)
    cert = None
    for combo in combinations(sorted(d.vertices), target):
        nodes[0] += 1
        if d.delete_vertices(combo).is_acyclic():
            cert = frozenset(combo)
            break
    assert cert is not None
    validate_transversal(d, cert)
    return SolveResult(target, cert, nodes[0])


# -- weighted (vertex) variants -------------------------------------------


def _check_vertex_weights(d: Digraph, w: dict) -> None:
    for v in d.vertices:
        if v not in w:
            raise PreconditionError(f"weight missing for vertex {v!r}")
        if not isinstance(w[v], int) or w[v] < 0:
            raise PreconditionError(f"weight of {v!r} must be a nonnegative integer")


def nu_weighted(d: Digraph, w: dict, budget: Budget | None = None) -> SolveResult:
    """Largest circuit family where every vertex v lies on at most w(v)
    members (circuits may repeat)."""
    _check_vertex_weights(d, w)
    circuits = [c for c in all_circuits(d) if all(w[v] > 0 for v in c.vertices)]
    nodes = [0]
    m = len(circuits)

    def maxmult(c, caps):
        return min(caps[v] for v in c.vertices)

    def upper(i, caps):
        total = 0
        min_len = None
        cap_sum = 0
        touched = set()
        for j in range(i, m):
            mm = maxmult(circuits[j], caps)
            if mm > 0:
                total += mm
                if min_len is None or len(circuits[j]) < min_len:
                    min_len = len(circuits[j])
                touched |= circuits[j].vertex_set
        if min_len is None:
            return 0
        cap_sum = sum(caps[v] for v in touched)
        return min(total, cap_sum // min_len)

    best = [0]

    def dfs(i, caps, count):
        nodes[0] += 1
        if count > best[0]:
            best[0] = count
        if i == m or count + upper(i, caps) <= best[0]:
            return
        mm = maxmult(circuits[i], caps)
        for t in range(mm, -1, -1):
            if t:
                caps2 = dict(caps)
                for v in circuits[i].vertices:
                    caps2[v] -= t
            else:
                caps2 = caps
            dfs(i + 1, caps2, count + t)

    caps0 = {v: w[v] for v in d.vertices}
    dfs(0, caps0, 0)
    target = best[0]

    # certificate search mirrors the value search, largest multiplicities first
    chosen: list = []

    def first_cert(i, caps, count):
        nodes[0] += 1
        if count == target:
            return True
        if i == m or count + upper(i, caps) < target:
            return False
        mm = maxmult(circuits[i], caps)
        for t in range(mm, -1, -1):
            if t:
                caps2 = dict(caps)
                for v in circuits[i].vertices:
                    caps2[v] -= t
            else:
                caps2 = caps
            for _ in range(t):
                chosen.append(i)
            if first_cert(i + 1, caps2, count + t):
                return True
            for _ in range(t):
                chosen.pop()
        return False

    first_cert(0, caps0, 0)
    cert = tuple(circuits[j] for j in chosen)
    return SolveResult(target, cert, nodes[0])


def tau_weighted(d: Digraph, w: dict, budget: Budget | None = None) -> SolveResult:
    """Minimum total weight of a vertex set whose removal kills every circuit."""
    _check_vertex_weights(d, w)
    circuits = all_circuits(d)
    nodes = [0]
    vsets = [c.vertex_set for c in circuits]
    if not vsets:
        return SolveResult(0, frozenset(), 0)

    def min_weight_on(vs):
        return min(w[v] for v in vs)

    def disjoint_lb(removed):
        used = set(removed)
        total = 0
        for vs in vsets:
            if not vs & used:
                used |= vs
                total += min_weight_on(vs)
        return total

    best = [sum(w[v] for v in set().union(*vsets))]
    seen: dict = {}

    def dfs(removed, weight):
        nodes[0] += 1
        first = None
        for vs in vsets:
            if not vs & removed:
                first = vs
                break
        if first is None:
            if weight < best[0]:
                best[0] = weight
            return
        if weight + disjoint_lb(removed) >= best[0]:
            return
        prev = seen.get(removed)
        if prev is not None and prev <= weight:
            return
        seen[removed] = weight
        for v in sorted(first):
            dfs(removed | {v}, weight + w[v])

    dfs(frozenset(), 0)
    target = best[0]

    verts = sorted(d.vertices)
    found: list = []

    def lex_subsets(prefix, start, weight):
        nodes[0] += 1
        if weight == target and d.delete_vertices(prefix).is_acyclic():
            found.append(frozenset(prefix))
            return True
        for i in range(start, len(verts)):
            wv = weight + w[verts[i]]
            if wv > target:
                continue
            prefix.append(verts[i])
            if lex_subsets(prefix, i + 1, wv):
                return True
            prefix.pop()
        return False

    lex_subsets([], 0, 0)
    cert = found[0]
    validate_transversal(d, cert)
    return SolveResult(target, cert, nodes[0])


# -- arc-weighted variants -------------------------------------------------


def _check_arc_weights(d: Digraph, w: dict) -> None:
    for a in d.arcs:
        if a.id not in w:
            raise PreconditionError(f"weight missing for arc {a.id!r}")
        if not isinstance(w[a.id], int) or w[a.id] < 0:
            raise PreconditionError(f"weight of arc {a.id!r} must be a nonnegative integer")


def nu_edge(d: Digraph, w: dict, budget: Budget | None = None) -> int:
    """Max circuit family where every arc e carries at most w(e) members."""
    _check_arc_weights(d, w)
    circuits = [c for c in all_circuits(d) if all(w[a] > 0 for a in c.arcs)]
    m = len(circuits)

    def maxmult(c, caps):
        return min(caps[a] for a in c.arcs)

    def upper(i, caps):
        total = 0
        min_len = None
        touched = set()
        for j in range(i, m):
            mm = maxmult(circuits[j], caps)
            if mm > 0:
                total += mm
                if min_len is None or len(circuits[j]) < min_len:
                    min_len = len(circuits[j])
                touched |= set(circuits[j].arcs)
        if min_len is None:
            return 0
        return min(total, sum(caps[a] for a in touched) // min_len)

    best = [0]

    def dfs(i, caps, count):
        if count > best[0]:
            best[0] = count
        if i == m or count + upper(i, caps) <= best[0]:
            return
        mm = maxmult(circuits[i], caps)
        for t in range(mm, -1, -1):
            if t:
                caps2 = dict(caps)
                for a in circuits[i].arcs:
                    caps2[a] -= t
            else:
                caps2 = caps
            dfs(i + 1, caps2, count + t)

    dfs(0, {a.id: w[a.id] for a in d.arcs}, 0)
    return best[0]


def tau_edge(d: Digraph, w: dict, budget: Budget | None = None) -> int:
    """Min total weight of an arc set meeting every circuit."""
    _check_arc_weights(d, w)
    circuits = all_circuits(d)
    asets = [frozenset(c.arcs) for c in circuits]
    if not asets:
        return 0

    def disjoint_lb(removed):
        used = set(removed)
        total = 0
        for s in asets:
            if not s & used:
                used |= s
                total += min(w[a] for a in s)
        return total

    best = [sum(w[a] for a in set().union(*asets))]
    seen: dict = {}

    def dfs(removed, weight):
        first = None
        for s in asets:
            if not s & removed:
                first = s
                break
        if first is None:
            if weight < best[0]:
                best[0] = weight
            return
        if weight + disjoint_lb(removed) >= best[0]:
            return
        prev = seen.get(removed)
        if prev is not None and prev <= weight:
            return
        seen[removed] = weight
        for a in sorted(first):
            dfs(removed | {a}, weight + w[a])

    dfs(frozenset(), 0)
    return best[0]


@dataclass(frozen=True)
class DualityReport:
    min_transversal_weight: int
    max_packing_value: int

    @property
    def equal(self) -> bool:
        return self.min_transversal_weight == self.max_packing_value

    def to_dict(self) -> dict:
        return {
            "min_transversal_weight": self.min_transversal_weight,
            "max_packing_value": self.max_packing_value,
            "equal": self.equal,
        }


def planar_duality_check(d: Digraph, w: dict, budget: Budget | None = None) -> DualityReport:
    """Exact both sides of the arc-weighted packing/transversal duality.

    Only planar digraphs are accepted; the two sides always agree there.
    """
    from .planarity import planar

    if not planar(d):
        raise PreconditionError("duality check requires a planar digraph")
    return DualityReport(tau_edge(d, w, budget), nu_edge(d, w, budget))


# -- the hereditary equality property --------------------------------------


@dataclass(frozen=True)
class NonPackWitness:
    """A subdigraph on which minimum transversal exceeds maximum packing."""

    subdigraph: Digraph
    nu: int
    tau: int


_packs_memo: dict = {}


def packs(d: Digraph) -> bool:
    """True iff every subdigraph has equal packing and transversal numbers.

    Computed by memoized recursion over arc deletions: the property holds
    iff it holds on the digraph itself and on every one-arc deletion, and
    it splits over strongly connected components.
    """
    if d.is_acyclic():
        return True
    for comp in strongly_connected_components(d):
        sub = d.induced(comp)
        if sub.is_acyclic():
            continue
        if not _packs_core(sub):
            return False
    return True


def _packs_core(d: Digraph) -> bool:
    key = canonical_form(d)
    hit = _packs_memo.get(key)
    if hit is not None:
        return hit
    nu_v, tau_v = solver_values(d)
    if nu_v != tau_v:
        _packs_memo[key] = False
        return False
    if tau_v <= 1:
        # every subdigraph then has transversal number <= 1, forcing equality
        _packs_memo[key] = True
        return True
    result = all(packs(d.delete_arcs([a.id])) for a in d.arcs)
    _packs_memo[key] = result
    return result


def packs_bruteforce(d: Digraph, budget: Budget | None = None):
    """Check the hereditary equality over all arc-subset subdigraphs.

    Returns True, or the first failing subdigraph in decreasing-size,
    lexicographic order as a :class:`NonPackWitness`.  Vertex-deleted
    subdigraphs reduce to arc deletions plus dropping isolated vertices,
    which changes neither side.
    """
    if d.n_arcs > 20:
        raise PreconditionError("hereditary sweep guarded to 20 arcs")
    if packs(d):
        return True
    arc_ids = sorted(a.id for a in d.arcs)
    for size in range(len(arc_ids), -1, -1):
        for combo in combinations(arc_ids, size):
            sub = d.keep_arcs(combo, drop_isolated=True)
            nu_v, tau_v = solver_values(sub)
            if nu_v != tau_v:
                return NonPackWitness(sub, nu_v, tau_v)
    raise AssertionError("hereditary recursion and subset sweep disagree")


def packs_via_obstructions(d: Digraph, budget: Budget | None = None):
    """Decide the hereditary equality by excluded-minor search, independently
    of the brute-force route.  Returns True or the obstruction found."""
    obs = find_obstruction(d, budget)
    return True if obs is None else obs


def check_essential_vertex(d: Digraph, v: str, budget: Budget | None = None) -> bool:
    """On a digraph with the hereditary equality, verify that some minimum
    transversal contains v exactly when every maximum packing uses v."""
    if v not in d.vertex_set:
        raise PreconditionError(f"vertex {v!r} not in digraph")
    if not packs(d):
        raise PreconditionError("digraph does not have the hereditary equality")
    circuits, masks = _circuit_data(d)
    nodes = [0]
    nu_v = _nu_value_search(masks, nodes)
    tau_v = _tau_value_search([c.vertex_set for c in circuits], nodes)

    some_min_transversal_has_v = False
    for combo in combinations(sorted(d.vertices), tau_v):
        if v in combo and d.delete_vertices(combo).is_acyclic():
            some_min_transversal_has_v = True
            break

    every_max_packing_uses_v = True
    m = len(circuits)

    def dfs(i, used, count, uses_v):
        nonlocal every_max_packing_uses_v
        if not every_max_packing_uses_v:
            return
        if count == nu_v:
            if not uses_v:
                every_max_packing_uses_v = False
            return
        for j in range(i, m):
            if not masks[j] & used:
                dfs(j + 1, used | masks[j], count + 1, uses_v or v in circuits[j].vertex_set)

    dfs(0, 0, 0, False)
    return some_min_transversal_has_v == every_max_packing_uses_v


def weighted_obstruction_search(
    max_vertices: int,
    max_arcs: int | None = None,
    max_weight: int = 2,
    budget: Budget | None = None,
) -> list:
    """Search small obstruction-free digraphs for integer vertex weights
    with a strict gap between the weighted transversal and packing optima.

    Exploratory: emits validated findings.  Weights run over 1..max_weight;
    zero weights only re-encode vertex deletions, which minor-closure
    already covers.
    """
    from .smallgraphs import digraph_classes

    budget = ensure_budget(budget)
    findings = []
    for d in digraph_classes(max_vertices, max_arcs):
        if d.n_vertices == 0:
            continue
        if find_obstruction(d, budget) is not None:
            continue
        names = sorted(d.vertices)
        for values in product(range(1, max_weight + 1), repeat=len(names)):
            w = dict(zip(names, values))
            tw = tau_weighted(d, w, budget)
            nw = nu_weighted(d, w, budget)
            if tw.value > nw.value:
                findings.append((d, w))
                break
    return findings
