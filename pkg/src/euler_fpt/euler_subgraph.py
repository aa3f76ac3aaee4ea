from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from itertools import combinations
from typing import List, Optional

from .errors import BudgetExceededError, CertificateError, ExtractionError
from .extractors import (
    PathBundle,
    SearchStats,
    extract_from_high_degree,
    extract_from_paths,
    find_disjoint_short_paths,
)
from .graph import (
    EulerCertificate,
    Graph,
    blocks,
    induced_subgraph,
    induces_euler,
    iter_mask,
    lift_vertices,
    mask_of,
    remove_opposite_pairs,
    shortest_cycle,
    verify_euler_certificate,
)
from .models import Verdict

log = logging.getLogger(__name__)

# High-degree extraction is attempted at this many top-degree vertices per block.
CANDIDATES_PER_BLOCK = 4


@dataclass(frozen=True)
class EulerAnswer:
    verdict: Verdict
    certificate: Optional[EulerCertificate] = None
    note: Optional[str] = None
    nodes_explored: Optional[int] = None  # subsets tested plus path-search nodes; None when nothing was searched


def _checked(G: Graph, cert: Optional[EulerCertificate], k: int, exact: bool = False) -> Optional[EulerCertificate]:
    if cert is None:
        return None
    if not verify_euler_certificate(G, cert, k) or (exact and cert.size != k):
        raise CertificateError(f"invalid Euler certificate {sorted(cert.vertex_set)} for k={k}")
    return cert


# ---------------------------
# Exact subset search
# ---------------------------

def euler_core(G: Graph) -> int:
    """
    Peel vertices that cannot lie in any induced Euler subgraph: induced degree below 2
    (undirected) or no in- or out-neighbour left (directed). Returns the remaining bitset.
    """
    alive = G.full_mask()
    changed = True
    while changed:
        changed = False
        for v in iter_mask(alive):
            if G.directed:
                dead = not (G.out_mask(v) & alive) or not (G.in_mask(v) & alive)
            else:
                dead = (G.adjacency_mask(v) & alive).bit_count() < 2
            if dead:
                alive &= ~(1 << v)
                changed = True
    return alive


def brute_large_euler(
    G: Graph, k: int, exact_size: bool = False, budget: int = 20, stats: Optional[SearchStats] = None
) -> Optional[EulerCertificate]:
    """
    Largest vertex set of size >= k inducing an Euler graph (exactly k with ``exact_size``),
    by subset enumeration from the largest size down.
    """
    core = euler_core(G)
    pool = list(iter_mask(core))
    if len(pool) > budget:
        raise BudgetExceededError("vertices left after peeling", budget, len(pool))
    smallest = 2 if G.directed else 3
    top = len(pool)
    sizes = [k] if exact_size else range(top, max(k, smallest) - 1, -1)
    for size in sizes:
        if size < smallest or size > top:
            continue
        for combo in combinations(pool, size):
            mask = mask_of(combo)
            if stats is not None:
                stats.nodes += 1
            if induces_euler(G, mask):
                log.debug("subset of size %d induces an Euler graph", size)
                return _checked(G, EulerCertificate.of(combo), k, exact_size)
    return None


# ---------------------------
# Directed k <= 3
# ---------------------------

def _opposite_triple(G: Graph) -> Optional[EulerCertificate]:
    for y in G.vertices():
        both = G.out_mask(y) & G.in_mask(y)
        mates = list(iter_mask(both))
        for i, x in enumerate(mates):
            for z in mates[i + 1 :]:
                xz, zx = G.has_edge(x, z), G.has_edge(z, x)
                if xz == zx:
                    return EulerCertificate.of((x, y, z))
    return None


def directed_large_euler_small_k(G: Graph, k: int) -> Optional[EulerCertificate]:
    if not G.directed:
        raise ValueError("directed_large_euler_small_k needs a directed graph")
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    if k < 3:
        cyc = shortest_cycle(G)
        return _checked(G, EulerCertificate.of(cyc.vertices) if cyc else None, k)
    triple = _opposite_triple(G)
    if triple is not None:
        return _checked(G, triple, k)
    reduced = remove_opposite_pairs(G)
    cyc = shortest_cycle(reduced)
    if cyc is None:
        return None
    log.debug("shortest cycle of length %d after deleting opposite pairs", cyc.length)
    return _checked(G, EulerCertificate.of(cyc.vertices), k)


# ---------------------------
# Undirected orchestration
# ---------------------------

def _bundle_attempt(H: Graph, u: int, k: int, path_budget: int, stats: SearchStats) -> Optional[EulerCertificate]:
    # Length-3 bundles from u to its busiest non-neighbours.
    others = sorted(
        (v for v in H.vertices() if v != u and not H.has_edge(u, v)),
        key=lambda v: (-H.degree(v), v),
    )
    for t in others[:CANDIDATES_PER_BLOCK]:
        try:
            bundle = find_disjoint_short_paths(H, u, t, 3, k, node_budget=path_budget, stats=stats)
            if bundle is None:
                continue
            return extract_from_paths(H, bundle, k)
        except (ExtractionError, BudgetExceededError) as e:
            log.debug("bundle %d-%d: %s", u, t, e)
    return None


def _from_block(
    G: Graph, block: frozenset[int], k: int, path_budget: int, stats: SearchStats
) -> Optional[EulerCertificate]:
    H = induced_subgraph(G, block)
    order = sorted(H.vertices(), key=lambda v: (-H.degree(v), v))
    for u in order[:CANDIDATES_PER_BLOCK]:
        try:
            found = extract_from_high_degree(H, u, k)
            if isinstance(found, PathBundle):
                found = extract_from_paths(H, found, k)
        except (ExtractionError, BudgetExceededError) as e:
            log.debug("block of %d vertices, vertex %d: %s", H.n, H.origin[u - 1], e)
            found = _bundle_attempt(H, u, k, path_budget, stats)
            if found is None:
                continue
        cert = EulerCertificate(lift_vertices(H, found.vertex_set))
        if verify_euler_certificate(G, cert, k):
            return cert
    return None


def decide_large_euler_undirected(G: Graph, k: int, budget: int = 20, path_budget: int = 1_000_000) -> EulerAnswer:
    """Exact within the brute-force budget, constructive beyond it; never an unsound no."""
    if G.directed:
        raise ValueError("decide_large_euler_undirected needs an undirected graph")
    if k <= 3:
        # Euler graphs have at least three vertices and shortest cycles are induced.
        cyc = shortest_cycle(G)
        if cyc is None:
            return EulerAnswer(Verdict.NO, note="graph is a forest")
        return EulerAnswer(Verdict.YES, _checked(G, EulerCertificate.of(cyc.vertices), k))

    stats = SearchStats()
    answer = _search_large_euler(G, k, budget, path_budget, stats)
    return replace(answer, nodes_explored=stats.nodes)


def _search_large_euler(G: Graph, k: int, budget: int, path_budget: int, stats: SearchStats) -> EulerAnswer:
    try:
        cert = brute_large_euler(G, k, exact_size=False, budget=budget, stats=stats)
    except BudgetExceededError as e:
        log.info("brute force skipped: %s", e)
    else:
        if cert is None:
            return EulerAnswer(Verdict.NO)
        return EulerAnswer(Verdict.YES, cert)

    candidates: List[frozenset[int]] = sorted(blocks(G), key=lambda b: (-len(b), min(b)))
    for block in candidates:
        if len(block) < k:
            continue
        cert = _from_block(G, block, k, path_budget, stats)
        if cert is not None:
            log.info("constructive extraction found %d vertices in a block of %d", cert.size, len(block))
            return EulerAnswer(Verdict.YES, _checked(G, cert, k))
    return EulerAnswer(
        Verdict.INCONCLUSIVE,
        note=f"{euler_core(G).bit_count()} core vertices exceed the brute-force budget of {budget} and no extractor applied",
    )
