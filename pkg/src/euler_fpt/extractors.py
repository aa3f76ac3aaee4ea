"""
Constructive extraction of induced Euler subgraphs.

Two structures force a large induced Euler subgraph in an undirected graph: many
short internally disjoint (s, t)-paths, and a vertex of very high degree in a
2-connected graph. The functions here turn either structure into a concrete
vertex set and re-verify it before returning.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Dict, List, Literal, Optional, Sequence, Set, Tuple, Union

from .errors import ExtractionError, NotBiconnectedError, SearchBudgetExhausted
from .graph import EulerCertificate, Graph, is_biconnected, mask_of, verify_euler_certificate
from .thresholds import f_value, ramsey_upper

log = logging.getLogger(__name__)

Path = Tuple[int, ...]

# Largest number of vertex subsets the exact clique/independent-set fallback may scan.
SMALL_SEARCH_LIMIT = 200_000


@dataclass(frozen=True)
class PathBundle:
    s: int
    t: int
    paths: Tuple[Path, ...]
    max_len: int

    def __len__(self) -> int:
        return len(self.paths)

    def validate(self, G: Graph) -> None:
        """Raise ValueError unless the paths are internally disjoint (s, t)-paths of length 2..max_len in G."""
        if self.s == self.t:
            raise ValueError("bundle endpoints must differ")
        seen: Set[int] = set()
        for p in self.paths:
            if len(p) < 3:
                raise ValueError(f"path {p} is the bare edge or shorter")
            if len(p) - 1 > self.max_len:
                raise ValueError(f"path {p} is longer than {self.max_len}")
            if p[0] != self.s or p[-1] != self.t:
                raise ValueError(f"path {p} does not join {self.s} and {self.t}")
            if len(set(p)) != len(p):
                raise ValueError(f"path {p} repeats a vertex")
            for a, b in zip(p, p[1:]):
                if not G.has_edge(a, b):
                    raise ValueError(f"path {p} uses the non-edge {a}-{b}")
            inner = set(p[1:-1])
            if inner & seen:
                raise ValueError(f"path {p} shares an internal vertex with another path")
            seen |= inner


@dataclass
class SearchStats:
    nodes: int = 0


@dataclass(frozen=True)
class RamseyWitness:
    kind: Literal["clique", "independent-set"]
    vertices: frozenset[int]


# ---------------------------
# Short disjoint paths
# ---------------------------

def _enumerate_paths(G: Graph, s: int, t: int, ell: int, budget: int, nodes: List[int]) -> List[Path]:
    found: List[Path] = []
    on_path = bytearray(G.n + 1)
    on_path[s] = 1
    stack = [s]

    def walk(v: int) -> None:
        for w in G.neighbors(v):
            if on_path[w]:
                continue
            nodes[0] += 1
            if nodes[0] > budget:
                raise SearchBudgetExhausted(budget, nodes[0])
            if w == t:
                if len(stack) >= 2:
                    found.append(tuple(stack) + (t,))
                continue
            if len(stack) >= ell:
                continue
            on_path[w] = 1
            stack.append(w)
            walk(w)
            stack.pop()
            on_path[w] = 0

    walk(s)
    return found


def find_disjoint_short_paths(
    G: Graph,
    s: int,
    t: int,
    ell: int,
    count: int,
    node_budget: int = 1_000_000,
    stats: Optional[SearchStats] = None,
) -> Optional[PathBundle]:
    """
    At least ``count`` internally disjoint (s, t)-paths of length 2..ell, or None once the
    search space is exhausted. Running out of budget raises SearchBudgetExhausted instead.
    Visited nodes are added to ``stats`` either way.
    """
    if G.directed:
        raise ValueError("path bundles are searched in undirected graphs")
    if s == t:
        raise ValueError("bundle endpoints must differ")
    if count <= 0:
        return PathBundle(s, t, (), ell)
    nodes = [0]
    try:
        return _search_bundle(G, s, t, ell, count, node_budget, nodes)
    finally:
        if stats is not None:
            stats.nodes += nodes[0]


def _search_bundle(
    G: Graph, s: int, t: int, ell: int, count: int, node_budget: int, nodes: List[int]
) -> Optional[PathBundle]:
    paths = _enumerate_paths(G, s, t, ell, node_budget, nodes)
    # A path whose interior contains another's interior is never needed.
    paths.sort(key=lambda p: (len(p), p))
    masks: List[int] = []
    kept: List[Path] = []
    for p in paths:
        m = mask_of(p[1:-1])
        if any(prev & m == prev for prev in masks):
            continue
        masks.append(m)
        kept.append(p)
    log.debug("%d candidate (%d,%d)-paths of length <= %d after pruning", len(kept), s, t, ell)
    if len(kept) < count:
        return None

    chosen: List[int] = []
    used = 0
    for i, m in enumerate(masks):
        if not used & m:
            chosen.append(i)
            used |= m
    if len(chosen) >= count:
        return PathBundle(s, t, tuple(kept[i] for i in chosen[:count]), ell)

    picked: List[int] = []

    def pack(start: int, used: int) -> bool:
        if len(picked) == count:
            return True
        if len(masks) - start < count - len(picked):
            return False
        for i in range(start, len(masks)):
            if len(masks) - i < count - len(picked):
                return False
            nodes[0] += 1
            if nodes[0] > node_budget:
                raise SearchBudgetExhausted(node_budget, nodes[0])
            if used & masks[i]:
                continue
            picked.append(i)
            if pack(i + 1, used | masks[i]):
                return True
            picked.pop()
        return False

    if pack(0, 0):
        return PathBundle(s, t, tuple(kept[i] for i in picked), ell)
    return None


# ---------------------------
# Ramsey witnesses
# ---------------------------

def _ramsey_tracked(G: Graph, candidates: Sequence[int], r: int, s: int) -> RamseyWitness:
    """Pivot recursion keeping the pivots that extend each kind of witness."""
    if r == 1:
        return RamseyWitness("clique", frozenset(candidates[:1]))
    if s == 1:
        return RamseyWitness("independent-set", frozenset(candidates[:1]))
    x, rest = candidates[0], candidates[1:]
    adj = G.adjacency_mask(x)
    near = [y for y in rest if adj >> y & 1]
    far = [y for y in rest if not adj >> y & 1]
    if len(near) >= ramsey_upper(r - 1, s):
        sub = _ramsey_tracked(G, near, r - 1, s)
        if sub.kind == "clique":
            return RamseyWitness("clique", sub.vertices | {x})
        return sub
    sub = _ramsey_tracked(G, far, r, s - 1)
    if sub.kind == "independent-set":
        return RamseyWitness("independent-set", sub.vertices | {x})
    return sub


def ramsey_witness(G: Graph, r: int, s: int) -> RamseyWitness:
    """A clique of size r or an independent set of size s in the underlying graph."""
    return ramsey_witness_among(G, list(G.vertices()), r, s)


def ramsey_witness_among(G: Graph, vertices: Sequence[int], r: int, s: int) -> RamseyWitness:
    need = ramsey_upper(r, s)
    if len(vertices) < need:
        raise ValueError(f"need at least R-bound {need} vertices for ({r}, {s}), got {len(vertices)}")
    return _ramsey_tracked(G, sorted(vertices), r, s)


def _is_clique(G: Graph, vs: Sequence[int]) -> bool:
    m = mask_of(vs)
    return all((G.adjacency_mask(v) & m).bit_count() == len(vs) - 1 for v in vs)


def _is_independent(G: Graph, vs: Sequence[int]) -> bool:
    m = mask_of(vs)
    return all(not G.adjacency_mask(v) & m for v in vs)


def _small_witness(G: Graph, vertices: Sequence[int], r: int, s: int) -> Optional[RamseyWitness]:
    """Exact search for a clique of size r, then an independent set of size s, on small sets."""
    vs = sorted(vertices)
    if len(vs) >= r and comb(len(vs), r) <= SMALL_SEARCH_LIMIT:
        for combo in combinations(vs, r):
            if _is_clique(G, combo):
                return RamseyWitness("clique", frozenset(combo))
    if len(vs) >= s and comb(len(vs), s) <= SMALL_SEARCH_LIMIT:
        for combo in combinations(vs, s):
            if _is_independent(G, combo):
                return RamseyWitness("independent-set", frozenset(combo))
    return None


# ---------------------------
# Extraction from a path bundle
# ---------------------------

def _shortcut(G: Graph, path: Path) -> Path:
    """Replace chorded stretches by their shortcut until the path is induced (s-t chord excepted)."""
    p = list(path)
    changed = True
    while changed:
        changed = False
        last = len(p) - 1
        for i in range(last - 1):
            for j in range(last, i + 1, -1):
                if i == 0 and j == last:
                    continue
                if G.has_edge(p[i], p[j]):
                    p = p[: i + 1] + p[j:]
                    changed = True
                    break
            if changed:
                break
    return tuple(p)


def _case_clique_or_independent(
    G: Graph, bundle: PathBundle, paths: Sequence[Path], k: int, st_edge: bool
) -> Optional[EulerCertificate]:
    inner = [p[1] for p in paths if len(p) == 3]
    if k < 3 or len(inner) < k - 1:
        return None
    r, s = k, k - 1
    if len(inner) >= ramsey_upper(r, s):
        witness: Optional[RamseyWitness] = ramsey_witness_among(G, inner, r, s)
    else:
        witness = _small_witness(G, inner, r, s)
    if witness is None:
        return None
    vs = set(witness.vertices)
    if witness.kind == "clique":
        if k % 2 == 0:
            vs.add(bundle.s)
        return EulerCertificate.of(vs)
    vs |= {bundle.s, bundle.t}
    if st_edge == (k % 2 == 0):
        return EulerCertificate.of(vs)
    vs.discard(min(witness.vertices))
    return EulerCertificate.of(vs)


def _half_bundle(
    G: Graph, bundle: PathBundle, paths: Sequence[Path], ell: int, k: int
) -> Optional[PathBundle]:
    """
    A vertex adjacent to interior vertices of many other paths, all near the same end,
    yields a bundle of shorter paths between that end and the vertex.
    """
    if k < 3:
        return None
    half = ell // 2
    p = f_value(k, half + 1)
    owner: Dict[int, Tuple[int, int]] = {}
    for i, path in enumerate(paths):
        L = len(path) - 1
        for pos in range(1, L):
            owner[path[pos]] = (i, pos)
    for i, path in enumerate(paths):
        for v in path[1:-1]:
            near_s: Dict[int, Path] = {}
            near_t: Dict[int, Path] = {}
            for w in G.neighbors(v):
                if w not in owner:
                    continue
                j, pos = owner[w]
                if j == i:
                    continue
                other = paths[j]
                if pos <= half and j not in near_s:
                    near_s[j] = other[: pos + 1] + (v,)
                if len(other) - 1 - pos <= half and j not in near_t:
                    near_t[j] = (v,) + other[pos:]
            if len(near_s) >= p:
                picked = [near_s[j] for j in sorted(near_s)]
                return PathBundle(bundle.s, v, tuple(picked), half + 1)
            if len(near_t) >= p:
                picked = [tuple(reversed(near_t[j])) for j in sorted(near_t)]
                return PathBundle(bundle.t, v, tuple(picked), half + 1)
    return None


def _case_nonadjacent_paths(
    G: Graph, bundle: PathBundle, paths: Sequence[Path], k: int, st_edge: bool
) -> Optional[EulerCertificate]:
    """Pairwise non-adjacent induced paths: their union with s, t is Euler when deg(s) is even."""
    order = sorted(range(len(paths)), key=lambda i: (-len(paths[i]), i))
    chosen: List[int] = []
    blocked = 0
    for i in order:
        inner = mask_of(paths[i][1:-1])
        if blocked & inner:
            continue
        closed = inner
        for v in paths[i][1:-1]:
            closed |= G.adjacency_mask(v)
        chosen.append(i)
        blocked |= closed
    # s gets one edge per path plus the s-t edge if present.
    j = len(chosen)
    if (j + st_edge) % 2:
        j -= 1
    if j < 1:
        return None
    vs = {bundle.s, bundle.t}
    for i in chosen[:j]:
        vs.update(paths[i])
    if len(vs) < k:
        return None
    return EulerCertificate.of(vs)


def _from_half_bundle(G: Graph, bundle: PathBundle, paths: Sequence[Path], ell: int, k: int) -> Optional[EulerCertificate]:
    if ell < 3:
        return None
    sub = _half_bundle(G, bundle, paths, ell, k)
    if sub is None:
        return None
    log.info("recursing on %d paths of length <= %d between %d and %d", len(sub), sub.max_len, sub.s, sub.t)
    try:
        return extract_from_paths(G, sub, k)
    except ExtractionError as e:
        log.debug("half-length bundle failed: %s", e)
        return None


def extract_from_paths(G: Graph, bundle: PathBundle, k: int) -> EulerCertificate:
    """An induced Euler subgraph on at least k vertices built from the bundle's paths."""
    if G.directed:
        raise ValueError("extraction works on undirected graphs")
    bundle.validate(G)
    paths = [_shortcut(G, p) for p in bundle.paths]
    ell = max((len(p) - 1 for p in paths), default=2)
    st_edge = G.has_edge(bundle.s, bundle.t)
    if k >= 3:
        need = f_value(k, max(bundle.max_len, 2)) - 1
        if len(paths) < need:
            log.warning(
                "bundle (%d,%d) has %d paths, below the %d that guarantee extraction; trying anyway",
                bundle.s, bundle.t, len(paths), need,
            )

    attempts = (
        ("clique/independent set on length-2 paths", lambda: _case_clique_or_independent(G, bundle, paths, k, st_edge)),
        ("half-length bundle", lambda: _from_half_bundle(G, bundle, paths, ell, k)),
        ("non-adjacent paths", lambda: _case_nonadjacent_paths(G, bundle, paths, k, st_edge)),
    )
    for how, attempt in attempts:
        cert = attempt()
        if cert is not None and verify_euler_certificate(G, cert, k):
            log.info("extracted %d vertices via %s", cert.size, how)
            return cert
    raise ExtractionError(
        f"bundle between {bundle.s} and {bundle.t} with {len(paths)} paths yields no induced Euler subgraph on {k} vertices"
    )


# ---------------------------
# Extraction around a high-degree vertex
# ---------------------------

def _bfs_tree(G: Graph, root: int, banned: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    parent = {root: 0}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in G.neighbors(x):
            if y == banned or y in parent:
                continue
            parent[y] = x
            depth[y] = depth[x] + 1
            queue.append(y)
    return parent, depth


def _tree_path(parent: Dict[int, int], w: int) -> List[int]:
    out = [w]
    while parent[out[-1]]:
        out.append(parent[out[-1]])
    out.reverse()
    return out


def _best_cycle_family(path: Sequence[int], nbr_mask: int) -> List[int]:
    """
    Split the path at its vertices adjacent to u; the stretches whose index has the same
    residue mod 3 form cycles through u that meet only at u. Return the largest family.
    """
    cut = [i for i, v in enumerate(path) if nbr_mask >> v & 1]
    families: List[Set[int]] = [set(), set(), set()]
    for j, (a, b) in enumerate(zip(cut, cut[1:])):
        families[j % 3].update(path[a : b + 1])
    best = max(families, key=len)
    return sorted(best)


def extract_from_high_degree(G: Graph, u: int, k: int) -> Union[EulerCertificate, PathBundle]:
    """
    Cycles through u along a shortest-path tree of G-u, or a (u, w)-bundle when some
    tree vertex w branches widely enough to feed extract_from_paths.
    """
    if G.directed:
        raise ValueError("extraction works on undirected graphs")
    if not 1 <= u <= G.n:
        raise ValueError(f"vertex {u} outside 1..{G.n}")
    nbrs = G.neighbors(u)
    if not nbrs:
        raise ExtractionError(f"vertex {u} is isolated")
    nbr_mask = G.adjacency_mask(u)
    long_path = 3 * (k - 3) + 1

    trees: List[Tuple[int, Dict[int, int], Dict[int, int]]] = []
    seen = 0
    for v in nbrs:
        if seen >> v & 1:
            continue
        parent, depth = _bfs_tree(G, v, u)
        seen |= mask_of(parent)
        trees.append((v, parent, depth))

    # Long-path route needs G-u connected: one tree spans every neighbour.
    if len(trees) == 1:
        v, parent, depth = trees[0]
        ends = [w for w in nbrs if w != v]
        deepest = max(ends, key=lambda w: (depth[w], -w), default=None)
        if deepest is not None and depth[deepest] >= long_path:
            fam = _best_cycle_family(_tree_path(parent, deepest), nbr_mask)
            cert = EulerCertificate.of(fam + [u])
            if verify_euler_certificate(G, cert, k):
                log.info("long tree path of length %d around %d gives %d vertices", depth[deepest], u, cert.size)
                return cert

        if k >= 4:
            bundle = _branching_bundle(G, u, k, v, parent, depth, nbrs)
            if bundle is not None:
                return bundle

    union: Set[int] = {u}
    for v, parent, depth in trees:
        ends = [w for w in nbrs if w != v and w in parent]
        best: List[int] = []
        for w in ends:
            fam = _best_cycle_family(_tree_path(parent, w), nbr_mask)
            if len(fam) > len(best):
                best = fam
        union.update(best)
    cert = EulerCertificate.of(union)
    if verify_euler_certificate(G, cert, k):
        log.info("cycle families around %d give %d vertices", u, cert.size)
        return cert

    if len(trees) > 1 or not is_biconnected(G):
        raise NotBiconnectedError(
            f"G-{u} splits into {len(trees)} part(s) and the cycles through {u} reach only {cert.size} vertices"
        )
    spanned = len(_pruned_tree(trees[0][1], nbrs))
    raise ExtractionError(
        f"no long tree path or wide branching around {u}: the tree has {spanned} vertices, bounding deg({u})={len(nbrs)}"
    )


def _pruned_tree(parent: Dict[int, int], targets: Sequence[int]) -> Set[int]:
    """Vertices on tree paths from the root to any target."""
    keep: Set[int] = set()
    for w in targets:
        x = w
        while x and x not in keep:
            keep.add(x)
            x = parent[x]
    return keep


def _branching_bundle(
    G: Graph,
    u: int,
    k: int,
    root: int,
    parent: Dict[int, int],
    depth: Dict[int, int],
    nbrs: Sequence[int],
) -> Optional[PathBundle]:
    need = f_value(k, 3 * k - 8)
    keep = _pruned_tree(parent, nbrs)
    children: Dict[int, List[int]] = {x: [] for x in keep}
    for x in sorted(keep):
        if parent[x]:
            children[parent[x]].append(x)
    nbr_mask = G.adjacency_mask(u)
    for w in sorted(keep, key=lambda x: (depth[x], x)):
        tree_degree = len(children[w]) + (1 if parent[w] else 0)
        if tree_degree < need:
            continue
        paths: List[Path] = []
        if parent[w]:
            up = _tree_path(parent, w)
            up.reverse()
            paths.append(tuple(up) + (u,))
        for x in children[w]:
            # nearest descendant of x adjacent to u
            queue = deque([[x]])
            while queue:
                trail = queue.popleft()
                if nbr_mask >> trail[-1] & 1:
                    paths.append((w,) + tuple(trail) + (u,))
                    break
                for c in children[trail[-1]]:
                    queue.append(trail + [c])
        # oriented u .. w
        oriented = tuple(tuple(reversed(p)) for p in paths if 3 <= len(p) <= 3 * k - 7)
        log.info("tree vertex %d has tree degree %d >= %d; forwarding a (%d,%d)-bundle", w, tree_degree, need, u, w)
        return PathBundle(u, w, oriented, 3 * k - 8)
    return None
