"""
Graph model and the structural primitives every solver shares.

Vertices are dense ids 1..n. Edges (arcs) are identified by their index in
``Graph.edges``; undirected edges are stored canonically as (min, max).
Bitsets are plain ints with bit ``v`` standing for vertex ``v``.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InvalidGraphError

log = logging.getLogger(__name__)

Arc = Tuple[int, int]  # (neighbour, edge id)


class Graph:
    """
    Immutable simple graph, directed or undirected.
    Opposite arcs (u,v) and (v,u) may coexist in a directed graph; anything else
    parallel, and every self-loop, is rejected.
    """

    __slots__ = (
        "n", "directed", "edges", "origin", "edge_origin",
        "_out", "_in", "_nbrs", "_index", "_adj_mask", "_out_mask", "_in_mask",
    )

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]],
        directed: bool = False,
        origin: Optional[Sequence[int]] = None,
        edge_origin: Optional[Sequence[int]] = None,
    ) -> None:
        if n < 0:
            raise InvalidGraphError(f"vertex count must be non-negative, got {n}")
        self.n = n
        self.directed = bool(directed)

        stored: List[Tuple[int, int]] = []
        index: dict[Tuple[int, int], int] = {}
        out: List[List[Arc]] = [[] for _ in range(n + 1)]
        inn: List[List[Arc]] = [[] for _ in range(n + 1)]
        for eid, pair in enumerate(edges):
            a, b = int(pair[0]), int(pair[1])
            if not (1 <= a <= n and 1 <= b <= n):
                raise InvalidGraphError(f"edge #{eid + 1} ({a},{b}) has an endpoint outside 1..{n}")
            if a == b:
                raise InvalidGraphError(f"edge #{eid + 1} is a self-loop at {a}")
            key = (a, b) if self.directed else (min(a, b), max(a, b))
            if key in index:
                raise InvalidGraphError(f"edge #{eid + 1} ({a},{b}) duplicates edge #{index[key] + 1}")
            index[key] = eid
            stored.append(key)
            out[a].append((b, eid))
            if self.directed:
                inn[b].append((a, eid))
            else:
                out[b].append((a, eid))

        for lst in out:
            lst.sort()
        for lst in inn:
            lst.sort()

        self.edges: Tuple[Tuple[int, int], ...] = tuple(stored)
        self._index = index
        self._out = out
        self._in = inn if self.directed else out

        adj = [0] * (n + 1)
        om = [0] * (n + 1)
        im = [0] * (n + 1)
        for a, b in stored:
            adj[a] |= 1 << b
            adj[b] |= 1 << a
            om[a] |= 1 << b
            im[b] |= 1 << a
        self._adj_mask = adj
        self._out_mask = om if self.directed else adj
        self._in_mask = im if self.directed else adj
        self._nbrs = [list(iter_mask(mask)) for mask in adj]

        self.origin: Tuple[int, ...] = tuple(origin) if origin is not None else tuple(range(1, n + 1))
        if len(self.origin) != n:
            raise InvalidGraphError("origin mapping must name every vertex")
        self.edge_origin: Tuple[int, ...] = (
            tuple(edge_origin) if edge_origin is not None else tuple(range(len(stored)))
        )

    # -- basic accessors --

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(1, self.n + 1)

    def full_mask(self) -> int:
        return (1 << (self.n + 1)) - 2

    def arcs_from(self, v: int) -> List[Arc]:
        """Edges a trail may leave ``v`` by: out-arcs, or every incident edge."""
        return self._out[v]

    def arcs_into(self, v: int) -> List[Arc]:
        return self._in[v]

    def neighbors(self, v: int) -> List[int]:
        """Neighbours in the underlying undirected graph, ascending."""
        return self._nbrs[v]

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def edge_id(self, u: int, v: int) -> Optional[int]:
        key = (u, v) if self.directed else (min(u, v), max(u, v))
        return self._index.get(key)

    def endpoints(self, eid: int) -> Tuple[int, int]:
        return self.edges[eid]

    def degree(self, v: int) -> int:
        if self.directed:
            return len(self._out[v]) + len(self._in[v])
        return len(self._out[v])

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self.vertices()), default=0)

    def adjacency_mask(self, v: int) -> int:
        return self._adj_mask[v]

    def out_mask(self, v: int) -> int:
        return self._out_mask[v]

    def in_mask(self, v: int) -> int:
        return self._in_mask[v]

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Graph({kind}, n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.directed, self.edges) == (other.n, other.directed, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.directed, self.edges))

    def __getstate__(self):
        return (self.n, self.edges, self.directed, self.origin, self.edge_origin)

    def __setstate__(self, state) -> None:
        n, edges, directed, origin, edge_origin = state
        self.__init__(n, edges, directed, origin, edge_origin)


@dataclass(frozen=True)
class Circuit:
    """Alternating sequence v_0, e_1, v_1, ..., e_t, v_t; ``edges[i]`` joins ``vertices[i]`` to ``vertices[i+1]``."""

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @classmethod
    def empty(cls, v: int) -> "Circuit":
        return cls((v,), ())


@dataclass(frozen=True)
class CycleList:
    cycles: Tuple[Circuit, ...]

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self) -> Iterator[Circuit]:
        return iter(self.cycles)

    def __getitem__(self, i: int) -> Circuit:
        return self.cycles[i]

    def edge_set(self) -> frozenset[int]:
        return frozenset(e for c in self.cycles for e in c.edges)


@dataclass(frozen=True)
class EulerCertificate:
    vertex_set: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.vertex_set)

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "EulerCertificate":
        return cls(frozenset(int(v) for v in vertices))

    def sorted(self) -> List[int]:
        return sorted(self.vertex_set)


# ---------------------------
# Bitset helpers
# ---------------------------

def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def iter_mask(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def connected_within(G: Graph, mask: int) -> bool:
    """True iff the underlying graph induced by ``mask`` is non-empty and connected."""
    if not mask:
        return False
    seen = frontier = mask & -mask
    while frontier:
        low = frontier & -frontier
        frontier ^= low
        fresh = G.adjacency_mask(low.bit_length() - 1) & mask & ~seen
        seen |= fresh
        frontier |= fresh
    return seen == mask


def induces_euler(G: Graph, mask: int) -> bool:
    """Euler criterion on G[mask]: at least one edge, balanced degrees, connected."""
    if mask & (mask - 1) == 0:
        return False
    if G.directed:
        for v in iter_mask(mask):
            if (G.out_mask(v) & mask).bit_count() != (G.in_mask(v) & mask).bit_count():
                return False
    else:
        for v in iter_mask(mask):
            if (G.adjacency_mask(v) & mask).bit_count() & 1:
                return False
    return connected_within(G, mask)


# ---------------------------
# Euler criteria and circuits
# ---------------------------

def is_eulerian(G: Graph) -> bool:
    """
    Connected (over every vertex) plus even degrees, or in = out for digraphs.
    An edgeless graph is not Eulerian: every Euler graph here carries an edge.
    """
    if G.n == 0 or G.m == 0:
        return False
    return induces_euler(G, G.full_mask())


def euler_circuit(G: Graph) -> Circuit:
    if not is_eulerian(G):
        raise ValueError(f"{G!r} is not Eulerian")
    used = bytearray(G.m)
    ptr = [0] * (G.n + 1)
    stack: List[Tuple[int, int]] = [(1, -1)]
    vertices: List[int] = []
    edges: List[int] = []
    while stack:
        v, arrived_by = stack[-1]
        arcs = G.arcs_from(v)
        while ptr[v] < len(arcs) and used[arcs[ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] < len(arcs):
            w, eid = arcs[ptr[v]]
            ptr[v] += 1
            used[eid] = 1
            stack.append((w, eid))
        else:
            stack.pop()
            vertices.append(v)
            if arrived_by >= 0:
                edges.append(arrived_by)
    vertices.reverse()
    edges.reverse()
    return Circuit(tuple(vertices), tuple(edges))


def verify_circuit(G: Graph, C: Circuit) -> bool:
    try:
        vs, es = tuple(C.vertices), tuple(C.edges)
    except (AttributeError, TypeError):
        return False
    if len(vs) != len(es) + 1:
        return False
    for v in vs:
        if not isinstance(v, int) or not 1 <= v <= G.n:
            return False
    if vs[0] != vs[-1] or len(set(es)) != len(es):
        return False
    for i, eid in enumerate(es):
        if not isinstance(eid, int) or not 0 <= eid < G.m:
            return False
        a, b = G.edges[eid]
        x, y = vs[i], vs[i + 1]
        if G.directed:
            if (a, b) != (x, y):
                return False
        elif {a, b} != {x, y}:
            return False
    return True


def decompose_circuit(G: Graph, C: Circuit) -> CycleList:
    """
    Peel a simple cycle whenever the trail revisits a vertex still on the stack,
    then order the cycles so every prefix union stays connected.
    """
    if not verify_circuit(G, C):
        raise ValueError("not a valid circuit of this graph")
    peeled: List[Circuit] = []
    stack_v = [C.vertices[0]]
    stack_e: List[int] = []
    pos = {C.vertices[0]: 0}
    for eid, w in zip(C.edges, C.vertices[1:]):
        if w in pos:
            p = pos[w]
            peeled.append(Circuit(tuple(stack_v[p:]) + (w,), tuple(stack_e[p:]) + (eid,)))
            for x in stack_v[p + 1:]:
                del pos[x]
            del stack_v[p + 1:]
            del stack_e[p:]
        else:
            pos[w] = len(stack_v)
            stack_v.append(w)
            stack_e.append(eid)

    ordered: List[Circuit] = []
    covered: set[int] = set()
    remaining = peeled
    while remaining:
        pick = 0
        if ordered:
            pick = next(i for i, c in enumerate(remaining) if covered & c.vertex_set())
        cyc = remaining.pop(pick)
        ordered.append(cyc)
        covered |= cyc.vertex_set()
    return CycleList(tuple(ordered))


# ---------------------------
# Structure
# ---------------------------

def connected_components(G: Graph) -> List[frozenset[int]]:
    """Components of the underlying undirected graph, ordered by lowest vertex."""
    seen = bytearray(G.n + 1)
    comps: List[frozenset[int]] = []
    for s in G.vertices():
        if seen[s]:
            continue
        seen[s] = 1
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in G.neighbors(x):
                if not seen[y]:
                    seen[y] = 1
                    comp.append(y)
                    queue.append(y)
        comps.append(frozenset(comp))
    return comps


def is_connected(G: Graph) -> bool:
    return G.n > 0 and connected_within(G, G.full_mask())


def is_acyclic(G: Graph) -> bool:
    if not G.directed:
        return G.m == G.n - len(connected_components(G))
    indeg = [G.in_degree(v) for v in range(G.n + 1)]
    queue = deque(v for v in G.vertices() if indeg[v] == 0)
    removed = 0
    while queue:
        x = queue.popleft()
        removed += 1
        for y, _ in G.arcs_from(x):
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    return removed == G.n


def remove_opposite_pairs(G: Graph) -> Graph:
    """Delete every pair of opposite arcs; vertex ids are kept."""
    if not G.directed:
        raise ValueError("opposite arcs only exist in directed graphs")
    keep = [eid for eid, (a, b) in enumerate(G.edges) if not G.has_edge(b, a)]
    return Graph(G.n, [G.edges[e] for e in keep], directed=True, edge_origin=keep)


def _block_edge_groups(G: Graph) -> List[List[int]]:
    disc = [0] * (G.n + 1)
    low = [0] * (G.n + 1)
    timer = 1
    groups: List[List[int]] = []
    for root in G.vertices():
        if disc[root] or not G.arcs_from(root):
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack: List[int] = []
        stack = [(root, -1, iter(G.arcs_from(root)))]
        while stack:
            v, parent_eid, it = stack[-1]
            descended = False
            for w, eid in it:
                if eid == parent_eid:
                    continue
                if not disc[w]:
                    disc[w] = low[w] = timer
                    timer += 1
                    edge_stack.append(eid)
                    stack.append((w, eid, iter(G.arcs_from(w))))
                    descended = True
                    break
                if disc[w] < disc[v]:
                    low[v] = min(low[v], disc[w])
                    edge_stack.append(eid)
            if descended:
                continue
            stack.pop()
            if not stack:
                continue
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                group: List[int] = []
                while True:
                    e = edge_stack.pop()
                    group.append(e)
                    if e == parent_eid:
                        break
                groups.append(group)
    return groups


def blocks(G: Graph) -> List[frozenset[int]]:
    """Biconnected components as vertex sets. Isolated vertices carry no edge and form no block."""
    if G.directed:
        raise ValueError("blocks are defined for undirected graphs")
    out = []
    for group in _block_edge_groups(G):
        vs: set[int] = set()
        for e in group:
            vs.update(G.edges[e])
        out.append(frozenset(vs))
    return out


def is_biconnected(G: Graph) -> bool:
    if G.directed or G.n < 3 or not is_connected(G):
        return False
    bs = blocks(G)
    return len(bs) == 1 and len(bs[0]) == G.n


def _tree_path_cycle(parent: dict[int, Tuple[int, int]], top: int, bottom: int, closing: int) -> Circuit:
    verts = [bottom]
    edges: List[int] = []
    x = bottom
    while x != top:
        p, pe = parent[x]
        edges.append(pe)
        verts.append(p)
        x = p
    verts.reverse()
    edges.reverse()
    return Circuit(tuple(verts) + (top,), tuple(edges) + (closing,))


def fundamental_cycles_from(G: Graph, root: int) -> List[Circuit]:
    """Fundamental cycles of a DFS tree of the component containing ``root``."""
    depth = {root: 0}
    parent: dict[int, Tuple[int, int]] = {root: (0, -1)}
    cycles: List[Circuit] = []
    stack = [(root, iter(G.arcs_from(root)))]
    while stack:
        v, it = stack[-1]
        for w, eid in it:
            if w not in depth:
                depth[w] = depth[v] + 1
                parent[w] = (v, eid)
                stack.append((w, iter(G.arcs_from(w))))
                break
            if eid != parent[v][1] and depth[w] < depth[v]:
                cycles.append(_tree_path_cycle(parent, w, v, eid))
        else:
            stack.pop()
    return cycles


def dfs_fundamental_cycles(G: Graph, root: int) -> List[Circuit]:
    if G.directed:
        raise ValueError("fundamental cycles need an undirected graph")
    if not 1 <= root <= G.n:
        raise ValueError(f"root {root} outside 1..{G.n}")
    if not is_connected(G):
        raise ValueError("fundamental cycles need a connected graph")
    return fundamental_cycles_from(G, root)


def _path_to_root(parent: dict[int, Tuple[int, int]], x: int) -> Tuple[List[int], List[int]]:
    verts = [x]
    edges: List[int] = []
    while parent[x][1] >= 0:
        p, pe = parent[x]
        edges.append(pe)
        verts.append(p)
        x = p
    return verts, edges


def shortest_cycle(G: Graph) -> Optional[Circuit]:
    """
    A minimum-length cycle (directed cycle for digraphs), or None for acyclic input.
    Roots are tried in ascending order and only strictly shorter cycles replace the best.
    """
    best: Optional[Circuit] = None
    floor = 2 if G.directed else 3
    for r in G.vertices():
        if best is not None and best.length == floor:
            break
        dist = {r: 0}
        parent: dict[int, Tuple[int, int]] = {r: (0, -1)}
        queue = deque([r])
        found: Optional[Circuit] = None
        while queue and found is None:
            x = queue.popleft()
            bound = dist[x] + 1 if G.directed else 2 * dist[x]
            if best is not None and bound >= best.length:
                break
            for y, eid in G.arcs_from(x):
                if G.directed:
                    if y == r:
                        down, down_e = _path_to_root(parent, x)
                        down.reverse()
                        down_e.reverse()
                        found = Circuit(tuple(down) + (r,), tuple(down_e) + (eid,))
                        break
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        parent[y] = (x, eid)
                        queue.append(y)
                    continue
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (x, eid)
                    queue.append(y)
                    continue
                if eid == parent[x][1] or eid == parent[y][1]:
                    continue
                length = dist[x] + dist[y] + 1
                if best is not None and length >= best.length:
                    continue
                up, up_e = _path_to_root(parent, x)
                down, down_e = _path_to_root(parent, y)
                up.reverse()
                up_e.reverse()
                verts = up + down
                if len(set(verts[:-1])) != len(verts) - 1:
                    continue
                best = Circuit(tuple(verts), tuple(up_e) + (eid,) + tuple(down_e))
        if found is not None and (best is None or found.length < best.length):
            best = found
    return best


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    """G[S] with vertices renumbered in ascending order; ``origin``/``edge_origin`` map back to G."""
    verts = sorted(set(S))
    for v in verts:
        if not 1 <= v <= G.n:
            raise InvalidGraphError(f"vertex {v} outside 1..{G.n}")
    new_id = {v: i + 1 for i, v in enumerate(verts)}
    edges = []
    edge_origin = []
    for eid, (a, b) in enumerate(G.edges):
        if a in new_id and b in new_id:
            edges.append((new_id[a], new_id[b]))
            edge_origin.append(eid)
    return Graph(len(verts), edges, directed=G.directed, origin=verts, edge_origin=edge_origin)


def lift_vertices(sub: Graph, vertices: Iterable[int]) -> frozenset[int]:
    return frozenset(sub.origin[v - 1] for v in vertices)


def lift_circuit(sub: Graph, C: Circuit) -> Circuit:
    return Circuit(
        tuple(sub.origin[v - 1] for v in C.vertices),
        tuple(sub.edge_origin[e] for e in C.edges),
    )


def verify_euler_certificate(G: Graph, cert: EulerCertificate, k: int) -> bool:
    vs = cert.vertex_set
    if len(vs) < k:
        return False
    if any(not isinstance(v, int) or not 1 <= v <= G.n for v in vs):
        return False
    return induces_euler(G, mask_of(vs))
