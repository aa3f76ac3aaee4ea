"""
Independent brute-force answers used to check the package. Nothing here imports the
solvers; graphs are read only through ``n``, ``directed`` and ``edges``.
"""
from __future__ import annotations

from collections import defaultdict
from itertools import combinations, permutations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Set

import networkx as nx

from euler_fpt.graph import Graph


def to_networkx(G: Graph) -> nx.Graph:
    H = nx.DiGraph() if G.directed else nx.Graph()
    H.add_nodes_from(range(1, G.n + 1))
    H.add_edges_from(G.edges)
    return H


def _connected(edges: List[tuple]) -> bool:
    adj: Dict[int, Set[int]] = defaultdict(set)
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(adj)


def _edge_subsets(G: Graph) -> Iterator[List[tuple]]:
    for mask in range(1, 1 << G.m):
        yield [G.edges[i] for i in range(G.m) if mask >> i & 1]


def _balanced(G: Graph, edges: List[tuple], exact: bool) -> bool:
    out: Dict[int, int] = defaultdict(int)
    inn: Dict[int, int] = defaultdict(int)
    for a, b in edges:
        out[a] += 1
        inn[b] += 1
    touched = set(out) | set(inn)
    for v in touched:
        if G.directed:
            if out[v] != inn[v] or (exact and out[v] != 1):
                return False
        else:
            d = out[v] + inn[v]
            if d % 2 or (exact and d != 2):
                return False
    return True


def circuit_lengths(G: Graph) -> Set[int]:
    """Every length of a closed trail: the edge sets of circuits are the connected balanced sets."""
    return {len(es) for es in _edge_subsets(G) if _balanced(G, es, exact=False) and _connected(es)}


def cycle_lengths(G: Graph) -> Set[int]:
    return {len(es) for es in _edge_subsets(G) if _balanced(G, es, exact=True) and _connected(es)}


def longest_circuit(G: Graph) -> int:
    return max(circuit_lengths(G), default=0)


def euler_vertex_sets(G: Graph) -> Iterator[FrozenSet[int]]:
    H = to_networkx(G)
    for r in range(2, G.n + 1):
        for S in combinations(range(1, G.n + 1), r):
            sub = H.subgraph(S)
            if sub.number_of_edges() and nx.is_eulerian(sub):
                yield frozenset(S)


def largest_euler(G: Graph) -> int:
    return max((len(S) for S in euler_vertex_sets(G)), default=0)


def euler_sizes(G: Graph) -> Set[int]:
    return {len(S) for S in euler_vertex_sets(G)}


def is_hamiltonian(G: Graph) -> bool:
    if G.n < 3:
        return False
    edges = set(G.edges)
    for rest in permutations(range(2, G.n + 1)):
        tour = (1,) + rest + (1,)
        if all((min(a, b), max(a, b)) in edges for a, b in zip(tour, tour[1:])):
            return True
    return False


def has_multicolored_clique(G: Graph, parts: Iterable[Iterable[int]]) -> bool:
    H = to_networkx(G)
    for pick in product(*[sorted(p) for p in parts]):
        if all(H.has_edge(a, b) for a, b in combinations(pick, 2)):
            return True
    return False
