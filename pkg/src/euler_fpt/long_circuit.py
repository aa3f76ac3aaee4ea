from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Literal, Optional

from .color_coding import CircuitAnswer, solve_range_circuit
from .errors import BudgetExceededError, CertificateError
from .graph import Circuit, Graph, connected_components, fundamental_cycles_from, verify_circuit
from .models import SolverConfig, Verdict

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LongCycleOracle:
    """
    brute-exact: complete for graphs with at most ``edge_budget`` edges.
    dfs-fundamental: undirected only; a returned cycle is real, absence is not certified.
    """

    strategy: Literal["brute-exact", "dfs-fundamental"] = "brute-exact"
    edge_budget: int = 25


def _brute_cycle_at_least(G: Graph, k: int) -> Optional[Circuit]:
    shortest = 2 if G.directed else 3
    need = max(k, shortest)
    if need > G.n:
        return None
    for s in G.vertices():
        on_path = bytearray(G.n + 1)
        on_path[s] = 1
        verts: List[int] = [s]
        edges: List[int] = []

        def grow(v: int) -> bool:
            for w, eid in G.arcs_from(v):
                if w == s and len(edges) + 1 >= need:
                    verts.append(s)
                    edges.append(eid)
                    return True
                if w <= s or on_path[w]:
                    continue
                on_path[w] = 1
                verts.append(w)
                edges.append(eid)
                if grow(w):
                    return True
                verts.pop()
                edges.pop()
                on_path[w] = 0
            return False

        if grow(s):
            return Circuit(tuple(verts), tuple(edges))
    return None


def has_cycle_at_least(G: Graph, k: int, oracle: LongCycleOracle) -> Optional[Circuit]:
    """A simple cycle with at least k edges, per the oracle's guarantee."""
    if oracle.strategy == "brute-exact":
        if G.m > oracle.edge_budget:
            raise BudgetExceededError("edges for the brute-exact cycle oracle", oracle.edge_budget, G.m)
        return _brute_cycle_at_least(G, k)
    if oracle.strategy == "dfs-fundamental":
        if G.directed:
            raise ValueError("the dfs-fundamental oracle needs an undirected graph")
        for comp in connected_components(G):
            for cyc in fundamental_cycles_from(G, min(comp)):
                if cyc.length >= k:
                    return cyc
        return None
    raise ValueError(f"unknown oracle strategy {oracle.strategy!r}")


def _window(k: int) -> tuple[int, int]:
    # [k, 2k-2] degenerates for k <= 2; widen it so short circuits stay reachable.
    return max(k, 0), max(k, 2 * k - 2, 2)


def _yes(G: Graph, cyc: Circuit, k: int) -> CircuitAnswer:
    if not (verify_circuit(G, cyc) and cyc.length >= k):
        raise CertificateError(f"long-cycle step returned an invalid certificate {cyc!r}")
    return CircuitAnswer(Verdict.YES, cyc, 0)


def solve_long_circuit_undirected(G: Graph, k: int, config: SolverConfig) -> CircuitAnswer:
    """Does G contain a circuit with at least k edges? Undirected pipeline."""
    if G.directed:
        raise ValueError("solve_long_circuit_undirected needs an undirected graph")
    for comp in connected_components(G):
        if len(comp) < 3:
            continue
        root = min(comp)
        for cyc in fundamental_cycles_from(G, root):
            if cyc.length >= k:
                log.info("fundamental cycle of length %d from root %d answers k=%d", cyc.length, root, k)
                return _yes(G, cyc, k)
    lo, hi = _window(k)
    log.info("no fundamental cycle reaches k=%d; searching circuits of length [%d, %d]", k, lo, hi)
    return solve_range_circuit(G, lo, hi, config)


def solve_long_circuit_directed(
    G: Graph, k: int, oracle: LongCycleOracle, config: SolverConfig
) -> CircuitAnswer:
    """Directed pipeline; exact with the brute-exact oracle and exhaustive trails."""
    if not G.directed:
        raise ValueError("solve_long_circuit_directed needs a directed graph")
    cyc = has_cycle_at_least(G, k, oracle)
    if cyc is not None:
        log.info("oracle found a cycle of length %d for k=%d", cyc.length, k)
        return _yes(G, cyc, k)
    lo, hi = _window(k)
    log.info("no cycle with at least %d arcs; searching circuits of length [%d, %d]", k, lo, hi)
    return solve_range_circuit(G, lo, hi, config)
