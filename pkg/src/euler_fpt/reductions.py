"""
Instance generators for the three hardness constructions, plus brute-force oracles
for their source problems so every generated instance can be cross-checked.

Target vertex ids are fixed by the construction order documented on each generator;
``ReductionOutput.provenance`` names every target vertex.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import ReductionInputError
from .graph import EulerCertificate, Graph, iter_mask, verify_euler_certificate

log = logging.getLogger(__name__)

Clause = Tuple[int, int, int]
TargetSolver = Callable[[Graph, int], Optional[EulerCertificate]]


@dataclass(frozen=True)
class CnfFormula:
    n: int
    clauses: Tuple[Clause, ...]

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self) -> Dict[int, Tuple[int, int]]:
        """variable -> (positive count, negative count)"""
        counts = {v: [0, 0] for v in range(1, self.n + 1)}
        for clause in self.clauses:
            for lit in clause:
                counts[abs(lit)][0 if lit > 0 else 1] += 1
        return {v: (p, q) for v, (p, q) in counts.items()}

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in clause) for clause in self.clauses)


@dataclass(frozen=True)
class PartitionedGraph:
    base: Graph
    parts: Tuple[frozenset[int], ...]

    @property
    def k(self) -> int:
        return len(self.parts)

    def part_of(self) -> Dict[int, int]:
        return {v: i for i, part in enumerate(self.parts, start=1) for v in part}


@dataclass(frozen=True)
class ReductionOutput:
    kind: str
    target: Graph
    parameter: int
    provenance: Dict[int, str] = field(default_factory=dict)


# ---------------------------
# Hamiltonian cycle in cubic graphs -> subdivision
# ---------------------------

def reduce_hamiltonian_cubic(G: Graph) -> ReductionOutput:
    """
    Subdivide every edge. Original vertices keep ids 1..n; edge e becomes vertex n+e+1.
    G is Hamiltonian iff the target has an induced Euler subgraph on >= 2n vertices.
    """
    if G.directed:
        raise ReductionInputError("the subdivision reduction takes an undirected cubic graph")
    bad = [v for v in G.vertices() if G.degree(v) != 3]
    if bad:
        raise ReductionInputError(f"graph is not cubic: vertex {bad[0]} has degree {G.degree(bad[0])}")
    n = G.n
    edges: List[Tuple[int, int]] = []
    provenance = {v: f"v{v}" for v in G.vertices()}
    for eid, (a, b) in enumerate(G.edges):
        s = n + eid + 1
        edges.append((a, s))
        edges.append((b, s))
        provenance[s] = f"e{a}-{b}"
    target = Graph(n + G.m, edges)
    log.info("subdivision: %d vertices, %d edges, parameter %d", target.n, target.m, 2 * n)
    return ReductionOutput("subdivision", target, 2 * n, provenance)


# ---------------------------
# Multicolored clique -> directed large Euler subgraph
# ---------------------------

def _validate_partition(P: PartitionedGraph) -> None:
    G = P.base
    if G.directed:
        raise ReductionInputError("the clique instance must be undirected")
    if not P.parts:
        raise ReductionInputError("at least one part is required")
    seen: set[int] = set()
    for i, part in enumerate(P.parts, start=1):
        if not part:
            raise ReductionInputError(f"part {i} is empty")
        if part & seen:
            raise ReductionInputError(f"part {i} overlaps an earlier part")
        seen |= part
    if seen != set(G.vertices()):
        missing = sorted(set(G.vertices()) - seen)
        raise ReductionInputError(f"parts must cover every vertex; missing {missing[:5]}")
    where = P.part_of()
    for a, b in G.edges:
        if where[a] == where[b]:
            raise ReductionInputError(f"edge {a}-{b} lies inside part {where[a]}")


def reduce_multicolored_clique(P: PartitionedGraph) -> ReductionOutput:
    """
    Source vertices keep ids 1..|V|; x_i = |V|+2i-1 and y_i = |V|+2i.
    Arc order: cross-part non-edges (lower part to higher), connectors x_i -> V_i -> y_i, ring.
    """
    _validate_partition(P)
    G, k, nv = P.base, P.k, P.base.n
    parts = [sorted(p) for p in P.parts]
    x = [0] + [nv + 2 * i - 1 for i in range(1, k + 1)]
    y = [0] + [nv + 2 * i for i in range(1, k + 1)]
    arcs: List[Tuple[int, int]] = []
    for i in range(k):
        for j in range(i + 1, k):
            for a in parts[i]:
                for b in parts[j]:
                    if not G.has_edge(a, b):
                        arcs.append((a, b))
    for i in range(1, k + 1):
        for v in parts[i - 1]:
            arcs.append((x[i], v))
        for v in parts[i - 1]:
            arcs.append((v, y[i]))
    for i in range(1, k + 1):
        arcs.append((y[i], x[i % k + 1]))

    provenance: Dict[int, str] = {}
    for i, part in enumerate(parts, start=1):
        for v in part:
            provenance[v] = f"v{v}@V{i}"
        provenance[x[i]] = f"x{i}"
        provenance[y[i]] = f"y{i}"
    target = Graph(nv + 2 * k, arcs, directed=True)
    log.info("multicolored clique: %d vertices, %d arcs, parameter %d", target.n, target.m, 3 * k)
    return ReductionOutput("mcc", target, 3 * k, provenance)


# ---------------------------
# 3-SAT with four occurrences -> directed large Euler subgraph
# ---------------------------

def _var_ids(i: int) -> Dict[str, int]:
    base = 6 * (i - 1)
    return {"y": base + 1, "y'": base + 2, "x1": base + 3, "x2": base + 4, "~x1": base + 5, "~x2": base + 6}


def _clause_ids(n: int, j: int) -> Dict[str, int]:
    base = 6 * n + 8 * (j - 1)
    ids = {"z": base + 1, "z'": base + 2}
    for h in (1, 2, 3):
        ids[f"u{h}"] = base + 2 + h
        ids[f"v{h}"] = base + 5 + h
    return ids


def _literal_slots(F: CnfFormula) -> List[Tuple[int, int, str]]:
    """(clause, position, variable vertex key) for every literal, by clause then position."""
    seen: Dict[int, int] = {}
    out = []
    for j, clause in enumerate(F.clauses, start=1):
        for h, lit in enumerate(clause, start=1):
            seen[lit] = seen.get(lit, 0) + 1
            key = ("x" if lit > 0 else "~x") + str(seen[lit])
            out.append((j, h, key))
    return out


def _validate_cnf(F: CnfFormula, k: int) -> None:
    if F.n < 1 or not F.clauses:
        raise ReductionInputError("formula needs at least one variable and one clause")
    for j, clause in enumerate(F.clauses, start=1):
        if len(clause) != 3 or any(l == 0 or abs(l) > F.n for l in clause):
            raise ReductionInputError(f"clause {j} must hold three literals over variables 1..{F.n}")
    for v, (pos, neg) in F.occurrences().items():
        if (pos, neg) != (2, 2):
            raise ReductionInputError(
                f"variable {v} occurs {pos} times positively and {neg} times negated; exactly 2 and 2 are required"
            )
    top = 4 * (F.n + F.m)
    if not 4 <= k <= top:
        raise ReductionInputError(f"k must lie in 4..{top}, got {k}")


def reduce_3sat_4occ(F: CnfFormula, k: int) -> ReductionOutput:
    """
    Variable x_i owns ids 6(i-1)+1..6i (y, y', x^1, x^2, ~x^1, ~x^2); clause C_j owns
    6n+8(j-1)+1..6n+8j (z, z', u^1..u^3, v^1..v^3). The h-th literal of C_j is wired to
    the first or second vertex of its literal path by occurrence order.
    """
    _validate_cnf(F, k)
    n, m = F.n, F.m
    arcs: List[Tuple[int, int]] = []
    provenance: Dict[int, str] = {}
    for i in range(1, n + 1):
        d = _var_ids(i)
        arcs += [(d["y"], d["x1"]), (d["x1"], d["x2"]), (d["x2"], d["y'"])]
        arcs += [(d["y"], d["~x1"]), (d["~x1"], d["~x2"]), (d["~x2"], d["y'"])]
        provenance[d["y"]] = f"y{i}"
        provenance[d["y'"]] = f"y{i}'"
        for p in (1, 2):
            provenance[d[f"x{p}"]] = f"x{i}^{p}"
            provenance[d[f"~x{p}"]] = f"~x{i}^{p}"
    for i in range(2, n + 1):
        arcs.append((_var_ids(i - 1)["y'"], _var_ids(i)["y"]))
    for j in range(1, m + 1):
        c = _clause_ids(n, j)
        for h in (1, 2, 3):
            arcs += [(c["z"], c[f"u{h}"]), (c[f"u{h}"], c[f"v{h}"]), (c[f"v{h}"], c["z'"])]
        provenance[c["z"]] = f"z{j}"
        provenance[c["z'"]] = f"z{j}'"
        for h in (1, 2, 3):
            provenance[c[f"u{h}"]] = f"u{j}^{h}"
            provenance[c[f"v{h}"]] = f"v{j}^{h}"
    for j in range(2, m + 1):
        arcs.append((_clause_ids(n, j - 1)["z'"], _clause_ids(n, j)["z"]))
    arcs.append((_var_ids(n)["y'"], _clause_ids(n, 1)["z"]))
    arcs.append((_clause_ids(n, m)["z'"], _var_ids(1)["y"]))
    for j, h, key in _literal_slots(F):
        var = abs(F.clauses[j - 1][h - 1])
        lv = _var_ids(var)[key]
        c = _clause_ids(n, j)
        arcs += [(lv, c[f"u{h}"]), (c[f"v{h}"], lv)]
    target = Graph(6 * n + 8 * m, arcs, directed=True)
    log.info("3-SAT: %d vertices, %d arcs, parameter %d", target.n, target.m, k)
    return ReductionOutput("3sat", target, k, provenance)


def sat_witness(F: CnfFormula, assignment: Sequence[bool], out: ReductionOutput) -> EulerCertificate:
    """
    The induced cycle on 4(n+m) vertices that a satisfying assignment selects: the literal
    path of the false literal for each variable, and per clause the gadget of its first true literal.
    """
    if out.kind != "3sat":
        raise ValueError(f"expected a 3sat reduction output, got {out.kind!r}")
    if len(assignment) != F.n:
        raise ValueError(f"assignment has {len(assignment)} values for {F.n} variables")
    chosen: List[int] = []
    for i in range(1, F.n + 1):
        d = _var_ids(i)
        # A true x_i is wired into the clauses it satisfies, so the cycle runs through ~x_i.
        side = ("~x1", "~x2") if assignment[i - 1] else ("x1", "x2")
        chosen += [d["y"], d[side[0]], d[side[1]], d["y'"]]
    for j, clause in enumerate(F.clauses, start=1):
        h = next((h for h, l in enumerate(clause, start=1) if assignment[abs(l) - 1] == (l > 0)), None)
        if h is None:
            raise ValueError(f"assignment leaves clause {j} unsatisfied")
        c = _clause_ids(F.n, j)
        chosen += [c["z"], c[f"u{h}"], c[f"v{h}"], c["z'"]]
    return EulerCertificate.of(chosen)


# ---------------------------
# Source-side oracles
# ---------------------------

def has_hamiltonian_cycle(G: Graph) -> bool:
    """Held-Karp over vertex subsets: reach[mask] holds the endpoints of paths from vertex 1 covering mask."""
    n = G.n
    if n == 0 or (not G.directed and n < 3) or (G.directed and n < 2):
        return False
    full = G.full_mask()
    reach: Dict[int, int] = {1 << 1: 1 << 1}
    for size in range(1, n):
        nxt: Dict[int, int] = {}
        for mask, ends in reach.items():
            for v in iter_mask(ends):
                step = G.out_mask(v) & ~mask
                for w in iter_mask(step):
                    key = mask | 1 << w
                    nxt[key] = nxt.get(key, 0) | 1 << w
        reach = nxt
    ends = reach.get(full, 0)
    return bool(ends & G.in_mask(1))


def has_multicolored_clique(P: PartitionedGraph) -> bool:
    G = P.base
    parts = [sorted(p) for p in P.parts]

    def grow(i: int, picked: List[int]) -> bool:
        if i == len(parts):
            return True
        for v in parts[i]:
            if all(G.has_edge(v, w) for w in picked):
                picked.append(v)
                if grow(i + 1, picked):
                    return True
                picked.pop()
        return False

    return grow(0, [])


def satisfying_assignments(F: CnfFormula) -> Iterator[Tuple[bool, ...]]:
    for values in product((False, True), repeat=F.n):
        if F.satisfied_by(values):
            yield values


# ---------------------------
# Soundness harness
# ---------------------------

def verify_reduction(
    src_answer: bool,
    out: ReductionOutput,
    solver: Optional[TargetSolver] = None,
    witness: Optional[EulerCertificate] = None,
    budget: int = 20,
) -> bool:
    """
    True iff the target answer equals ``src_answer``. A witness that verifies settles the
    target as yes; otherwise the solver decides (brute force within ``budget`` by default).
    """
    if witness is not None and verify_euler_certificate(out.target, witness, out.parameter):
        target_yes = True
    else:
        if solver is None:
            from .euler_subgraph import brute_large_euler

            def solver(g: Graph, k: int) -> Optional[EulerCertificate]:
                return brute_large_euler(g, k, exact_size=False, budget=budget)

        target_yes = solver(out.target, out.parameter) is not None
    log.info("%s reduction: source %s, target %s", out.kind, src_answer, target_yes)
    return target_yes == src_answer
