"""
Color-coding search for circuits whose length lies in a window [k, k'].

Each trial colors the edges with k' colors and runs a subset dynamic program per
start vertex u: ``reached[X]`` is the set of vertices v such that some (u, v)-trail
uses exactly one edge of every color in X. A closed colorful trail has distinct
edges, so it is a circuit. The exhaustive mode enumerates trails directly and is
exact; it is the reference the randomized mode is tested against.
"""
from __future__ import annotations

import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import CertificateError
from .graph import Circuit, Graph, verify_circuit
from .models import SEED_MASK, SolveMode, SolverConfig, Verdict

log = logging.getLogger(__name__)

Backpointer = Tuple[int, int, int]  # (previous vertex, edge id, color)


@dataclass(frozen=True)
class Coloring:
    colors: Tuple[int, ...]  # colors[eid] in 1..palette
    palette: int

    def color_of(self, eid: int) -> int:
        return self.colors[eid]


@dataclass(frozen=True)
class CircuitAnswer:
    verdict: Verdict
    certificate: Optional[Circuit] = None
    trials_used: int = 0


# ---------------------------
# Colorings and seeds
# ---------------------------

def derive_seed(seed: int, trial: int) -> int:
    """SplitMix64 finalizer over ``seed XOR trial``; one independent stream per trial."""
    z = ((seed ^ trial) + 0x9E3779B97F4A7C15) & SEED_MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & SEED_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & SEED_MASK
    return z ^ (z >> 31)


def random_coloring(G: Graph, k_prime: int, rng: random.Random) -> Coloring:
    if k_prime < 1:
        raise ValueError(f"palette size must be at least 1, got {k_prime}")
    return Coloring(tuple(rng.randint(1, k_prime) for _ in range(G.m)), k_prime)


def trial_count(k_prime: int, epsilon: float) -> int:
    """Colorings needed so a fixed circuit of at most k' edges is missed with probability below epsilon."""
    if k_prime < 1:
        raise ValueError(f"palette size must be at least 1, got {k_prime}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    ratio = k_prime ** k_prime / math.factorial(k_prime)
    return max(1, math.ceil(ratio * math.log(1.0 / epsilon) - 1e-12))


@lru_cache(maxsize=None)
def subset_order(palette: int) -> Tuple[int, ...]:
    """Every color subset as a bitmask (bit c-1 is color c), by popcount then value."""
    return tuple(sorted(range(1 << palette), key=lambda x: (x.bit_count(), x)))


# ---------------------------
# Subset dynamic program
# ---------------------------

@dataclass
class ColoringTable:
    start: int
    palette: int
    reached: List[int] = field(default_factory=list)  # indexed by color-subset mask; vertex bitsets
    back: Dict[Tuple[int, int], Backpointer] = field(default_factory=dict)

    def contains(self, colors: int, v: int) -> bool:
        return bool(self.reached[colors] >> v & 1)

    def trail(self, colors: int, v: int) -> Circuit:
        """The colorful (start, v)-trail recorded for this entry; ``Circuit`` doubles as the open-trail shape."""
        verts = [v]
        edges: List[int] = []
        while colors:
            w, eid, c = self.back[(colors, v)]
            edges.append(eid)
            verts.append(w)
            colors ^= 1 << (c - 1)
            v = w
        verts.reverse()
        edges.reverse()
        return Circuit(tuple(verts), tuple(edges))


def _arcs_by_color(G: Graph, coloring: Coloring) -> List[List[Tuple[int, int, int]]]:
    groups: List[List[Tuple[int, int, int]]] = [[] for _ in range(coloring.palette + 1)]
    for eid, (a, b) in enumerate(G.edges):
        c = coloring.colors[eid]
        groups[c].append((a, b, eid))
        if not G.directed:
            groups[c].append((b, a, eid))
    return groups


def _fill(
    G: Graph, coloring: Coloring, u: int, stop_size: Optional[int] = None
) -> Tuple[ColoringTable, Optional[int]]:
    """
    Fill the table in subset order. With ``stop_size`` set, stop at the first subset X
    with |X| >= stop_size and u in reached[X]; that X is returned alongside the table.
    """
    if not 1 <= u <= G.n:
        raise ValueError(f"start vertex {u} outside 1..{G.n}")
    palette = coloring.palette
    groups = _arcs_by_color(G, coloring)
    table = ColoringTable(u, palette, [0] * (1 << palette))
    table.reached[0] = 1 << u
    ubit = 1 << u
    for X in subset_order(palette):
        if not X:
            continue
        cur = 0
        rest = X
        while rest:
            low = rest & -rest
            rest ^= low
            c = low.bit_length()
            prev = table.reached[X ^ low]
            if not prev:
                continue
            for w, v, eid in groups[c]:
                if prev >> w & 1 and not cur >> v & 1:
                    cur |= 1 << v
                    table.back[(X, v)] = (w, eid, c)
        table.reached[X] = cur
        if stop_size is not None and cur & ubit and X.bit_count() >= stop_size:
            return table, X
    return table, None


def build_coloring_table(G: Graph, coloring: Coloring, u: int) -> ColoringTable:
    table, _ = _fill(G, coloring, u)
    return table


def colorful_circuit_dp(G: Graph, coloring: Coloring, u: int, k: int, k_prime: int) -> Optional[Circuit]:
    if k_prime != coloring.palette:
        raise ValueError(f"k'={k_prime} does not match the palette size {coloring.palette}")
    if k > k_prime:
        raise ValueError(f"k={k} exceeds k'={k_prime}")
    table, hit = _fill(G, coloring, u, stop_size=max(k, 1))
    if hit is None:
        return None
    return table.trail(hit, u)


# ---------------------------
# Exact trail enumeration
# ---------------------------

def _exhaustive_circuit(G: Graph, lo: int, hi: int) -> Optional[Circuit]:
    """
    First closed trail with length in [lo, hi], scanning start vertices ascending.
    A circuit can always be rotated to start at its smallest vertex, so the search
    from u never enters vertices below u.
    """
    for u in G.vertices():
        if not G.arcs_from(u):
            continue
        used = bytearray(G.m)
        verts = [u]
        edges: List[int] = []

        def extend(v: int) -> bool:
            depth = len(edges)
            for w, eid in G.arcs_from(v):
                if w < u or used[eid]:
                    continue
                if w == u and lo <= depth + 1 <= hi:
                    verts.append(w)
                    edges.append(eid)
                    return True
                if depth + 1 >= hi:
                    continue
                used[eid] = 1
                verts.append(w)
                edges.append(eid)
                if extend(w):
                    return True
                verts.pop()
                edges.pop()
                used[eid] = 0
            return False

        if extend(u):
            return Circuit(tuple(verts), tuple(edges))
    return None


# ---------------------------
# Randomized trials
# ---------------------------

def _run_trial(G: Graph, lo: int, palette: int, seed: int, trial: int) -> Optional[Circuit]:
    coloring = random_coloring(G, palette, random.Random(derive_seed(seed, trial)))
    for u in G.vertices():
        if not G.arcs_from(u):
            continue
        found = colorful_circuit_dp(G, coloring, u, lo, palette)
        if found is not None:
            return found
    return None


def _run_batch(args: Tuple[Graph, int, int, int, Sequence[int]]) -> Tuple[Optional[int], Optional[Circuit]]:
    G, lo, palette, seed, trials = args
    for t in trials:
        found = _run_trial(G, lo, palette, seed, t)
        if found is not None:
            return t, found
    return None, None


def _randomized_circuit(G: Graph, lo: int, palette: int, trials: int, config: SolverConfig) -> Tuple[Optional[Circuit], int]:
    if config.workers <= 1:
        for t in range(trials):
            found = _run_trial(G, lo, palette, config.seed, t)
            if found is not None:
                return found, t + 1
        return None, trials

    # Round r hands worker j the trials j*chunk..; the lowest successful index wins.
    chunk = 4
    stride = chunk * config.workers
    with ProcessPoolExecutor(max_workers=config.workers) as ex:
        for start in range(0, trials, stride):
            batches = [
                (G, lo, palette, config.seed, range(s, min(s + chunk, trials)))
                for s in range(start, min(start + stride, trials), chunk)
            ]
            hits = [(t, c) for t, c in ex.map(_run_batch, batches) if t is not None]
            if hits:
                t, found = min(hits, key=lambda h: h[0])
                return found, t + 1
            log.debug("trials %d..%d found nothing", start, min(start + stride, trials) - 1)
    return None, trials


def _checked(G: Graph, answer: CircuitAnswer, lo: int, hi: int) -> CircuitAnswer:
    C = answer.certificate
    if C is not None and not (verify_circuit(G, C) and lo <= C.length <= hi):
        raise CertificateError(f"solver produced an invalid circuit certificate {C!r}")
    return answer


def solve_range_circuit(G: Graph, k: int, k_prime: int, config: SolverConfig) -> CircuitAnswer:
    """Does G contain a circuit with at least k and at most k' edges?"""
    if not 0 <= k <= k_prime:
        raise ValueError(f"need 0 <= k <= k', got k={k}, k'={k_prime}")
    lo, hi = max(k, 1), min(k_prime, G.m)
    if lo > hi:
        log.info("no circuit length fits [%d, %d] with m=%d", k, k_prime, G.m)
        return CircuitAnswer(Verdict.NO)

    if config.mode is SolveMode.EXHAUSTIVE:
        found = _exhaustive_circuit(G, lo, hi)
        verdict = Verdict.YES if found is not None else Verdict.NO
        log.info("exhaustive trail search for lengths [%d, %d]: %s", lo, hi, verdict.value)
        return _checked(G, CircuitAnswer(verdict, found, 0), lo, hi)

    # Circuits longer than m do not exist, so the palette shrinks to hi.
    trials = trial_count(hi, config.epsilon)
    if config.max_trials is not None:
        trials = min(trials, config.max_trials)
    log.info("color coding: palette %d, %d trials, %d worker(s)", hi, trials, config.workers)
    found, used = _randomized_circuit(G, lo, hi, trials, config)
    if found is None:
        return CircuitAnswer(Verdict.NO_WITH_CONFIDENCE, None, used)
    return _checked(G, CircuitAnswer(Verdict.YES, found, used), lo, hi)


def solve_k_circuit(G: Graph, k: int, config: SolverConfig) -> CircuitAnswer:
    """A circuit with exactly k edges."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return solve_range_circuit(G, k, k, config)
