from __future__ import annotations

from typing import List, Optional, Tuple

from hypothesis import strategies as st

from euler_fpt.graph import Graph


def _pairs(n: int, directed: bool) -> List[Tuple[int, int]]:
    return [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b and (directed or a < b)]


@st.composite
def graphs(
    draw,
    directed: Optional[bool] = None,
    min_n: int = 0,
    max_n: int = 8,
    max_m: int = 14,
) -> Graph:
    if directed is None:
        directed = draw(st.booleans())
    n = draw(st.integers(min_n, max_n))
    pairs = _pairs(n, directed)
    if not pairs:
        return Graph(n, [], directed=directed)
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=min(max_m, len(pairs))))
    return Graph(n, chosen, directed=directed)


@st.composite
def cycle_with_chords(draw, min_n: int = 4, max_n: int = 10) -> Graph:
    """A Hamiltonian cycle 1..n plus random chords; always 2-connected."""
    n = draw(st.integers(min_n, max_n))
    ring = [(i, i % n + 1) for i in range(1, n + 1)]
    ring_keys = {(min(a, b), max(a, b)) for a, b in ring}
    chords = [p for p in _pairs(n, False) if p not in ring_keys]
    extra = draw(st.lists(st.sampled_from(chords), unique=True, max_size=len(chords))) if chords else []
    return Graph(n, ring + extra)


@st.composite
def digraphs_with_cycle(draw, max_n: int = 7) -> Graph:
    g = draw(graphs(directed=True, min_n=2, max_n=max_n, max_m=16))
    if g.m == 0:
        return Graph(2, [(1, 2), (2, 1)], directed=True)
    return g
