from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from euler_fpt.errors import ExtractionError, NotBiconnectedError, SearchBudgetExhausted
from euler_fpt.extractors import (
    PathBundle,
    SearchStats,
    extract_from_high_degree,
    extract_from_paths,
    find_disjoint_short_paths,
    ramsey_witness,
    ramsey_witness_among,
)
from euler_fpt.graph import EulerCertificate, Graph, verify_euler_certificate
from euler_fpt.thresholds import f_value, ramsey_upper

from .strategies import cycle_with_chords, graphs


def _complete(n: int) -> Graph:
    return Graph(n, [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)])


def _bundle_graph(lengths, extra=(), st_edge=False):
    """s=1, t=2 joined by internally disjoint paths of the given lengths."""
    edges = [(1, 2)] if st_edge else []
    paths = []
    nxt = 3
    for L in lengths:
        inner = list(range(nxt, nxt + L - 1))
        nxt += L - 1
        p = (1, *inner, 2)
        paths.append(p)
        edges.extend(zip(p, p[1:]))
    edges.extend(extra)
    G = Graph(nxt - 1, edges)
    return G, PathBundle(1, 2, tuple(paths), max(lengths))


# ---------------------------
# Ramsey witnesses
# ---------------------------

def test_complete_graph_gives_a_clique():
    w = ramsey_witness(_complete(10), 4, 3)
    assert w.kind == "clique" and len(w.vertices) == 4


def test_empty_graph_gives_an_independent_set():
    w = ramsey_witness(Graph(6, []), 3, 3)
    assert w.kind == "independent-set" and len(w.vertices) == 3


def test_too_few_vertices():
    with pytest.raises(ValueError):
        ramsey_witness_among(_complete(5), [1, 2, 3], 3, 3)


@given(graphs(directed=False, min_n=6, max_n=10, max_m=45), st.integers(2, 3), st.integers(2, 3))
def test_ramsey_witness_is_valid(G, r, s):
    if G.n < ramsey_upper(r, s):
        return
    w = ramsey_witness(G, r, s)
    vs = sorted(w.vertices)
    pairs = [(a, b) for i, a in enumerate(vs) for b in vs[i + 1 :]]
    if w.kind == "clique":
        assert len(vs) == r and all(G.has_edge(a, b) for a, b in pairs)
    else:
        assert len(vs) == s and not any(G.has_edge(a, b) for a, b in pairs)


# ---------------------------
# Path bundles
# ---------------------------

def test_find_paths_in_k25():
    G = Graph(7, [(a, b) for a in (1, 2) for b in range(3, 8)])
    bundle = find_disjoint_short_paths(G, 1, 2, 2, 5)
    assert bundle is not None and len(bundle) == 5
    bundle.validate(G)
    assert find_disjoint_short_paths(G, 1, 2, 2, 6) is None
    assert find_disjoint_short_paths(G, 1, 2, 3, 6) is None


def test_find_paths_budget():
    G = Graph(7, [(a, b) for a in (1, 2) for b in range(3, 8)])
    stats = SearchStats()
    with pytest.raises(SearchBudgetExhausted):
        find_disjoint_short_paths(G, 1, 2, 4, 5, node_budget=3, stats=stats)
    assert stats.nodes == 4


def test_find_paths_counts_nodes():
    # each middle vertex costs one step in and one step on to t
    G = Graph(7, [(a, b) for a in (1, 2) for b in range(3, 8)])
    stats = SearchStats()
    assert find_disjoint_short_paths(G, 1, 2, 2, 5, stats=stats) is not None
    assert stats.nodes == 10


def test_find_paths_prunes_superset_interiors():
    # 1-4-3-2 contains the interior of 1-3-2 and is never kept.
    edges = [(1, 3), (3, 2), (1, 4), (4, 3), (1, 5), (5, 6), (6, 2)]
    G = Graph(6, edges)
    bundle = find_disjoint_short_paths(G, 1, 2, 3, 2)
    assert bundle is not None
    assert bundle.paths == ((1, 3, 2), (1, 5, 6, 2))


def test_bundle_validation():
    G, bundle = _bundle_graph([2, 2])
    bundle.validate(G)
    with pytest.raises(ValueError):
        PathBundle(1, 2, ((1, 3, 2), (1, 3, 2)), 2).validate(G)
    with pytest.raises(ValueError):
        PathBundle(1, 2, ((1, 3, 2),), 1).validate(G)
    with pytest.raises(ValueError):
        PathBundle(1, 2, ((1, 4, 3, 2),), 3).validate(G)


def test_clique_of_middles_is_returned_whole():
    middles = range(3, 8)
    clique = [(a, b) for a in middles for b in middles if a < b]
    G, bundle = _bundle_graph([2] * 5, extra=clique)
    cert = extract_from_paths(G, bundle, 5)
    assert cert.vertex_set == frozenset(middles)


def test_independent_middles_make_an_even_cycle():
    G, bundle = _bundle_graph([2] * 4)
    cert = extract_from_paths(G, bundle, 4)
    assert verify_euler_certificate(G, cert, 4)
    assert {1, 2} <= cert.vertex_set


def test_long_nonadjacent_paths():
    G, bundle = _bundle_graph([4, 4, 4])
    cert = extract_from_paths(G, bundle, 8)
    assert cert.size == 8
    with pytest.raises(ExtractionError):
        extract_from_paths(G, bundle, 9)


def test_st_edge_uses_odd_path_count():
    G, bundle = _bundle_graph([3, 3, 3], st_edge=True)
    cert = extract_from_paths(G, bundle, 8)
    assert cert.size == 8


def test_chords_are_shortcut():
    G, bundle = _bundle_graph([4, 4], extra=[(3, 5)])
    cert = extract_from_paths(G, bundle, 6)
    assert verify_euler_certificate(G, cert, 6)
    assert 4 not in cert.vertex_set


@settings(max_examples=200)
@given(
    st.lists(st.integers(2, 4), min_size=2, max_size=6),
    st.booleans(),
    st.data(),
    st.integers(3, 6),
)
def test_extraction_is_sound(lengths, st_edge, data, k):
    G0, _ = _bundle_graph(lengths, st_edge=st_edge)
    inner = list(range(3, G0.n + 1))
    pairs = [(a, b) for i, a in enumerate(inner) for b in inner[i + 1 :] if not G0.has_edge(a, b)]
    extra = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=6)) if pairs else []
    G, bundle = _bundle_graph(lengths, extra=extra, st_edge=st_edge)
    try:
        cert = extract_from_paths(G, bundle, k)
    except ExtractionError:
        cert = None
    # Bundles below the guaranteed size may fail; only the ones that extract count.
    assume(cert is not None)
    assert verify_euler_certificate(G, cert, k)


@pytest.mark.parametrize("k", [3, 4])
@given(st.booleans(), st.data())
def test_bundle_of_guaranteed_size_always_extracts(k, st_edge, data):
    count = f_value(k, 2) - 1
    G0, _ = _bundle_graph([2] * count)
    middles = list(range(3, G0.n + 1))
    pairs = [(a, b) for i, a in enumerate(middles) for b in middles[i + 1 :]]
    extra = data.draw(st.lists(st.sampled_from(pairs), unique=True))
    G, bundle = _bundle_graph([2] * count, extra=extra, st_edge=st_edge)
    cert = extract_from_paths(G, bundle, k)
    assert verify_euler_certificate(G, cert, k)


@given(st.lists(st.integers(2, 5), min_size=2, max_size=5))
def test_two_clean_paths_always_extract(lengths):
    G, bundle = _bundle_graph(lengths)
    two = sorted(lengths)[-2:]
    k = two[0] + two[1]
    cert = extract_from_paths(G, bundle, k)
    assert verify_euler_certificate(G, cert, k)


# ---------------------------
# High-degree vertices
# ---------------------------

def _wheel(rim: int) -> Graph:
    hub = rim + 1
    edges = [(i, i % rim + 1) for i in range(1, rim + 1)]
    edges += [(i, hub) for i in range(1, rim + 1)]
    return Graph(hub, edges)


def test_wheel_long_path():
    G = _wheel(12)
    cert = extract_from_high_degree(G, 13, 4)
    assert isinstance(cert, EulerCertificate)
    assert verify_euler_certificate(G, cert, 4)
    assert 13 in cert.vertex_set


def test_friendship_graph_unions_both_triangles(bowtie):
    cert = extract_from_high_degree(bowtie, 3, 5)
    assert isinstance(cert, EulerCertificate)
    assert cert.vertex_set == frozenset(range(1, 6))


def test_star_is_not_biconnected():
    star = Graph(6, [(1, v) for v in range(2, 7)])
    with pytest.raises(NotBiconnectedError):
        extract_from_high_degree(star, 1, 3)


def test_high_degree_input_checks():
    with pytest.raises(ExtractionError):
        extract_from_high_degree(Graph(3, [(1, 2)]), 3, 3)
    with pytest.raises(ValueError):
        extract_from_high_degree(Graph(2, [(1, 2), (2, 1)], directed=True), 1, 3)
    with pytest.raises(ValueError):
        extract_from_high_degree(Graph(2, [(1, 2)]), 5, 3)


def test_wide_branching_forwards_a_bundle():
    # u=1 sees v=2 and every leaf; w=3 hangs below v and carries enough leaves.
    leaves = f_value(4, 4) - 1
    first = 4
    edges = [(1, 2), (2, 3)]
    for y in range(first, first + leaves):
        edges += [(3, y), (1, y)]
    G = Graph(first + leaves - 1, edges)
    found = extract_from_high_degree(G, 1, 4)
    assert isinstance(found, PathBundle)
    assert (found.s, found.t) == (1, 3)
    found.validate(G)
    cert = extract_from_paths(G, found, 4)
    assert verify_euler_certificate(G, cert, 4)


@settings(max_examples=100)
@given(cycle_with_chords(), st.integers(3, 6))
def test_high_degree_is_sound_on_biconnected_graphs(G, k):
    u = max(G.vertices(), key=lambda v: (G.degree(v), -v))
    try:
        found = extract_from_high_degree(G, u, k)
        if isinstance(found, PathBundle):
            found = extract_from_paths(G, found, k)
    except ExtractionError:
        return
    assert verify_euler_certificate(G, found, k)
