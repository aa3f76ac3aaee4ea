from __future__ import annotations

import logging
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import GraphFormatError, InvalidGraphError
from .graph import Graph
from .reductions import CnfFormula, PartitionedGraph, ReductionOutput

log = logging.getLogger(__name__)


def _int(token: str, line_no: int, path: Optional[str], what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} must be an integer, got {token!r}", line_no, path) from None


def _lines(text: str) -> Iterable[Tuple[int, List[str]]]:
    """Yield (line number, tokens) for every line that is neither blank nor a comment."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c ") or line.startswith("%"):
            continue
        yield line_no, line.split()


# ---------------------------
# Graph text format
# ---------------------------

def _read_text(path: str) -> str:
    with open(path, "rb") as f:
        data = f.read()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_no = data.count(b"\n", 0, e.start) + 1
        raise GraphFormatError(f"not valid UTF-8 (byte 0x{data[e.start]:02x})", line_no, path) from None


def _parse_graph_text(
    text: str, path: Optional[str], allow_parts: bool
) -> Tuple[Graph, Dict[int, List[int]]]:
    header: Optional[Tuple[bool, int, int]] = None
    raw_edges: List[Tuple[int, int, int]] = []
    raw_parts: Dict[int, List[int]] = {}
    part_lines: Dict[int, int] = {}

    for line_no, tok in _lines(text):
        kind = tok[0]
        if kind == "p":
            if header is not None:
                raise GraphFormatError("duplicate header line", line_no, path)
            if len(tok) != 5 or tok[1] != "euler" or tok[2] not in ("directed", "undirected"):
                raise GraphFormatError(
                    "header must read 'p euler <directed|undirected> <n> <m>'", line_no, path
                )
            n = _int(tok[3], line_no, path, "vertex count")
            m = _int(tok[4], line_no, path, "edge count")
            if n < 0 or m < 0:
                raise GraphFormatError("counts must be non-negative", line_no, path)
            header = (tok[2] == "directed", n, m)
            continue
        if header is None:
            raise GraphFormatError(f"'{kind}' line before the 'p euler' header", line_no, path)
        directed = header[0]
        if kind in ("e", "a"):
            expected = "a" if directed else "e"
            if kind != expected:
                orient = "directed" if directed else "undirected"
                raise GraphFormatError(f"'{kind}' line in a {orient} graph (use '{expected}')", line_no, path)
            if len(tok) != 3:
                raise GraphFormatError(f"'{kind}' line needs exactly two endpoints", line_no, path)
            u = _int(tok[1], line_no, path, "endpoint")
            v = _int(tok[2], line_no, path, "endpoint")
            if u < 1 or v < 1:
                raise GraphFormatError(f"vertex ids are 1-based, got {u} {v}", line_no, path)
            raw_edges.append((u, v, line_no))
        elif kind == "part" and allow_parts:
            if len(tok) < 2:
                raise GraphFormatError("'part' line needs an index", line_no, path)
            idx = _int(tok[1], line_no, path, "part index")
            if idx in raw_parts:
                raise GraphFormatError(f"part {idx} defined twice", line_no, path)
            raw_parts[idx] = [_int(t, line_no, path, "vertex id") for t in tok[2:]]
            part_lines[idx] = line_no
        else:
            raise GraphFormatError(f"unknown line type {kind!r}", line_no, path)

    if header is None:
        raise GraphFormatError("missing 'p euler' header", None, path)
    directed, n, m = header
    if len(raw_edges) != m:
        raise GraphFormatError(f"header announces {m} edges but {len(raw_edges)} were given", None, path)

    ids = {x for u, v, _ in raw_edges for x in (u, v)}
    for members in raw_parts.values():
        ids.update(members)
    relabel: Optional[Dict[int, int]] = None
    origin: Optional[List[int]] = None
    if ids and max(ids) > n:
        if len(ids) > n:
            worst = next(ln for u, v, ln in raw_edges if max(u, v) > n) if raw_edges else None
            raise GraphFormatError(f"{len(ids)} distinct vertex ids do not fit n={n}", worst, path)
        ordered = sorted(ids)
        relabel = {old: i + 1 for i, old in enumerate(ordered)}
        origin = ordered + [0] * (n - len(ordered))
        log.warning("remapped %d sparse vertex ids onto 1..%d", len(ordered), n)

    def rl(x: int) -> int:
        return relabel[x] if relabel is not None else x

    edges = []
    for u, v, line_no in raw_edges:
        edges.append((rl(u), rl(v)))
    try:
        G = Graph(n, edges, directed=directed, origin=origin)
    except InvalidGraphError as e:
        # Graph reports the edge ordinal; point at the file line instead.
        line_no = None
        msg = str(e)
        if msg.startswith("edge #"):
            ordinal = int(msg[6:].split()[0])
            line_no = raw_edges[ordinal - 1][2]
        raise GraphFormatError(msg, line_no, path) from None

    parts: Dict[int, List[int]] = {}
    for idx, members in raw_parts.items():
        for x in members:
            if not 1 <= rl(x) <= n:
                raise GraphFormatError(f"part member {x} outside 1..{n}", part_lines[idx], path)
        parts[idx] = [rl(x) for x in members]
    return G, parts


def parse_graph(text: str, path: Optional[str] = None) -> Graph:
    G, _ = _parse_graph_text(text, path, allow_parts=False)
    return G


def load_graph(path: str) -> Graph:
    return parse_graph(_read_text(path), path)


def format_graph(G: Graph, comments: Iterable[str] = ()) -> str:
    """Serialize in the graph text format; edges keep their stored order."""
    kind, tag = ("directed", "a") if G.directed else ("undirected", "e")
    out = [f"c {c}" for c in comments]
    out.append(f"p euler {kind} {G.n} {G.m}")
    out.extend(f"{tag} {u} {v}" for u, v in G.edges)
    return "\n".join(out) + "\n"


def write_graph(path: str, G: Graph, comments: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_graph(G, comments))


# ---------------------------
# Partitioned graphs (k-partite clique instances)
# ---------------------------

def parse_partitioned(text: str, path: Optional[str] = None) -> PartitionedGraph:
    """
    A graph file with extra lines ``part <index> <v> ...``; indices must run 1..k.
    """
    G, parts = _parse_graph_text(text, path, allow_parts=True)
    if not parts:
        raise GraphFormatError("no 'part' lines found", None, path)
    if sorted(parts) != list(range(1, len(parts) + 1)):
        raise GraphFormatError(f"part indices must be 1..{len(parts)}, got {sorted(parts)}", None, path)
    return PartitionedGraph(G, tuple(frozenset(parts[i]) for i in range(1, len(parts) + 1)))


def load_partitioned(path: str) -> PartitionedGraph:
    return parse_partitioned(_read_text(path), path)


def format_partitioned(P: PartitionedGraph) -> str:
    body = format_graph(P.base)
    parts = "".join(
        f"part {i} {' '.join(str(v) for v in sorted(part))}\n" for i, part in enumerate(P.parts, start=1)
    )
    return body + parts


# ---------------------------
# DIMACS cnf
# ---------------------------

def parse_cnf(text: str, path: Optional[str] = None) -> CnfFormula:
    """DIMACS cnf restricted to one three-literal clause per line, each zero-terminated."""
    header: Optional[Tuple[int, int]] = None
    clauses: List[Tuple[int, int, int]] = []
    for line_no, tok in _lines(text):
        if tok[0] == "p":
            if header is not None:
                raise GraphFormatError("duplicate problem line", line_no, path)
            if len(tok) != 4 or tok[1] != "cnf":
                raise GraphFormatError("problem line must read 'p cnf <vars> <clauses>'", line_no, path)
            header = (_int(tok[2], line_no, path, "variable count"), _int(tok[3], line_no, path, "clause count"))
            continue
        if header is None:
            raise GraphFormatError("clause before the 'p cnf' problem line", line_no, path)
        lits = [_int(t, line_no, path, "literal") for t in tok]
        if lits[-1] != 0:
            raise GraphFormatError("clause must end with 0", line_no, path)
        lits = lits[:-1]
        if len(lits) != 3 or 0 in lits:
            raise GraphFormatError(f"clause must hold exactly 3 nonzero literals, got {len(lits)}", line_no, path)
        for lit in lits:
            if abs(lit) > header[0]:
                raise GraphFormatError(f"literal {lit} names a variable above {header[0]}", line_no, path)
        clauses.append((lits[0], lits[1], lits[2]))
    if header is None:
        raise GraphFormatError("missing 'p cnf' problem line", None, path)
    if len(clauses) != header[1]:
        raise GraphFormatError(f"problem line announces {header[1]} clauses but {len(clauses)} were given", None, path)
    return CnfFormula(header[0], tuple(clauses))


def load_cnf(path: str) -> CnfFormula:
    return parse_cnf(_read_text(path), path)


def format_cnf(F: CnfFormula) -> str:
    out = [f"p cnf {F.n} {len(F.clauses)}"]
    out.extend(" ".join(str(l) for l in clause) + " 0" for clause in F.clauses)
    return "\n".join(out) + "\n"


# ---------------------------
# Reduction output
# ---------------------------

def format_provenance(provenance: Mapping[int, str]) -> str:
    return "".join(f"v {v} {provenance[v]}\n" for v in sorted(provenance))


def parse_provenance(text: str, path: Optional[str] = None) -> Dict[int, str]:
    out: Dict[int, str] = {}
    for line_no, tok in _lines(text):
        if tok[0] != "v" or len(tok) < 3:
            raise GraphFormatError("provenance lines read 'v <target-id> <label>'", line_no, path)
        out[_int(tok[1], line_no, path, "target id")] = " ".join(tok[2:])
    return out


def write_reduction(out: ReductionOutput, graph_path: str, sidecar_path: Optional[str] = None) -> str:
    """Write the target graph and its provenance sidecar; returns the sidecar path."""
    sidecar_path = sidecar_path or graph_path + ".prov"
    write_graph(graph_path, out.target, comments=[f"{out.kind} reduction, parameter {out.parameter}"])
    with open(sidecar_path, "w", encoding="utf-8") as f:
        f.write(format_provenance(out.provenance))
    return sidecar_path
