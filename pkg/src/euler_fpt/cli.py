from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional

from .color_coding import CircuitAnswer, solve_k_circuit, solve_range_circuit
from .config import load_config
from .errors import (
    BudgetExceededError,
    CertificateError,
    GraphFormatError,
    InvalidGraphError,
    ReductionInputError,
)
from .euler_subgraph import EulerAnswer, brute_large_euler, decide_large_euler_undirected, directed_large_euler_small_k
from .extractors import SearchStats
from .formats import format_graph, format_provenance, load_cnf, load_graph, load_partitioned, write_reduction
from .graph import Circuit, EulerCertificate, Graph, verify_circuit, verify_euler_certificate
from .long_circuit import LongCycleOracle, solve_long_circuit_directed, solve_long_circuit_undirected
from .models import Certificate, RunResult, RunStats, SolveMode, SolverConfig, Verdict
from .reductions import (
    ReductionOutput,
    has_hamiltonian_cycle,
    has_multicolored_clique,
    reduce_3sat_4occ,
    reduce_hamiltonian_cubic,
    reduce_multicolored_clique,
    sat_witness,
    satisfying_assignments,
    verify_reduction,
)
from .thresholds import threshold_params, threshold_report

log = logging.getLogger(__name__)

EX_USAGE = 64
EX_DATAERR = 65

DIRECTED_HARD_NOTE = (
    "directed Large Euler Subgraph is NP-complete for every fixed k >= 4; "
    "the instance exceeds the brute-force budget"
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"ERROR: {message}\n")


# ---------------------------
# Certificates and output
# ---------------------------

def _label(G: Graph, v: int) -> int:
    return G.origin[v - 1] if G.origin else v


def _circuit_certificate(G: Graph, C: Circuit) -> Certificate:
    if not verify_circuit(G, C):
        raise CertificateError(f"refusing to emit an invalid circuit {C!r}")
    return Certificate(
        kind="circuit",
        vertices=[_label(G, v) for v in C.vertices],
        edges=[[_label(G, x) for x in G.endpoints(e)] for e in C.edges],
    )


def _vertex_certificate(G: Graph, cert: EulerCertificate, k: int) -> Certificate:
    if not verify_euler_certificate(G, cert, k):
        raise CertificateError(f"refusing to emit an invalid vertex set {cert.sorted()}")
    return Certificate(kind="vertex-set", vertices=sorted(_label(G, v) for v in cert.vertex_set))


def _emit(result: RunResult, as_json: bool) -> None:
    if as_json:
        print(result.model_dump_json())
        return
    head = f"{result.verdict.value}"
    if result.parameter is not None:
        head += f" (k={result.parameter})"
    print(head)
    cert = result.certificate
    if cert is not None:
        if cert.kind == "circuit":
            print(f"circuit of length {len(cert.edges or [])}: " + " ".join(map(str, cert.vertices)))
        else:
            print(f"vertex set of size {len(cert.vertices)}: " + " ".join(map(str, cert.vertices)))
    s = result.stats
    if s.trials_used:
        print(f"trials: {s.trials_used}")
    if s.nodes_explored is not None:
        print(f"search nodes: {s.nodes_explored}")
    if s.wall_time_ms is not None:
        print(f"time: {s.wall_time_ms:.1f} ms")
    if result.note:
        print(f"note: {result.note}")


# ---------------------------
# Settings
# ---------------------------

def _solver_config(args: argparse.Namespace, cfg: Dict[str, Any], G: Graph) -> SolverConfig:
    s = cfg["solver"]
    if args.mode:
        mode = SolveMode(args.mode)
    else:
        mode = SolveMode.EXHAUSTIVE if G.m <= s["exhaustive_max_edges"] else SolveMode.RANDOMIZED
    seed = args.seed if args.seed is not None else s["seed"]
    return SolverConfig(
        mode=mode,
        seed=seed,
        epsilon=args.epsilon if args.epsilon is not None else s["epsilon"],
        max_trials=args.max_trials if args.max_trials is not None else s["max_trials"],
        workers=args.workers if args.workers is not None else s["workers"],
    )


def _seed(args: argparse.Namespace, cfg: Dict[str, Any]) -> int:
    return args.seed if args.seed is not None else cfg["solver"]["seed"]


# ---------------------------
# Commands
# ---------------------------

def _circuit_result(command: List[str], G: Graph, k: int, answer: CircuitAnswer, seed: int) -> RunResult:
    cert = _circuit_certificate(G, answer.certificate) if answer.certificate is not None else None
    return RunResult(
        command=command,
        verdict=answer.verdict,
        parameter=k,
        certificate=cert,
        stats=RunStats(trials_used=answer.trials_used),
        seed=seed,
    )


def cmd_long_circuit(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> RunResult:
    G = load_graph(args.file)
    config = _solver_config(args, cfg, G)
    if G.directed:
        oracle = LongCycleOracle("brute-exact", edge_budget=cfg["budgets"]["cycle_edges"])
        answer = solve_long_circuit_directed(G, args.k, oracle, config)
    else:
        answer = solve_long_circuit_undirected(G, args.k, config)
    return _circuit_result(command, G, args.k, answer, config.seed)


def cmd_range_circuit(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> RunResult:
    G = load_graph(args.file)
    config = _solver_config(args, cfg, G)
    answer = solve_range_circuit(G, args.k, args.k_prime, config)
    return _circuit_result(command, G, args.k, answer, config.seed)


def cmd_k_circuit(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> RunResult:
    G = load_graph(args.file)
    config = _solver_config(args, cfg, G)
    answer = solve_k_circuit(G, args.k, config)
    return _circuit_result(command, G, args.k, answer, config.seed)


def _euler_result(command: List[str], G: Graph, k: int, answer: EulerAnswer, seed: int) -> RunResult:
    cert = _vertex_certificate(G, answer.certificate, k) if answer.certificate is not None else None
    return RunResult(
        command=command,
        verdict=answer.verdict,
        parameter=k,
        certificate=cert,
        stats=RunStats(nodes_explored=answer.nodes_explored),
        seed=seed,
        note=answer.note,
    )


def _from_brute(found: Optional[EulerCertificate], stats: Optional[SearchStats] = None) -> EulerAnswer:
    verdict = Verdict.YES if found is not None else Verdict.NO
    return EulerAnswer(verdict, found, nodes_explored=stats.nodes if stats is not None else None)


def cmd_large_euler(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> RunResult:
    G = load_graph(args.file)
    budgets = cfg["budgets"]
    k = args.k
    if not G.directed:
        answer = decide_large_euler_undirected(
            G, k, budget=budgets["brute_vertices"], path_budget=budgets["path_nodes"]
        )
    elif k <= 3:
        answer = _from_brute(directed_large_euler_small_k(G, max(k, 1)))
    else:
        stats = SearchStats()
        try:
            answer = _from_brute(brute_large_euler(G, k, budget=budgets["brute_vertices"], stats=stats), stats)
        except BudgetExceededError as e:
            log.info("%s", e)
            answer = EulerAnswer(Verdict.INCONCLUSIVE, note=DIRECTED_HARD_NOTE)
    return _euler_result(command, G, k, answer, _seed(args, cfg))


def cmd_euler_k(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> RunResult:
    G = load_graph(args.file)
    stats = SearchStats()
    try:
        found = brute_large_euler(G, args.k, exact_size=True, budget=cfg["budgets"]["brute_vertices"], stats=stats)
        answer = _from_brute(found, stats)
    except BudgetExceededError as e:
        note = DIRECTED_HARD_NOTE if G.directed and args.k >= 4 else str(e)
        answer = EulerAnswer(Verdict.INCONCLUSIVE, note=note)
    return _euler_result(command, G, args.k, answer, _seed(args, cfg))


def _check_reduction(kind: str, source: Any, out: ReductionOutput, budget: int) -> Optional[bool]:
    """True/False when the source and target answers were compared, None when the check was skipped."""
    try:
        if kind == "subdivision":
            if source.n > budget:
                raise BudgetExceededError("source vertices for the Hamiltonian check", budget, source.n)
            return verify_reduction(has_hamiltonian_cycle(source), out, budget=budget)
        if kind == "mcc":
            return verify_reduction(has_multicolored_clique(source), out, budget=budget)
        if source.n > budget:
            raise BudgetExceededError("variables for the satisfiability check", budget, source.n)
        assignment = next(satisfying_assignments(source), None)
        if assignment is None:
            return verify_reduction(False, out, budget=budget)
        return verify_reduction(True, out, witness=sat_witness(source, assignment, out), budget=budget)
    except BudgetExceededError as e:
        log.warning("check skipped: %s", e)
        return None


def cmd_reduce(args: argparse.Namespace, cfg: Dict[str, Any], command: List[str]) -> int:
    if args.kind == "subdivision":
        source: Any = load_graph(args.input)
        out = reduce_hamiltonian_cubic(source)
    elif args.kind == "mcc":
        source = load_partitioned(args.input)
        out = reduce_multicolored_clique(source)
    else:
        source = load_cnf(args.input)
        k = args.k if args.k is not None else 4 * (source.n + source.m)
        out = reduce_3sat_4occ(source, k)

    sidecar = None
    if args.out:
        sidecar = write_reduction(out, args.out)
    elif not args.json:
        sys.stdout.write(format_graph(out.target, comments=[f"{out.kind} reduction, parameter {out.parameter}"]))

    checked = _check_reduction(args.kind, source, out, cfg["budgets"]["brute_vertices"]) if args.check else None
    if args.json:
        payload: Dict[str, Any] = {
            "kind": out.kind,
            "vertices": out.target.n,
            "edges": out.target.m,
            "directed": out.target.directed,
            "parameter": out.parameter,
            "graph": args.out,
            "provenance": sidecar,
            "check": checked,
        }
        if not args.out:
            payload["graph_text"] = format_graph(out.target)
            payload["provenance_text"] = format_provenance(out.provenance)
        print(json.dumps(payload, sort_keys=True))
    else:
        stream = sys.stdout if args.out else sys.stderr
        unit = "arcs" if out.target.directed else "edges"
        print(
            f"{out.kind}: {out.target.n} vertices, {out.target.m} {unit}, parameter {out.parameter}",
            file=stream,
        )
        if args.out:
            print(f"wrote {args.out} and {sidecar}")
        if args.check:
            status = {True: "source and target agree", False: "MISMATCH", None: "skipped (over budget)"}[checked]
            print(f"check: {status}", file=stream)
    return 1 if checked is False else 0


def cmd_thresholds(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        lines = threshold_report(args.k)
    except ValueError as e:
        parser.error(str(e))
        return EX_USAGE
    if args.json:
        p = threshold_params(args.k)
        # Values outgrow float precision, so they travel as decimal strings.
        payload = {
            "k": p.k,
            "f": {str(ell): str(v) for ell, v in sorted(p.f_table.items())},
            "delta_k": str(p.delta_k),
            "tw_threshold": str(p.tw_threshold),
        }
        print(json.dumps(payload))
    else:
        for line in lines:
            print(line)
    return 0


# ---------------------------
# Parser
# ---------------------------

def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config path (default .euler.yaml or $EULER_FPT_CONFIG)")
    common.add_argument("--json", action="store_true", help="Emit one JSON object on stdout")
    common.add_argument("--timing", action="store_true", help="Report wall time (breaks byte-identical output)")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--mode", choices=[m.value for m in SolveMode], help="Default: exhaustive when m is small")
    solver.add_argument("--seed", type=int, help="Seed for every random choice (default 0)")
    solver.add_argument("--epsilon", type=float, help="Failure probability of a randomized no")
    solver.add_argument("--max-trials", type=int, help="Cap on color-coding trials")
    solver.add_argument("--workers", type=int, help="Processes for randomized trials")

    parser = _Parser(prog="euler-fpt", description="Long Circuit and Large Euler Subgraph solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("long-circuit", parents=[common, solver], help="Circuit with at least k edges")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_long_circuit)

    p = sub.add_parser("range-circuit", parents=[common, solver], help="Circuit with k..k' edges")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.add_argument("k_prime", type=int, metavar="k'")
    p.set_defaults(handler=cmd_range_circuit)

    p = sub.add_parser("k-circuit", parents=[common, solver], help="Circuit with exactly k edges")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_k_circuit)

    p = sub.add_parser("large-euler", parents=[common, solver], help="Induced Euler subgraph on >= k vertices")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_large_euler)

    p = sub.add_parser("euler-k", parents=[common, solver], help="Induced Euler subgraph on exactly k vertices")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.set_defaults(handler=cmd_euler_k)

    p = sub.add_parser("reduce", parents=[common], help="Generate a hardness-reduction instance")
    p.add_argument("kind", choices=["subdivision", "mcc", "3sat"])
    p.add_argument("input", help="Cubic graph, partitioned graph or DIMACS cnf file")
    p.add_argument("--out", help="Target graph path; the provenance sidecar goes to <out>.prov")
    p.add_argument("--k", type=int, help="3sat only: target size (default 4(n+m))")
    p.add_argument("--check", action="store_true", help="Cross-check source and target answers by brute force")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("thresholds", parents=[common], help="Print f, delta_k and the treewidth threshold")
    p.add_argument("k", type=int)
    p.set_defaults(handler=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    level = logging.DEBUG if args.verbose >= 2 else logging.INFO if args.verbose == 1 else logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format="[%(levelname)s] %(message)s", force=True)

    if args.command == "thresholds":
        try:
            return cmd_thresholds(args, parser)
        except SystemExit as e:
            return int(e.code or 0)

    try:
        cfg = load_config(args.config)
    except Exception as e:
        print(f"ERROR: Failed to read config: {e}", file=sys.stderr)
        return EX_DATAERR

    if getattr(args, "k", None) is not None and args.k < 0:
        print("ERROR: k must be non-negative", file=sys.stderr)
        return EX_USAGE

    command = ["euler-fpt", *argv]
    handler: Callable[..., Any] = args.handler
    started = time.perf_counter()
    try:
        outcome = handler(args, cfg, command)
    except (GraphFormatError, ReductionInputError, InvalidGraphError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EX_DATAERR
    except BudgetExceededError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"ERROR: Failed to read input: {e}", file=sys.stderr)
        return EX_DATAERR
    except ValueError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EX_USAGE

    if isinstance(outcome, int):
        return outcome
    if args.timing:
        outcome.stats.wall_time_ms = (time.perf_counter() - started) * 1000.0
    _emit(outcome, args.json)
    return outcome.exit_code()


if __name__ == "__main__":
    raise SystemExit(main())
