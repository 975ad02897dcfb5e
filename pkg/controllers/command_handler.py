"""
Command Handler Module
======================
RunConfig and the map / encode / decode / verify / bench commands.
Every cmd_* returns a process exit code:

    0  success
    1  verification failure, bad input, I/O error
    2  no valid mapping (infeasible point set, strategy not applicable)
    3  timeout
"""
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from controllers.benchmark_controller import DEFAULT_TIMEOUT, BenchmarkController
from controllers.export_handler import ExportHandler, solution_path_for
from controllers.mapping_controller import MODES, MappingController
from debug_logger import get_logger
from models.architecture import DEFAULT_MAX_PLACEMENTS, connected_subsets, resolve_architecture
from models.circuit import extract_skeleton
from models.encoder import (decode_solution, encode, evaluate_assignment, parse_model,
                            search_space_bits)
from models.errors import (InfeasibleMappingError, MappingTimeoutError, QxMapperError,
                           StrategyError)
from models.qasm_parser import load_qasm_file
from models.reconstruction import build_mapped_circuit, read_mapped_qasm
from models.solver import DEFAULT_ORACLE_NODE_CAP
from models.strategies import PermutationPolicy, resolve_points
from models.verifier import check_solution, verify_mapping

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INFEASIBLE = 2
EXIT_TIMEOUT = 3

COMMANDS = ("map", "encode", "decode", "verify", "bench")


@dataclass
class RunConfig:
    """Validated settings of one CLI invocation"""
    command: str
    inputs: List[str]
    arch: str = "ibm-qx4"
    mode: str = "exact"
    points: Tuple[int, ...] = ()
    out: Optional[str] = None
    csv: Optional[str] = None
    model: Optional[str] = None
    subset: Optional[Tuple[int, ...]] = None
    timeout: float = DEFAULT_TIMEOUT
    jobs: int = 1
    oracle_check: bool = False
    subsets: bool = False
    max_placements: int = DEFAULT_MAX_PLACEMENTS
    oracle_node_cap: int = DEFAULT_ORACLE_NODE_CAP
    debug: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command '{self.command}'")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {', '.join(MODES)}")
        if not self.timeout > 0:
            raise ValueError("timeout must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        self.points = tuple(self.points)
        if self.mode == "custom" and not self.points:
            raise ValueError("mode custom needs --points")
        if self.mode != "custom" and self.points:
            raise ValueError("--points only applies to mode custom")
        expected = {"verify": 3, "bench": 1}.get(self.command, 1)
        if len(self.inputs) != expected:
            raise ValueError(f"{self.command} takes {expected} input path(s)")
        if self.command == "decode" and not self.model:
            raise ValueError("decode needs --model")

    @classmethod
    def from_args(cls, args):
        """Build from an argparse namespace"""
        return cls(
            command=args.command,
            inputs=list(args.inputs),
            arch=args.arch,
            mode=getattr(args, 'mode', "exact"),
            points=_int_list(getattr(args, 'points', None)),
            out=getattr(args, 'out', None),
            csv=getattr(args, 'csv', None),
            model=getattr(args, 'model', None),
            subset=_int_list(getattr(args, 'subset', None)) or None,
            timeout=getattr(args, 'timeout', DEFAULT_TIMEOUT),
            jobs=getattr(args, 'jobs', 1),
            oracle_check=getattr(args, 'oracle_check', False),
            subsets=getattr(args, 'subsets', False),
            max_placements=getattr(args, 'max_placements', DEFAULT_MAX_PLACEMENTS),
            debug=getattr(args, 'debug', False),
        )


def _int_list(text):
    """'3,5' -> (3, 5); None or '' -> ()"""
    if not text:
        return ()
    try:
        return tuple(int(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got '{text}'") from None


def _banner(title):
    print(f"\n{'=' * 60}")
    print(title)
    print(f"{'=' * 60}")


def _mapping_controller(cfg, cm):
    return MappingController(cm, jobs=cfg.jobs, timeout=cfg.timeout,
                             max_placements=cfg.max_placements,
                             oracle_node_cap=cfg.oracle_node_cap)


def cmd_map(cfg):
    """Map one circuit, write mapped QASM plus solution JSON, print the cost report"""
    cm = resolve_architecture(cfg.arch)
    circuit = load_qasm_file(cfg.inputs[0])
    controller = _mapping_controller(cfg, cm)
    run = controller.run(circuit, cfg.mode, cfg.points, cfg.subsets)
    mapped = build_mapped_circuit(circuit, run.solution, cm)

    out = Path(cfg.out) if cfg.out else Path(cfg.inputs[0]).with_suffix(".mapped.qasm")
    exporter = ExportHandler()
    qasm_path = exporter.export_mapped_qasm(mapped, out)
    json_path = exporter.export_solution(run.solution, solution_path_for(qasm_path),
                                         circuit=circuit.name, architecture=cm.name,
                                         mode=cfg.mode, subsets=run.used_subsets)

    sol = run.solution
    _banner(f"MAPPED {circuit.name} ON {cm.name} ({cfg.mode}{' + subsets' if cfg.subsets else ''})")
    print(f"Logical qubits n: {circuit.n}")
    print(f"Original cost: {circuit.original_cost} "
          f"({circuit.single_count} single-qubit + {circuit.cnot_count} CNOT)")
    print(f"Permutation points: {len(run.points)}")
    print(f"F: {sol.cost} ({sol.swap_count} SWAPs, {sol.switch_count} switched CNOTs)")
    print(f"Mapped gates: {len(mapped)} (c = {run.mapped_cost})")
    print(f"Initial placement: {list(sol.initial)} on subset {list(sol.subset_used)}")
    print(f"Runtime: {run.seconds:.3f} s")
    print(f"Output: {qasm_path}")
    print(f"Solution: {json_path}")
    for warning in circuit.warnings:
        print(f"Note: {warning}")

    if cfg.oracle_check:
        oracle = controller.oracle_cost(run)
        print(f"Oracle cost: {oracle}")
        if oracle != sol.cost:
            print(f"error: oracle cost {oracle} differs from solver cost {sol.cost}",
                  file=sys.stderr)
            return EXIT_FAILURE
    return EXIT_OK


def _encode_targets(cfg, cm, n):
    """Allowed subsets to encode: an explicit --subset, every connected subset, or the full map"""
    if cfg.subset:
        return [tuple(sorted(cfg.subset))]
    if cfg.mode == "exact-subsets" or cfg.subsets:
        return connected_subsets(cm, n)
    return [None]


def cmd_encode(cfg):
    """Write the WCNF instance(s) and variable-map sidecar(s) for one circuit"""
    cm = resolve_architecture(cfg.arch)
    circuit = load_qasm_file(cfg.inputs[0])
    skeleton = extract_skeleton(circuit)
    points = resolve_points(PermutationPolicy.from_mode(cfg.mode, cfg.points), skeleton, cm)
    targets = _encode_targets(cfg, cm, circuit.n)
    base = Path(cfg.out) if cfg.out else Path(cfg.inputs[0]).with_suffix(".wcnf")

    exporter = ExportHandler()
    _banner(f"ENCODED {circuit.name} ON {cm.name} ({cfg.mode})")
    for allowed in targets:
        path = base
        if len(targets) > 1:
            path = base.with_name(f"{base.stem}.s{'-'.join(map(str, allowed))}{base.suffix}")
        instance = encode(skeleton, cm, allowed, points, cfg.max_placements, circuit.name)
        wcnf_path, sidecar = exporter.export_wcnf(instance, path)
        m = len(instance.book.allowed)
        print(f"Subset: {list(instance.book.allowed)}")
        print(f"  x-variables: {instance.book.x_count} "
              f"(search space 2^{search_space_bits(circuit.n, m, len(skeleton), points)})")
        print(f"  variables: {instance.var_count}, hard: {len(instance.hard)}, "
              f"soft: {len(instance.soft)}, top: {instance.top}")
        print(f"  written: {wcnf_path} + {sidecar}")
    return EXIT_OK


def cmd_decode(cfg):
    """Read a MaxSAT model for the circuit's instance back into a mapping"""
    cm = resolve_architecture(cfg.arch)
    circuit = load_qasm_file(cfg.inputs[0])
    skeleton = extract_skeleton(circuit)
    points = resolve_points(PermutationPolicy.from_mode(cfg.mode, cfg.points), skeleton, cm)
    instance = encode(skeleton, cm, cfg.subset, points, cfg.max_placements, circuit.name)
    model = parse_model(Path(cfg.model).read_text(encoding="utf-8"), instance.var_count)
    score = evaluate_assignment(instance, model)
    solution = decode_solution(instance, model)

    _banner(f"DECODED MODEL FOR {circuit.name} ON {cm.name}")
    print(f"Hard clauses satisfied: {score.satisfies} ({score.violated_hard} violated)")
    print(f"Model cost: {score.cost}")
    print(f"F: {solution.cost} ({solution.swap_count} SWAPs, {solution.switch_count} switched CNOTs)")
    print(f"Initial placement: {list(solution.initial)}")
    if cfg.out:
        exporter = ExportHandler()
        mapped = build_mapped_circuit(circuit, solution, cm)
        qasm_path = exporter.export_mapped_qasm(mapped, cfg.out)
        exporter.export_solution(solution, solution_path_for(qasm_path),
                                 circuit=circuit.name, architecture=cm.name, mode=cfg.mode)
        print(f"Output: {qasm_path}")
    return EXIT_OK if score.satisfies else EXIT_FAILURE


def cmd_verify(cfg):
    """Check a mapped circuit against the original and its solution JSON"""
    cm = resolve_architecture(cfg.arch)
    original_path, mapped_path, solution_path = cfg.inputs
    circuit = load_qasm_file(original_path)
    mapped = read_mapped_qasm(Path(mapped_path).read_text(encoding="utf-8"),
                              name=Path(mapped_path).stem)
    solution = ExportHandler.load_solution(solution_path)

    report = verify_mapping(circuit, mapped, solution, cm)
    problems = check_solution(solution, extract_skeleton(circuit), cm,
                              solution.points or None)

    def verdict(value):
        return "skipped" if value is None else ("pass" if value else "FAIL")

    _banner(f"VERIFY {mapped_path}")
    print(f"coupling_legal: {verdict(report.coupling_legal)}")
    print(f"tracking_ok: {verdict(report.tracking_ok)}")
    print(f"unitary_ok: {verdict(report.unitary_ok)}")
    if report.max_deviation is not None:
        print(f"max deviation: {report.max_deviation:.3e}")
    print(f"solution invariants: {'pass' if not problems else 'FAIL'}")
    for problem in problems:
        print(f"  - {problem}")

    if report.passed and not problems:
        return EXIT_OK
    failed = report.failed_checks() + (["solution"] if problems else [])
    print(f"error: verification failed: {', '.join(failed)}", file=sys.stderr)
    return EXIT_FAILURE


def cmd_bench(cfg):
    """Benchmark every QASM file of a directory and write the CSV table"""
    cm = resolve_architecture(cfg.arch)
    directory = Path(cfg.inputs[0])
    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    controller = BenchmarkController(cm, timeout=cfg.timeout, jobs=cfg.jobs,
                                     max_placements=cfg.max_placements)
    rows = controller.run(directory)
    path = ExportHandler().export_benchmark_csv(rows, cfg.csv or "benchmark_results.csv")
    print(f"\nWrote {len(rows)} row(s) to {path}")
    return EXIT_OK


HANDLERS = {
    "map": cmd_map,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run_command(cfg):
    """Dispatch a RunConfig, turning errors into exit codes and stderr messages"""
    if cfg.debug:
        get_logger().enabled = True
    try:
        return HANDLERS[cfg.command](cfg)
    except (InfeasibleMappingError, StrategyError) as e:
        print(f"error: no valid mapping: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MappingTimeoutError as e:
        print(f"error: timed out after {cfg.timeout:g} s: {e}", file=sys.stderr)
        return EXIT_TIMEOUT
    except (QxMapperError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
