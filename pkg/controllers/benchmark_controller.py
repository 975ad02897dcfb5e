"""
Benchmark Controller Module
===========================
Maps every QASM file of a directory in exact, subset and strategy modes and
collects one CSV row per file.

Cell markers: TO = mode timed out, INF = no valid mapping with that point set,
NA = strategy or circuit does not fit the architecture (no triangle, more
logical than physical qubits, placement cap), ERROR (in n) = unreadable file.
"""
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path

from controllers.mapping_controller import MappingController
from models.architecture import DEFAULT_MAX_PLACEMENTS
from models.circuit import extract_skeleton
from models.errors import (ArchitectureError, InfeasibleMappingError, MappingTimeoutError,
                           QxMapperError, StrategyError)
from models.qasm_parser import load_qasm_file

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 600.0
STRATEGY_MODES = ("disjoint", "odd", "triangle")

TIMED_OUT = "TO"
INFEASIBLE = "INF"
NOT_APPLICABLE = "NA"


def _seconds(value):
    return f"{value:.3f}"


class BenchmarkController:
    """Runs the benchmark table over a directory of circuits"""

    def __init__(self, cm, timeout=DEFAULT_TIMEOUT, jobs=1,
                 max_placements=DEFAULT_MAX_PLACEMENTS):
        """Initialize controller

        Args:
            cm: CouplingMap
            timeout: Seconds per mode per benchmark
            jobs: Benchmarks mapped concurrently
            max_placements: Swap-table size cap
        """
        self.cm = cm
        self.jobs = max(1, jobs)
        self.mapper = MappingController(cm, jobs=1, timeout=timeout,
                                        max_placements=max_placements)

    @staticmethod
    def discover(directory):
        """QASM files of a directory in name order"""
        return sorted(Path(directory).glob("*.qasm"))

    def _solve(self, circuit, mode, use_subsets=False):
        """(cost cell, time cell, cost or None) for one mode"""
        try:
            run = self.mapper.run(circuit, mode, use_subsets=use_subsets)
        except MappingTimeoutError:
            return TIMED_OUT, _seconds(self.mapper.timeout), None
        except StrategyError:
            return NOT_APPLICABLE, "", None
        except ArchitectureError as e:
            log.warning("%s [%s]: %s", circuit.name, mode, e)
            return NOT_APPLICABLE, "", None
        except InfeasibleMappingError:
            return INFEASIBLE, "", None
        return run.solution.cost, _seconds(run.seconds), run.solution.cost

    def run_file(self, path):
        """Benchmark row for one QASM file"""
        path = Path(path)
        row = {'benchmark': path.stem}
        try:
            circuit = load_qasm_file(path)
        except (OSError, QxMapperError) as e:
            log.warning("skipping %s: %s", path.name, e)
            row['n'] = "ERROR"
            return row

        row['n'] = circuit.n
        row['original_cost'] = circuit.original_cost
        skeleton = extract_skeleton(circuit)

        row['c_min'], row['t_min_s'], c_min = self._solve(circuit, "exact")
        row['c_subsets'], row['t_subsets_s'], _ = self._solve(circuit, "exact-subsets")
        for mode in STRATEGY_MODES:
            try:
                row[f'Gp_{mode}'] = len(self.mapper.points_for(skeleton, mode))
            except StrategyError:
                row[f'Gp_{mode}'] = NOT_APPLICABLE
            cell, seconds, cost = self._solve(circuit, mode)
            row[f'c_{mode}'] = cell
            row[f't_{mode}_s'] = seconds
            row[f'd_{mode}'] = cost - c_min if cost is not None and c_min is not None else ""
        return row

    def run(self, directory):
        """Rows for every QASM file in the directory, in file-name order"""
        files = self.discover(directory)
        print(f"\n{'=' * 60}")
        print(f"BENCHMARK: {len(files)} circuit(s) in {directory} on {self.cm.name}")
        print(f"{'=' * 60}")

        rows = {}
        with ThreadPoolExecutor(max_workers=self.jobs) as executor:
            futures = {executor.submit(self.run_file, path): path for path in files}
            for future in as_completed(futures):
                path = futures[future]
                rows[path] = future.result()
                row = rows[path]
                print(f"  {path.stem}: n={row.get('n')} c_min={row.get('c_min', '')}")
        return [rows[path] for path in files]
