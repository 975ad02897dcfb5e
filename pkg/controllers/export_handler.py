"""
Export Handler Module
=====================
Writes mapping results to disk: mapped QASM, solution JSON, WCNF instances with
their variable map, and benchmark CSV tables.
"""
import csv
import json
import logging
from pathlib import Path

from models.encoder import emit_wcnf, variable_map_text
from models.errors import VerificationError
from models.reconstruction import emit_qasm
from models.solver import solution_from_dict, solution_to_dict

log = logging.getLogger(__name__)

BENCHMARK_COLUMNS = [
    'benchmark', 'n', 'original_cost',
    'c_min', 't_min_s',
    'c_subsets', 't_subsets_s',
    'Gp_disjoint', 'c_disjoint', 'd_disjoint', 't_disjoint_s',
    'Gp_odd', 'c_odd', 'd_odd', 't_odd_s',
    'Gp_triangle', 'c_triangle', 'd_triangle', 't_triangle_s',
]


def solution_path_for(qasm_path):
    """Solution JSON written next to a mapped QASM file"""
    return Path(qasm_path).with_suffix(".json")


def variable_map_path_for(wcnf_path):
    return Path(wcnf_path).with_suffix(".vars")


class ExportHandler:
    """Handles all file output of QX Mapper"""

    def __init__(self, export_dir=None):
        """Initialize export handler

        Args:
            export_dir: Directory relative paths are resolved against (default: cwd)
        """
        self.export_dir = Path(export_dir) if export_dir else Path.cwd()

    def _resolve(self, path):
        path = Path(path)
        if not path.is_absolute():
            path = self.export_dir / path
        path.parent.mkdir(parents=True, exist_ok=True)
        return path

    def export_mapped_qasm(self, mapped, path):
        """Write a MappedCircuit as OpenQASM 2.0

        Returns:
            Path written
        """
        path = self._resolve(path)
        path.write_text(emit_qasm(mapped), encoding="utf-8")
        log.info("wrote %s (%d gates)", path, len(mapped))
        return path

    def export_solution(self, solution, path, **meta):
        """Write a MappingSolution as JSON; meta keys (circuit, architecture, mode) ride along"""
        path = self._resolve(path)
        data = dict(meta)
        data['solution'] = solution_to_dict(solution)
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        return path

    @staticmethod
    def load_solution(path):
        """Read a solution JSON written by export_solution

        Raises:
            VerificationError: not valid JSON or no solution object
        """
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise VerificationError(f"{path}: malformed solution JSON: {e}") from e
        if not isinstance(data, dict):
            raise VerificationError(f"{path}: solution JSON must be an object")
        return solution_from_dict(data.get('solution', data))

    def export_wcnf(self, instance, path):
        """Write the WCNF text and its variable-map sidecar

        Returns:
            Tuple of (wcnf path, sidecar path)
        """
        path = self._resolve(path)
        path.write_text(emit_wcnf(instance), encoding="utf-8")
        sidecar = variable_map_path_for(path)
        sidecar.write_text(variable_map_text(instance), encoding="utf-8")
        log.info("wrote %s and %s", path, sidecar)
        return path, sidecar

    def export_benchmark_csv(self, rows, path):
        """Write benchmark rows (dicts keyed by BENCHMARK_COLUMNS) in the given order"""
        path = self._resolve(path)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=BENCHMARK_COLUMNS, restval='')
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
        return path
