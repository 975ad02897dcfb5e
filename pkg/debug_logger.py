"""
Debug logger for QX Mapper search tracing
"""
import datetime
from pathlib import Path


class DebugLogger:
    def __init__(self, log_dir="logs"):
        self.log_dir = Path(log_dir)
        self.log_file = None

        # Logging enabled state (default: disabled to reduce noise)
        self._enabled = False

    @property
    def enabled(self):
        """Check if logging is enabled"""
        return self._enabled

    @enabled.setter
    def enabled(self, value):
        """Enable or disable logging"""
        self._enabled = value
        status = "ENABLED" if value else "DISABLED"
        if value:
            self._write_to_file(f">>> Debug logging {status} at {datetime.datetime.now()}")
        print(f"Debug logging {status}")

    def _open(self):
        """Create the timestamped log file and write its header"""
        self.log_dir.mkdir(exist_ok=True)
        timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        self.log_file = self.log_dir / f"mapping_debug_{timestamp}.log"
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write("=" * 80 + "\n")
            f.write("QX Mapper Debug Log\n")
            f.write(f"Started: {datetime.datetime.now()}\n")
            f.write("=" * 80 + "\n")

    def _write_to_file(self, message):
        """Append a timestamped line to the log file"""
        if self.log_file is None:
            self._open()
        timestamp = datetime.datetime.now().strftime("%H:%M:%S.%f")[:-3]
        with open(self.log_file, 'a', encoding='utf-8') as f:
            f.write(f"[{timestamp}] {message}\n")

    def log(self, message):
        """Write message to log file and print to console (only if enabled)"""
        if not self._enabled:
            return
        self._write_to_file(message)
        print(message)

    def log_instance(self, name, n, cnot_count, arch_name, m, points):
        """Log the mapping problem being solved"""
        if not self._enabled:
            return
        self.log("")
        self.log("=" * 80)
        self.log("MAPPING INSTANCE")
        self.log("=" * 80)
        self.log(f"Circuit: {name} (n={n}, CNOTs={cnot_count})")
        self.log(f"Architecture: {arch_name} (m={m})")
        self.log(f"Permutation points ({len(points)}): {sorted(points)}")
        self.log("=" * 80)

    def log_table(self, arch_name, n, allowed, placement_count, edge_count):
        """Log construction of a swap distance table"""
        if not self._enabled:
            return
        self.log("-" * 80)
        self.log(f"SWAP TABLE {arch_name}: n={n}, allowed={list(allowed)}")
        self.log(f"Placements: {placement_count}, SWAP generators: {edge_count}")
        self.log("-" * 80)

    def log_layer(self, segment, first_cnot, last_cnot, node_count, best_cost):
        """Log one segment of the layered search"""
        if not self._enabled:
            return
        self.log(f"  segment {segment}: CNOTs g{first_cnot}..g{last_cnot}, "
                 f"{node_count} legal placements, best cost-to-go {best_cost}")

    def log_solution(self, solution):
        """Log a finished mapping solution"""
        if not self._enabled:
            return
        self.log("")
        self.log("#" * 80)
        self.log("SOLUTION")
        self.log("#" * 80)
        self.log(f"Cost F: {solution.cost} ({solution.swap_count} SWAPs, "
                 f"{solution.switch_count} switched CNOTs)")
        self.log(f"Initial placement: {solution.initial}")
        for k, placement in enumerate(solution.placements, start=1):
            flag = " (switched)" if solution.switches[k - 1] else ""
            swaps = solution.swap_sequences.get(k, ())
            self.log(f"  g{k}: {placement}{flag} swaps={list(swaps)}")
        self.log("#" * 80)

    def log_encoding(self, instance):
        """Log the size of an encoded MaxSAT instance"""
        if not self._enabled:
            return
        self.log("-" * 80)
        self.log(f"ENCODING {instance.meta.get('circuit')} on {instance.meta.get('architecture')}")
        self.log(f"Variables: {instance.var_count} (x={instance.book.x_count}, "
                 f"y={instance.book.y_count}, z={instance.book.z_count})")
        self.log(f"Hard clauses: {len(instance.hard)}, soft clauses: {len(instance.soft)}")
        self.log("-" * 80)


# Global logger instance
logger = None


def get_logger():
    """Get or create logger instance"""
    global logger
    if logger is None:
        logger = DebugLogger()
    return logger
