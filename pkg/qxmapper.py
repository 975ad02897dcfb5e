"""
QX Mapper - exact mapping of quantum circuits onto coupling-constrained architectures
Main entry point

    python qxmapper.py map circuit.qasm --arch ibm-qx4 --mode exact
    python qxmapper.py encode circuit.qasm --out circuit.wcnf
    python qxmapper.py decode circuit.qasm --model solver_output.txt
    python qxmapper.py verify circuit.qasm circuit.mapped.qasm circuit.mapped.json
    python qxmapper.py bench benchmarks/ --csv results.csv --jobs 4
"""
import argparse
import logging
import sys

from controllers.command_handler import EXIT_FAILURE, RunConfig, run_command
from controllers.mapping_controller import MODES

VERSION = "1.0.0"


class QxArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1; exit code 2 is reserved for infeasible mappings"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = QxArgumentParser(
        prog="qxmapper",
        description="Map quantum circuits onto IBM QX architectures with the minimal "
                    "number of inserted SWAP and H gates")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")

    common = QxArgumentParser(add_help=False)
    common.add_argument("--arch", default="ibm-qx4",
                        help="Built-in architecture name or coupling-map JSON path")
    common.add_argument("--debug", action="store_true",
                        help="Write a search trace to logs/")
    common.add_argument("--max-placements", type=int, default=10 ** 7,
                        help="Reject swap tables with more placements than this")

    modes = QxArgumentParser(add_help=False)
    modes.add_argument("--mode", choices=MODES, default="exact",
                       help="Permutation-point policy (default: exact)")
    modes.add_argument("--points", help="Comma-separated CNOT indices for --mode custom")
    modes.add_argument("--subsets", action="store_true",
                       help="Combine the mode with connected-subset enumeration")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=QxArgumentParser)

    map_cmd = sub.add_parser("map", parents=[common, modes], help="Map a circuit")
    map_cmd.add_argument("inputs", nargs=1, metavar="circuit.qasm")
    map_cmd.add_argument("--out", help="Mapped QASM path (default: <input>.mapped.qasm)")
    map_cmd.add_argument("--timeout", type=float, default=600.0, help="Seconds (default 600)")
    map_cmd.add_argument("--jobs", type=int, default=1, help="Worker threads for subsets")
    map_cmd.add_argument("--oracle-check", action="store_true",
                         help="Cross-check the cost with the brute-force oracle")

    encode_cmd = sub.add_parser("encode", parents=[common, modes],
                                help="Write the weighted MaxSAT instance")
    encode_cmd.add_argument("inputs", nargs=1, metavar="circuit.qasm")
    encode_cmd.add_argument("--out", help="WCNF path (default: <input>.wcnf)")
    encode_cmd.add_argument("--subset", help="Comma-separated physical qubits to encode on")

    decode_cmd = sub.add_parser("decode", parents=[common, modes],
                                help="Decode a MaxSAT solver model")
    decode_cmd.add_argument("inputs", nargs=1, metavar="circuit.qasm")
    decode_cmd.add_argument("--model", required=True, help="Solver output with 'v' lines")
    decode_cmd.add_argument("--subset", help="Subset the instance was encoded on")
    decode_cmd.add_argument("--out", help="Also write the mapped QASM here")

    verify_cmd = sub.add_parser("verify", parents=[common], help="Verify a mapped circuit")
    verify_cmd.add_argument("inputs", nargs=3,
                            metavar=("original.qasm", "mapped.qasm", "solution.json"))

    bench_cmd = sub.add_parser("bench", parents=[common], help="Benchmark a directory")
    bench_cmd.add_argument("inputs", nargs=1, metavar="directory")
    bench_cmd.add_argument("--csv", help="CSV path (default: benchmark_results.csv)")
    bench_cmd.add_argument("--timeout", type=float, default=600.0,
                           help="Seconds per mode per benchmark (default 600)")
    bench_cmd.add_argument("--jobs", type=int, default=1, help="Benchmarks run in parallel")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.INFO if args.debug else logging.WARNING,
                        format='%(asctime)s - %(levelname)s - %(message)s')
    try:
        cfg = RunConfig.from_args(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    print("=" * 60)
    print(f"QX Mapper {VERSION} - {cfg.command}")
    print("=" * 60)
    return run_command(cfg)


if __name__ == "__main__":
    sys.exit(main())
