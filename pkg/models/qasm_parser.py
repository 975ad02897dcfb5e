"""
OpenQASM 2.0 subset parser
Programs start with an "OPENQASM 2.0;" header and declare one quantum register.
Gates are cx and the Clifford+T single-qubit gates, without parameters.
Barriers and measurements are dropped with a warning.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple

from pyparsing import (CharsNotIn, DelimitedList, Group, Keyword, Opt,
                       ParseException, QuotedString, Regex, Suppress, Word,
                       ZeroOrMore, alphanums, alphas, col, cpp_style_comment,
                       line, lineno, nums)

from models.circuit import CnotGate, GateKind, QuantumCircuit, SingleGate
from models.errors import QasmError

log = logging.getLogger(__name__)

SUPPORTED_VERSION = "2.0"


@dataclass
class Statement:
    """One parsed top-level statement with its source position"""
    kind: str
    name: str
    args: List[Tuple[str, Optional[int]]]
    line: int
    col: int
    text: str
    size: Optional[int] = None
    params: Optional[str] = None


def _statement(kind):
    """Parse action factory turning tokens into a Statement"""
    def action(source, loc, toks):
        toks = toks[0]
        name = toks.get("name", kind)
        args = [(ref["reg"], ref.get("index")) for ref in toks.get("args", [])]
        return Statement(kind=kind, name=name, args=args,
                         line=lineno(loc, source), col=col(loc, source),
                         text=line(loc, source), size=toks.get("size"),
                         params=toks["params"][0] if "params" in toks else None)
    return action


def _build_grammar():
    ident = Word(alphas + "_", alphanums + "_")
    integer = Word(nums).set_parse_action(lambda t: int(t[0]))
    lbr, rbr, semi = map(Suppress, "[];")

    qref = Group(ident("reg") + Opt(lbr + integer("index") + rbr))
    qrefs = Group(DelimitedList(qref))("args")

    header = Group(Keyword("OPENQASM") + Regex(r"\d+(\.\d+)?")("name") + semi)
    include = Group(Keyword("include") + QuotedString('"')("name") + semi)
    qreg = Group(Keyword("qreg") + Group(Group(ident("reg")))("args")
                 + lbr + integer("size") + rbr + semi)
    creg = Group(Keyword("creg") + ident("name") + lbr + integer("size") + rbr + semi)
    measure = Group(Keyword("measure") + Group(qref)("args") + Suppress("->") + qref + semi)
    barrier = Group(Keyword("barrier") + qrefs + semi)
    params = Group(Suppress("(") + Opt(CharsNotIn(")"), default="") + Suppress(")"))
    gate = Group(ident("name") + Opt(params("params")) + qrefs + semi)

    header.set_parse_action(_statement("header"))
    include.set_parse_action(_statement("include"))
    qreg.set_parse_action(_statement("qreg"))
    creg.set_parse_action(_statement("creg"))
    measure.set_parse_action(_statement("measure"))
    barrier.set_parse_action(_statement("barrier"))
    gate.set_parse_action(_statement("gate"))

    program = ZeroOrMore(header | include | qreg | creg | measure | barrier | gate)
    program.ignore(cpp_style_comment)
    return program


_GRAMMAR = _build_grammar()


def parse_statements(text):
    """Parse QASM source into Statement records (syntax only)

    Raises:
        QasmError: on a syntax error, with line/col of the failure
    """
    try:
        return list(_GRAMMAR.parse_string(text, parse_all=True))
    except ParseException as e:
        raise QasmError(f"syntax error: {e.msg}", e.lineno, e.col) from e


def parse_qasm_with_lines(text, name="circuit"):
    """Parse QASM source into a circuit plus, per gate, the source line it came from

    Returns:
        Tuple of (QuantumCircuit, list of source line texts aligned with circuit.gates)
    """
    register = None
    size = 0
    gates = []
    gate_lines = []
    dropped = {"barrier": 0, "measure": 0}

    def resolve(stmt, ref):
        reg, index = ref
        if register is None:
            raise QasmError("gate used before any qreg declaration", stmt.line, stmt.col)
        if reg != register:
            raise QasmError(f"unknown quantum register '{reg}'", stmt.line, stmt.col)
        if index is not None and index >= size:
            raise QasmError(f"index {index} out of range for {reg}[{size}]",
                            stmt.line, stmt.col)
        return index

    statements = parse_statements(text)
    if not statements or statements[0].kind != "header":
        where = (statements[0].line, statements[0].col) if statements else (None, None)
        raise QasmError("program must start with an OPENQASM 2.0 header", *where)

    for position, stmt in enumerate(statements):
        if stmt.kind == "header":
            if position:
                raise QasmError("OPENQASM header may only appear once", stmt.line, stmt.col)
            if stmt.name != SUPPORTED_VERSION:
                raise QasmError(f"unsupported OpenQASM version {stmt.name}",
                                stmt.line, stmt.col)
        elif stmt.kind in ("include", "creg"):
            continue
        elif stmt.kind == "qreg":
            if register is not None:
                raise QasmError("multiple quantum registers are not supported",
                                stmt.line, stmt.col)
            register, size = stmt.args[0][0], stmt.size
        elif stmt.kind in dropped:
            for ref in stmt.args:
                resolve(stmt, ref)
            dropped[stmt.kind] += 1
        elif stmt.name == "cx":
            if stmt.params is not None:
                raise QasmError("gate 'cx' takes no parameters", stmt.line, stmt.col)
            if len(stmt.args) != 2:
                raise QasmError("cx expects two qubit arguments", stmt.line, stmt.col)
            control, target = (resolve(stmt, ref) for ref in stmt.args)
            if control is None or target is None:
                raise QasmError("cx on whole registers is not supported", stmt.line, stmt.col)
            try:
                gates.append(CnotGate(control, target))
            except ValueError as e:
                raise QasmError(str(e), stmt.line, stmt.col) from e
            gate_lines.append(stmt.text)
        else:
            kind = GateKind.from_qasm(stmt.name)
            if kind is None:
                raise QasmError(f"unsupported gate '{stmt.name}'", stmt.line, stmt.col)
            if stmt.params is not None:
                raise QasmError(f"gate '{stmt.name}' takes no parameters", stmt.line, stmt.col)
            if len(stmt.args) != 1:
                raise QasmError(f"{stmt.name} expects one qubit argument", stmt.line, stmt.col)
            index = resolve(stmt, stmt.args[0])
            # bare register broadcasts over every qubit
            targets = range(size) if index is None else (index,)
            for q in targets:
                gates.append(SingleGate(q, kind))
                gate_lines.append(stmt.text)

    if register is None:
        raise QasmError("no quantum register declared")

    warnings = []
    for kind, count in dropped.items():
        if count:
            warnings.append(f"dropped {count} {kind} statement(s)")
            log.warning("%s: dropped %d %s statement(s)", name, count, kind)

    circuit = QuantumCircuit(size, tuple(gates), name=name, warnings=tuple(warnings))
    return circuit, gate_lines


def parse_qasm(text, name="circuit"):
    """Parse an OpenQASM 2.0 program into a QuantumCircuit

    Args:
        text: QASM source
        name: Label carried on the circuit

    Returns:
        QuantumCircuit with n = register size

    Raises:
        QasmError: syntax error, missing header, unsupported or parameterised gate,
            multiple registers, bad index
    """
    circuit, _ = parse_qasm_with_lines(text, name=name)
    return circuit


def load_qasm_file(path):
    """Read and parse a QASM file, naming the circuit after the file stem"""
    path = Path(path)
    return parse_qasm(path.read_text(encoding="utf-8"), name=path.stem)
