"""
Exception hierarchy for QX Mapper
All errors raised by the models and controllers derive from QxMapperError
"""


class QxMapperError(Exception):
    """Base class for every mapping-related error"""


class QasmError(QxMapperError):
    """OpenQASM input could not be accepted

    Args:
        message: Human readable description
        line: 1-based line of the offending token (None if unknown)
        col: 1-based column of the offending token (None if unknown)
    """

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class ArchitectureError(QxMapperError):
    """Invalid coupling map, subset or permutation"""


class EncodingError(QxMapperError):
    """The Boolean formulation cannot be built or read back"""


class InfeasibleMappingError(QxMapperError):
    """No placement sequence satisfies the coupling constraints

    Args:
        message: Description
        cnot_index: 1-based CNOT index whose segment has no legal placement
    """

    def __init__(self, message, cnot_index=None):
        self.cnot_index = cnot_index
        super().__init__(message)


class MappingTimeoutError(QxMapperError):
    """A cooperative deadline passed before the search finished"""


class OracleCapError(QxMapperError):
    """The brute-force oracle exceeded its node budget"""


class StrategyError(QxMapperError):
    """A permutation policy cannot be applied to this circuit/architecture"""


class ReconstructionError(QxMapperError):
    """A solution violates its own invariants during circuit reconstruction"""


class VerificationError(QxMapperError):
    """Verification input is malformed (not a failed check)"""
