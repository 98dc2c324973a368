from typing import Optional


class QctError(Exception):
    """Root of every error raised by qctlearn."""


class CircuitError(QctError, ValueError):
    """Malformed circuit (bad qubit index, self-acting gate, unsupported gate)."""


class QasmSyntaxError(CircuitError):
    """
    Raised by the QASM reader.

    Attributes:
        line (Optional[int]): 1-based source line of the offending statement.
    """
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ArchitectureError(QctError, ValueError):
    """Invalid architecture graph (self-loop, duplicate edge, disconnected)."""


class NonEdgeError(ArchitectureError, KeyError):
    """A pair of physical qubits that is not an edge of the architecture graph."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "not an edge"


class ModelMismatchError(QctError, ValueError):
    """Policy model metadata does not match the requesting graph or encoding."""


class ModelVersionError(ModelMismatchError):
    """Model file written by an unsupported format version."""


class CorruptModelError(QctError, ValueError):
    """Model file is truncated or fails its checksum."""


class VerificationError(QctError):
    """A routed circuit failed the equivalence/connectivity oracle."""


class BoundExceededError(QctError):
    """The exhaustive search needed more swaps than the caller allowed."""


class DatasetError(QctError, ValueError):
    """Inconsistent training samples or dataset files."""


class BenchError(QctError, ValueError):
    """Invalid benchmark configuration or inputs."""


class SearchError(QctError, RuntimeError):
    """A search tree was queried before it was ready (e.g. unexpanded root)."""
