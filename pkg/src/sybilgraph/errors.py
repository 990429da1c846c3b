"""
Exception hierarchy for sybilgraph.

Every exception carries a ``category`` used in CLI diagnostics and an
``exit_code`` returned by the process when the error reaches the top level.
"""


class SybilGraphError(Exception):
    """
    Base class for all sybilgraph errors.

    Parameters
    ----------
    message : str
        Human-readable description of the failure.

    Attributes
    ----------
    category : str
        Diagnostic category printed by the CLI.
    exit_code : int
        Process exit status used by the CLI.
    """

    category = "error"
    exit_code = 1

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class ConfigError(SybilGraphError):
    """Raised when a configuration value or CLI flag is invalid."""

    category = "usage"
    exit_code = 2


class StageDependencyError(SybilGraphError):
    """Raised when a stage's upstream artifact is missing."""

    category = "stage dependency"
    exit_code = 3

    def __init__(self, path: object) -> None:
        super().__init__(f"missing upstream artifact: {path}")
        self.path = path


class ArtifactMismatchError(SybilGraphError):
    """Raised when artifacts from runs with different config hashes are combined."""

    category = "stage dependency"
    exit_code = 3


class IngestIOError(SybilGraphError):
    """Raised when an input stream cannot be read or decoded."""

    category = "input"
    exit_code = 4


class RecordFormatError(SybilGraphError):
    """Raised when an input file does not match its declared format."""

    category = "input"
    exit_code = 4


class RegistryConsistencyError(SybilGraphError):
    """Raised when the registry maps one address to two persistent names."""

    category = "input"
    exit_code = 4


class GraphValidationError(SybilGraphError):
    """Raised when a voting graph violates one of its invariants."""

    category = "input"
    exit_code = 4


class ShapeError(SybilGraphError):
    """Raised when tensor shapes are incompatible for an operation."""

    category = "numeric"
    exit_code = 5

    def __init__(self, op: str, left: tuple[int, ...], right: tuple[int, ...]) -> None:
        super().__init__(f"{op}: incompatible shapes {left} and {right}")
        self.op = op
        self.left = left
        self.right = right


class NonFiniteError(SybilGraphError):
    """Raised when an operation produces or receives non-finite values."""

    category = "numeric"
    exit_code = 5


class BackwardError(SybilGraphError):
    """Raised when reverse-mode differentiation is requested on an invalid loss."""

    category = "numeric"
    exit_code = 5


class TrainingDivergedError(SybilGraphError):
    """Raised when the training loss becomes non-finite."""

    category = "numeric"
    exit_code = 5

    def __init__(self, epoch: int, detail: str = "") -> None:
        message = f"training diverged at epoch {epoch}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.epoch = epoch


class DegenerateEmbeddingError(SybilGraphError):
    """Raised when every embedding dimension has collapsed."""

    category = "numeric"
    exit_code = 5


class IndexParameterError(SybilGraphError):
    """Raised for invalid search or clustering parameters (e.g. k > n)."""

    category = "parameter"
    exit_code = 6


class ClusterOverlapError(SybilGraphError):
    """Raised when predicted clusters share a node."""

    category = "parameter"
    exit_code = 6
