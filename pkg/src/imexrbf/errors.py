"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid or mutually inconsistent run parameters."""


class StencilDegeneracyError(RuntimeError):
    """The local weight system is singular at a specific node."""

    def __init__(self, node: int, detail: str = ""):
        self.node = int(node)
        msg = f"singular local weight system at node {self.node}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class SolverBreakdownError(RuntimeError):
    """The iterative solver broke down twice (once before and once after a restart)."""


class PipelineStageError(RuntimeError):
    """Wraps a failure with the pipeline stage it happened in."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")


class CsvFormatError(ValueError):
    """Malformed CSV input; carries the offending file and 1-based line number."""

    def __init__(self, path, line: int, detail: str):
        self.path = str(path)
        self.line = int(line)
        super().__init__(f"{self.path}:{self.line}: {detail}")
