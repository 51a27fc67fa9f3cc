"""Exception hierarchy for the HDX toolkit.

Every error carries the CLI exit code it maps to:
- 2: invalid configuration
- 3: infeasible parameters (bad faces, levels, tribes, walks)
- 4: numerical failure (singular systems, empty swap rows, sampling)
"""
from typing import Optional, Sequence, Tuple


class HDXError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


# ===== CONFIGURATION =====

class ConfigurationError(HDXError):
    """Config document or CLI flags failed validation."""

    exit_code = 2


# ===== COMPLEX / PARAMETERS =====

class ComplexError(HDXError, ValueError):
    """Invalid complex input: faces, weights or levels."""

    exit_code = 3


class FaceNotFoundError(ComplexError):
    def __init__(self, face: Tuple[int, ...], level: Optional[int] = None):
        self.face = face
        where = f" at level {level}" if level is not None else ""
        super().__init__(f"Face {list(face)} is not a face of the complex{where}")


class LevelError(ComplexError):
    """Requested level lies outside 0..d or violates an operator's shape."""


class ComplexTooLargeError(ComplexError):
    def __init__(self, total_faces: int, cap: int):
        self.total_faces = total_faces
        self.cap = cap
        super().__init__(
            f"Complex has at least {total_faces} faces, above the configured cap of {cap}"
        )


class InfeasibleParametersError(HDXError, ValueError):
    exit_code = 3


class WalkValidationError(HDXError):
    """Assembled walk is not row-stochastic or not self-adjoint w.r.t. pi."""

    exit_code = 3

    def __init__(self, message: str, row_sum_error: float = 0.0, adjoint_error: float = 0.0):
        self.row_sum_error = row_sum_error
        self.adjoint_error = adjoint_error
        super().__init__(message)


# ===== NUMERICAL =====

class NumericalError(HDXError):
    exit_code = 4


class SingularSystemError(NumericalError):
    def __init__(self, message: str, condition: float):
        self.condition = condition
        super().__init__(f"{message} (condition estimate {condition:.3e})")


class SwapWalkError(NumericalError):
    def __init__(self, faces: Sequence[Tuple[int, ...]]):
        self.faces = list(faces)
        preview = ", ".join(str(list(f)) for f in self.faces[:10])
        super().__init__(f"Swap walk rows without a disjoint target: {preview}")


class SamplingError(NumericalError):
    """Monte Carlo sample budget cannot reach the requested CI width."""
