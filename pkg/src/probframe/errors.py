"""Exception hierarchy shared by all probframe modules."""

from __future__ import annotations


class ProbFrameError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(ProbFrameError, ValueError):
    pass


class NormError(ProbFrameError, ValueError):
    def __init__(self, norm: float):
        self.norm = float(norm)
        super().__init__(f"ket is not normalized (norm = {self.norm:.3e})")


class DensityError(ProbFrameError, ValueError):
    """A matrix failed density-matrix validation.

    ``violations`` lists every violated invariant as ``(name, residual)``
    pairs, not only the one this exception is named after.
    """

    kind = "density"

    def __init__(self, residual: float, violations: list[tuple[str, float]] | None = None):
        self.residual = float(residual)
        self.violations = violations if violations is not None else [(self.kind, self.residual)]
        detail = ", ".join(f"{name}={value:.3e}" for name, value in self.violations)
        super().__init__(f"invalid density matrix: {detail}")


class HermiticityError(DensityError):
    kind = "hermiticity"


class TraceError(DensityError):
    kind = "trace"


class NegativityError(DensityError):
    kind = "negativity"


class NotRepresentative(ProbFrameError):
    def __init__(self, rank: int, required: int):
        self.rank = int(rank)
        self.required = int(required)
        super().__init__(f"projector set is not representative: rank {self.rank} < {self.required}")


class NotAffineReconstructible(ProbFrameError):
    def __init__(self, deficiency: int):
        self.deficiency = int(deficiency)
        super().__init__(f"affine slice is not reconstructible (rank deficiency {self.deficiency})")


class SearchBudgetExceeded(ProbFrameError):
    """Combinatorial classification ran out of budget.

    ``partial`` holds the classification with unresolved fields set to None.
    """

    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class InconsistentProbabilities(ProbFrameError, ValueError):
    def __init__(self, axes: tuple[int, ...], total: float):
        self.axes = tuple(axes)
        self.total = float(total)
        super().__init__(
            f"outcome probabilities for axis group {self.axes} sum to {self.total:.6g}, expected 1"
        )


class NotUnitary(ProbFrameError, ValueError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"matrix is not unitary (|U^dag U - I| = {self.residual:.3e})")


class TraceConditionViolated(ProbFrameError, ValueError):
    def __init__(self, residual: float):
        self.residual = float(residual)
        super().__init__(f"Kraus operators violate sum V^dag V = I (residual {self.residual:.3e})")


class GuardExceeded(ProbFrameError):
    pass


class ParseError(ProbFrameError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class RangeError(ParseError):
    pass
