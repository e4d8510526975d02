"""Exception hierarchy."""

from __future__ import annotations

from typing import Sequence, Tuple


class RdApproxError(Exception):
    """Base class for every error raised by rdapprox."""


class ParameterError(RdApproxError, ValueError):
    pass


class InsufficientSamplesError(ParameterError):
    def __init__(self, count: int) -> None:
        super().__init__(f"insufficient samples: need at least 2, got {count}")
        self.count = count


class NotSymmetricError(ParameterError):
    def __init__(self, deviation: float) -> None:
        super().__init__(f"not symmetric: max |S_ij - S_ji| = {deviation:.3e}")
        self.deviation = deviation


class NotPositiveSemidefiniteError(ParameterError):
    pass


class DegenerateSourceError(ParameterError):
    def __init__(self) -> None:
        super().__init__("degenerate source: all eigenvalues are zero")


class DimensionMismatchError(ParameterError):
    def __init__(self, expected: int, actual: int, what: str = "rows") -> None:
        super().__init__(f"dimension mismatch: expected {expected} {what}, got {actual}")
        self.expected = expected
        self.actual = actual


class EmptyClassError(ParameterError):
    def __init__(self, class_index: int) -> None:
        super().__init__(f"empty class {class_index}")
        self.class_index = class_index


class ZeroFeatureError(ParameterError):
    def __init__(self, sample_index: int) -> None:
        super().__init__(f"sample {sample_index} has zero norm")
        self.sample_index = sample_index


class AlphaSearchError(RdApproxError, RuntimeError):
    def __init__(self, bracket: Tuple[float, float], residual: float, iterations: int) -> None:
        super().__init__(
            f"alpha bisection did not converge in {iterations} iterations: "
            f"bracket [{bracket[0]!r}, {bracket[1]!r}], residual {residual:.3e}"
        )
        self.bracket = bracket
        self.residual = residual
        self.iterations = iterations


class RegularizationError(RdApproxError, RuntimeError):
    pass


class FeatureCollapseError(RdApproxError, RuntimeError):
    def __init__(self, layer: int, sample_index: int) -> None:
        super().__init__(f"layer {layer}: sample {sample_index} collapsed to zero norm")
        self.layer = layer
        self.sample_index = sample_index


class TrainingAborted(RdApproxError, RuntimeError):
    def __init__(self, layer: int, objective_trace: Sequence[float], reason: str) -> None:
        super().__init__(f"training aborted at layer {layer}: {reason}")
        self.layer = layer
        self.objective_trace = list(objective_trace)


class IdxFormatError(RdApproxError, ValueError):
    pass


class IdxMagicError(IdxFormatError):
    pass


class IdxTruncatedError(IdxFormatError):
    pass


class IdxCountMismatchError(IdxFormatError):
    pass


class ModelFormatError(RdApproxError, ValueError):
    pass


class OutputError(RdApproxError, OSError):
    pass
