"""Exceptions raised by the toolkit.

Everything derives from ``WVNNError`` which is a ``ValueError``, so plain
``except ValueError`` handlers keep working.
"""

from typing import List, Optional, Sequence


class WVNNError(ValueError):
    pass


class DomainError(WVNNError):
    """A parameter lies outside its stated range."""


class UnsupportedDimensionError(WVNNError):
    pass


class DegenerateInputError(WVNNError):
    """Zero vectors, mismatched dimensions and similar unusable inputs."""


class UsageError(WVNNError):
    pass


class NotFoundError(WVNNError):
    pass


class ExcludedParameterError(WVNNError):
    pass


class BranchSingularityError(WVNNError):
    pass


class IterationFailureError(WVNNError):
    def __init__(
        self,
        message: str,
        iterations: int,
        deflated: Optional[Sequence[complex]] = None,
        active_block: int = 0,
    ):
        super().__init__(message)
        self.iterations = iterations
        self.deflated: List[complex] = list(deflated or [])
        self.active_block = active_block


class NearOrthogonalPostselectionError(WVNNError):
    def __init__(self, overlap_sq: float, floor: float):
        super().__init__(
            f"Post-selection overlap |<psi_f|psi_i>|^2 = {overlap_sq:.3e} is below the floor {floor:.1e}"
        )
        self.overlap_sq = overlap_sq
        self.floor = floor


class HermiticityViolationError(WVNNError):
    def __init__(self, defect: float, tolerance: float):
        super().__init__(
            f"Matrix is not Hermitian: ||M - M^dagger||_F = {defect:.3e} exceeds {tolerance:.1e}"
        )
        self.defect = defect
        self.tolerance = tolerance


class NumericalInconsistencyError(WVNNError):
    def __init__(self, message: str, value: float, slack: float):
        super().__init__(message)
        self.value = value
        self.slack = slack


class NoRealSolutionError(WVNNError):
    def __init__(self, message: str, discriminant: float):
        super().__init__(message)
        self.discriminant = discriminant


class GridOverflowError(WVNNError):
    def __init__(self, shift: float, limit: float):
        super().__init__(
            f"Pointer shift {shift:.4g} exceeds the on-grid limit {limit:.4g}; "
            f"increase x_extent to at least {4 * shift:.4g} or lower gamma"
        )
        self.shift = shift
        self.limit = limit


class OutsideWeakRegimeError(WVNNError):
    def __init__(self, message: str, gammas, ratios, differences):
        super().__init__(message)
        self.gammas = list(gammas)
        self.ratios = list(ratios)
        self.differences = list(differences)
