"""
Custom exceptions for dirres.
"""


class DirResError(Exception):
    """Base exception for dirres."""
    pass


class ParameterError(DirResError):
    """Exception raised when an argument is outside its valid range."""
    pass


class BudgetExceededError(ParameterError):
    """Exception raised when an exhaustive search exceeds the configured cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"Brute force needs {required:,} subsets, cap is {cap:,}")


class GraphDataError(DirResError):
    """Exception raised when input graph data is unusable."""
    pass


class EdgeListParseError(GraphDataError):
    """Exception raised when an edge-list line cannot be parsed."""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class NotStronglyConnectedError(GraphDataError):
    """Exception raised when an operation needs a strongly connected digraph."""
    pass


class VertexNotFoundError(GraphDataError):
    """Exception raised when a vertex label or index does not exist."""
    pass


class NumericalError(DirResError):
    """Exception raised when a numerical routine cannot produce a trusted result."""
    pass


class SingularMatrixError(NumericalError):
    """Exception raised when a pivot falls below the singularity tolerance."""
    pass


class NumericalBreakdownError(NumericalError):
    """Exception raised when a division by a vanishing quantity is required."""
    pass


class WalkLimitExceededError(NumericalError):
    """Exception raised when a random-walk estimate exhausts its step budget."""
    pass
