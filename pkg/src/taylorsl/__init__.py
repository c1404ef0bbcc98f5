"""Segmented Taylor-polynomial shooting for Sturm-Liouville eigenvalue problems."""

from .errors import (
    ConvergenceError,
    DegenerateSpecError,
    PartialResultError,
    SingularityError,
    TaylorSLError,
    ValidationError,
)
from .series import TruncatedSeries
from .solver import (
    EigenvalueResult,
    RobinBoundary,
    SegmentedSolution,
    SLProblem,
    SolverParams,
    find_eigenvalues,
    refine_root,
    scan_and_bracket,
    shoot,
)

__version__ = "0.1.0"
