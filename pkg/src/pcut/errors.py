"""Exception types shared across the package.

The CLI maps these to exit codes: input problems exit 1, an empty feasible
set exits 2, numerical failures exit 3.
"""


class PCutError(Exception):
    """Base class for all package errors."""


class InputError(PCutError):
    """Malformed or inconsistent input data (files, matrices, labels)."""


class ParameterError(PCutError):
    """A parameter value outside its valid range or an invalid configuration."""


class ConstraintError(PCutError):
    """A structural precondition is violated (e.g. unlabeled component)."""


class NumericError(PCutError):
    """A numerical routine failed to converge or met an ill-posed system."""


class NoFeasiblePartitionError(PCutError):
    """No candidate satisfied the minimum-cluster-size constraint."""

    def __init__(self, message, best_infeasible=None):
        super().__init__(message)
        self.best_infeasible = best_infeasible


class UndefinedRatioError(PCutError):
    """Cut-ratio diagnostics requested against a zero-valued balanced cut."""
