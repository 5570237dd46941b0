"""Shared exception types."""


class T20OptError(Exception):
    """Base class for all package errors."""


class SchemaError(T20OptError):
    """Input file is structurally unusable (missing columns, bad JSON, ...)."""


class ScenarioError(T20OptError):
    """Scenario file fails validation; message names the field and constraint."""


class FitError(T20OptError):
    """Summary-to-vector fit is infeasible; message names the violated bound."""


class InfeasiblePlanError(T20OptError):
    """A bowling plan violates quota, adjacency, or prev-bowler constraints."""


class InfeasibleScenarioError(T20OptError):
    """No feasible bowling plan exists for the scenario."""


class CapacityError(T20OptError):
    """Requested computation exceeds a documented size guard."""
