"""Exception types raised by the simulation engine."""

from __future__ import annotations


class SimulationError(Exception):
    """Base class for all engine errors."""


class CoincidentAgentsError(SimulationError):
    """Pursuer and evader occupy the same point, so no bearing is defined.

    A well-formed episode terminates on capture before this can happen.
    """


class UnstableStepError(SimulationError):
    """The semi-implicit Euler damping factor (1 - mu*dt) would flip sign."""


class InvalidDirectionError(SimulationError):
    """A direction argument that must be a unit vector is not one."""


class PolicyMismatchError(SimulationError):
    """A role-specific policy was evaluated for the wrong side of the game."""


class ShapeError(SimulationError):
    """Network input does not match the network's expected dimensions."""


class WeightFileError(SimulationError):
    """A policy weight file is malformed; message carries the offending location."""


class CsvFormatError(SimulationError):
    """A CSV input row could not be parsed; message carries the line number."""


class NoBoundaryError(SimulationError):
    """Fewer than two grid columns have a usable capture boundary."""


class DegenerateFitError(SimulationError):
    """Boundary points do not span enough distinct abscissas to fit a line."""


class SweepCellError(SimulationError):
    """An episode inside a parameter sweep failed; message carries the cell."""
