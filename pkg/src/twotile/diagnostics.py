"""Diagnostic records and error types shared across the package.

Validation never repairs its input. Structural checks collect Diagnostic
records (one per finding, with an optional source line for parsed files);
operations that cannot return partial results raise an EngineError subclass
whose class name doubles as the machine-readable code.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Diagnostic:
    """A single validation finding.

    code is a stable CamelCase identifier, message is human-readable, and
    line is the 1-based source line for findings tied to a parsed file.
    """

    code: str
    message: str
    line: int | None = None

    def render(self) -> str:
        if self.line is None:
            return f"{self.code}: {self.message}"
        return f"{self.code}: {self.message} [line {self.line}]"


class EngineError(Exception):
    """Base class for fatal errors; .code mirrors the class name."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidComplex(EngineError):
    """Raised when a structure fails validation; carries the findings."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(d.render() for d in self.diagnostics[:8])
        more = "" if len(self.diagnostics) <= 8 else f" (+{len(self.diagnostics) - 8} more)"
        super().__init__(lines + more)


class InvalidRule(InvalidComplex):
    pass


class UnknownVertex(EngineError):
    pass


class UnknownCell(EngineError):
    pass


class UnknownFixture(EngineError):
    pass


class BadGridParams(EngineError):
    pass


class ResourceLimit(EngineError):
    pass


class WrongRule(EngineError):
    pass


class BoundaryMatchFailure(EngineError):
    pass


class InadmissibleAddress(EngineError):
    pass


class LengthMismatch(EngineError):
    pass


class MixedLevels(EngineError):
    pass


class LevelMismatch(EngineError):
    pass


class NonIntegerClosedForm(EngineError):
    pass


class BadLambda(EngineError):
    pass


class InvalidSpec(EngineError):
    pass


class SolverDidNotConverge(EngineError):
    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"barycentric solve residual {residual:.3e} exceeds tolerance")


class DegenerateDrawing(EngineError):
    """The barycentric solution is exact but some polygon has collapsed.

    Straight-line drawings cannot separate doubled edges or unfold
    interior vertices of degree two, so complexes containing them (the
    z^2-1 family at every level past zero) have no faithful flat
    rendering."""
