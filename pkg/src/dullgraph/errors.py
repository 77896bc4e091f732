"""Exception types and the report object shared by the validators."""

from __future__ import annotations

from dataclasses import dataclass, field


class DullGraphError(ValueError):
    """Base class for every error raised by this package."""


class StructuralError(DullGraphError):
    """An object refers to ids that do not exist, or is malformed."""


class InvalidGraphError(DullGraphError):
    """A graph (or orientation) failed validation where a valid one is required."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DegenerateInputError(DullGraphError):
    pass


class NotExceptionalError(DullGraphError):
    """The requested edge or facet cannot be blown down."""


class SurgeryError(DullGraphError):
    """A blowup or flip was requested somewhere it is not defined."""


class FeasibilityError(DullGraphError):
    """A blowup size is too large (or not positive)."""

    def __init__(self, message, max_size=None):
        super().__init__(message)
        self.max_size = max_size


class NotInteriorError(DullGraphError):
    pass


class OnChainError(DullGraphError):
    """A point lies on the chain of isotropy spheres, where the map is undefined."""


class GeometryError(DullGraphError):
    pass


class NeedsParityError(DullGraphError):
    pass


class ParseError(DullGraphError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class ConfigError(DullGraphError):
    """Inconsistent numeric parameters (tolerances, cut-off radii)."""


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple = ()

    def __str__(self):
        where = f" [{', '.join(map(str, self.ids))}]" if self.ids else ""
        return f"{self.code}: {self.message}{where}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def raise_if_invalid(self, what="graph"):
        if self.violations:
            detail = "; ".join(str(v) for v in self.violations)
            raise InvalidGraphError(f"invalid {what}: {detail}", self)

    def to_json(self):
        return {
            "valid": self.ok,
            "violations": [
                {"code": v.code, "message": v.message, "ids": [str(i) for i in v.ids]}
                for v in self.violations
            ],
        }
