"""Exception hierarchy.

Every error raised for malformed mathematical input derives from
:class:`ValidationError` and carries a ``witness`` (the offending elements,
pair, triple, ...) so reports can show exactly what failed.
"""

from __future__ import annotations

from typing import Any


class QcechError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness

    @property
    def kind(self) -> str:
        return type(self).__name__


class ValidationError(QcechError):
    pass


class SizeCapExceeded(QcechError):
    pass


# lattice / quantale axioms
class NotAPartialOrder(ValidationError):
    pass


class NotALattice(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotDistributive(ValidationError):
    pass


class NotCommutative(ValidationError):
    pass


class NotClosedUnderMul(ValidationError):
    pass


class NotALocale(ValidationError):
    pass


# spaces and rings
class NotATopology(ValidationError):
    pass


class NotARing(ValidationError):
    pass


class NotARingHom(ValidationError):
    pass


class NotSurjective(ValidationError):
    pass


class NotAFunctionRing(ValidationError):
    pass


class NotAnIdeal(ValidationError):
    pass


class NotContinuous(ValidationError):
    pass


# maps
class NotMonotone(ValidationError):
    pass


class DoesNotPreserveJoins(ValidationError):
    pass


# groups and homs
class IncompatibleShapes(ValidationError):
    pass


class IncompatibleHom(ValidationError):
    pass


class CompositionNotZero(ValidationError):
    pass


class DoesNotPreserveKernel(ValidationError):
    pass


class DoesNotPreserveImage(ValidationError):
    pass


# presheaves and covers
class BadHomShape(ValidationError):
    pass


class PathDependence(ValidationError):
    pass


class RestrictionUnavailable(ValidationError):
    pass


class NotACover(ValidationError):
    pass


class InvalidWitness(ValidationError):
    pass


class ProductNotACover(ValidationError):
    pass


class NotDirected(ValidationError):
    pass


class ParseError(ValidationError):
    pass
