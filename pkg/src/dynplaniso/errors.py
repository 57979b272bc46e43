"""Exception hierarchy shared by all layers."""

from __future__ import annotations


class DynPlanIsoError(Exception):
    """Base class for every error raised by the package."""


# graph core
class IllegalChange(DynPlanIsoError):
    pass


class NonPlanarResult(DynPlanIsoError):
    pass


class NotAFace(DynPlanIsoError):
    pass


class Not3Connected(DynPlanIsoError):
    pass


class NotCoherent(DynPlanIsoError):
    pass


# decompositions
class TypeMismatch(DynPlanIsoError):
    pass


class DifferentTrees(DynPlanIsoError):
    pass


class NotOnCycle(DynPlanIsoError):
    pass


class AmbiguousOrientation(DynPlanIsoError):
    pass


class NotAFacePair(DynPlanIsoError):
    pass


class Still3Connected(DynPlanIsoError):
    pass


class StillBiconnected(DynPlanIsoError):
    pass


# modular arithmetic
class NotInvertible(DynPlanIsoError):
    """Raised when a matrix (or an update capacitance) is singular mod p."""

    def __init__(self, p: int, where: str = "") -> None:
        super().__init__(f"singular modulo {p}" + (f" in {where}" if where else ""))
        self.p = p
        self.where = where


class PoolTooSmall(DynPlanIsoError):
    pass


class PreconditionError(DynPlanIsoError, ValueError):
    """A structural precondition of a bundle operation does not hold."""


# isomorphism layers
class FingerprintCollision(DynPlanIsoError):
    pass


class InvalidContext(DynPlanIsoError):
    pass


class AmbiguousFace(DynPlanIsoError):
    pass


class NotBiconnectedPair(DynPlanIsoError):
    pass


class InvalidQuery(DynPlanIsoError, ValueError):
    pass


# oracles
class SizeLimit(DynPlanIsoError):
    pass


class Singular(DynPlanIsoError):
    pass


# harness
class ScriptError(DynPlanIsoError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class ParseError(ScriptError):
    pass


class RangeError(ScriptError):
    pass
