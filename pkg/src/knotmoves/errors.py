"""Exception types shared across the toolkit."""


class KnotmovesError(Exception):
    """Base class for all domain errors."""


class InvalidDiagram(KnotmovesError):
    """A planar diagram failed structural validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid diagram")


class InapplicableMove(KnotmovesError):
    """Move site data is stale or the applicability rule is violated."""


class NotATriangle(KnotmovesError):
    """A 3-gon was expected."""


class UnknownArrow(KnotmovesError):
    """Arrow index out of range for a Gauss diagram."""


class NonRealizable(KnotmovesError):
    """A Gauss diagram admits no planar realization."""


class UnknownBuiltin(KnotmovesError):
    """Unrecognized built-in object name."""


class UnknownEdge(KnotmovesError):
    """Edge reference does not exist in the diagram."""


class InvalidTangle(KnotmovesError):
    """Tangle fragment is not structurally sound."""


class NotCofacial(KnotmovesError):
    """The two edge sides do not border a common face."""


class SameEdge(KnotmovesError):
    """Two distinct edges are required."""


class Deadend(KnotmovesError):
    """A random walk has no applicable move to take."""


class ViolationFound(KnotmovesError):
    """A search reached a state falsifying the property under test."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ParseError(KnotmovesError):
    """Syntactically malformed input text (position-annotated)."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class StructureError(KnotmovesError):
    """Well-formed tokens that do not assemble into a legal object."""


class NotAKnot(KnotmovesError):
    """Input encodes more than one closed component."""


class LayoutFailure(KnotmovesError):
    """Planar layout could not place the diagram."""
