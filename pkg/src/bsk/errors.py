"""Exception hierarchy shared by all modules."""


class BSKError(Exception):
    """Base class for every error raised by this package."""


class BudgetExhausted(BSKError):
    """A lazy search hit its radius budget before reaching an answer."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class VertexNotInTree(BSKError, KeyError):
    pass


class InvalidGraph(BSKError, ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotATree(BSKError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotASubtree(BSKError, ValueError):
    pass


class EmptyPairwiseIntersection(BSKError, ValueError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class GroupAxiomError(BSKError, ValueError):
    def __init__(self, message, axiom, witness):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class NotASubgroup(BSKError, ValueError):
    pass


class NotAnIsometry(BSKError, ValueError):
    def __init__(self, message, pair):
        super().__init__(message)
        self.pair = pair


class InversionError(BSKError, ValueError):
    """An automorphism inverts an edge where that is not allowed."""

    def __init__(self, message, edge):
        super().__init__(message)
        self.edge = edge


class MinimumOnBoundary(BSKError):
    """The displacement minimum over a ball is only attained on its frontier."""

    def __init__(self, message, value, vertices):
        super().__init__(message)
        self.value = value
        self.vertices = vertices


class PreconditionFailed(BSKError, ValueError):
    pass


class EndNotFixed(BSKError):
    pass


class WordError(BSKError, ValueError):
    pass


class SpecError(BSKError, ValueError):
    """Parse or resolution error in a spec file, with a 1-based location."""

    def __init__(self, message, line=None, column=None):
        loc = "" if line is None else f"line {line}" + ("" if column is None else f", column {column}")
        super().__init__(f"{loc}: {message}" if loc else message)
        self.line = line
        self.column = column
        self.reason = message
