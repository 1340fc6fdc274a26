"""Exception hierarchy shared by all lshape_lab modules."""


class LShapeLabError(Exception):
    """Base class for every error raised by the library."""


class DegenerateShape(LShapeLabError):
    pass


class TieViolation(LShapeLabError):
    pass


class DuplicateId(LShapeLabError):
    pass


class UnknownVertex(LShapeLabError):
    pass


class MissingAssignment(LShapeLabError):
    pass


class BudgetExceeded(LShapeLabError):
    """The exact solver explored more branch nodes than it was allowed."""

    def __init__(self, budget: int, nodes: int):
        super().__init__(f"branch-and-bound exceeded node budget {budget} ({nodes} nodes)")
        self.budget = budget
        self.nodes = nodes


class InvariantViolation(LShapeLabError):
    """An instance or scene fails one of its structural invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant
        self.detail = detail


class NoSupport(LShapeLabError):
    pass


class PreconditionViolated(LShapeLabError):
    def __init__(self, step: int, failed: dict):
        names = ", ".join(str(k) for k in sorted(failed))
        super().__init__(f"step {step}: conditions {names} do not hold on the input")
        self.step = step
        self.failed = failed


class NonTermination(LShapeLabError):
    pass


class CutObstructed(LShapeLabError):
    pass


class EmptyScene(LShapeLabError):
    pass


class TriangleDetected(LShapeLabError):
    def __init__(self, witness):
        super().__init__(f"triangle {tuple(witness)}")
        self.witness = tuple(witness)


class CoverGap(LShapeLabError):
    pass


class PrepFailed(LShapeLabError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class HookUndefined(LShapeLabError):
    pass


class GenerationStalled(LShapeLabError):
    pass


class Unsupported(LShapeLabError):
    pass


class AmbiguousTangency(LShapeLabError):
    pass


class FormatError(LShapeLabError):
    """A scene or report file does not follow the expected layout."""
