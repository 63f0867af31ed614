"""Exception hierarchy shared by all modules."""


class SoficError(Exception):
    """Base class for every error raised by this package."""


class ParseError(SoficError, ValueError):
    pass


class NotRightResolving(SoficError, ValueError):
    pass


class EmptyShift(SoficError, ValueError):
    pass


class LetterNotInAlphabet(SoficError, ValueError):
    pass


class LetterCollision(SoficError, ValueError):
    pass


class NotProlongable(SoficError, ValueError):
    pass


class GensDoNotGenerate(SoficError, ValueError):
    pass


class BoundTooSmall(SoficError, ValueError):
    pass


class NotAPreorder(SoficError, ValueError):
    pass


class NotIrreducible(SoficError, ValueError):
    pass


class BudgetExceeded(SoficError, RuntimeError):
    """A backtracking search ran out of nodes before reaching a verdict."""

    def __init__(self, what, budget):
        super().__init__(f"{what}: search budget of {budget} nodes exhausted")
        self.what = what
        self.budget = budget
