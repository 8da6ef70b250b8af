"""Exception hierarchy shared by all birackforge modules."""


class BirackForgeError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class ParseError(BirackForgeError):
    """Malformed text or JSON input (CLI exit code 2)."""


class VariableMismatch(BirackForgeError):
    def __init__(self, left, right):
        self.left = tuple(left)
        self.right = tuple(right)
        super().__init__(f"variable lists differ: {list(self.left)} vs {list(self.right)}")


class NotAUnit(BirackForgeError):
    pass


class ShapeError(BirackForgeError):
    pass


class NotInvertibleOverRing(BirackForgeError):
    pass


class AxiomViolation(BirackForgeError):
    def __init__(self, which, witness, detail=""):
        self.which = which
        self.witness = witness
        msg = f"axiom {which} fails at {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InvalidConstantAction(BirackForgeError):
    pass


class InvalidTSR(BirackForgeError):
    def __init__(self, violated):
        self.violated = list(violated)
        super().__init__("relations not zero: " + ", ".join(self.violated))


class PatternMismatch(BirackForgeError):
    pass


class LabelMismatch(BirackForgeError):
    pass


class NotALink(BirackForgeError):
    pass


class UnsupportedSize(BirackForgeError):
    pass


class RefusedBudget(BirackForgeError):
    def __init__(self, estimate, budget):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"estimated {estimate} candidates exceeds budget {budget}")
