"""Exception hierarchy shared by all pclab modules.

Every computational failure mode gets its own class so callers (and the
CLI) can map it to a stable machine-readable code.
"""


class PclabError(Exception):
    code = "Error"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class NotPrime(PclabError):
    code = "NotPrime"


class BadPrime(PclabError):
    """Reduction mod p is undefined: p divides a denominator."""

    code = "BadPrime"


class VariableMismatch(PclabError):
    code = "VariableMismatch"


class ParseError(PclabError):
    code = "ParseError"

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class SingularPoint(PclabError):
    code = "SingularPoint"


class OrderTooSmall(PclabError):
    code = "OrderTooSmall"


class PoleOnLeaf(PclabError):
    code = "PoleOnLeaf"


class NotARoot(PclabError):
    code = "NotARoot"


class SingularBranch(PclabError):
    code = "SingularBranch"


class BadParams(PclabError):
    code = "BadParams"


class SingularParameter(PclabError):
    code = "SingularParameter"


class ReducibleParameters(PclabError):
    code = "ReducibleParameters"


class NotFlat(PclabError):
    code = "NotFlat"


class NotPIntegral(PclabError):
    code = "NotPIntegral"


class NotASolution(PclabError):
    code = "NotASolution"


class DegreeBudgetExceeded(PclabError):
    code = "DegreeBudgetExceeded"


class PoleCollision(PclabError):
    code = "PoleCollision"


class InvalidInput(PclabError):
    """Bad user-supplied data that is not a syntax error (CLI validation)."""

    code = "InvalidInput"
