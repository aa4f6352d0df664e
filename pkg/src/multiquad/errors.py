"""Exception hierarchy. Every error carries a stable machine-readable ``code``."""


class MultiquadError(Exception):
    code = "error"


class BoundExceededError(MultiquadError):
    code = "bound_exceeded"


class InvalidRangeError(MultiquadError):
    code = "invalid_range"


class OutOfRangeError(MultiquadError):
    code = "out_of_range"


class ZeroInputError(MultiquadError):
    code = "zero_input"


class ArithmeticOverflowError(MultiquadError):
    code = "overflow"


class IndependenceError(MultiquadError):
    code = "independence_violation"


class NotIFreeError(MultiquadError):
    code = "not_i_free"


class InternalError(MultiquadError):
    code = "internal"


class BudgetError(MultiquadError):
    code = "budget"


class EqualBasesError(MultiquadError):
    code = "equal_bases"


class SingularSystemError(MultiquadError):
    code = "singular_system"


class BasisMismatchError(MultiquadError):
    code = "basis_mismatch"


class DomainError(MultiquadError):
    code = "domain"


class BoundTooSmallError(MultiquadError):
    code = "bound_too_small"


class IllConditionedGridError(MultiquadError):
    code = "ill_conditioned_grid"
