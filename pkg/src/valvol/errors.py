"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI prints.
"""


class ValvolError(ValueError):
    code = "error"


class ParseError(ValvolError):
    code = "parse_error"

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class VariableError(ValvolError):
    code = "variable_mismatch"


class BranchError(ValvolError):
    code = "invalid_branch"


class NonPrimitiveBranch(BranchError):
    code = "non_primitive"


class UnsupportedFrame(BranchError):
    code = "unsupported_frame"


class ExtensionRequired(BranchError):
    code = "extension_required"


class NotUnibranch(BranchError):
    code = "not_unibranch"


class BudgetExceeded(BranchError):
    code = "budget_exceeded"


class KltRangeError(ValvolError):
    code = "klt_range"


class BoxTooSmall(ValvolError):
    code = "box_too_small"

    def __init__(self, message: str, required: tuple[int, ...]):
        super().__init__(f"{message}; required box {required}")
        self.required = required


class NotLogFano(ValvolError):
    code = "not_log_fano"


class FamilyError(ValvolError):
    code = "family_error"


class CrossCheckFailed(ValvolError):
    code = "cross_check_failed"
