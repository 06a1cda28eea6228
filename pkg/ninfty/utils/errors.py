"""Exception hierarchy mapped onto the CLI exit-code contract.

0 success, 1 negative verdict (never raised), 2 input error, 3 resource cap.
"""

from typing import Optional


class NinftyError(Exception):
    """Base error carrying an exit code and a human-readable detail."""

    exit_code = 2

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class GroupParseError(NinftyError):
    pass


class GroupValidationError(NinftyError):
    pass


class DescriptorError(NinftyError):
    pass


class AmbientMismatchError(NinftyError):
    pass


class NotAGraphError(NinftyError):
    pass


class ArityError(NinftyError):
    pass


class NotASubgroupChainError(NinftyError):
    pass


class SequenceValidationError(NinftyError):
    pass


class MixedGroupError(NinftyError):
    pass


class CapExceededError(NinftyError):
    exit_code = 3

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} {value} exceeds the configured cap {cap}")
        self.value = value
        self.cap = cap


class ConfigError(NinftyError):
    pass


class OutputError(NinftyError):
    pass
