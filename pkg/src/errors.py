"""Error hierarchy shared by the library and the CLI.

Every error carries a stable machine-readable code and the process exit code
the CLI reports for it.
"""


class MobilityError(Exception):
    """Base error for htmobility."""

    code = "internal_error"
    exit_code = 1

    def __init__(self, message: str, *, hint: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.hint = hint

    def line(self) -> str:
        """Single-line `error_code: message` rendering for the diagnostic stream."""
        text = " ".join(self.message.split())
        return f"{self.code}: {text}"


class ConfigError(MobilityError):
    """Invalid flags, config file or cohort spec."""

    code = "config_error"
    exit_code = 2


class FormatError(MobilityError):
    """Input does not follow the declared file format."""

    code = "format_error"
    exit_code = 3


class InputError(FormatError):
    """Input stream cannot be opened or read."""

    code = "io_error"


class ContractViolation(MobilityError):
    """An operation was called outside its preconditions."""

    code = "contract_violation"
    exit_code = 4
