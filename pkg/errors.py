"""
Error types for ffexpand.

Every error a user can trigger derives from FFExpandError and carries the
process exit code the CLI reports for it. The codes are a stable contract:

    64  malformed input (field spec, polynomial text, config, CLI usage)
    65  incidence domain violated (q <= curve degree)
    66  structure preconditions / annihilator system over the safety cap
    67  set sampling errors
    68  context or dimension mismatches, inversion of zero
    70  anything else (internal error)
"""


class FFExpandError(Exception):
    """Base class for all ffexpand errors."""

    exit_code = 70


class ConfigError(FFExpandError, ValueError):
    """Invalid configuration file or command-line usage."""

    exit_code = 64


class FieldError(FFExpandError, ValueError):
    """Invalid field parameters: non-prime p, k < 1, q over the cap, bad modulus."""

    exit_code = 64


class PolynomialSyntaxError(FFExpandError, ValueError):
    """Polynomial text that does not conform to the grammar."""

    exit_code = 64

    def __init__(self, message: str, position: int | None = None, text: str | None = None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
            if text is not None:
                message = f"{message}\n  {text}\n  {' ' * position}^"
        super().__init__(message)


class IncidenceDomainError(FFExpandError, ValueError):
    """Curve degree n with q <= n: graphs no longer determine their coefficients."""

    exit_code = 65


class StructureError(FFExpandError, ValueError):
    """Niceness / classifier preconditions violated."""

    exit_code = 66


class AnnihilatorSearchTooLarge(StructureError):
    """The annihilator linear system exceeds the configured column cap."""

    def __init__(self, columns: int, cap: int):
        self.columns = columns
        self.cap = cap
        super().__init__(
            f"Annihilator system needs {columns} unknowns, over the cap of {cap}. "
            f"Lower the degree bound or raise the cap."
        )


class SamplingError(FFExpandError, ValueError):
    """Requested subset sizes or modes that cannot be honoured."""

    exit_code = 67


class ContextMismatchError(FFExpandError, ValueError):
    """Operands from different fields were combined."""

    exit_code = 68


class DimensionError(FFExpandError, ValueError):
    """Arity or vector length mismatch."""

    exit_code = 68


class FieldZeroDivisionError(FFExpandError, ZeroDivisionError):
    """Inversion of the zero element."""

    exit_code = 68


class PreconditionWarning(UserWarning):
    """A run proceeded although an input precondition could not be certified."""
