"""Exception types shared across the package."""


class NilcohomError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(NilcohomError, ValueError):
    """Vector or matrix sizes are incompatible."""


class FieldMismatch(NilcohomError, ValueError):
    """Operands live over different scalar fields (Q vs Q(i))."""


class NotLieAlgebra(NilcohomError, ValueError):
    """An operation requiring the Jacobi identity received a non-Lie bracket."""


class NotInVariety(NilcohomError, ValueError):
    """Input bracket violates the constraint (nilpotency step, SN vanishing)."""


class SingularMatrix(NilcohomError, ValueError):
    """A basis-change or solve step hit a non-invertible matrix."""


class NotDerivation(NilcohomError, ValueError):
    """The matrix handed to a semidirect extension is not a derivation."""


class TableError(NilcohomError, ValueError):
    """Structure-table text could not be parsed; carries line/column info."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class UnknownAlgebra(NilcohomError, KeyError):
    """Catalog lookup for a name that is not registered."""


class ExternalDataRequired(NilcohomError, LookupError):
    """The requested record is only available from the optional data pack."""


class ResourceCapExceeded(NilcohomError, RuntimeError):
    """A capped computation (Groebner basis) ran past its configured limits."""
