"""Exception types shared across the package."""


class OrbitLedgerError(Exception):
    """Base class for all package errors."""


class SingularMatrix(OrbitLedgerError):
    """Inverse requested for a matrix with zero determinant."""


class FieldMismatch(OrbitLedgerError):
    """Operands live over different prime fields."""


class IndexOutOfRange(OrbitLedgerError):
    """Vector index outside [0, p**n)."""


class BudgetExceeded(OrbitLedgerError):
    """A configured point/element/lattice/memory budget was exceeded."""


class NotAnAutomorphism(OrbitLedgerError):
    """Generator images do not extend to an automorphism (intertwiner space is not a line)."""


class NotSymplectic(OrbitLedgerError):
    """Outer matrix does not preserve the commutator form."""


class TypeMismatch(OrbitLedgerError):
    """Outer matrix preserves the commutator form but violates the quadratic type."""


class NotInGroup(OrbitLedgerError):
    """Element does not belong to the group it was tested against."""


class NotNormal(OrbitLedgerError):
    """Supplied generators do not generate a normal subgroup."""


class NoCandidates(OrbitLedgerError):
    """An empty candidate stream was reduced."""


class NotExceptional(OrbitLedgerError):
    """(p, n) is not one of the ten exceptional prime powers."""


class NoTableEntry(OrbitLedgerError):
    """No tabulated quotient bound for this e."""


class FlavorUnavailable(OrbitLedgerError):
    """Requested flavor needs a root of unity the field does not contain."""


class ParseError(OrbitLedgerError):
    """Malformed group file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InternalError(OrbitLedgerError):
    """An internal consistency check failed; indicates a bug."""
