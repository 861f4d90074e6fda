"""Shared exception types.

Every guard in the package raises one of these so callers (and the CLI exit-code
mapping) can tell domain errors apart from I/O errors.
"""


class BadScienceError(Exception):
    """Base class for all package-specific errors."""


class ZeroRow(BadScienceError):
    """A matrix row has (numerically) zero norm and cannot be normalized."""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} has norm below 1e-300; cannot normalize")


class ParseError(BadScienceError):
    """A matrix file could not be parsed."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, field {col}: {message}")


class DimensionMismatch(BadScienceError):
    """A matrix file's rows are ragged or their count disagrees with the header."""


class TooLarge(BadScienceError):
    """The requested dimension exceeds what the operation supports."""


class RankDeficient(BadScienceError):
    """A QR pivot collapsed; the input is numerically rank-deficient."""

    def __init__(self, column: int):
        self.column = column
        super().__init__(f"pivot collapsed at column {column}")


class NotPSD(BadScienceError):
    """Cholesky factorization failed; the matrix is not positive semidefinite."""


class NotPrime(BadScienceError):
    """A Paley construction was asked for a composite modulus."""


class BadResidue(BadScienceError):
    """A Paley construction was asked for a prime in the wrong residue class."""


class Unsupported(BadScienceError):
    """The requested construction is outside the supported parameter range."""
