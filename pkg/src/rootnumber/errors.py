"""Structured errors.

Every error carries a stable ``name`` so the CLI can report a machine-readable
error class (and exit 2) without string-matching messages.
"""


class RootNumberError(Exception):
    name = "error"


class DomainError(RootNumberError, ValueError):
    """Input outside an operation's domain (zero where forbidden, composite
    modulus, prime < 5 on a large-prime-only path, ...)."""

    name = "domain-error"


class NotPowerfreeError(DomainError):
    """Parameter divisible by a k-th prime power where a k-powerfree integer
    is required."""

    name = "not-powerfree"


class NonMinimalModelError(DomainError):
    """Weierstrass model not minimal at the prime in question; the caller must
    minimalize first so triplet provenance stays explicit."""

    name = "non-minimal-model"


class UnfactoredCofactorError(RootNumberError):
    """Factorization effort bound exceeded.  Never silently wrong: the
    offending cofactor is reported instead of guessed at."""

    name = "unfactored-cofactor"

    def __init__(self, cofactor: int, message: str | None = None):
        self.cofactor = cofactor
        super().__init__(message or f"effort bound exceeded on composite cofactor {cofactor}")


class MissingLocalDataError(RootNumberError):
    """The local root number at 2 or 3 is not determined by the built-in
    special-curve laws and no user table covers it."""

    name = "missing-local-data"

    def __init__(self, places, message: str | None = None):
        self.places = tuple(places)
        where = ", ".join(f"W{p}" for p in self.places)
        super().__init__(message or f"insufficient local data: {where} unavailable "
                         "(curve is not special there; supply --local-table)")


class TableFormatError(RootNumberError):
    name = "table-format"


class IncompleteTableError(TableFormatError):
    """A user local table that does not cover every (valuation class,
    unit class) combination is rejected at load time."""

    name = "incomplete-table"
