"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes (see ``ghzcert.cli``), so new
error types should subclass one of the existing categories rather than
``GhzCertError`` directly unless they truly need a new exit code.
"""

from __future__ import annotations


class GhzCertError(Exception):
    """Base class for all errors raised by ghzcert."""


class InputError(GhzCertError):
    """Malformed or out-of-contract input: bad labels, masks, schemas, sizes.

    Carries an optional ``path`` locating the offending field in a JSON
    document (e.g. ``"terms[2].setting"``).
    """

    def __init__(self, message: str, *, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class NotInGroupError(InputError):
    """A Pauli string is not an element of the GHZ stabilizer group."""


class NegatedElementError(InputError):
    """A Pauli string equals minus one times a stabilizer-group element."""


class NotInClassError(GhzCertError):
    """Observable fails the certification-class test; carries the failures."""

    def __init__(self, failures: tuple[str, ...]):
        self.failures = failures
        super().__init__(
            "observable is not in the certification class: " + "; ".join(failures)
        )


class InfeasibleMeanError(GhzCertError):
    """Requested expectation value lies outside the observable's spectrum."""


class DegenerateSpectrumError(GhzCertError):
    """Spectrum has a single distinct eigenvalue (multiple of the identity)."""


class OracleError(GhzCertError):
    """A dense-matrix verification suite found a violation."""
