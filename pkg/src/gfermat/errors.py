"""Exception hierarchy shared by the library and the CLI.

Every error carries a short machine-readable ``code`` and an optional
``context`` mapping, which the CLI serializes verbatim.
"""


class GFermatError(Exception):
    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context


class ValidationError(GFermatError, ValueError):
    code = "validation"


class FieldMismatchError(ValidationError):
    code = "field_mismatch"


class ReducibleModulusError(ValidationError):
    code = "reducible_modulus"


class CharacteristicError(ValidationError):
    """The characteristic is too small (or not coprime) for the request."""

    code = "characteristic"


class DegenerateCurveError(ValidationError):
    """Raised for genus <= 1 curves by automorphism/osculation routines."""

    code = "degenerate_curve"


class NotOnCurveError(ValidationError):
    code = "not_on_curve"


class UnsupportedFieldError(ValidationError):
    code = "unsupported_field"


class MissingRootsError(GFermatError):
    """Some k-th roots needed by the computation do not live in the field.

    ``required`` is a list of ``(element, k)`` pairs that a caller can hand to
    :func:`gfermat.fields.extend_for_roots`.
    """

    code = "missing_roots"

    def __init__(self, message, required=(), **context):
        super().__init__(message, **context)
        self.required = list(required)


class PropertyViolation(GFermatError):
    code = "property_violation"


class BudgetExceeded(GFermatError):
    code = "budget_exceeded"
