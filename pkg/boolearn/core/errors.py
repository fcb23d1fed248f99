"""Error hierarchy shared by the library, the CLI and the HTTP layer."""

from typing import Optional

BAD_REQUEST = 400
UNPROCESSABLE = 422


class BoolearnError(Exception):
    """Base error. Carries an HTTP-style status code and a human readable detail."""

    status_code: int = BAD_REQUEST

    def __init__(self, detail: str, status_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if status_code is not None:
            self.status_code = status_code


class PlaFormatError(BoolearnError):
    """Malformed PLA text or a PLA that cannot be converted to a dataset."""


class ContradictionError(PlaFormatError):
    """Two care-set rows with identical inputs and different outputs."""


class AigerFormatError(BoolearnError):
    """Malformed or unsupported AIGER ASCII text."""


class LiteralRangeError(BoolearnError):
    """A literal references a node that does not exist yet."""


class WidthMismatchError(BoolearnError):
    """Input width does not match the model or circuit."""


class EmptyDatasetError(BoolearnError):
    """A learner was handed a dataset without rows."""


class ModelConfigError(BoolearnError):
    """Invalid learner or harness configuration."""

    status_code = UNPROCESSABLE


class ReportError(BoolearnError):
    """Reports cannot be scored."""

    status_code = UNPROCESSABLE
