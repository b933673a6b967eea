from typing import Any, Dict, Optional


class ListDecodingError(Exception):
    """Base class of every error raised by rs_list_decoding."""


class DivisionByZero(ListDecodingError, ZeroDivisionError):
    pass


class InvalidElement(ListDecodingError, ValueError):
    pass


class InvalidFieldSpec(ListDecodingError, ValueError):
    pass


class NotEnoughPoints(ListDecodingError, ValueError):
    pass


class MessageTooLong(ListDecodingError, ValueError):
    pass


class DimensionError(ListDecodingError, ValueError):
    pass


class TooManyVertices(ListDecodingError, ValueError):
    pass


class SearchSpaceTooLarge(ListDecodingError):
    pass


class InvalidOrientation(ListDecodingError, ValueError):
    pass


class DegenerateHypergraph(ListDecodingError, ValueError):
    pass


class NoSubmatrix(ListDecodingError):
    pass


class InvalidParameters(ListDecodingError, ValueError):
    pass


class InvariantViolation(ListDecodingError, RuntimeError):
    """A structural guarantee failed on a concrete instance.

    Args:
        message (str): What failed.
        dump (dict, optional): The full instance, JSON-serializable, for reproduction.
    """

    def __init__(self, message: str, dump: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.dump = dump or {}


__all__ = [
    "ListDecodingError",
    "DivisionByZero",
    "InvalidElement",
    "InvalidFieldSpec",
    "NotEnoughPoints",
    "MessageTooLong",
    "DimensionError",
    "TooManyVertices",
    "SearchSpaceTooLarge",
    "InvalidOrientation",
    "DegenerateHypergraph",
    "NoSubmatrix",
    "InvalidParameters",
    "InvariantViolation",
]
