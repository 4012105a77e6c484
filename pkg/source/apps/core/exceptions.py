from typing import Any, Dict, Optional


class AlgebraError(Exception):
    """Base error for the toolkit"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class InputError(AlgebraError):
    """Malformed tables, unparsable files, unknown names"""


class UnsupportedError(AlgebraError):
    """The input lacks a structural feature the operation needs"""


class PreconditionError(AlgebraError):
    """A theorem check was asked about an instance outside its hypotheses"""

    def __init__(self, message: str, report=None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.report = report


class ConsistencyError(AlgebraError):
    """A provably true internal invariant failed"""


class SearchInterrupted(AlgebraError):
    """The enumeration budget ran out; the checkpoint has been saved"""

    def __init__(self, message: str, checkpoint: Optional[str] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.checkpoint = checkpoint
