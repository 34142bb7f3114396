from typing import Any, Mapping, Optional


class EngineError(Exception):
    """Base error of the engine. `witness` carries the data needed to reproduce it."""

    exit_code = 2
    http_status = 422

    def __init__(self, message: str, witness: Optional[Mapping[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.witness = dict(witness or {})

    def as_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": self.message,
            "witness": self.witness,
        }


class ParseError(EngineError):
    exit_code = 1
    http_status = 400


class LawViolation(EngineError):
    pass


class CoherenceViolation(EngineError):
    pass


class FlagMismatch(EngineError):
    pass


class NotStrongConjoint(EngineError):
    exit_code = 3
    http_status = 409


class InfinitePoints(EngineError):
    exit_code = 4
    http_status = 413


class BoundsExceeded(EngineError):
    exit_code = 4
    http_status = 413


class NonComposableCospan(EngineError):
    pass


class UncomputablePullback(EngineError):
    exit_code = 4
    http_status = 413


class MixedBackends(EngineError):
    pass


class IndexNotPullback(EngineError):
    pass


class FibreNotPullback(EngineError):
    pass


class NonComposable(EngineError):
    pass


class FrameMismatch(EngineError):
    pass


class SquareNotCommuting(EngineError):
    pass


class IncompleteTable(EngineError):
    pass


class NotDiscreteObjects(EngineError):
    exit_code = 3
    http_status = 409


class CounitNotMono(EngineError):
    exit_code = 3
    http_status = 409
