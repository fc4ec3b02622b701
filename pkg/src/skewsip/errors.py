"""Exception types shared across the package."""


class ShapeError(ValueError):
    """An input has the wrong length or refers to variables outside its space."""


class CapExceeded(ValueError):
    """A brute-force routine was asked to run beyond its explicit size cap."""


class DomainError(ValueError):
    """An operation was called outside its precondition (e.g. a restriction off-support)."""


class CanonicalDTError(RuntimeError):
    """CanonicalDT reached step 1 without a usable term.

    This cannot happen for DNFs of width at most u - 1; seeing it means either
    the width condition is violated or encoder/decoder conventions disagree.
    """


class DecodeError(ValueError):
    """The theta decoder rejected its input; ``stage`` names where it failed."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
