from __future__ import annotations

from dataclasses import dataclass

from .algebra import RationalFunction


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exact check; ``residue`` is the nonzero witness on failure."""

    ok: bool
    residue: RationalFunction | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def from_residue(cls, residue: RationalFunction, detail: str = "") -> Verdict:
        if residue.is_zero():
            return cls(True, None, detail)
        return cls(False, residue, detail)
