from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class SymbolKind(str, Enum):
    FIBER = "fiber"
    PARAMETER = "parameter"
    JET = "jet"
    AUXILIARY = "auxiliary"


@dataclass(frozen=True, order=True)
class Symbol:
    """A named coordinate. Ordering is lexicographic by name."""

    name: str
    kind: SymbolKind = SymbolKind.AUXILIARY

    def __str__(self) -> str:
        return self.name
