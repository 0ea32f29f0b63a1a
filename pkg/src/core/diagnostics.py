# src/core/diagnostics.py
from __future__ import annotations
from dataclasses import dataclass, asdict, field
from typing import List, Dict, Any
import logging

log = logging.getLogger(__name__)

@dataclass
class Diagnostic:
    phase: str      # 'geometry' | 'isosurface' | 'raster' | 'refine' | ...
    code: str       # W201, W301, ...
    message: str
    severity: str = "warning"
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)

    def __str__(self) -> str:
        return f"[{self.phase}] {self.code}: {self.message}"

class Diagnostics:
    """Colector de advertencias no fatales; cada etapa agrega las suyas y el manifest las vuelca."""

    def __init__(self):
        self._items: List[Diagnostic] = []

    def add(self, *, phase: str, code: str, message: str, severity: str = "warning", **extra):
        d = Diagnostic(phase=phase, code=code, message=message, severity=severity, extra=extra)
        self._items.append(d)
        log.log(logging.INFO if severity == "info" else logging.WARNING, "%s", d)
        return d

    def warn(self, phase: str, code: str, message: str, **extra):
        return self.add(phase=phase, code=code, message=message, **extra)

    def extend(self, ds: "Diagnostics"):
        self._items.extend(ds._items)

    def empty(self) -> bool:
        return not self._items

    def count(self, code: str | None = None) -> int:
        if code is None:
            return len(self._items)
        return sum(1 for d in self._items if d.code == code)

    def to_list(self) -> List[dict]:
        return [d.to_dict() for d in self._items]

    def __len__(self) -> int:
        return len(self._items)
