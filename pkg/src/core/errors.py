# src/core/errors.py
"""
Jerarquía de errores del pipeline.

Cada error lleva un código estable (E1xx entrada, E2xx geometría, E3xx numérico)
y el código de salida que la CLI debe devolver (2 = entrada, 3 = falla numérica).
"""
from __future__ import annotations
from typing import Optional

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

class PipelineError(Exception):
    code: str = "E000"
    exit_code: int = EXIT_INPUT

    def __init__(self, message: str, *, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"

# --- entrada ---
class InputError(PipelineError):
    code = "E100"

class ConfigError(InputError):
    code = "E101"

class FormatError(InputError):
    code = "E102"

class ShapeMismatchError(InputError):
    code = "E103"

class ResolutionMismatchError(InputError):
    code = "E104"

class UnknownFixtureError(InputError):
    code = "E105"

# --- geometría ---
class GeometryError(PipelineError):
    code = "E200"

class AtlasOverflowError(GeometryError):
    code = "E201"

    def __init__(self, message: str = "atlas overflow: increase resolution", **kw):
        super().__init__(message, **kw)

class MissingColorError(GeometryError):
    code = "E202"

# --- numéricos ---
class NumericalError(PipelineError):
    code = "E300"
    exit_code = EXIT_NUMERICAL

class ScheduleError(NumericalError):
    code = "E301"

class SolverDivergenceError(NumericalError):
    code = "E302"

    def __init__(self, message: str, *, last_residual: float, iterations: int):
        super().__init__(f"{message} (residuo={last_residual:.3e}, iteraciones={iterations})")
        self.last_residual = last_residual
        self.iterations = iterations

class StageError(PipelineError):
    """Envuelve un error de una etapa con su etiqueta; conserva código y salida de la causa."""

    def __init__(self, stage: str, cause: Exception):
        code = getattr(cause, "code", "E000")
        super().__init__(f"[{stage}] {getattr(cause, 'message', cause)}", code=code)
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", EXIT_NUMERICAL)
