# src/pipeline/manifest.py
from __future__ import annotations
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import hashlib
import json
import logging
import time

from core.diagnostics import Diagnostics
from core.errors import InputError, PipelineError, StageError

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"

def sha256_file(path: Union[str, Path]) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()

@dataclass
class RunManifest:
    """Registro de una corrida: entradas (sha256), configuración, tiempos por etapa, advertencias y salidas."""
    command: str
    out_dir: Path
    config: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    timings_ms: Dict[str, float] = field(default_factory=dict)
    outputs: List[str] = field(default_factory=list)
    stats: Dict[str, Any] = field(default_factory=dict)
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)

    def add_input(self, path: Union[str, Path]) -> Path:
        p = Path(path)
        if not p.is_file():
            raise InputError(f"No existe el archivo de entrada {p}")
        self.inputs[str(p)] = sha256_file(p)
        return p

    def output(self, name: str) -> Path:
        """Ruta dentro del directorio de salida, registrada como salida de la corrida."""
        if name not in self.outputs:
            self.outputs.append(name)
        return self.out_dir / name

    @contextmanager
    def stage(self, name: str):
        """Mide la etapa en ms y etiqueta cualquier error del pipeline con su nombre."""
        t0 = time.perf_counter()
        try:
            yield
        except StageError:
            raise
        except PipelineError as ex:
            raise StageError(name, ex) from ex
        finally:
            self.timings_ms[name] = self.timings_ms.get(name, 0.0) + (time.perf_counter() - t0) * 1000.0
            log.debug("etapa %s: %.1f ms", name, self.timings_ms[name])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": dict(self.inputs),
            "config": self.config,
            "timings_ms": {k: round(v, 3) for k, v in self.timings_ms.items()},
            "warnings": self.diagnostics.to_list(),
            "outputs": list(self.outputs),
            "stats": self.stats,
        }

    def write(self) -> Path:
        path = self.output(MANIFEST_NAME)
        path.write_text(json.dumps(self.to_dict(), indent=2, ensure_ascii=False, default=_jsonable) + "\n",
                        encoding="utf-8")
        return path

def _jsonable(v):
    if hasattr(v, "tolist"):
        return v.tolist()
    if isinstance(v, Path):
        return str(v)
    return str(v)

def read_manifest(path: Union[str, Path]) -> Dict[str, Any]:
    p = Path(path)
    if p.is_dir():
        p = p / MANIFEST_NAME
    return json.loads(p.read_text(encoding="utf-8"))

def missing_outputs(manifest: Dict[str, Any], out_dir: Optional[Union[str, Path]] = None) -> List[str]:
    root = Path(out_dir) if out_dir is not None else Path(".")
    return [name for name in manifest.get("outputs", []) if not (root / name).exists()]
