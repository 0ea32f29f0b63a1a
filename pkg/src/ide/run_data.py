# src/ide/run_data.py
"""Carga de directorios de corrida para el visor (sin dependencia de Streamlit)."""
from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import csv
import json

from pipeline.manifest import MANIFEST_NAME, missing_outputs, read_manifest

IMAGE_SUFFIXES = (".png",)

@dataclass
class RunData:
    root: Path
    manifest: Dict[str, Any]
    images: List[Path] = field(default_factory=list)
    report: List[Dict[str, str]] = field(default_factory=list)
    missing: List[str] = field(default_factory=list)

    @property
    def command(self) -> str:
        return self.manifest.get("command", "?")

    @property
    def warnings(self) -> List[dict]:
        return self.manifest.get("warnings", [])

    def timings_table(self) -> List[Dict[str, Any]]:
        return [{"etapa": k, "ms": v} for k, v in self.manifest.get("timings_ms", {}).items()]

    def warnings_table(self) -> List[Dict[str, Any]]:
        return [{"fase": w.get("phase"), "código": w.get("code"), "mensaje": w.get("message")}
                for w in self.warnings]

    def textures(self) -> List[Path]:
        return [p for p in self.images if "texture" in p.stem]

    def views(self) -> List[Path]:
        return [p for p in self.images if p.stem.startswith(("view_", "render_"))]

def find_runs(base: Union[str, Path]) -> List[Path]:
    """Directorios bajo `base` (incluido) que tienen manifest.json, ordenados por nombre."""
    b = Path(base)
    if not b.exists():
        return []
    return sorted(p.parent for p in b.rglob(MANIFEST_NAME))

def load_run(root: Union[str, Path]) -> Optional[RunData]:
    r = Path(root)
    if not (r / MANIFEST_NAME).exists():
        return None
    manifest = read_manifest(r)
    outputs = manifest.get("outputs", [])
    images = [r / name for name in outputs if name.endswith(IMAGE_SUFFIXES) and (r / name).exists()]
    report: List[Dict[str, str]] = []
    if "eval_report.csv" in outputs and (r / "eval_report.csv").exists():
        with (r / "eval_report.csv").open(encoding="utf-8") as f:
            report = list(csv.DictReader(f))
    return RunData(root=r, manifest=manifest, images=images, report=report,
                   missing=missing_outputs(manifest, r))

def manifest_json(run: RunData) -> str:
    return json.dumps(run.manifest, indent=2, ensure_ascii=False)
