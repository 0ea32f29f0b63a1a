# src/isosurface/scenes.py
"""
Escenas analíticas (SDF + color) usadas como fixtures sintéticos.
Todas las SDF son negativas adentro y evaluables sobre arreglos (N,3).
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Callable, Dict, Optional
import numpy as np

from core.errors import UnknownFixtureError

Field = Callable[[np.ndarray], np.ndarray]

@dataclass(frozen=True)
class AnalyticScene:
    sdf: Field
    color: Optional[Field] = None
    name: str = "scene"

def _pts(p) -> np.ndarray:
    return np.asarray(p, dtype=np.float64).reshape(-1, 3)

# ---------------- primitivas ----------------

def sphere(center=(0.0, 0.0, 0.0), radius: float = 0.3) -> Field:
    c = np.asarray(center, dtype=np.float64)
    return lambda p: np.linalg.norm(_pts(p) - c, axis=1) - radius

def capsule(a, b, radius: float) -> Field:
    a = np.asarray(a, dtype=np.float64)
    ab = np.asarray(b, dtype=np.float64) - a
    denom = float(ab @ ab)

    def f(p):
        ap = _pts(p) - a
        h = np.clip(ap @ ab / denom, 0.0, 1.0) if denom > 0 else np.zeros(len(ap))
        return np.linalg.norm(ap - h[:, None] * ab, axis=1) - radius
    return f

def rounded_box(half_extents, radius: float = 0.0, center=(0.0, 0.0, 0.0)) -> Field:
    h = np.asarray(half_extents, dtype=np.float64) - radius
    c = np.asarray(center, dtype=np.float64)

    def f(p):
        q = np.abs(_pts(p) - c) - h
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=1)
        inside = np.minimum(q.max(axis=1), 0.0)
        return outside + inside - radius
    return f

def plane(normal=(0.0, 0.0, 1.0), offset: float = 0.0) -> Field:
    n = np.asarray(normal, dtype=np.float64)
    n = n / np.linalg.norm(n)
    return lambda p: _pts(p) @ n - offset

def smooth_union(k: float, *fields: Field) -> Field:
    """Unión suave polinomial; k = 0 equivale a min."""
    def f(p):
        d = fields[0](p)
        for g in fields[1:]:
            e = g(p)
            if k <= 0:
                d = np.minimum(d, e)
                continue
            h = np.clip(0.5 + 0.5 * (e - d) / k, 0.0, 1.0)
            d = e * (1 - h) + d * h - k * h * (1 - h)
        return d
    return f

def constant_color(rgb) -> Field:
    c = np.clip(np.asarray(rgb, dtype=np.float64), 0.0, 1.0)
    return lambda p: np.broadcast_to(c, (len(_pts(p)), 3)).copy()

def coordinate_ramp(p) -> np.ndarray:
    """color(p) = p + 0.5, recortado a [0,1]."""
    return np.clip(_pts(p) + 0.5, 0.0, 1.0)

def character_ramp(p) -> np.ndarray:
    # asimétrica en z para distinguir frente y espalda
    q = _pts(p)
    r = 0.55 + 0.9 * q[:, 0] + 0.35 * q[:, 2]
    g = 0.45 + 0.8 * q[:, 1] - 0.2 * q[:, 2]
    b = 0.5 - 0.7 * q[:, 2] + 0.25 * q[:, 0]
    return np.clip(np.stack([r, g, b], axis=1), 0.0, 1.0)

# ---------------- fixtures ----------------

def sphere_scene(radius: float = 0.3) -> AnalyticScene:
    return AnalyticScene(sdf=sphere(radius=radius), color=coordinate_ramp, name="sphere")

def capsule_scene() -> AnalyticScene:
    return AnalyticScene(sdf=capsule((0.0, -0.2, 0.0), (0.0, 0.2, 0.0), 0.15),
                         color=coordinate_ramp, name="capsule")

def rounded_box_scene() -> AnalyticScene:
    return AnalyticScene(sdf=rounded_box((0.25, 0.3, 0.2), 0.05), color=coordinate_ramp, name="rounded_box")

def nested_spheres_scene() -> AnalyticScene:
    """Esfera r=0.15 dentro de un cascarón hueco r∈[0.3,0.4]: la vista externa ocluye a la interna."""
    inner = sphere(radius=0.15)
    outer = sphere(radius=0.35)
    sdf = lambda p: np.minimum(inner(p), np.abs(outer(p)) - 0.05)
    return AnalyticScene(sdf=sdf, color=coordinate_ramp, name="nested_spheres")

def blob_character_scene() -> AnalyticScene:
    """Personaje en pose A: cabeza, torso, brazos, piernas y nariz, unidos suavemente."""
    parts = [
        sphere((0.0, 0.3, 0.0), 0.15),
        capsule((0.0, -0.05, 0.0), (0.0, 0.15, 0.0), 0.13),
        capsule((0.12, 0.12, 0.0), (0.32, -0.08, 0.0), 0.05),
        capsule((-0.12, 0.12, 0.0), (-0.32, -0.08, 0.0), 0.05),
        capsule((0.07, -0.1, 0.0), (0.09, -0.42, 0.0), 0.06),
        capsule((-0.07, -0.1, 0.0), (-0.09, -0.42, 0.0), 0.06),
        sphere((0.0, 0.3, 0.14), 0.03),
    ]
    return AnalyticScene(sdf=smooth_union(0.03, *parts), color=character_ramp, name="blob_character")

FIXTURES: Dict[str, Callable[[], AnalyticScene]] = {
    "sphere": sphere_scene,
    "capsule": capsule_scene,
    "rounded_box": rounded_box_scene,
    "nested_spheres": nested_spheres_scene,
    "blob_character": blob_character_scene,
}

def fixture(name: str) -> AnalyticScene:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise UnknownFixtureError(f"fixture desconocido '{name}' (disponibles: {', '.join(sorted(FIXTURES))})")
