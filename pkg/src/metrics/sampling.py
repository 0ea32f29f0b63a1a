# src/metrics/sampling.py
from __future__ import annotations
from dataclasses import dataclass
import numpy as np

from core.errors import GeometryError, InputError
from geometry.mesh import Mesh

@dataclass(frozen=True, eq=False)
class PointCloudSample:
    points: np.ndarray    # (n,3)
    faces: np.ndarray     # (n,) triángulo de origen
    bary: np.ndarray      # (n,3) baricéntricas en ese triángulo
    seed: int

    @property
    def count(self) -> int:
        return len(self.points)

def sample_surface(mesh: Mesh, n: int, seed: int = 0) -> PointCloudSample:
    """Muestreo uniforme por área: triángulo ∝ área, baricéntricas con el truco de la raíz."""
    if int(n) < 1:
        raise InputError(f"n debe ser >= 1: {n}")
    areas = mesh.face_areas() if mesh.num_triangles else np.zeros(0)
    total = float(areas.sum())
    if not total > 0.0:
        raise GeometryError("zero total area")
    rng = np.random.default_rng(seed)
    faces = rng.choice(len(areas), size=int(n), p=areas / total)
    r1 = rng.random(int(n))
    r2 = rng.random(int(n))
    sq = np.sqrt(r1)
    bary = np.stack([1.0 - sq, sq * (1.0 - r2), sq * r2], axis=1)
    corners = mesh.positions[mesh.triangles[faces]]
    points = np.einsum("ki,kij->kj", bary, corners)
    return PointCloudSample(points=points, faces=faces, bary=bary, seed=int(seed))
