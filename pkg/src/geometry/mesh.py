# src/geometry/mesh.py
from __future__ import annotations
from dataclasses import dataclass, replace
from typing import Optional
import numpy as np

from core.errors import GeometryError

NORMAL_TOL = 1e-6

@dataclass(frozen=True, eq=False)
class Mesh:
    """
    Malla triangular indexada.

    - positions: (V,3) float64, unidades de escena
    - triangles: (F,3) int64, índices a positions
    - normals:   (V,3) unitarias o None
    - uvs:       (F,3,2) UV por esquina (wedge) en [0,1]² o None
    - chart_ids: (F,) id de carta por triángulo o None (lo llena el atlas)
    """
    positions: np.ndarray
    triangles: np.ndarray
    normals: Optional[np.ndarray] = None
    uvs: Optional[np.ndarray] = None
    chart_ids: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=np.float64).reshape(-1, 3))
        object.__setattr__(self, "triangles", np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3))
        if self.normals is not None:
            object.__setattr__(self, "normals", np.asarray(self.normals, dtype=np.float64).reshape(-1, 3))
        if self.uvs is not None:
            object.__setattr__(self, "uvs", np.asarray(self.uvs, dtype=np.float64).reshape(-1, 3, 2))
        if self.chart_ids is not None:
            object.__setattr__(self, "chart_ids", np.asarray(self.chart_ids, dtype=np.int64).reshape(-1))

    @property
    def num_vertices(self) -> int:
        return len(self.positions)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def is_empty(self) -> bool:
        return self.num_vertices == 0 or self.num_triangles == 0

    @property
    def has_atlas(self) -> bool:
        return self.uvs is not None and self.chart_ids is not None

    def with_(self, **changes) -> "Mesh":
        return replace(self, **changes)

    def corners(self) -> np.ndarray:
        """(F,3,3) posiciones de las esquinas de cada triángulo."""
        return self.positions[self.triangles]

    def face_normals(self, normalize: bool = True) -> np.ndarray:
        c = self.corners()
        n = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
        if not normalize:
            return n
        ln = np.linalg.norm(n, axis=1, keepdims=True)
        return np.divide(n, ln, out=np.zeros_like(n), where=ln > 0)

    def face_areas(self) -> np.ndarray:
        return 0.5 * np.linalg.norm(self.face_normals(normalize=False), axis=1)

    def validate(self) -> "Mesh":
        """Verifica los invariantes del tipo; lanza GeometryError si alguno falla."""
        if not np.all(np.isfinite(self.positions)):
            raise GeometryError("coordenadas no finitas en positions")
        if self.num_triangles:
            if self.triangles.min() < 0 or self.triangles.max() >= self.num_vertices:
                raise GeometryError("índice de triángulo fuera de rango")
        if self.normals is not None:
            if self.normals.shape != self.positions.shape:
                raise GeometryError("normals debe tener una normal por vértice")
            ln = np.linalg.norm(self.normals, axis=1)
            if not np.all(np.abs(ln - 1.0) <= NORMAL_TOL):
                raise GeometryError("normales no unitarias")
        if self.uvs is not None:
            if self.uvs.shape != (self.num_triangles, 3, 2):
                raise GeometryError("uvs debe tener una UV por esquina de triángulo")
            if not np.all(np.isfinite(self.uvs)):
                raise GeometryError("uvs no finitas")
        if self.chart_ids is not None and self.chart_ids.shape != (self.num_triangles,):
            raise GeometryError("chart_ids debe tener un valor por triángulo")
        return self

def empty_mesh() -> Mesh:
    return Mesh(positions=np.zeros((0, 3)), triangles=np.zeros((0, 3), dtype=np.int64))

def transform_mesh(mesh: Mesh, matrix: np.ndarray, translation=(0.0, 0.0, 0.0)) -> Mesh:
    """p' = M·p + t. Las normales se transforman con la inversa transpuesta y se renormalizan."""
    m = np.asarray(matrix, dtype=np.float64).reshape(3, 3)
    t = np.asarray(translation, dtype=np.float64).reshape(3)
    pos = mesh.positions @ m.T + t
    normals = None
    if mesh.normals is not None:
        n = mesh.normals @ np.linalg.inv(m)
        normals = n / np.linalg.norm(n, axis=1, keepdims=True)
    return mesh.with_(positions=pos, normals=normals)

def rotation_matrix(axis, angle_rad: float) -> np.ndarray:
    """Rotación de Rodrigues alrededor de un eje arbitrario."""
    a = np.asarray(axis, dtype=np.float64)
    a = a / np.linalg.norm(a)
    k = np.array([[0, -a[2], a[1]], [a[2], 0, -a[0]], [-a[1], a[0], 0]])
    return np.eye(3) + np.sin(angle_rad) * k + (1 - np.cos(angle_rad)) * (k @ k)
