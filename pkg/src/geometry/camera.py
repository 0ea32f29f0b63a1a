# src/geometry/camera.py
"""
Cámara de órbita en perspectiva.

Convención: mano derecha, +Y arriba, vista frontal = cámara sobre +Z.
El azimut crece en sentido antihorario visto desde +Y (azimut 90 → +X).
"""
from __future__ import annotations
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Tuple
import math
import numpy as np

from core.errors import GeometryError

DEFAULT_FOV_DEG = 40.0
DEFAULT_DISTANCE = 1.5
CANONICAL_AZIMUTHS = (0.0, 90.0, 180.0, 270.0)

@dataclass(frozen=True)
class Camera:
    fov_deg: float = DEFAULT_FOV_DEG
    distance: float = DEFAULT_DISTANCE
    azimuth_deg: float = 0.0
    elevation_deg: float = 0.0
    resolution: Tuple[int, int] = (512, 512)   # (ancho, alto)
    near: float = 0.01
    far: float = 100.0

    def __post_init__(self):
        if not (0.0 < self.fov_deg < 180.0):
            raise GeometryError(f"fov_deg fuera de rango: {self.fov_deg}")
        if not self.distance > 0.0:
            raise GeometryError(f"distance debe ser > 0: {self.distance}")
        if not self.near < self.far:
            raise GeometryError("near debe ser menor que far")
        w, h = self.resolution
        if w < 1 or h < 1:
            raise GeometryError(f"resolución inválida: {self.resolution}")
        object.__setattr__(self, "resolution", (int(w), int(h)))

    @property
    def width(self) -> int:
        return self.resolution[0]

    @property
    def height(self) -> int:
        return self.resolution[1]

    def _angles(self) -> Tuple[float, float]:
        # azimut reducido mod 360: 0 y 360 dan exactamente la misma cámara
        return math.radians(self.azimuth_deg % 360.0), math.radians(self.elevation_deg)

    @cached_property
    def position(self) -> np.ndarray:
        a, e = self._angles()
        return self.distance * np.array([math.cos(e) * math.sin(a), math.sin(e), math.cos(e) * math.cos(a)])

    @cached_property
    def forward(self) -> np.ndarray:
        a, e = self._angles()
        return -np.array([math.cos(e) * math.sin(a), math.sin(e), math.cos(e) * math.cos(a)])

    @cached_property
    def up(self) -> np.ndarray:
        # derivada de la órbita respecto a la elevación: nunca degenera en los polos
        a, e = self._angles()
        return np.array([-math.sin(e) * math.sin(a), math.cos(e), -math.sin(e) * math.cos(a)])

    @cached_property
    def right(self) -> np.ndarray:
        return np.cross(self.forward, self.up)

    @cached_property
    def focal_px(self) -> float:
        return 0.5 * self.height / math.tan(math.radians(self.fov_deg) * 0.5)

    @cached_property
    def view_matrix(self) -> np.ndarray:
        """Matriz 4x4 mundo→cámara con ejes (right, up, forward); z>0 delante de la cámara."""
        r = np.stack([self.right, self.up, self.forward])
        m = np.eye(4)
        m[:3, :3] = r
        m[:3, 3] = -r @ self.position
        return m

    def world_to_camera(self, points: np.ndarray) -> np.ndarray:
        """(N,3) mundo → (N,3) cámara: x derecha, y arriba, z profundidad a lo largo de la vista."""
        d = np.asarray(points, dtype=np.float64).reshape(-1, 3) - self.position
        return np.stack([d @ self.right, d @ self.up, d @ self.forward], axis=1)

    def project(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Proyecta puntos del mundo a coordenadas continuas de píxel.
        Devuelve (xy (N,2), depth (N,)); el centro del píxel (i,j) está en (i+0.5, j+0.5)
        y las filas crecen hacia abajo.
        """
        c = self.world_to_camera(points)
        z = c[:, 2]
        with np.errstate(divide="ignore", invalid="ignore"):
            x = 0.5 * self.width + self.focal_px * c[:, 0] / z
            y = 0.5 * self.height - self.focal_px * c[:, 1] / z
        return np.stack([x, y], axis=1), z

    def pixel_ray(self, col: float, row: float) -> np.ndarray:
        """Dirección unitaria (mundo) del rayo que pasa por la coordenada de píxel (col, row)."""
        x = (col - 0.5 * self.width) / self.focal_px
        y = (0.5 * self.height - row) / self.focal_px
        d = self.forward + x * self.right + y * self.up
        return d / np.linalg.norm(d)

def camera_from_orbit(azimuth_deg: float, elevation_deg: float, distance: float,
                      fov_deg: float, resolution: Tuple[int, int], *,
                      near: float = 0.01, far: float = 100.0) -> Camera:
    return Camera(fov_deg=fov_deg, distance=distance, azimuth_deg=azimuth_deg,
                  elevation_deg=elevation_deg, resolution=tuple(resolution), near=near, far=far)

def orbit_rig(azimuths: Iterable[float] = CANONICAL_AZIMUTHS, elevation_deg: float = 0.0,
              distance: float = DEFAULT_DISTANCE, fov_deg: float = DEFAULT_FOV_DEG,
              resolution: Tuple[int, int] = (512, 512), azimuth_offset: float = 0.0) -> List[Camera]:
    """Cámaras de la vista cuádruple; azimuth_offset rota todo el rig (grupos con azimut inicial aleatorio)."""
    return [camera_from_orbit(a + azimuth_offset, elevation_deg, distance, fov_deg, resolution)
            for a in azimuths]
