# src/isosurface/grid.py
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import logging
import numpy as np
from scipy import ndimage

from core.diagnostics import Diagnostics
from core.errors import InputError, ShapeMismatchError

log = logging.getLogger(__name__)

PIPELINE_DOMAIN = 0.6  # la caja del grid debería caer en [-0.6,0.6]³

@dataclass(eq=False)
class SdfGrid:
    """
    Grid regular de distancias con signo (negativo adentro).
    values es plano con x variando más rápido: índice = i + nx*(j + ny*k).
    """
    dims: Tuple[int, int, int]
    origin: np.ndarray
    spacing: float
    values: np.ndarray
    color: Optional[np.ndarray] = None   # (N,3) RGB con el mismo orden

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 3 or min(dims) < 2:
            raise InputError(f"dims debe tener 3 ejes >= 2: {self.dims}")
        self.dims = dims
        self.origin = np.asarray(self.origin, dtype=np.float64).reshape(3)
        self.spacing = float(self.spacing)
        if not (np.isfinite(self.spacing) and self.spacing > 0):
            raise InputError(f"spacing inválido: {self.spacing}")
        self.values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if len(self.values) != self.size:
            raise ShapeMismatchError(f"{len(self.values)} valores para un grid {dims}")
        if not np.all(np.isfinite(self.values)):
            raise InputError("el grid contiene valores SDF no finitos")
        if self.color is not None:
            self.color = np.asarray(self.color, dtype=np.float64).reshape(-1, 3)
            if len(self.color) != self.size:
                raise ShapeMismatchError(f"{len(self.color)} colores para un grid {dims}")

    @property
    def size(self) -> int:
        nx, ny, nz = self.dims
        return nx * ny * nz

    @property
    def has_color(self) -> bool:
        return self.color is not None

    @property
    def upper(self) -> np.ndarray:
        return self.origin + self.spacing * (np.asarray(self.dims) - 1)

    def volume(self) -> np.ndarray:
        """values como arreglo (nx,ny,nz)."""
        nx, ny, nz = self.dims
        return self.values.reshape(nz, ny, nx).transpose(2, 1, 0)

    def lattice_points(self) -> np.ndarray:
        return lattice_points(self.dims, self.origin, self.spacing)

    def index_coords(self, points: np.ndarray) -> np.ndarray:
        """Puntos de mundo → coordenadas continuas de índice (i,j,k)."""
        return (np.asarray(points, dtype=np.float64).reshape(-1, 3) - self.origin) / self.spacing

    def sample_color(self, points: np.ndarray) -> np.ndarray:
        """Interpolación trilineal del volumen de color (bordes extendidos)."""
        if self.color is None:
            raise InputError("el grid no tiene volumen de color")
        pts = self.index_coords(points)
        if len(pts) == 0:
            return np.zeros((0, 3))
        nx, ny, nz = self.dims
        vol = self.color.reshape(nz, ny, nx, 3).transpose(2, 1, 0, 3)
        coords = pts.T
        return np.stack([ndimage.map_coordinates(vol[..., c], coords, order=1, mode="nearest")
                         for c in range(3)], axis=1)

    def in_pipeline_domain(self, limit: float = PIPELINE_DOMAIN) -> bool:
        return bool(np.all(self.origin >= -limit - 1e-12) and np.all(self.upper <= limit + 1e-12))

def lattice_points(dims, origin, spacing) -> np.ndarray:
    nx, ny, nz = (int(d) for d in dims)
    o = np.asarray(origin, dtype=np.float64)
    xs = o[0] + spacing * np.arange(nx)
    ys = o[1] + spacing * np.arange(ny)
    zs = o[2] + spacing * np.arange(nz)
    X, Y, Z = np.meshgrid(xs, ys, zs, indexing="ij")
    return np.stack([X.ravel(order="F"), Y.ravel(order="F"), Z.ravel(order="F")], axis=1)

def box_grid_spec(n: int, lo: float = -0.5, hi: float = 0.5):
    """(dims, origin, spacing) de un lattice n³ que cubre [lo,hi]³ incluyendo ambos extremos."""
    n = int(n)
    if n < 2:
        raise InputError(f"resolución de grid inválida: {n}")
    return (n, n, n), np.full(3, float(lo)), (float(hi) - float(lo)) / (n - 1)

def sample_grid(scene, dims: Sequence[int], origin, spacing: float) -> SdfGrid:
    """Evalúa la escena analítica en cada punto del lattice (y su color si lo tiene)."""
    if len(dims) != 3 or min(int(d) for d in dims) < 2:
        raise InputError(f"dims debe tener 3 ejes >= 2: {dims}")
    pts = lattice_points(dims, origin, spacing)
    values = np.asarray(scene.sdf(pts), dtype=np.float64)
    color = None
    if getattr(scene, "color", None) is not None:
        color = np.clip(np.asarray(scene.color(pts), dtype=np.float64), 0.0, 1.0)
    return SdfGrid(dims=tuple(dims), origin=origin, spacing=spacing, values=values, color=color)

def check_domain(grid: SdfGrid, diagnostics: Optional[Diagnostics] = None) -> bool:
    ok = grid.in_pipeline_domain()
    if not ok and diagnostics is not None:
        diagnostics.warn("isosurface", "W201",
                         f"dominio del grid [{grid.origin.min():.3f},{grid.upper.max():.3f}] "
                         f"excede [-{PIPELINE_DOMAIN},{PIPELINE_DOMAIN}]³")
    elif not ok:
        log.warning("dominio del grid fuera de [-%.1f,%.1f]³", PIPELINE_DOMAIN, PIPELINE_DOMAIN)
    return ok
