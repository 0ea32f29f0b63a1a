# src/raster/gbuffer.py
from __future__ import annotations
from dataclasses import dataclass
import numpy as np

@dataclass(eq=False)
class GBuffer:
    """
    Buffers por píxel del rasterizador.
    depth es la distancia en espacio de cámara a lo largo de la dirección de vista (+inf si vacío);
    triangle_id = -1 donde no hay cobertura.
    """
    width: int
    height: int
    depth: np.ndarray        # (H,W)
    triangle_id: np.ndarray  # (H,W) int64
    bary: np.ndarray         # (H,W,3) corregidas por perspectiva
    uv: np.ndarray           # (H,W,2)
    normal: np.ndarray       # (H,W,3)
    position: np.ndarray     # (H,W,3) punto de superficie en mundo
    mask: np.ndarray         # (H,W) bool

    @staticmethod
    def empty(width: int, height: int) -> "GBuffer":
        return GBuffer(
            width=width, height=height,
            depth=np.full((height, width), np.inf),
            triangle_id=np.full((height, width), -1, dtype=np.int64),
            bary=np.zeros((height, width, 3)),
            uv=np.zeros((height, width, 2)),
            normal=np.zeros((height, width, 3)),
            position=np.zeros((height, width, 3)),
            mask=np.zeros((height, width), dtype=bool),
        )

    @property
    def resolution(self):
        return (self.width, self.height)

    @property
    def coverage(self) -> int:
        return int(self.mask.sum())

    def consistent(self) -> bool:
        """mask ⇔ triangle_id presente ⇔ depth finita; baricéntricas no negativas que suman 1."""
        m = self.mask
        if not (np.array_equal(m, self.triangle_id >= 0) and np.array_equal(m, np.isfinite(self.depth))):
            return False
        b = self.bary[m]
        return bool(np.all(b >= -1e-12) and np.all(np.abs(b.sum(axis=1) - 1.0) <= 1e-5))
