# src/texproject/views.py
from __future__ import annotations
from dataclasses import dataclass
from typing import List, Sequence
import numpy as np

from core.errors import InputError, ResolutionMismatchError
from geometry.camera import Camera
from geometry.mesh import Mesh
from raster.gbuffer import GBuffer
from raster.image import Image
from raster.rasterizer import rasterize

ANGLE_TOL = 1e-6

@dataclass(eq=False)
class ViewSet:
    """Cuatro vistas (imagen, cámara, gbuffer de profundidad) separadas 90° en azimut."""
    images: List[Image]
    cameras: List[Camera]
    gbuffers: List[GBuffer]

    def __post_init__(self):
        self.images, self.cameras, self.gbuffers = list(self.images), list(self.cameras), list(self.gbuffers)
        if not (len(self.images) == len(self.cameras) == len(self.gbuffers) == 4):
            raise InputError("un ViewSet necesita exactamente 4 imágenes, cámaras y gbuffers")
        res = self.images[0].resolution
        for i, (img, cam, gb) in enumerate(zip(self.images, self.cameras, self.gbuffers)):
            if img.resolution != res:
                raise ResolutionMismatchError(f"vista {i}: {img.resolution} != {res}")
            if cam.resolution != res or gb.resolution != res:
                raise ResolutionMismatchError(f"vista {i}: cámara/gbuffer no coinciden con la imagen {res}")
        rel = sorted(((c.azimuth_deg - self.cameras[0].azimuth_deg) % 360.0) for c in self.cameras)
        if not np.allclose(rel, [0.0, 90.0, 180.0, 270.0], atol=ANGLE_TOL):
            raise InputError(f"las cámaras deben estar separadas 90° en azimut: {[c.azimuth_deg for c in self.cameras]}")

    def __len__(self) -> int:
        return 4

    @property
    def resolution(self):
        return self.images[0].resolution

    @property
    def azimuths(self) -> np.ndarray:
        return np.array([c.azimuth_deg % 360.0 for c in self.cameras])

    @staticmethod
    def from_mesh(mesh: Mesh, images: Sequence[Image], cameras: Sequence[Camera], *, threads: int = 1) -> "ViewSet":
        """Rasteriza la malla desde cada cámara para obtener los buffers de profundidad."""
        return ViewSet(images=list(images), cameras=list(cameras),
                       gbuffers=[rasterize(mesh, c, threads=threads) for c in cameras])

    def permuted(self, order: Sequence[int]) -> "ViewSet":
        return ViewSet(images=[self.images[i] for i in order], cameras=[self.cameras[i] for i in order],
                       gbuffers=[self.gbuffers[i] for i in order])
