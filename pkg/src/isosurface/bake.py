# src/isosurface/bake.py
from __future__ import annotations
from typing import Optional
import numpy as np

from core.errors import GeometryError, MissingColorError
from geometry.mesh import Mesh
from raster.image import Image
from raster.uv_raster import rasterize_uv_space
from texproject.texels import TexelMaps
from .grid import SdfGrid

def bake_coarse_texture(mesh: Mesh, grid: SdfGrid, atlas_res: int, *,
                        texels: Optional[TexelMaps] = None, threads: int = 1) -> Image:
    """
    Textura gruesa: cada texel válido toma el color trilineal del volumen en su posición de mundo.
    Texels inválidos → (0,0,0) con alpha 0. `texels` permite reutilizar mapas ya rasterizados.
    """
    if grid.color is None:
        raise MissingColorError("el grid no trae volumen de color: no se puede hornear la textura gruesa")
    if texels is None:
        texels = rasterize_uv_space(mesh, atlas_res, threads=threads)
    elif texels.atlas_res != int(atlas_res):
        raise GeometryError(f"texels a {texels.atlas_res} no coinciden con atlas_res={atlas_res}")
    rgb = np.zeros((texels.atlas_res, texels.atlas_res, 3))
    v = texels.valid
    if np.any(v):
        rgb[v] = np.clip(grid.sample_color(texels.position[v]), 0.0, 1.0)
    return Image(rgb=rgb, alpha=v.astype(np.float64))
