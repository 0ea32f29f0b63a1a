# src/raster/uv_raster.py
from __future__ import annotations
import logging
import numpy as np

from core.errors import GeometryError
from geometry.mesh import Mesh
from texproject.texels import TexelMaps
from .coverage import triangle_fragments, resolve_nearest

log = logging.getLogger(__name__)

DEGENERATE_UV_AREA = 1e-14  # en texels²

def rasterize_uv_space(mesh: Mesh, atlas_res: int, *, threads: int = 1) -> TexelMaps:
    """
    Rasteriza cada triángulo en coordenadas UV a resolución de atlas. Cada texel cubierto
    guarda posición de mundo y normal interpoladas (baricéntricas afines), id de carta y valid=1.
    stats: 'degenerate_uv' triángulos omitidos, 'overlap_texels' texels reclamados por >1 triángulo.
    """
    R = int(atlas_res)
    texels = TexelMaps.empty(R)
    if mesh.is_empty():
        texels.stats = {"degenerate_uv": 0, "overlap_texels": 0}
        return texels
    if mesh.uvs is None or mesh.normals is None:
        raise GeometryError("rasterize_uv_space requiere UVs por esquina y normales")

    xy = mesh.uvs * R
    e1 = xy[:, 1] - xy[:, 0]
    e2 = xy[:, 2] - xy[:, 0]
    area2 = np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    active = area2 > 2 * DEGENERATE_UV_AREA
    n_degenerate = int((~active).sum())

    frags = triangle_fragments(xy, R, R, active=active, threads=threads)
    win, counts = resolve_nearest(frags, np.zeros(len(frags)), R)
    n_overlap = int((counts > 1).sum())

    t = frags.tri[win]
    r = frags.row[win]
    c = frags.col[win]
    w = frags.bary[win]
    vids = mesh.triangles[t]
    texels.position[r, c] = np.einsum("ki,kij->kj", w, mesh.positions[vids])
    n = np.einsum("ki,kij->kj", w, mesh.normals[vids])
    ln = np.linalg.norm(n, axis=1)
    bad = ln <= 1e-12
    if np.any(bad):
        fn = mesh.face_normals()[t[bad]]
        n[bad] = fn
        ln[bad] = np.linalg.norm(fn, axis=1)
    texels.normal[r, c] = n / np.where(ln > 0, ln, 1.0)[:, None]
    texels.chart[r, c] = mesh.chart_ids[t] if mesh.chart_ids is not None else 0
    texels.valid[r, c] = True
    texels.stats = {"degenerate_uv": n_degenerate, "overlap_texels": n_overlap}
    if n_degenerate or n_overlap:
        log.info("rasterize_uv_space: %d triángulos UV degenerados, %d texels con solape",
                 n_degenerate, n_overlap)
    return texels
