# src/raster/rasterizer.py
"""
Rasterizador por software determinista.

Proyección perspectiva con el FoV de la cámara, muestreo en centros de píxel, regla top-left,
prueba de profundidad (gana el más cercano; empate → menor id de triángulo) e interpolación
corregida por perspectiva. Sin back-face culling: los personajes tienen láminas de una sola cara.
"""
from __future__ import annotations
from typing import Callable, Sequence
import logging
import numpy as np

from core.errors import FormatError
from geometry.camera import Camera
from geometry.mesh import Mesh
from .coverage import Fragments, triangle_fragments, resolve_nearest
from .gbuffer import GBuffer
from .image import Image, sample_uv

log = logging.getLogger(__name__)

DEFAULT_BACKGROUND = (1.0, 1.0, 1.0)

def rasterize(mesh: Mesh, camera: Camera, *, threads: int = 1) -> GBuffer:
    W, H = camera.resolution
    gb = GBuffer.empty(W, H)
    if mesh.is_empty():
        return gb

    xy, z = camera.project(mesh.positions)
    tri = mesh.triangles
    zt = z[tri]
    # triángulos que cruzan el plano cercano se descartan completos
    active = np.all(zt >= camera.near, axis=1)
    frags = triangle_fragments(xy[tri], W, H, active=active, threads=threads)
    if len(frags) == 0:
        return gb

    inv = frags.bary / zt[frags.tri]
    s = inv.sum(axis=1)
    depth = 1.0 / s
    keep = depth <= camera.far
    ids = np.nonzero(keep)[0]
    win, _ = resolve_nearest(_subset(frags, ids), depth[ids], W)
    win = ids[win]

    t = frags.tri[win]
    r = frags.row[win]
    c = frags.col[win]
    pb = inv[win] / s[win, None]

    gb.depth[r, c] = depth[win]
    gb.triangle_id[r, c] = t
    gb.bary[r, c] = pb
    gb.mask[r, c] = True
    corners = mesh.positions[tri[t]]                       # (K,3,3)
    gb.position[r, c] = np.einsum("ki,kij->kj", pb, corners)
    if mesh.uvs is not None:
        gb.uv[r, c] = np.einsum("ki,kij->kj", pb, mesh.uvs[t])
    gb.normal[r, c] = _interp_normals(mesh, t, pb)
    log.debug("rasterize: %d píxeles cubiertos de %d fragmentos", len(win), len(frags))
    return gb

def _subset(frags: Fragments, ids: np.ndarray) -> Fragments:
    return Fragments(tri=frags.tri[ids], row=frags.row[ids], col=frags.col[ids], bary=frags.bary[ids])

def _interp_normals(mesh: Mesh, t: np.ndarray, w: np.ndarray) -> np.ndarray:
    if mesh.normals is not None:
        n = np.einsum("ki,kij->kj", w, mesh.normals[mesh.triangles[t]])
    else:
        n = np.zeros((len(t), 3))
    ln = np.linalg.norm(n, axis=1)
    bad = ln <= 1e-12
    if np.any(bad):
        fn = mesh.face_normals()[t[bad]]
        n[bad] = fn
        ln[bad] = np.linalg.norm(fn, axis=1)
    return np.divide(n, ln[:, None], out=np.zeros_like(n), where=ln[:, None] > 0)

def render_textured(gbuffer: GBuffer, texture: Image, *, background: Sequence[float] = DEFAULT_BACKGROUND) -> Image:
    """Píxeles cubiertos: muestreo bilineal de la textura en la UV interpolada; resto = fondo."""
    if texture.width < 2 or texture.height < 2:
        raise FormatError("la textura debe ser al menos de 2x2")
    rgb = np.empty((gbuffer.height, gbuffer.width, 3))
    rgb[:] = np.asarray(background, dtype=np.float64)
    m = gbuffer.mask
    rgb[m] = sample_uv(texture.rgb, gbuffer.uv[m])
    return Image(rgb=rgb, alpha=m.astype(np.float64))

def render_shaded(gbuffer: GBuffer, shade: Callable[[np.ndarray], np.ndarray], *,
                  background: Sequence[float] = DEFAULT_BACKGROUND) -> Image:
    """Color evaluado directamente en los puntos de superficie (sin iluminación)."""
    rgb = np.empty((gbuffer.height, gbuffer.width, 3))
    rgb[:] = np.asarray(background, dtype=np.float64)
    m = gbuffer.mask
    if np.any(m):
        rgb[m] = shade(gbuffer.position[m])
    return Image(rgb=rgb, alpha=m.astype(np.float64))
