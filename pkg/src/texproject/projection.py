# src/texproject/projection.py
"""
Retroproyección de las cuatro vistas al espacio de texels.

Un candidato (texel, vista) existe si la posición del texel proyecta dentro de la imagen,
su profundidad coincide con el gbuffer de la vista (±depth_eps) y la superficie mira a la
cámara lo suficiente: dot(normal, dirección cámara→texel) ≤ umbral.
"""
from __future__ import annotations
from dataclasses import dataclass, replace
from typing import Dict
import logging
import numpy as np

from raster.image import sample_bilinear
from .texels import TexelMaps
from .views import ViewSet

log = logging.getLogger(__name__)

DEFAULT_DEPTH_EPS = 2e-3
DEFAULT_SILHOUETTE_THRESHOLD = -0.2

@dataclass(eq=False)
class CandidateSet:
    texel_index: np.ndarray   # (M,) índice plano fila*R+col de cada texel válido
    rgb: np.ndarray           # (M,V,3) muestra bilineal de cada vista
    in_bounds: np.ndarray     # (M,V)
    depth_ok: np.ndarray      # (M,V)
    facing_ok: np.ndarray     # (M,V) True hasta aplicar cull_silhouette
    dots: np.ndarray          # (M,V) dot(normal, vista); NaN si no se calculó
    azimuths: np.ndarray      # (V,)

    @property
    def present(self) -> np.ndarray:
        return self.in_bounds & self.depth_ok & self.facing_ok

    @property
    def counts(self) -> np.ndarray:
        return self.present.sum(axis=1)

    def stats(self) -> Dict[str, object]:
        return {
            "texels": int(len(self.texel_index)),
            "in_bounds": self.in_bounds.sum(axis=0).tolist(),
            "depth_passed": (self.in_bounds & self.depth_ok).sum(axis=0).tolist(),
            "kept": self.present.sum(axis=0).tolist(),
            "texels_with_candidates": int((self.counts > 0).sum()),
        }

def depth_lookup(depth: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Profundidad del gbuffer en (x, y): bilineal entre los 4 centros vecinos si los cuatro
    tienen cobertura; si no, la del píxel que contiene el punto.
    """
    h, w = depth.shape
    cols = np.clip(np.floor(x).astype(np.int64), 0, w - 1)
    rows = np.clip(np.floor(y).astype(np.int64), 0, h - 1)
    out = depth[rows, cols]
    fx, fy = x - 0.5, y - 0.5
    x0 = np.clip(np.floor(fx).astype(np.int64), 0, w - 1)
    y0 = np.clip(np.floor(fy).astype(np.int64), 0, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    d00, d01, d10, d11 = depth[y0, x0], depth[y0, x1], depth[y1, x0], depth[y1, x1]
    full = np.isfinite(d00) & np.isfinite(d01) & np.isfinite(d10) & np.isfinite(d11)
    if full.any():
        tx = np.clip(fx - x0, 0.0, 1.0)[full]
        ty = np.clip(fy - y0, 0.0, 1.0)[full]
        top = d00[full] + (d01[full] - d00[full]) * tx
        bot = d10[full] + (d11[full] - d10[full]) * tx
        out = out.copy()
        out[full] = top + (bot - top) * ty
    return out

def project_views(texels: TexelMaps, views: ViewSet, depth_eps: float = DEFAULT_DEPTH_EPS) -> CandidateSet:
    idx = texels.valid_flat()
    pos = texels.position.reshape(-1, 3)[idx]
    M, V = len(idx), len(views)
    rgb = np.zeros((M, V, 3))
    in_bounds = np.zeros((M, V), dtype=bool)
    depth_ok = np.zeros((M, V), dtype=bool)
    for v, (img, cam, gb) in enumerate(zip(views.images, views.cameras, views.gbuffers)):
        xy, z = cam.project(pos)
        x, y = xy[:, 0], xy[:, 1]
        with np.errstate(invalid="ignore"):
            inb = np.isfinite(x) & np.isfinite(y) & (z > cam.near) & (x >= 0) & (x < gb.width) & (y >= 0) & (y < gb.height)
        dz = np.full(M, np.inf)
        dz[inb] = np.abs(z[inb] - depth_lookup(gb.depth, x[inb], y[inb]))
        in_bounds[:, v] = inb
        depth_ok[:, v] = inb & (dz <= depth_eps)
        rgb[inb, v] = sample_bilinear(img.rgb, x[inb], y[inb])
    log.debug("project_views: %d texels, candidatos por vista %s", M, depth_ok.sum(axis=0).tolist())
    return CandidateSet(texel_index=idx, rgb=rgb, in_bounds=in_bounds, depth_ok=depth_ok,
                        facing_ok=np.ones((M, V), dtype=bool), dots=np.full((M, V), np.nan),
                        azimuths=views.azimuths)

def silhouette_keep(dots: np.ndarray, threshold: float = DEFAULT_SILHOUETTE_THRESHOLD) -> np.ndarray:
    """Se conserva si dot ≤ umbral; estrictamente mayor se descarta."""
    return np.asarray(dots) <= threshold

def view_dots(texels: TexelMaps, idx: np.ndarray, views: ViewSet) -> np.ndarray:
    pos = texels.position.reshape(-1, 3)[idx]
    nrm = texels.normal.reshape(-1, 3)[idx]
    out = np.empty((len(idx), len(views)))
    for v, cam in enumerate(views.cameras):
        d = pos - cam.position
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        out[:, v] = np.einsum("ij,ij->i", nrm, d)
    return out

def cull_silhouette(candidates: CandidateSet, texels: TexelMaps, views: ViewSet,
                    threshold: float = DEFAULT_SILHOUETTE_THRESHOLD) -> CandidateSet:
    dots = view_dots(texels, candidates.texel_index, views)
    return replace(candidates, facing_ok=silhouette_keep(dots, threshold), dots=dots)
