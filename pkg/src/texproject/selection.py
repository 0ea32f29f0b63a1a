# src/texproject/selection.py
from __future__ import annotations
from typing import Tuple
import numpy as np

from raster.image import Image
from .projection import CandidateSet
from .texels import TexelMaps

def view_priority(azimuths: np.ndarray) -> np.ndarray:
    """Rango de desempate por azimut: 0° primero, luego menor desvío angular, 90 antes que 270."""
    a = np.asarray(azimuths, dtype=np.float64) % 360.0
    off = np.minimum(a, 360.0 - a)
    order = np.lexsort((a, off))
    rank = np.empty(len(a), dtype=np.int64)
    rank[order] = np.arange(len(a))
    return rank

def select_texels(candidates: CandidateSet, texels: TexelMaps) -> Tuple[Image, np.ndarray]:
    """
    Por texel elige el candidato más cercano (RGB euclídeo) al color grueso.
    Sin candidatos: color grueso y máscara 0. Devuelve (textura proyectada, máscara (R,R)).
    """
    R = texels.atlas_res
    idx = candidates.texel_index
    coarse = texels.coarse.reshape(-1, 3)
    present = candidates.present
    dist = np.linalg.norm(candidates.rgb - coarse[idx][:, None, :], axis=2)
    dist = np.where(present, dist, np.inf)

    # argmin devuelve el primero: ordenar columnas por prioridad resuelve los empates
    perm = np.argsort(view_priority(candidates.azimuths), kind="stable")
    best = perm[np.argmin(dist[:, perm], axis=1)] if len(idx) else np.zeros(0, dtype=np.int64)
    has = present.any(axis=1)

    rgb = coarse.copy()
    sel = idx[has]
    rgb[sel] = candidates.rgb[np.flatnonzero(has), best[has]]
    mask = np.zeros(R * R, dtype=bool)
    mask[sel] = True
    mask = mask.reshape(R, R)
    return Image(rgb=rgb.reshape(R, R, 3), alpha=mask.astype(np.float64)), mask
