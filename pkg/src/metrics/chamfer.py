# src/metrics/chamfer.py
from __future__ import annotations
from typing import Optional
import numpy as np
from scipy.spatial import cKDTree

from geometry.mesh import Mesh
from geometry.processing import normalize_to_unit_box
from .sampling import sample_surface

DEFAULT_SAMPLES = 50000

def nearest_sq_distances(src: np.ndarray, dst: np.ndarray, *, workers: int = 1) -> np.ndarray:
    """Distancia euclídea al cuadrado de cada punto de src a su vecino exacto más cercano en dst."""
    d, _ = cKDTree(dst).query(src, k=1, workers=workers)
    return d * d

def chamfer_from_points(a: np.ndarray, b: np.ndarray, *, workers: int = 1) -> float:
    """0.5·(media d²(A→B) + media d²(B→A))."""
    ab = nearest_sq_distances(a, b, workers=workers)
    ba = nearest_sq_distances(b, a, workers=workers)
    return 0.5 * (float(np.mean(ab)) + float(np.mean(ba)))

def chamfer_distance(mesh_a: Mesh, mesh_b: Mesh, n: int = DEFAULT_SAMPLES, seed: int = 0, *,
                     seed_b: Optional[int] = None, workers: int = 1) -> float:
    """
    Ambas mallas se normalizan a [-0.5,0.5]³ antes de muestrear n puntos en cada una.
    seed_b (por defecto = seed) permite muestrear B con otra semilla.
    """
    a, _, _ = normalize_to_unit_box(mesh_a)
    b, _, _ = normalize_to_unit_box(mesh_b)
    pa = sample_surface(a, n, seed).points
    pb = sample_surface(b, n, seed if seed_b is None else seed_b).points
    return chamfer_from_points(pa, pb, workers=workers)
