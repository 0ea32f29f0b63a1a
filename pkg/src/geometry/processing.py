# src/geometry/processing.py
from __future__ import annotations
from typing import Tuple
import logging
import numpy as np
from scipy import sparse

from core.errors import GeometryError
from .mesh import Mesh

log = logging.getLogger(__name__)

DEFAULT_SMOOTH_LAMBDA = 0.5
DEFAULT_SMOOTH_ITERATIONS = 5
FALLBACK_NORMAL = np.array([0.0, 0.0, 1.0])

def normalize_to_unit_box(mesh: Mesh) -> Tuple[Mesh, float, np.ndarray]:
    """
    Centra la caja envolvente en el origen y escala uniformemente para que la mayor
    extensión sea 1 (caja canónica [-0.5, 0.5]^3).
    Devuelve (malla, scale, offset) con p' = scale·p + offset.
    """
    if mesh.num_vertices == 0:
        raise GeometryError("empty geometry")
    lo = mesh.positions.min(axis=0)
    hi = mesh.positions.max(axis=0)
    extent = float((hi - lo).max())
    if not extent > 0.0:
        raise GeometryError("degenerate extent")
    scale = 1.0 / extent
    center = 0.5 * (lo + hi)
    offset = -center * scale
    pos = (mesh.positions - center) * scale
    return mesh.with_(positions=pos), scale, offset

def compute_vertex_normals(mesh: Mesh) -> Tuple[Mesh, int]:
    """
    Normales por vértice = suma normalizada de las normales de cara ponderadas por área.
    Devuelve (malla, n_fallback): vértices sin triángulo no degenerado reciben (0,0,1).
    """
    acc = np.zeros((mesh.num_vertices, 3))
    if mesh.num_triangles:
        fn = mesh.face_normals(normalize=False)   # |n| = 2·área
        for k in range(3):
            np.add.at(acc, mesh.triangles[:, k], fn)
    ln = np.linalg.norm(acc, axis=1)
    ok = ln > 0.0
    normals = np.empty_like(acc)
    normals[ok] = acc[ok] / ln[ok, None]
    normals[~ok] = FALLBACK_NORMAL
    n_fallback = int((~ok).sum())
    if n_fallback:
        log.debug("compute_vertex_normals: %d vértices sin triángulos válidos", n_fallback)
    return mesh.with_(normals=normals), n_fallback

def vertex_adjacency(mesh: Mesh) -> sparse.csr_matrix:
    """Matriz de adyacencia uniforme (0/1) a partir de las aristas de los triángulos."""
    n = mesh.num_vertices
    t = mesh.triangles
    if len(t) == 0:
        return sparse.csr_matrix((n, n))
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    e = np.concatenate([e, e[:, ::-1]])
    e = e[e[:, 0] != e[:, 1]]
    e = np.unique(e, axis=0)
    data = np.ones(len(e))
    return sparse.csr_matrix((data, (e[:, 0], e[:, 1])), shape=(n, n))

def laplacian_smooth(mesh: Mesh, iterations: int = DEFAULT_SMOOTH_ITERATIONS,
                     lam: float = DEFAULT_SMOOTH_LAMBDA) -> Mesh:
    """
    Suavizado laplaciano con pesos uniformes (umbrella):
        p <- p + lam·(centroide_vecinos(p) - p)
    Conectividad, UVs y cartas no cambian. iterations=0 o lam=0 es la identidad.
    """
    if not 0.0 <= lam <= 1.0:
        raise GeometryError(f"lambda fuera de [0,1]: {lam}")
    if iterations <= 0 or lam == 0.0 or mesh.num_vertices == 0:
        return mesh
    adj = vertex_adjacency(mesh)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    has_nbr = deg > 0
    pos = mesh.positions.copy()
    for _ in range(iterations):
        centroid = pos.copy()
        centroid[has_nbr] = (adj @ pos)[has_nbr] / deg[has_nbr, None]
        pos = pos + lam * (centroid - pos)
    return mesh.with_(positions=pos)
