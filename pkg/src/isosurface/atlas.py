# src/isosurface/atlas.py
"""
Atlas UV por cartas: agrupación de caras por similitud de normal (crecimiento de regiones),
proyección ortográfica de cada carta sobre el plano de su normal semilla y empaquetado
en estantes con canaletas de `gutter` texels.

Cada carta debe ser inyectiva a la resolución del atlas: tras empaquetar se rasteriza el
atlas completo y los triángulos que pisan texels ya reclamados pasan a cartas nuevas.
"""
from __future__ import annotations
from collections import deque
from dataclasses import dataclass
from typing import List, Optional
import logging
import math
import numpy as np
from scipy import sparse

from core.diagnostics import Diagnostics
from core.errors import AtlasOverflowError, GeometryError
from geometry.mesh import Mesh
from raster.coverage import triangle_fragments

log = logging.getLogger(__name__)

DEFAULT_GUTTER = 2
CHART_DOT = 0.5
FILL_TARGET = 0.7
SHRINK = 0.85
MAX_ATTEMPTS = 60

@dataclass
class Chart:
    faces: np.ndarray      # índices de caras, en orden de crecimiento
    normal: np.ndarray     # normal semilla (eje de proyección)

def face_adjacency(mesh: Mesh) -> sparse.csr_matrix:
    """Caras vecinas por arista compartida (índices de vértice)."""
    F = mesh.num_triangles
    tri = mesh.triangles
    e = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    e.sort(axis=1)
    _, eid = np.unique(e, axis=0, return_inverse=True)
    eid = eid.reshape(-1)
    faces = np.tile(np.arange(F), 3)
    inc = sparse.csr_matrix((np.ones(len(eid)), (faces, eid)), shape=(F, int(eid.max()) + 1))
    adj = (inc @ inc.T).tocsr()
    adj.setdiag(0)
    adj.eliminate_zeros()
    adj.sort_indices()
    return adj

def _face_directions(mesh: Mesh) -> np.ndarray:
    fn = mesh.face_normals()
    bad = np.linalg.norm(fn, axis=1) < 0.5
    if np.any(bad) and mesh.normals is not None:
        vn = mesh.normals[mesh.triangles[bad]].sum(axis=1)
        ln = np.linalg.norm(vn, axis=1, keepdims=True)
        fn[bad] = np.divide(vn, ln, out=np.zeros_like(vn), where=ln > 1e-12)
    still = np.linalg.norm(fn, axis=1) < 0.5
    fn[still] = (0.0, 0.0, 1.0)
    return fn

def grow_charts(adj: sparse.csr_matrix, fn: np.ndarray, subset: Optional[np.ndarray] = None) -> List[Chart]:
    """Crecimiento greedy desde la primera cara libre; acepta vecinas con dot(n, n_semilla) ≥ 0.5."""
    F = len(fn)
    allowed = np.zeros(F, dtype=bool)
    allowed[np.arange(F) if subset is None else subset] = True
    assigned = ~allowed
    charts: List[Chart] = []
    indptr, indices = adj.indptr, adj.indices
    for seed in np.flatnonzero(allowed):
        if assigned[seed]:
            continue
        n0 = fn[seed]
        assigned[seed] = True
        members = [seed]
        queue = deque([seed])
        while queue:
            f = queue.popleft()
            for nb in indices[indptr[f]:indptr[f + 1]]:
                if not assigned[nb] and fn[nb] @ n0 >= CHART_DOT:
                    assigned[nb] = True
                    members.append(nb)
                    queue.append(nb)
        charts.append(Chart(faces=np.asarray(members, dtype=np.int64), normal=n0.copy()))
    return charts

def projection_basis(n: np.ndarray):
    """(t, b) ortonormales con t × b = n."""
    axis = np.eye(3)[int(np.argmin(np.abs(n)))]
    t = np.cross(axis, n)
    t /= np.linalg.norm(t)
    b = np.cross(n, t)
    return t, b

def _project(mesh: Mesh, chart: Chart) -> np.ndarray:
    t, b = projection_basis(chart.normal)
    p = mesh.positions[mesh.triangles[chart.faces]]        # (k,3,3)
    local = np.stack([p @ t, p @ b], axis=-1)              # (k,3,2)
    return local - local.reshape(-1, 2).min(axis=0)

def _shelf_pack(sizes: np.ndarray, res: int, gutter: int) -> Optional[np.ndarray]:
    """Offsets enteros (x,y) por carta o None si no caben. Orden: alto descendente, estable."""
    order = np.argsort(-sizes[:, 1], kind="stable")
    offsets = np.zeros((len(sizes), 2), dtype=np.int64)
    limit = res - gutter
    x = y = gutter
    shelf = 0
    for c in order:
        w, h = int(sizes[c, 0]), int(sizes[c, 1])
        if x + w > limit:
            x = gutter
            y += shelf + gutter
            shelf = 0
        if x + w > limit or y + h > limit:
            return None
        offsets[c] = (x, y)
        x += w + gutter
        shelf = max(shelf, h)
    return offsets

def _conflicts(uvs: np.ndarray, res: int) -> np.ndarray:
    """Caras que pierden algún texel frente a una cara de menor índice."""
    frags = triangle_fragments(uvs * res, res, res)
    if len(frags) == 0:
        return np.zeros(0, dtype=np.int64)
    pix = frags.row * res + frags.col
    order = np.lexsort((frags.tri, pix))
    p = pix[order]
    later = np.ones(len(p), dtype=bool)
    later[0] = False
    later[1:] = p[1:] == p[:-1]
    return np.unique(frags.tri[order][later])

def generate_uv_atlas(mesh: Mesh, atlas_res: int, *, gutter: int = DEFAULT_GUTTER,
                      diagnostics: Optional[Diagnostics] = None) -> Mesh:
    if mesh.normals is None:
        raise GeometryError("generate_uv_atlas requiere normales de vértice")
    res = int(atlas_res)
    F = mesh.num_triangles
    if F == 0:
        return mesh.with_(uvs=np.zeros((0, 3, 2)), chart_ids=np.zeros(0, dtype=np.int64))
    usable = res - 2 * gutter
    if usable < 1:
        raise AtlasOverflowError()

    fn = _face_directions(mesh)
    adj = face_adjacency(mesh)
    charts = grow_charts(adj, fn)

    locals_ = [_project(mesh, c) for c in charts]
    ext = np.array([l.reshape(-1, 2).max(axis=0) for l in locals_])
    bbox_area = float(np.sum(ext[:, 0] * ext[:, 1]))
    s = math.sqrt(FILL_TARGET * usable * usable / max(bbox_area, 1e-30))
    s = min(s, (usable - 1) / max(float(ext.max()), 1e-12))

    for attempt in range(MAX_ATTEMPTS):
        if len(charts) * (1 + gutter) ** 2 > usable * usable:
            raise AtlasOverflowError()
        sizes = np.array([np.floor(l.reshape(-1, 2).max(axis=0) * s).astype(np.int64) + 2 for l in locals_])
        offsets = _shelf_pack(sizes, res, gutter)
        if offsets is None:
            s *= SHRINK
            continue

        uvs = np.zeros((F, 3, 2))
        chart_ids = np.zeros(F, dtype=np.int64)
        for cid, (c, l) in enumerate(zip(charts, locals_)):
            uvs[c.faces] = (l * s + offsets[cid] + 0.5) / res
            chart_ids[c.faces] = cid

        bad = _conflicts(uvs, res)
        if len(bad) == 0:
            log.debug("atlas: %d cartas, densidad %.3f texels/unidad, intento %d", len(charts), s, attempt + 1)
            if diagnostics is not None and attempt > 0:
                diagnostics.add(phase="isosurface", code="I201", severity="info",
                                message=f"atlas empaquetado en {attempt + 1} intentos", charts=len(charts))
            return mesh.with_(uvs=uvs, chart_ids=chart_ids)

        # los perdedores salen de su carta y crecen en cartas nuevas entre ellos
        moved = np.zeros(F, dtype=bool)
        moved[bad] = True
        kept = []
        for c in charts:
            rest = c.faces[~moved[c.faces]]
            if len(rest):
                kept.append(Chart(faces=rest, normal=c.normal))
        charts = kept + grow_charts(adj, fn, subset=bad)
        locals_ = [_project(mesh, c) for c in charts]

    raise AtlasOverflowError()
