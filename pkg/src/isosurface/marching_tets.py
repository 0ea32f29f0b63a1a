# src/isosurface/marching_tets.py
"""
Marching tetrahedra sobre un lattice fijo: seis tetraedros por cubo alrededor de la
diagonal c0–c6. La misma partición en todos los cubos hace coincidir las diagonales de
caras vecinas, así que la malla es cerrada cuando la superficie no toca el borde.

Vértices: uno por arista del lattice con cambio de signo, en t = s0/(s0−s1) medido desde
el extremo de menor índice global. Las aristas se deduplican con np.unique (orden estable).
"""
from __future__ import annotations
import logging
import numpy as np

from geometry.mesh import Mesh, empty_mesh
from .grid import SdfGrid

log = logging.getLogger(__name__)

CUBE_CORNERS = np.array([
    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
], dtype=np.int64)

CUBE_TETS = np.array([
    (0, 5, 1, 6), (0, 1, 2, 6), (0, 2, 3, 6),
    (0, 3, 7, 6), (0, 7, 4, 6), (0, 4, 5, 6),
], dtype=np.int64)

def _cube_bases(grid: SdfGrid) -> np.ndarray:
    nx, ny, nz = grid.dims
    i, j, k = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1), np.arange(nz - 1), indexing="ij")
    return (i + nx * (j + ny * k)).ravel(order="F")

def marching_tetrahedra(grid: SdfGrid) -> Mesh:
    nx, ny, nz = grid.dims
    vals = grid.values
    inside_all = vals < 0
    if inside_all.all() or not inside_all.any():
        return empty_mesh()

    offsets = CUBE_CORNERS[:, 0] + nx * (CUBE_CORNERS[:, 1] + ny * CUBE_CORNERS[:, 2])
    cubes = _cube_bases(grid)[:, None] + offsets[None, :]          # (C,8)
    cin = inside_all[cubes]
    mixed = cin.any(axis=1) & ~cin.all(axis=1)
    cubes = cubes[mixed]

    tets = cubes[:, CUBE_TETS].reshape(-1, 4)                       # (C*6,4) índices globales
    tin = inside_all[tets]
    n_in = tin.sum(axis=1)

    # casos 1-3: un vértice solitario, tres aristas
    odd = np.nonzero((n_in == 1) | (n_in == 3))[0]
    t_odd = tets[odd]
    i_odd = tin[odd]
    lone_is_inside = (n_in[odd] == 1)[:, None]
    order = np.argsort(np.where(lone_is_inside, ~i_odd, i_odd), axis=1, kind="stable")
    v = np.take_along_axis(t_odd, order, axis=1)
    odd_edges = np.stack([v[:, [0, 1]], v[:, [0, 2]], v[:, [0, 3]]], axis=1)   # (A,3,2)

    # caso 2-2: cuadrilátero ac→ad→bd→bc partido por la diagonal ac–bd
    even = np.nonzero(n_in == 2)[0]
    order = np.argsort(~tin[even], axis=1, kind="stable")
    v = np.take_along_axis(tets[even], order, axis=1)
    a, b, c, d = v[:, 0], v[:, 1], v[:, 2], v[:, 3]
    ac, ad, bd, bc = (np.stack(e, axis=1) for e in ((a, c), (a, d), (b, d), (b, c)))
    even_edges = np.concatenate([np.stack([ac, ad, bd], axis=1), np.stack([ac, bd, bc], axis=1)])

    src = np.concatenate([odd, even, even])
    edges = np.concatenate([odd_edges, even_edges])                 # (T,3,2)
    # orden de emisión por tetraedro de origen
    perm = np.argsort(src, kind="stable")
    edges = edges[perm]
    src = src[perm]

    lo = edges.min(axis=2)
    hi = edges.max(axis=2)
    N = np.int64(grid.size)
    keys = (lo * N + hi).ravel()
    uniq, inverse = np.unique(keys, return_inverse=True)
    triangles = inverse.reshape(-1, 3)

    e_lo = uniq // N
    e_hi = uniq % N
    s0 = vals[e_lo]
    s1 = vals[e_hi]
    t = s0 / (s0 - s1)
    p_lo = _lattice_point(grid, e_lo)
    p_hi = _lattice_point(grid, e_hi)
    positions = p_lo + t[:, None] * (p_hi - p_lo)

    # orientación: la normal apunta del interior (SDF negativa) hacia el exterior
    tv = tets[src]
    tpos = _lattice_point(grid, tv.ravel()).reshape(-1, 4, 3)
    tmask = inside_all[tv][..., None]
    c_in = (tpos * tmask).sum(axis=1) / tmask.sum(axis=1)
    c_out = (tpos * ~tmask).sum(axis=1) / (~tmask).sum(axis=1)
    p = positions[triangles]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    flip = np.einsum("ij,ij->i", n, c_out - c_in) < 0
    triangles[flip] = triangles[flip][:, [0, 2, 1]]

    log.debug("marching_tetrahedra: %d cubos activos, %d vértices, %d triángulos",
              len(cubes), len(positions), len(triangles))
    return Mesh(positions=positions, triangles=triangles)

def _lattice_point(grid: SdfGrid, idx: np.ndarray) -> np.ndarray:
    nx, ny, _ = grid.dims
    i = idx % nx
    j = (idx // nx) % ny
    k = idx // (nx * ny)
    return grid.origin + grid.spacing * np.stack([i, j, k], axis=1).astype(np.float64)
