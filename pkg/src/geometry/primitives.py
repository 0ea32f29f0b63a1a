# src/geometry/primitives.py
"""Mallas analíticas pequeñas usadas como fixtures (icoesfera, cubo, tetraedro, quad)."""
from __future__ import annotations
import numpy as np

from .mesh import Mesh

def icosphere(subdivisions: int = 2, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> Mesh:
    t = (1.0 + 5 ** 0.5) / 2.0
    verts = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
             (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
             (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
             (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
             (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
             (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    pos = [np.array(v, dtype=np.float64) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def mid(a: int, b: int) -> int:
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = pos[a] + pos[b]
                pos.append(m / np.linalg.norm(m))
                cache[key] = len(pos) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    p = np.array(pos) * radius + np.asarray(center, dtype=np.float64)
    return Mesh(positions=p, triangles=np.array(faces, dtype=np.int64))

def cube(size: float = 1.0, split_corners: bool = True) -> Mesh:
    """Cubo alineado a ejes centrado en el origen, triángulos CCW vistos desde fuera."""
    h = 0.5 * size
    faces = {
        (1, 0, 0): [(h, -h, -h), (h, h, -h), (h, h, h), (h, -h, h)],
        (-1, 0, 0): [(-h, -h, h), (-h, h, h), (-h, h, -h), (-h, -h, -h)],
        (0, 1, 0): [(-h, h, h), (h, h, h), (h, h, -h), (-h, h, -h)],
        (0, -1, 0): [(-h, -h, -h), (h, -h, -h), (h, -h, h), (-h, -h, h)],
        (0, 0, 1): [(-h, -h, h), (h, -h, h), (h, h, h), (-h, h, h)],
        (0, 0, -1): [(h, -h, -h), (-h, -h, -h), (-h, h, -h), (h, h, -h)],
    }
    pos: list = []
    tris: list = []
    index: dict = {}
    for quad in faces.values():
        ids = []
        for v in quad:
            if split_corners:
                pos.append(v)
                ids.append(len(pos) - 1)
            else:
                if v not in index:
                    pos.append(v)
                    index[v] = len(pos) - 1
                ids.append(index[v])
        tris.append((ids[0], ids[1], ids[2]))
        tris.append((ids[0], ids[2], ids[3]))
    return Mesh(positions=np.array(pos, dtype=np.float64), triangles=np.array(tris, dtype=np.int64))

def regular_tetrahedron(scale: float = 1.0) -> Mesh:
    p = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], dtype=np.float64) * scale
    t = np.array([(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)], dtype=np.int64)
    return Mesh(positions=p, triangles=t)

def quad(width: float = 1.0, height: float = 1.0, z: float = 0.0) -> Mesh:
    """Cuadrado en el plano z=const mirando a +Z."""
    w, h = 0.5 * width, 0.5 * height
    p = np.array([(-w, -h, z), (w, -h, z), (w, h, z), (-w, h, z)], dtype=np.float64)
    t = np.array([(0, 1, 2), (0, 2, 3)], dtype=np.int64)
    return Mesh(positions=p, triangles=t)
