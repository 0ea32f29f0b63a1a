# src/blend/problem.py
"""
Problema de Poisson sobre el atlas.

Interior: texels con máscara cuyos 4 vecinos también tienen máscara y son de la misma carta
(la máscara erosionada 1 texel dentro de cada carta). Todo texel fuera del interior toma el
color grueso como valor de Dirichlet. La guía son diferencias hacia adelante del proyectado
entre pares con máscara de la misma carta.

Con boundary="composite" el interior no se erosiona contra la máscara y el borde es la
composición de selección (proyectado donde hay máscara, grueso donde no).
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Tuple, Union
import numpy as np
from scipy import sparse

from core.errors import InputError, ResolutionMismatchError
from raster.image import Image
from texproject.texels import TexelMaps

DEFAULT_TOLERANCE = 1e-6
BOUNDARY_MODES = ("coarse", "composite")

ImageLike = Union[Image, np.ndarray]

@dataclass(eq=False)
class BlendProblem:
    interior: np.ndarray      # (R,R) bool
    boundary: np.ndarray      # (R,R,3) valores fuera del interior y punto de partida dentro
    gx: np.ndarray            # (R,R,3) f[r,c+1] - f[r,c]; 0 donde el par no cuenta
    gy: np.ndarray            # (R,R,3) f[r+1,c] - f[r,c]
    valid: Optional[np.ndarray] = None
    chart: Optional[np.ndarray] = None
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: Optional[int] = None

    def __post_init__(self):
        self.interior = np.asarray(self.interior, dtype=bool)
        R = self.interior.shape[0]
        if self.interior.shape != (R, R):
            raise ResolutionMismatchError(f"interior debe ser cuadrado, llegó {self.interior.shape}")
        for name in ("boundary", "gx", "gy"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (R, R, 3):
                raise ResolutionMismatchError(f"{name} debe ser {(R, R, 3)}, llegó {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise InputError(f"{name} contiene valores no finitos")
            setattr(self, name, arr)
        if self.valid is None:
            self.valid = np.ones((R, R), dtype=bool)
        # ningún texel del borde de la imagen puede ser interior (el estencil saldría del atlas)
        edge = np.zeros((R, R), dtype=bool)
        edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
        if np.any(self.interior & edge):
            raise InputError("el interior toca el borde del atlas")
        if self.chart is not None and np.any(self.interior):
            r, c = np.nonzero(self.interior)
            ch = self.chart[r, c]
            for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
                if np.any(self.chart[r + dr, c + dc] != ch):
                    raise InputError("un texel interior tiene vecinos de otra carta")
        if not (self.tolerance > 0):
            raise InputError(f"tolerancia inválida: {self.tolerance}")

    @property
    def atlas_res(self) -> int:
        return self.interior.shape[0]

    @property
    def interior_count(self) -> int:
        return int(self.interior.sum())

    @property
    def trivial(self) -> bool:
        return self.interior_count == 0

    def iteration_limit(self) -> int:
        if self.max_iterations:
            return int(self.max_iterations)
        return int(10 * np.sqrt(self.interior_count)) + 1000

    def index_map(self) -> np.ndarray:
        """(R,R) índice en el sistema de cada texel interior (-1 fuera), en orden de barrido."""
        idx = np.full(self.interior.shape, -1, dtype=np.int64)
        idx[self.interior] = np.arange(self.interior_count)
        return idx

    def stencil(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        (vecinos (n,4), rhs (n,3)). Vecinos en orden derecha, izquierda, abajo, arriba;
        -1 si el vecino no es interior (su valor ya está en el rhs).
        """
        idx = self.index_map()
        r, c = np.nonzero(self.interior)
        nbr = np.stack([idx[r, c + 1], idx[r, c - 1], idx[r + 1, c], idx[r - 1, c]], axis=1)
        gx, gy, f = self.gx, self.gy, self.boundary
        rhs = gx[r, c - 1] - gx[r, c] + gy[r - 1, c] - gy[r, c]
        for k, (rr, cc) in enumerate(((r, c + 1), (r, c - 1), (r + 1, c), (r - 1, c))):
            outside = nbr[:, k] < 0
            rhs[outside] += f[rr[outside], cc[outside]]
        return nbr, rhs

def assemble_matrix(problem: BlendProblem) -> Tuple[sparse.csr_matrix, np.ndarray]:
    """Sistema explícito A x = b (Laplaciano de 5 puntos restringido al interior)."""
    nbr, rhs = problem.stencil()
    n = len(nbr)
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.full(n, 4.0)]
    for k in range(4):
        ok = nbr[:, k] >= 0
        rows.append(np.flatnonzero(ok))
        cols.append(nbr[ok, k])
        vals.append(np.full(int(ok.sum()), -1.0))
    A = sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    return A, rhs

def _rgb(x: ImageLike) -> np.ndarray:
    return np.asarray(x.rgb if isinstance(x, Image) else x, dtype=np.float64)

def build_problem(projected: ImageLike, mask: np.ndarray, coarse: ImageLike, texels: TexelMaps, *,
                  tolerance: float = DEFAULT_TOLERANCE, max_iterations: Optional[int] = None,
                  boundary: str = "coarse") -> BlendProblem:
    if boundary not in BOUNDARY_MODES:
        raise InputError(f"modo de borde desconocido '{boundary}' (opciones: {', '.join(BOUNDARY_MODES)})")
    R = texels.atlas_res
    P = _rgb(projected)
    C = _rgb(coarse)
    m = np.asarray(mask, dtype=bool)
    for name, shape in (("projected", P.shape), ("coarse", C.shape), ("mask", m.shape + (3,))):
        if shape != (R, R, 3):
            raise ResolutionMismatchError(f"{name} {shape[:2]} no coincide con el atlas {R}x{R}")

    valid = texels.valid & (texels.chart >= 0)
    chart = np.where(valid, texels.chart, -1)
    m = m & valid

    pair_x = m[:, :-1] & m[:, 1:] & (chart[:, :-1] == chart[:, 1:])
    pair_y = m[:-1, :] & m[1:, :] & (chart[:-1, :] == chart[1:, :])
    gx = np.zeros((R, R, 3))
    gy = np.zeros((R, R, 3))
    gx[:, :-1] = np.where(pair_x[..., None], P[:, 1:] - P[:, :-1], 0.0)
    gy[:-1, :] = np.where(pair_y[..., None], P[1:, :] - P[:-1, :], 0.0)

    # erosión de 1 texel respecto de la carta
    same = np.zeros((R, R), dtype=bool)
    same[1:-1, 1:-1] = True
    core = chart[1:-1, 1:-1]
    for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        nb = chart[1 + dr:R - 1 + dr, 1 + dc:R - 1 + dc]
        same[1:-1, 1:-1] &= nb == core
    interior = m & same
    if boundary == "coarse":
        inner = np.zeros((R, R), dtype=bool)
        inner[1:-1, 1:-1] = True
        for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
            inner[1:-1, 1:-1] &= m[1 + dr:R - 1 + dr, 1 + dc:R - 1 + dc]
        interior &= inner
        dirichlet = C.copy()
    else:
        dirichlet = np.where(m[..., None], P, C)

    return BlendProblem(interior=interior, boundary=dirichlet, gx=gx, gy=gy, valid=valid, chart=chart,
                        tolerance=tolerance, max_iterations=max_iterations)
