# src/blend/solver.py
"""
Gradiente conjugado precondicionado (Jacobi) sin matriz explícita.

Los tres canales avanzan juntos con pasos propios; un canal convergido se congela.
Los productos internos usan np.sum (suma por pares), así que el número de iteraciones
no depende del hardware ni de hilos.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from typing import List, Optional
import logging
import numpy as np

from core.errors import SolverDivergenceError
from raster.image import Image
from texproject.texels import TexelMaps
from .problem import BlendProblem, ImageLike, build_problem, DEFAULT_TOLERANCE

log = logging.getLogger(__name__)

DIAG = 4.0

@dataclass
class BlendStats:
    iterations: int
    residual: float                       # máximo residuo relativo real entre canales
    channel_residuals: List[float] = field(default_factory=list)
    interior_count: int = 0
    trivial: bool = False

    def to_dict(self) -> dict:
        return {"iterations": self.iterations, "residual": self.residual,
                "channel_residuals": list(self.channel_residuals),
                "interior_count": self.interior_count, "trivial": self.trivial}

@dataclass(eq=False)
class BlendResult:
    texture: Image        # recortada a [0,1]
    raw: np.ndarray       # (R,R,3) antes del recorte
    stats: BlendStats

class _Laplacian:
    def __init__(self, nbr: np.ndarray):
        n = len(nbr)
        self.n = n
        self.nbr = np.where(nbr >= 0, nbr, n)   # fila n = ceros

    def __call__(self, x: np.ndarray) -> np.ndarray:
        xp = np.vstack([x, np.zeros((1, x.shape[1]))])
        g = xp[self.nbr]                         # (n,4,3)
        return DIAG * x - (((g[:, 0] + g[:, 1]) + g[:, 2]) + g[:, 3])

def _norms(v: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(v * v, axis=0))

def solve(problem: BlendProblem) -> BlendResult:
    raw = problem.boundary.copy()
    alpha_img = problem.valid.astype(np.float64)
    if problem.trivial:
        stats = BlendStats(iterations=0, residual=0.0, channel_residuals=[0.0, 0.0, 0.0], trivial=True)
        return BlendResult(texture=Image(rgb=raw, alpha=alpha_img), raw=raw, stats=stats)

    nbr, b = problem.stencil()
    A = _Laplacian(nbr)
    tol = problem.tolerance
    limit = problem.iteration_limit()
    bnorm = _norms(b)
    safe_b = np.where(bnorm > 0, bnorm, 1.0)

    x = problem.boundary[problem.interior].copy()
    x[:, bnorm == 0] = 0.0                    # b = 0 → solución exacta 0
    r = b - A(x)
    res = _norms(r) / safe_b
    active = (bnorm > 0) & (res > tol)
    z = r / DIAG
    p = z.copy()
    rz = np.sum(r * z, axis=0)
    it = 0
    while active.any():
        if it >= limit:
            raise SolverDivergenceError("el gradiente conjugado no convergió",
                                        last_residual=float(res[active].max()), iterations=it)
        it += 1
        Ap = A(p)
        pAp = np.sum(p * Ap, axis=0)
        step = np.where(active, rz / np.where(pAp != 0, pAp, 1.0), 0.0)
        x += step * p
        r -= step * Ap
        res = _norms(r) / safe_b
        done = active & (res <= tol)
        drift = np.zeros(3, dtype=bool)
        if done.any():
            # confirma con el residuo real; si la recurrencia derivó, reinicia desde él
            true_r = b - A(x)
            true_res = _norms(true_r) / safe_b
            drift = done & (true_res > tol)
            r[:, drift] = true_r[:, drift]
            res = np.where(done, true_res, res)
            active &= ~(done & ~drift)
        z = r / DIAG
        rz_new = np.sum(r * z, axis=0)
        beta = np.where(active & ~drift, rz_new / np.where(rz != 0, rz, 1.0), 0.0)
        p = z + beta * p
        rz = rz_new

    final = _norms(b - A(x)) / safe_b
    raw[problem.interior] = x
    stats = BlendStats(iterations=it, residual=float(final.max()), channel_residuals=final.tolist(),
                       interior_count=problem.interior_count)
    log.debug("solve: %d texels interiores, %d iteraciones, residuo %.3e",
              stats.interior_count, it, stats.residual)
    return BlendResult(texture=Image(rgb=raw, alpha=alpha_img), raw=raw, stats=stats)

def blend(projected: ImageLike, mask: np.ndarray, coarse: ImageLike, texels: TexelMaps, *,
          tolerance: float = DEFAULT_TOLERANCE, max_iterations: Optional[int] = None,
          boundary: str = "coarse") -> BlendResult:
    return solve(build_problem(projected, mask, coarse, texels, tolerance=tolerance,
                               max_iterations=max_iterations, boundary=boundary))

def blend_texture(projected: ImageLike, mask: np.ndarray, coarse: ImageLike, texels: TexelMaps, *,
                  tolerance: float = DEFAULT_TOLERANCE, max_iterations: Optional[int] = None,
                  boundary: str = "coarse") -> Image:
    return blend(projected, mask, coarse, texels, tolerance=tolerance, max_iterations=max_iterations,
                 boundary=boundary).texture
