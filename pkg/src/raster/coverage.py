# src/raster/coverage.py
"""
Cobertura de triángulos 2D con muestreo en centros de píxel y regla top-left.

Se usa para tres cosas: el rasterizador de pantalla, la rasterización en espacio UV
y la verificación de solapes del atlas. Todas comparten la misma función de arista,
evaluada en un orden canónico de extremos para que E(a,b,p) == -E(b,a,p) bit a bit;
así dos triángulos que comparten arista nunca reclaman el mismo píxel ni dejan hueco.
"""
from __future__ import annotations
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Tuple
import numpy as np

CHUNK_BUDGET = 1 << 21  # elementos por bloque (n * alto * ancho)

@dataclass
class Fragments:
    tri: np.ndarray    # (K,) índice de triángulo
    row: np.ndarray    # (K,)
    col: np.ndarray    # (K,)
    bary: np.ndarray   # (K,3) baricéntricas en espacio de pantalla, en el orden original de vértices

    def __len__(self) -> int:
        return len(self.tri)

    @staticmethod
    def empty() -> "Fragments":
        z = np.zeros(0, dtype=np.int64)
        return Fragments(tri=z, row=z.copy(), col=z.copy(), bary=np.zeros((0, 3)))

def edge_function(ax, ay, bx, by, px, py):
    swap = (ax > bx) | ((ax == bx) & (ay > by))
    x0 = np.where(swap, bx, ax)
    y0 = np.where(swap, by, ay)
    x1 = np.where(swap, ax, bx)
    y1 = np.where(swap, ay, by)
    w = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
    return np.where(swap, -w, w)

def owns_boundary(ax, ay, bx, by):
    """Regla top-left: exactamente una de las dos direcciones de una arista se queda con w == 0."""
    dx = bx - ax
    dy = by - ay
    return (dy < 0) | ((dy == 0) & (dx > 0))

def _pow2(n: np.ndarray) -> np.ndarray:
    return np.left_shift(1, np.ceil(np.log2(np.maximum(n, 1))).astype(np.int64))

def _cover_chunk(ids: np.ndarray, v: np.ndarray, c0: np.ndarray, r0: np.ndarray,
                 bw: np.ndarray, bh: np.ndarray, flip: np.ndarray) -> Fragments:
    BH = int(bh.max())
    BW = int(bw.max())
    jj, ii = np.mgrid[0:BH, 0:BW]
    px = c0[:, None, None] + ii[None] + 0.5
    py = r0[:, None, None] + jj[None] + 0.5
    inb = (ii[None] < bw[:, None, None]) & (jj[None] < bh[:, None, None])

    x = v[:, :, 0][:, :, None, None]
    y = v[:, :, 1][:, :, None, None]
    w = []
    inside = inb
    for k in range(3):
        a, b = (k + 1) % 3, (k + 2) % 3
        wk = edge_function(x[:, a], y[:, a], x[:, b], y[:, b], px, py)
        own = owns_boundary(x[:, a], y[:, a], x[:, b], y[:, b])
        inside = inside & ((wk > 0) | ((wk == 0) & own))
        w.append(wk)
    t_loc, rr, cc = np.nonzero(inside)
    if len(t_loc) == 0:
        return Fragments.empty()
    ws = np.stack([wk[t_loc, rr, cc] for wk in w], axis=1)
    bary = ws / ws.sum(axis=1, keepdims=True)
    # deshace el intercambio de vértices 1<->2 de los triángulos con orientación negativa
    f = flip[t_loc]
    bary[f] = bary[f][:, [0, 2, 1]]
    return Fragments(tri=ids[t_loc], row=r0[t_loc] + rr, col=c0[t_loc] + cc, bary=bary)

def triangle_fragments(xy: np.ndarray, width: int, height: int, *,
                       active: np.ndarray | None = None, threads: int = 1) -> Fragments:
    """
    xy: (T,3,2) coordenadas continuas de píxel (x = columna, y = fila).
    Devuelve todos los fragmentos (triángulo, píxel) cubiertos en [0,width)x[0,height).
    El orden de salida no depende de `threads`.
    """
    xy = np.asarray(xy, dtype=np.float64).reshape(-1, 3, 2)
    T = len(xy)
    if T == 0:
        return Fragments.empty()
    ok = np.all(np.isfinite(xy), axis=(1, 2))
    if active is not None:
        ok &= np.asarray(active, dtype=bool)

    # orientación positiva: intercambia v1 y v2 donde haga falta
    v = xy.copy()
    area = edge_function(v[:, 0, 0], v[:, 0, 1], v[:, 1, 0], v[:, 1, 1], v[:, 2, 0], v[:, 2, 1])
    flip = area < 0
    v[flip] = v[flip][:, [0, 2, 1]]
    area = edge_function(v[:, 0, 0], v[:, 0, 1], v[:, 1, 0], v[:, 1, 1], v[:, 2, 0], v[:, 2, 1])
    ok &= area > 0

    with np.errstate(invalid="ignore"):
        c0 = np.ceil(v[:, :, 0].min(axis=1) - 0.5)
        c1 = np.floor(v[:, :, 0].max(axis=1) - 0.5)
        r0 = np.ceil(v[:, :, 1].min(axis=1) - 0.5)
        r1 = np.floor(v[:, :, 1].max(axis=1) - 0.5)
    c0 = np.clip(np.nan_to_num(c0), 0, width - 1).astype(np.int64)
    c1 = np.clip(np.nan_to_num(c1, nan=-1), -1, width - 1).astype(np.int64)
    r0 = np.clip(np.nan_to_num(r0), 0, height - 1).astype(np.int64)
    r1 = np.clip(np.nan_to_num(r1, nan=-1), -1, height - 1).astype(np.int64)
    bw = c1 - c0 + 1
    bh = r1 - r0 + 1
    ok &= (bw > 0) & (bh > 0)

    ids = np.nonzero(ok)[0]
    if len(ids) == 0:
        return Fragments.empty()

    # agrupa por tamaño de caja (potencias de 2) para vectorizar sin desperdiciar memoria
    kh = _pow2(bh[ids])
    kw = _pow2(bw[ids])
    order = np.lexsort((ids, kw, kh))
    ids, kh, kw = ids[order], kh[order], kw[order]
    jobs: List[np.ndarray] = []
    start = 0
    while start < len(ids):
        h, w = kh[start], kw[start]
        same = np.searchsorted(kh * (1 << 32) + kw, h * (1 << 32) + w, side="right")
        per = max(1, CHUNK_BUDGET // int(h * w))
        end = min(same, start + per)
        jobs.append(ids[start:end])
        start = end

    def run(sel: np.ndarray) -> Fragments:
        return _cover_chunk(sel, v[sel], c0[sel], r0[sel], bw[sel], bh[sel], flip[sel])

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    parts = [p for p in parts if len(p)]
    if not parts:
        return Fragments.empty()
    return Fragments(
        tri=np.concatenate([p.tri for p in parts]),
        row=np.concatenate([p.row for p in parts]),
        col=np.concatenate([p.col for p in parts]),
        bary=np.concatenate([p.bary for p in parts]),
    )

def resolve_nearest(frags: Fragments, depth: np.ndarray, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Prueba de profundidad: por píxel conserva el fragmento de menor profundidad;
    los empates se resuelven por menor índice de triángulo. Devuelve (índices de
    fragmentos ganadores, cantidad de fragmentos por píxel ganador).
    """
    if len(frags) == 0:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy()
    pix = frags.row * width + frags.col
    order = np.lexsort((frags.tri, depth, pix))
    _, first, counts = np.unique(pix[order], return_index=True, return_counts=True)
    return order[first], counts
