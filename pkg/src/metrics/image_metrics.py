# src/metrics/image_metrics.py
"""
SSIM sobre luma (Rec. 601) con ventana gaussiana 11x11, σ=1.5, K1=0.01, K2=0.03, rango 1,
promediado sobre las posiciones de ventana completas. PSNR/MSE con máscara opcional.
"""
from __future__ import annotations
from typing import Optional, Tuple, Union
import math
import numpy as np
from scipy import ndimage

from core.errors import InputError, ResolutionMismatchError
from raster.image import Image

WINDOW = 11
SIGMA = 1.5
K1 = 0.01
K2 = 0.03
LUMA = np.array([0.299, 0.587, 0.114])
INFINITE_PSNR = math.inf

ImageLike = Union[Image, np.ndarray]

def _rgb(x: ImageLike) -> np.ndarray:
    return np.asarray(x.rgb if isinstance(x, Image) else x, dtype=np.float64)

def luma(x: ImageLike) -> np.ndarray:
    a = _rgb(x)
    return a if a.ndim == 2 else a @ LUMA

def gaussian_window(size: int = WINDOW, sigma: float = SIGMA) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2.0
    w = np.exp(-(r * r) / (2.0 * sigma * sigma))
    return w / w.sum()

def _filter(img: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = ndimage.correlate1d(img, w, axis=0, mode="reflect")
    out = ndimage.correlate1d(out, w, axis=1, mode="reflect")
    h = len(w) // 2
    return out[h:img.shape[0] - h, h:img.shape[1] - h]

def ssim(image_a: ImageLike, image_b: ImageLike) -> float:
    a, b = _rgb(image_a), _rgb(image_b)
    if a.shape != b.shape:
        raise ResolutionMismatchError(f"resoluciones distintas: {a.shape[:2]} vs {b.shape[:2]}")
    if a.shape[0] < WINDOW or a.shape[1] < WINDOW:
        raise InputError(f"la imagen debe medir al menos {WINDOW}x{WINDOW}")
    x, y = luma(a), luma(b)
    w = gaussian_window()
    c1 = (K1 * 1.0) ** 2
    c2 = (K2 * 1.0) ** 2
    mx, my = _filter(x, w), _filter(y, w)
    sxx = _filter(x * x, w) - mx * mx
    syy = _filter(y * y, w) - my * my
    sxy = _filter(x * y, w) - mx * my
    num = (2 * mx * my + c1) * (2 * sxy + c2)
    den = (mx * mx + my * my + c1) * (sxx + syy + c2)
    return float(np.mean(num / den))

def psnr_mse(image_a: ImageLike, image_b: ImageLike, mask: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """(psnr dB, mse) para imágenes de rango 1; imágenes idénticas → (inf, 0)."""
    a, b = _rgb(image_a), _rgb(image_b)
    if a.shape != b.shape:
        raise ResolutionMismatchError(f"resoluciones distintas: {a.shape[:2]} vs {b.shape[:2]}")
    d = a - b
    if mask is not None:
        m = np.asarray(mask, dtype=bool)
        if m.shape != a.shape[:2]:
            raise ResolutionMismatchError("la máscara no coincide con la imagen")
        if not m.any():
            raise InputError("máscara vacía")
        d = d[m]
    mse = float(np.mean(d * d))
    if mse == 0.0:
        return INFINITE_PSNR, 0.0
    return -10.0 * math.log10(mse), mse
