# src/raster/image.py
from __future__ import annotations
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union
import numpy as np
from scipy import ndimage
from PIL import Image as PILImage

from core.errors import FormatError

@dataclass(eq=False)
class Image:
    """Imagen RGB en [0,1] con máscara alfa (H,W). También se usa como textura del atlas."""
    rgb: np.ndarray     # (H,W,3) float64
    alpha: np.ndarray   # (H,W) float64 en [0,1]

    def __post_init__(self):
        rgb = np.asarray(self.rgb, dtype=np.float64)
        if rgb.ndim != 3 or rgb.shape[2] != 3:
            raise FormatError(f"rgb debe ser (H,W,3), llegó {rgb.shape}")
        if not np.all(np.isfinite(rgb)):
            raise FormatError("imagen con valores no finitos")
        self.rgb = np.clip(rgb, 0.0, 1.0)
        a = np.asarray(self.alpha, dtype=np.float64)
        if a.shape != rgb.shape[:2]:
            raise FormatError("alpha debe tener la misma resolución que rgb")
        self.alpha = np.clip(a, 0.0, 1.0)

    @property
    def height(self) -> int:
        return self.rgb.shape[0]

    @property
    def width(self) -> int:
        return self.rgb.shape[1]

    @property
    def resolution(self) -> Tuple[int, int]:
        return (self.width, self.height)

    @property
    def mask(self) -> np.ndarray:
        return self.alpha > 0.5

    @staticmethod
    def filled(width: int, height: int, color=(0.0, 0.0, 0.0), alpha: float = 1.0) -> "Image":
        rgb = np.empty((height, width, 3))
        rgb[:] = np.asarray(color, dtype=np.float64)
        return Image(rgb=rgb, alpha=np.full((height, width), float(alpha)))

def sample_bilinear(rgb: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    Muestreo bilineal en coordenadas continuas de píxel (centro del píxel i en i+0.5).
    Fuera de la imagen se sujeta al borde.
    """
    h, w = rgb.shape[:2]
    fx = np.asarray(x, dtype=np.float64) - 0.5
    fy = np.asarray(y, dtype=np.float64) - 0.5
    x0 = np.floor(fx)
    y0 = np.floor(fy)
    tx = (fx - x0)[..., None]
    ty = (fy - y0)[..., None]
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)
    xa = np.clip(x0, 0, w - 1)
    xb = np.clip(x0 + 1, 0, w - 1)
    ya = np.clip(y0, 0, h - 1)
    yb = np.clip(y0 + 1, 0, h - 1)
    # forma a + (b - a)·t: exacta en los centros y para texturas constantes
    top = rgb[ya, xa] + (rgb[ya, xb] - rgb[ya, xa]) * tx
    bot = rgb[yb, xa] + (rgb[yb, xb] - rgb[yb, xa]) * tx
    return top + (bot - top) * ty

def sample_uv(rgb: np.ndarray, uv: np.ndarray) -> np.ndarray:
    """UV en [0,1]² (se sujeta) → color bilineal; u recorre columnas y v filas."""
    h, w = rgb.shape[:2]
    uv = np.clip(np.asarray(uv, dtype=np.float64), 0.0, 1.0)
    return sample_bilinear(rgb, uv[..., 0] * w, uv[..., 1] * h)

# ---------------- E/S PNG (8 bits RGBA) ----------------

def to_uint8(values: np.ndarray) -> np.ndarray:
    return np.round(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8)

def write_png(path: Union[str, Path], image: Image) -> Path:
    p = Path(path)
    rgba = np.concatenate([to_uint8(image.rgb), to_uint8(image.alpha)[..., None]], axis=2)
    PILImage.fromarray(rgba).save(p, format="PNG")
    return p

def read_png(path: Union[str, Path]) -> Image:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"No existe {p}")
    try:
        with PILImage.open(p) as im:
            arr = np.asarray(im.convert("RGBA"), dtype=np.float64) / 255.0
    except OSError as ex:
        raise FormatError(f"PNG inválido {p}: {ex}") from ex
    return Image(rgb=arr[..., :3], alpha=arr[..., 3])

def write_mask_png(path: Union[str, Path], mask: np.ndarray) -> Path:
    p = Path(path)
    PILImage.fromarray(np.where(mask, 255, 0).astype(np.uint8)).save(p, format="PNG")
    return p

def write_depth_raw(path: Union[str, Path], depth: np.ndarray) -> Path:
    """Volcado de profundidad: encabezado u32 ancho, u32 alto y luego f32 little-endian fila a fila (+inf = vacío)."""
    p = Path(path)
    h, w = depth.shape
    header = np.array([w, h], dtype="<u4").tobytes()
    p.write_bytes(header + np.asarray(depth, dtype="<f4").tobytes())
    return p

def pad_gutters(image: Image) -> Image:
    """Rellena los texels sin máscara con el color del texel válido más cercano; alpha no cambia."""
    m = image.mask
    if m.all() or not m.any():
        return image
    _, (ri, ci) = ndimage.distance_transform_edt(~m, return_indices=True)
    return Image(rgb=image.rgb[ri, ci], alpha=image.alpha.copy())
