# src/texproject/texels.py
from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union
import struct
import numpy as np

from core.errors import FormatError, ResolutionMismatchError

@dataclass(eq=False)
class TexelMaps:
    """
    Buffers de geometría horneados en espacio de textura (atlas_res x atlas_res).
    Fila = v·res, columna = u·res. Los texels inválidos (canaletas) tienen valid=False y chart=-1.
    """
    atlas_res: int
    position: np.ndarray   # (R,R,3) mundo
    normal: np.ndarray     # (R,R,3) unitaria en texels válidos
    chart: np.ndarray      # (R,R) int64, -1 fuera de cartas
    valid: np.ndarray      # (R,R) bool
    coarse: np.ndarray     # (R,R,3) RGB grueso (ceros si aún no se horneó)
    stats: Dict[str, int] = field(default_factory=dict)

    @staticmethod
    def empty(atlas_res: int) -> "TexelMaps":
        r = int(atlas_res)
        return TexelMaps(atlas_res=r, position=np.zeros((r, r, 3)), normal=np.zeros((r, r, 3)),
                         chart=np.full((r, r), -1, dtype=np.int64), valid=np.zeros((r, r), dtype=bool),
                         coarse=np.zeros((r, r, 3)))

    @property
    def valid_count(self) -> int:
        return int(self.valid.sum())

    def valid_flat(self) -> np.ndarray:
        """Índices planos (fila*R + col) de los texels válidos, en orden de barrido."""
        return np.flatnonzero(self.valid.ravel())

    def with_coarse(self, coarse_rgb: np.ndarray) -> "TexelMaps":
        c = np.asarray(coarse_rgb, dtype=np.float64)
        if c.shape != (self.atlas_res, self.atlas_res, 3):
            raise ResolutionMismatchError(
                f"textura gruesa {c.shape[:2]} no coincide con atlas {self.atlas_res}x{self.atlas_res}")
        return TexelMaps(atlas_res=self.atlas_res, position=self.position, normal=self.normal,
                         chart=self.chart, valid=self.valid, coarse=c.copy(), stats=dict(self.stats))

# ---------------- caché binaria TXLM ----------------
# magic 'TXLM', u32 versión, u32 res, luego (little-endian):
#   f64 position[R*R*3], f64 normal[R*R*3], i32 chart[R*R], u8 valid[R*R], f64 coarse[R*R*3]

TXLM_MAGIC = b"TXLM"
TXLM_VERSION = 1

def write_texel_cache(path: Union[str, Path], texels: TexelMaps) -> Path:
    p = Path(path)
    r = texels.atlas_res
    parts = [
        TXLM_MAGIC,
        struct.pack("<II", TXLM_VERSION, r),
        np.ascontiguousarray(texels.position, dtype="<f8").tobytes(),
        np.ascontiguousarray(texels.normal, dtype="<f8").tobytes(),
        np.ascontiguousarray(texels.chart, dtype="<i4").tobytes(),
        np.ascontiguousarray(texels.valid, dtype="u1").tobytes(),
        np.ascontiguousarray(texels.coarse, dtype="<f8").tobytes(),
    ]
    p.write_bytes(b"".join(parts))
    return p

def read_texel_cache(path: Union[str, Path]) -> TexelMaps:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"No existe {p}")
    data = p.read_bytes()
    if data[:4] != TXLM_MAGIC:
        raise FormatError(f"{p}: no es una caché TXLM")
    version, r = struct.unpack_from("<II", data, 4)
    if version != TXLM_VERSION:
        raise FormatError(f"{p}: versión TXLM {version} no soportada")
    n = r * r
    expected = 12 + n * (24 + 24 + 4 + 1 + 24)
    if len(data) != expected:
        raise FormatError(f"{p}: tamaño {len(data)} != {expected}")
    off = 12

    def take(dtype: str, count: int) -> np.ndarray:
        nonlocal off
        arr = np.frombuffer(data, dtype=dtype, count=count, offset=off)
        off += arr.nbytes
        return arr

    position = take("<f8", n * 3).reshape(r, r, 3).astype(np.float64)
    normal = take("<f8", n * 3).reshape(r, r, 3).astype(np.float64)
    chart = take("<i4", n).reshape(r, r).astype(np.int64)
    valid = take("u1", n).reshape(r, r).astype(bool)
    coarse = take("<f8", n * 3).reshape(r, r, 3).astype(np.float64)
    return TexelMaps(atlas_res=r, position=position, normal=normal, chart=chart, valid=valid, coarse=coarse)
