# src/isosurface/sdfg_io.py
"""
Formato binario SDFG (little-endian):
  'SDFG' | u32 versión=1 | u32 nx, ny, nz | f32 origin[3] | f32 spacing | u8 has_color
  | f32 valores[nx·ny·nz] (x más rápido) | f32 RGB[nx·ny·nz·3] si has_color
"""
from __future__ import annotations
from pathlib import Path
from typing import Union
import struct
import numpy as np

from core.errors import FormatError, InputError
from .grid import SdfGrid

SDFG_MAGIC = b"SDFG"
SDFG_VERSION = 1
_HEADER = struct.Struct("<4sIIII3ffB")

def dumps_sdfg(grid: SdfGrid) -> bytes:
    nx, ny, nz = grid.dims
    head = _HEADER.pack(SDFG_MAGIC, SDFG_VERSION, nx, ny, nz, *grid.origin.tolist(), grid.spacing,
                        1 if grid.has_color else 0)
    body = [np.ascontiguousarray(grid.values, dtype="<f4").tobytes()]
    if grid.has_color:
        body.append(np.ascontiguousarray(grid.color, dtype="<f4").tobytes())
    return head + b"".join(body)

def loads_sdfg(data: bytes, *, source: str = "<bytes>") -> SdfGrid:
    if len(data) < _HEADER.size:
        raise FormatError(f"{source}: archivo SDFG truncado")
    magic, version, nx, ny, nz, ox, oy, oz, spacing, has_color = _HEADER.unpack_from(data, 0)
    if magic != SDFG_MAGIC:
        raise FormatError(f"{source}: magic inválido {magic!r}")
    if version != SDFG_VERSION:
        raise FormatError(f"{source}: versión SDFG {version} no soportada")
    if has_color not in (0, 1):
        raise FormatError(f"{source}: has_color inválido ({has_color})")
    n = nx * ny * nz
    expected = _HEADER.size + 4 * n * (4 if has_color else 1)
    if len(data) != expected:
        raise FormatError(f"{source}: tamaño {len(data)} != {expected} para dims {(nx, ny, nz)}")
    values = np.frombuffer(data, dtype="<f4", count=n, offset=_HEADER.size).astype(np.float64)
    color = None
    if has_color:
        color = np.frombuffer(data, dtype="<f4", count=3 * n, offset=_HEADER.size + 4 * n)
        color = color.astype(np.float64).reshape(n, 3)
    try:
        return SdfGrid(dims=(nx, ny, nz), origin=(ox, oy, oz), spacing=spacing, values=values, color=color)
    except InputError as ex:
        raise FormatError(f"{source}: {ex.message}") from ex

def write_sdfg(path: Union[str, Path], grid: SdfGrid) -> Path:
    p = Path(path)
    p.write_bytes(dumps_sdfg(grid))
    return p

def read_sdfg(path: Union[str, Path]) -> SdfGrid:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"No existe {p}")
    return loads_sdfg(p.read_bytes(), source=str(p))
