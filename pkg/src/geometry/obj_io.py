# src/geometry/obj_io.py
"""
Lectura/escritura OBJ con UV por esquina (wedge) y normales por vértice.

- `v`  posiciones, `vn` una normal por vértice (mismo índice que `v`),
  `vt` una UV por esquina en orden de triángulo, `f v/vt/vn`.
- Las cartas se guardan como grupos `g chart_<id>` (se emite un `g` cada vez que cambia).
- La salida es determinista: mismo Mesh → mismos bytes.
"""
from __future__ import annotations
from pathlib import Path
from typing import List, Optional, Union
import numpy as np

from core.errors import FormatError
from .mesh import Mesh

_FMT = "{:.9f}"

def _fmt(vals) -> str:
    return " ".join(_FMT.format(float(x)) for x in vals)

def dumps_obj(mesh: Mesh, *, mtllib: Optional[str] = None, material: Optional[str] = None) -> str:
    out: List[str] = ["# malla texturizada"]
    if mtllib:
        out.append(f"mtllib {mtllib}")
    for p in mesh.positions:
        out.append("v " + _fmt(p))
    if mesh.uvs is not None:
        for uv in mesh.uvs.reshape(-1, 2):
            out.append("vt " + _fmt(uv))
    if mesh.normals is not None:
        for n in mesh.normals:
            out.append("vn " + _fmt(n))
    if material:
        out.append(f"usemtl {material}")
    current_chart = None
    for f, tri in enumerate(mesh.triangles):
        if mesh.chart_ids is not None and mesh.chart_ids[f] != current_chart:
            current_chart = int(mesh.chart_ids[f])
            out.append(f"g chart_{current_chart}")
        corners = []
        for k in range(3):
            vi = int(tri[k]) + 1
            vt = f"{3 * f + k + 1}" if mesh.uvs is not None else ""
            vn = f"{vi}" if mesh.normals is not None else ""
            if vt or vn:
                corners.append(f"{vi}/{vt}/{vn}" if vn else f"{vi}/{vt}")
            else:
                corners.append(f"{vi}")
        out.append("f " + " ".join(corners))
    return "\n".join(out) + "\n"

def write_obj(path: Union[str, Path], mesh: Mesh, **kw) -> Path:
    p = Path(path)
    p.write_text(dumps_obj(mesh, **kw), encoding="utf-8")
    return p

def write_mtl(path: Union[str, Path], material: str, texture_file: str) -> Path:
    p = Path(path)
    p.write_text(f"newmtl {material}\nKd 1.000000 1.000000 1.000000\nmap_Kd {texture_file}\n", encoding="utf-8")
    return p

def _index(tok: str, count: int, line_no: int) -> int:
    i = int(tok)
    i = i - 1 if i > 0 else count + i
    if not 0 <= i < count:
        raise FormatError(f"OBJ línea {line_no}: índice fuera de rango '{tok}'")
    return i

def loads_obj(text: str) -> Mesh:
    V: List[List[float]] = []
    VT: List[List[float]] = []
    VN: List[List[float]] = []
    tris: List[tuple] = []
    tri_vt: List[tuple] = []
    tri_vn: List[tuple] = []
    charts: List[int] = []
    chart = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        tag = parts[0]
        try:
            if tag == "v":
                V.append([float(x) for x in parts[1:4]])
            elif tag == "vt":
                VT.append([float(x) for x in parts[1:3]])
            elif tag == "vn":
                VN.append([float(x) for x in parts[1:4]])
            elif tag == "g":
                name = parts[1] if len(parts) > 1 else ""
                chart = int(name[len("chart_"):]) if name.startswith("chart_") else -1
            elif tag == "f":
                corners = []
                for tok in parts[1:]:
                    ids = tok.split("/")
                    vi = _index(ids[0], len(V), line_no)
                    ti = _index(ids[1], len(VT), line_no) if len(ids) > 1 and ids[1] else None
                    ni = _index(ids[2], len(VN), line_no) if len(ids) > 2 and ids[2] else None
                    corners.append((vi, ti, ni))
                if len(corners) < 3:
                    raise FormatError(f"OBJ línea {line_no}: cara con menos de 3 vértices")
                # abanico para polígonos
                for k in range(1, len(corners) - 1):
                    c = (corners[0], corners[k], corners[k + 1])
                    tris.append(tuple(x[0] for x in c))
                    tri_vt.append(tuple(x[1] for x in c))
                    tri_vn.append(tuple(x[2] for x in c))
                    charts.append(chart)
        except ValueError as ex:
            raise FormatError(f"OBJ línea {line_no}: {ex}") from ex

    positions = np.array(V, dtype=np.float64).reshape(-1, 3)
    triangles = np.array(tris, dtype=np.int64).reshape(-1, 3)
    uvs = None
    if tri_vt and all(t is not None for c in tri_vt for t in c):
        vt = np.array(VT, dtype=np.float64).reshape(-1, 2)
        uvs = vt[np.array(tri_vt, dtype=np.int64)]
    normals = None
    if VN and tri_vn and all(n is not None for c in tri_vn for n in c):
        vn = np.array(VN, dtype=np.float64).reshape(-1, 3)
        normals = np.zeros_like(positions)
        normals[:, 2] = 1.0
        normals[triangles.ravel()] = vn[np.array(tri_vn, dtype=np.int64).ravel()]
        ln = np.linalg.norm(normals, axis=1, keepdims=True)
        normals = normals / np.where(ln > 0, ln, 1.0)
    chart_ids = np.array(charts, dtype=np.int64) if charts and min(charts) >= 0 else None
    return Mesh(positions=positions, triangles=triangles, normals=normals, uvs=uvs, chart_ids=chart_ids)

def read_obj(path: Union[str, Path]) -> Mesh:
    p = Path(path)
    if not p.exists():
        raise FormatError(f"No existe {p}")
    return loads_obj(p.read_text(encoding="utf-8"))
