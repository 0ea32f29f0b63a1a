# src/pipeline/config.py
"""
Configuración del pipeline en formato INI.

Secciones fijas; claves o secciones desconocidas se rechazan. Los floats se escriben con
repr para que parse(serialize(c)) == c exactamente.
"""
from __future__ import annotations
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Dict, Optional, Tuple, Union
import configparser
import math

from blend.problem import BOUNDARY_MODES
from core.errors import ConfigError
from geometry.camera import Camera, orbit_rig, CANONICAL_AZIMUTHS, DEFAULT_DISTANCE, DEFAULT_FOV_DEG

@dataclass(frozen=True)
class CameraConfig:
    fov_deg: float = DEFAULT_FOV_DEG
    distance: float = DEFAULT_DISTANCE
    elevation_deg: float = 0.0
    azimuths: Tuple[float, ...] = CANONICAL_AZIMUTHS
    view_resolution: int = 512

@dataclass(frozen=True)
class AtlasConfig:
    resolution: int = 1024
    gutter: int = 2

@dataclass(frozen=True)
class ProjectionConfig:
    silhouette_threshold: float = -0.2
    depth_eps: float = 2e-3

@dataclass(frozen=True)
class SmoothingConfig:
    lam: float = 0.5
    iterations: int = 5

@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-6
    max_iterations: int = 0       # 0 = automático (10·√n + 1000)
    boundary: str = "coarse"      # coarse | composite

@dataclass(frozen=True)
class RenderConfig:
    background: Tuple[float, ...] = (1.0, 1.0, 1.0)

@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    threads: int = 1
    chamfer_samples: int = 50000

@dataclass(frozen=True)
class SynthConfig:
    grid_resolution: int = 64

# nombre en el INI → nombre del campo
KEY_ALIASES = {"lambda": "lam"}
FIELD_KEYS = {v: k for k, v in KEY_ALIASES.items()}

@dataclass(frozen=True)
class PipelineConfig:
    camera: CameraConfig = field(default_factory=CameraConfig)
    atlas: AtlasConfig = field(default_factory=AtlasConfig)
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    smoothing: SmoothingConfig = field(default_factory=SmoothingConfig)
    solver: SolverConfig = field(default_factory=SolverConfig)
    render: RenderConfig = field(default_factory=RenderConfig)
    run: RunConfig = field(default_factory=RunConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)

    def __post_init__(self):
        validate(self)

    def cameras(self) -> list[Camera]:
        c = self.camera
        res = (c.view_resolution, c.view_resolution)
        return orbit_rig(c.azimuths, c.elevation_deg, c.distance, c.fov_deg, res)

    def camera_at(self, azimuth_deg: float, elevation_deg: Optional[float] = None) -> Camera:
        c = self.camera
        return Camera(fov_deg=c.fov_deg, distance=c.distance, azimuth_deg=azimuth_deg,
                      elevation_deg=c.elevation_deg if elevation_deg is None else elevation_deg,
                      resolution=(c.view_resolution, c.view_resolution))

    def with_run(self, *, seed: Optional[int] = None, threads: Optional[int] = None) -> "PipelineConfig":
        run = self.run
        if seed is not None:
            run = replace(run, seed=int(seed))
        if threads is not None:
            run = replace(run, threads=int(threads))
        return replace(self, run=run)

    def snapshot(self) -> Dict[str, Dict[str, object]]:
        out: Dict[str, Dict[str, object]] = {}
        for sec in fields(self):
            block = getattr(self, sec.name)
            out[sec.name] = {FIELD_KEYS.get(f.name, f.name): _plain(getattr(block, f.name)) for f in fields(block)}
        return out

def _plain(v):
    return list(v) if isinstance(v, tuple) else v

def _fail(msg: str):
    raise ConfigError(msg)

def validate(cfg: PipelineConfig) -> None:
    c = cfg.camera
    if len(c.azimuths) != 4:
        _fail(f"[camera] azimuths necesita exactamente 4 valores, hay {len(c.azimuths)}")
    wrapped = [a % 360.0 for a in c.azimuths]
    if len(set(wrapped)) != 4:
        _fail(f"[camera] azimuths deben ser distintos módulo 360: {list(c.azimuths)}")
    numbers = {
        "camera.fov_deg": c.fov_deg, "camera.distance": c.distance, "camera.elevation_deg": c.elevation_deg,
        "projection.silhouette_threshold": cfg.projection.silhouette_threshold,
        "projection.depth_eps": cfg.projection.depth_eps, "smoothing.lambda": cfg.smoothing.lam,
        "solver.tolerance": cfg.solver.tolerance,
    }
    for name, v in numbers.items():
        if not math.isfinite(v):
            _fail(f"{name} debe ser finito: {v}")
    if any(not math.isfinite(a) for a in c.azimuths):
        _fail("[camera] azimuths deben ser finitos")
    if not 0.0 < c.fov_deg < 180.0:
        _fail(f"[camera] fov_deg fuera de (0,180): {c.fov_deg}")
    if c.distance <= 0.0:
        _fail(f"[camera] distance debe ser > 0: {c.distance}")
    if c.view_resolution < 1:
        _fail(f"[camera] view_resolution debe ser >= 1: {c.view_resolution}")
    if cfg.atlas.gutter < 2:
        _fail(f"[atlas] gutter debe ser >= 2: {cfg.atlas.gutter}")
    if cfg.atlas.resolution < 2 * cfg.atlas.gutter + 2:
        _fail(f"[atlas] resolution demasiado chica: {cfg.atlas.resolution}")
    if cfg.projection.depth_eps <= 0.0:
        _fail(f"[projection] depth_eps debe ser > 0: {cfg.projection.depth_eps}")
    if not 0.0 <= cfg.smoothing.lam <= 1.0:
        _fail(f"[smoothing] lambda fuera de [0,1]: {cfg.smoothing.lam}")
    if cfg.smoothing.iterations < 0:
        _fail("[smoothing] iterations debe ser >= 0")
    if cfg.solver.tolerance <= 0.0:
        _fail("[solver] tolerance debe ser > 0")
    if cfg.solver.max_iterations < 0:
        _fail("[solver] max_iterations debe ser >= 0")
    if cfg.solver.boundary not in BOUNDARY_MODES:
        _fail(f"[solver] boundary debe ser uno de {list(BOUNDARY_MODES)}: '{cfg.solver.boundary}'")
    bg = cfg.render.background
    if len(bg) != 3 or any(not (math.isfinite(x) and 0.0 <= x <= 1.0) for x in bg):
        _fail(f"[render] background debe ser 3 valores en [0,1]: {list(bg)}")
    if cfg.run.threads < 1:
        _fail("[run] threads debe ser >= 1")
    if cfg.run.chamfer_samples < 1:
        _fail("[run] chamfer_samples debe ser >= 1")
    if cfg.synth.grid_resolution < 2:
        _fail("[synth] grid_resolution debe ser >= 2")

# ---------------- INI ----------------

def _convert(raw: str, default, where: str):
    try:
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if isinstance(default, tuple):
            return tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError:
        _fail(f"{where}: valor inválido '{raw}'")
    return raw

def _format(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)

def parse_config(text: str, *, source: str = "<texto>") -> PipelineConfig:
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=source)
    except configparser.Error as ex:
        raise ConfigError(f"{source}: {ex}") from ex
    base = PipelineConfig()
    blocks = {}
    known = {f.name for f in fields(base)}
    for sec in cp.sections():
        if sec not in known:
            _fail(f"{source}: sección desconocida [{sec}]")
    for sec in fields(base):
        block = getattr(base, sec.name)
        if not cp.has_section(sec.name):
            blocks[sec.name] = block
            continue
        names = {f.name for f in fields(block)}
        changes = {}
        for key, raw in cp.items(sec.name):
            name = KEY_ALIASES.get(key, key)
            if name not in names:
                _fail(f"{source}: clave desconocida '{key}' en [{sec.name}]")
            changes[name] = _convert(raw, getattr(block, name), f"[{sec.name}] {key}")
        blocks[sec.name] = replace(block, **changes)
    return PipelineConfig(**blocks)

def serialize_config(cfg: PipelineConfig) -> str:
    lines = []
    for sec in fields(cfg):
        block = getattr(cfg, sec.name)
        lines.append(f"[{sec.name}]")
        for f in fields(block):
            lines.append(f"{FIELD_KEYS.get(f.name, f.name)} = {_format(getattr(block, f.name))}")
        lines.append("")
    return "\n".join(lines)

def load_config(path: Optional[Union[str, Path]] = None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"No existe el archivo de configuración {p}")
    return parse_config(p.read_text(encoding="utf-8"), source=str(p))
