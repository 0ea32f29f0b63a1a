# src/pipeline/commands.py
"""
Subcomandos del pipeline: synth → extract → refine → render → eval, y schedule.

Cada comando escribe sus archivos en el directorio de salida y un manifest.json que
los lista todos (incluido él mismo). Los errores de una etapa salen como StageError
con la etiqueta de la etapa.
"""
from __future__ import annotations
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
import csv
import json
import logging
import math
import numpy as np

from core.errors import GeometryError, InputError, ResolutionMismatchError
from geometry.mesh import Mesh
from geometry.obj_io import dumps_obj, loads_obj, read_obj, write_obj, write_mtl
from geometry.processing import compute_vertex_normals, laplacian_smooth, normalize_to_unit_box
from isosurface.atlas import generate_uv_atlas
from isosurface.bake import bake_coarse_texture
from isosurface.grid import box_grid_spec, check_domain, sample_grid
from isosurface.marching_tets import marching_tetrahedra
from isosurface.scenes import fixture
from isosurface.sdfg_io import read_sdfg, write_sdfg
from blend.problem import build_problem
from blend.solver import solve
from metrics.chamfer import chamfer_distance
from metrics.image_metrics import psnr_mse, ssim
from metrics.losses import mask_bce, recon_loss
from raster.image import Image, pad_gutters, read_png, write_depth_raw, write_mask_png, write_png
from raster.rasterizer import rasterize, render_shaded, render_textured
from raster.uv_raster import rasterize_uv_space
from schedmath.schedule import (linear_beta_schedule, rescale_zero_terminal_snr, schedule_table,
                                DEFAULT_BETA_END, DEFAULT_BETA_START, DEFAULT_T)
from texproject.projection import cull_silhouette, project_views
from texproject.selection import select_texels
from texproject.texels import TexelMaps, read_texel_cache, write_texel_cache
from texproject.views import ViewSet
from .config import PipelineConfig
from .manifest import RunManifest

log = logging.getLogger(__name__)

PathLike = Union[str, Path]

def view_name(azimuth_deg: float, prefix: str = "view") -> str:
    return f"{prefix}_{azimuth_deg:g}.png"

def _finish(manifest: RunManifest) -> RunManifest:
    manifest.write()
    return manifest

def _write_textured_obj(manifest: RunManifest, mesh: Mesh, stem: str, texture_file: str) -> None:
    mtl = f"{stem}.mtl"
    write_obj(manifest.output(f"{stem}.obj"), mesh, mtllib=mtl, material="character")
    write_mtl(manifest.output(mtl), "character", texture_file)

def _uv_texels(mesh: Mesh, cfg: PipelineConfig, manifest: RunManifest) -> TexelMaps:
    texels = rasterize_uv_space(mesh, cfg.atlas.resolution, threads=cfg.run.threads)
    if texels.stats.get("degenerate_uv"):
        manifest.diagnostics.warn("raster", "W301", "triángulos con UV degenerada omitidos",
                                  count=texels.stats["degenerate_uv"])
    if texels.stats.get("overlap_texels"):
        manifest.diagnostics.warn("raster", "W302", "texels reclamados por más de un triángulo",
                                  count=texels.stats["overlap_texels"])
    return texels

def extract_surface(grid, cfg: PipelineConfig, manifest: RunManifest):
    """marching tets → normalizar → suavizar → normales → atlas. Devuelve (malla, scale, offset)."""
    with manifest.stage("marching_tets"):
        mesh = marching_tetrahedra(grid)
        if mesh.is_empty():
            raise GeometryError("no surface crossing")
    with manifest.stage("normalize"):
        mesh, scale, offset = normalize_to_unit_box(mesh)
    with manifest.stage("smooth"):
        mesh = laplacian_smooth(mesh, cfg.smoothing.iterations, cfg.smoothing.lam)
    with manifest.stage("normals"):
        mesh, n_fallback = compute_vertex_normals(mesh)
        if n_fallback:
            manifest.diagnostics.warn("geometry", "W101", "vértices sin triángulo válido: normal (0,0,1)",
                                      count=n_fallback)
    with manifest.stage("atlas"):
        mesh = generate_uv_atlas(mesh, cfg.atlas.resolution, gutter=cfg.atlas.gutter,
                                 diagnostics=manifest.diagnostics)
        # lo que se guarda en disco es exactamente lo que usan las etapas siguientes
        mesh = loads_obj(dumps_obj(mesh))
    return mesh, scale, offset

def _to_grid_space(points: np.ndarray, scale: float, offset: np.ndarray) -> np.ndarray:
    return (points - offset) / scale

# ---------------- synth ----------------

def cmd_synth(fixture_name: str, cfg: PipelineConfig, out_dir: PathLike) -> RunManifest:
    manifest = RunManifest(command="synth", out_dir=out_dir, config=cfg.snapshot())
    scene = fixture(fixture_name)
    with manifest.stage("sample_grid"):
        dims, origin, spacing = box_grid_spec(cfg.synth.grid_resolution)
        grid = sample_grid(scene, dims, origin, spacing)
        write_sdfg(manifest.output("grid.sdfg"), grid)
        # misma geometría que extract: se parte del grid tal como quedó en disco
        grid = read_sdfg(manifest.out_dir / "grid.sdfg")

    mesh, scale, offset = extract_surface(grid, cfg, manifest)
    shade = lambda p: scene.color(_to_grid_space(p, scale, offset))

    with manifest.stage("gt_texture"):
        texels = _uv_texels(mesh, cfg, manifest)
        rgb = np.zeros((texels.atlas_res, texels.atlas_res, 3))
        if texels.valid.any():
            rgb[texels.valid] = np.clip(shade(texels.position[texels.valid]), 0.0, 1.0)
        write_png(manifest.output("gt_texture.png"), Image(rgb=rgb, alpha=texels.valid.astype(np.float64)))
        _write_textured_obj(manifest, mesh, "gt_mesh", "gt_texture.png")

    with manifest.stage("views"):
        for cam in cfg.cameras():
            gb = rasterize(mesh, cam, threads=cfg.run.threads)
            img = render_shaded(gb, shade, background=cfg.render.background)
            write_png(manifest.output(view_name(cam.azimuth_deg)), img)

    manifest.stats.update(fixture=fixture_name, vertices=mesh.num_vertices, triangles=mesh.num_triangles,
                          charts=int(mesh.chart_ids.max()) + 1, normalize_scale=scale,
                          normalize_offset=offset.tolist())
    print(f"[synth] fixture '{fixture_name}': {mesh.num_triangles} triángulos, vistas guardadas en: {manifest.out_dir}")
    return _finish(manifest)

# ---------------- extract ----------------

def cmd_extract(grid_path: PathLike, cfg: PipelineConfig, out_dir: PathLike) -> RunManifest:
    manifest = RunManifest(command="extract", out_dir=out_dir, config=cfg.snapshot())
    with manifest.stage("read_grid"):
        manifest.add_input(grid_path)
        grid = read_sdfg(grid_path)
        check_domain(grid, manifest.diagnostics)

    mesh, scale, offset = extract_surface(grid, cfg, manifest)

    with manifest.stage("texels"):
        texels = _uv_texels(mesh, cfg, manifest)

    has_color = grid.has_color
    with manifest.stage("bake"):
        if has_color:
            in_grid = replace(texels, position=_to_grid_space(texels.position, scale, offset))
            coarse = bake_coarse_texture(mesh, grid, cfg.atlas.resolution, texels=in_grid)
            texels = texels.with_coarse(coarse.rgb)
            write_png(manifest.output("coarse_texture.png"), coarse)
        else:
            manifest.diagnostics.warn("isosurface", "W202",
                                      "el grid no trae color: textura gruesa ausente, refine necesita --coarse")
        write_texel_cache(manifest.output("texels.txlm"), texels)

    _write_textured_obj(manifest, mesh, "mesh", "coarse_texture.png")
    manifest.stats.update(vertices=mesh.num_vertices, triangles=mesh.num_triangles,
                          charts=int(mesh.chart_ids.max()) + 1, valid_texels=texels.valid_count,
                          coarse_texture=has_color, normalize_scale=scale, normalize_offset=offset.tolist(),
                          texel_stats=dict(texels.stats))
    print(f"[extract] malla ({mesh.num_triangles} triángulos) guardada en: {manifest.out_dir / 'mesh.obj'}")
    return _finish(manifest)

# ---------------- refine ----------------

def load_views(paths: Sequence[PathLike], manifest: RunManifest) -> List[Image]:
    if len(paths) != 4:
        raise InputError(f"refine necesita 4 vistas, llegaron {len(paths)}")
    images = []
    for p in paths:
        manifest.add_input(p)
        images.append(read_png(p))
    return images

def cmd_refine(mesh_path: PathLike, coarse_path: PathLike, view_paths: Sequence[PathLike], cfg: PipelineConfig,
               out_dir: PathLike, *, texel_cache: Optional[PathLike] = None) -> RunManifest:
    manifest = RunManifest(command="refine", out_dir=out_dir, config=cfg.snapshot())
    R = cfg.atlas.resolution
    with manifest.stage("load"):
        manifest.add_input(mesh_path)
        mesh = read_obj(mesh_path)
        if not mesh.has_atlas:
            raise GeometryError("la malla no tiene atlas UV")
        if mesh.normals is None:
            mesh, _ = compute_vertex_normals(mesh)
        manifest.add_input(coarse_path)
        coarse = read_png(coarse_path)
        if coarse.resolution != (R, R):
            raise ResolutionMismatchError(f"textura gruesa {coarse.resolution} != atlas {R}x{R}")
        images = load_views(view_paths, manifest)

    with manifest.stage("texels"):
        if texel_cache is not None:
            manifest.add_input(texel_cache)
            texels = read_texel_cache(texel_cache)
            if texels.atlas_res != R:
                raise ResolutionMismatchError(f"caché de texels a {texels.atlas_res} != atlas {R}")
        else:
            texels = _uv_texels(mesh, cfg, manifest)
        texels = texels.with_coarse(coarse.rgb)

    with manifest.stage("depth"):
        views = ViewSet.from_mesh(mesh, images, cfg.cameras(), threads=cfg.run.threads)
    with manifest.stage("project"):
        cands = project_views(texels, views, cfg.projection.depth_eps)
    with manifest.stage("cull"):
        cands = cull_silhouette(cands, texels, views, cfg.projection.silhouette_threshold)
    with manifest.stage("select"):
        projected, mask = select_texels(cands, texels)
    with manifest.stage("blend"):
        problem = build_problem(projected, mask, coarse, texels, tolerance=cfg.solver.tolerance,
                                max_iterations=cfg.solver.max_iterations or None,
                                boundary=cfg.solver.boundary)
        result = solve(problem)

    refined = Image(rgb=result.texture.rgb, alpha=texels.valid.astype(np.float64))
    write_png(manifest.output("refined_texture.png"), refined)
    write_png(manifest.output("projected_texture.png"), projected)
    write_mask_png(manifest.output("projected_mask.png"), mask)
    _write_textured_obj(manifest, mesh, "refined_mesh", "refined_texture.png")

    manifest.stats.update(candidates=cands.stats(), selected_texels=int(mask.sum()),
                          valid_texels=texels.valid_count, blend=result.stats.to_dict())
    print(f"[refine] textura refinada ({int(mask.sum())} texels proyectados, "
          f"{result.stats.iterations} iteraciones CG) guardada en: {manifest.out_dir / 'refined_texture.png'}")
    return _finish(manifest)

# ---------------- render ----------------

def depth_name(azimuth_deg: float, prefix: str = "render") -> str:
    return f"{prefix}_depth_{azimuth_deg:g}.raw"

def render_views(mesh: Mesh, texture: Image, cfg: PipelineConfig, azimuths: Sequence[float],
                 elevation_deg: Optional[float] = None) -> Dict[float, Tuple[Image, np.ndarray]]:
    """Por azimut: (imagen texturizada, profundidad del G-buffer con +inf donde no hay cobertura)."""
    if mesh.uvs is None:
        raise GeometryError("la malla no tiene UVs")
    padded = pad_gutters(texture)
    out = {}
    for az in azimuths:
        gb = rasterize(mesh, cfg.camera_at(az, elevation_deg), threads=cfg.run.threads)
        out[az] = (render_textured(gb, padded, background=cfg.render.background), gb.depth)
    return out

def cmd_render(mesh_path: PathLike, texture_path: PathLike, cfg: PipelineConfig, out_dir: PathLike, *,
               azimuth_deg: float = 0.0, elevation_deg: Optional[float] = None,
               all_views: bool = False, prefix: str = "render", depth_out: bool = False) -> RunManifest:
    manifest = RunManifest(command="render", out_dir=out_dir, config=cfg.snapshot())
    with manifest.stage("load"):
        manifest.add_input(mesh_path)
        mesh = read_obj(mesh_path)
        manifest.add_input(texture_path)
        texture = read_png(texture_path)
    azimuths = list(cfg.camera.azimuths) if all_views else [azimuth_deg]
    with manifest.stage("render"):
        images = render_views(mesh, texture, cfg, azimuths, elevation_deg)
        for az, (img, depth) in images.items():
            write_png(manifest.output(view_name(az, prefix)), img)
            if depth_out:
                write_depth_raw(manifest.output(depth_name(az, prefix)), depth)
    print(f"[render] {len(images)} vista(s) guardada(s) en: {manifest.out_dir}")
    return _finish(manifest)

# ---------------- eval ----------------

REPORT_FIELDS = ["row", "azimuth", "ssim", "psnr", "mse", "mask_bce", "recon", "lpips_omitted",
                 "chamfer", "samples", "seed"]

def _fmt_metric(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v

def evaluate_views(pred: Sequence[Image], true: Sequence[Image], azimuths: Sequence[float]) -> List[dict]:
    if len(pred) != len(true):
        raise InputError("los conjuntos de vistas tienen distinta cantidad de imágenes")
    rows = []
    for az, a, b in zip(azimuths, pred, true):
        s = ssim(a, b)
        psnr, mse = psnr_mse(a, b)
        bce = mask_bce(a.alpha, b.alpha)
        rl = recon_loss(mse, bce)
        rows.append({"row": f"view_{az:g}", "azimuth": float(az), "ssim": s, "psnr": psnr, "mse": mse,
                     "mask_bce": bce, "recon": rl.total, "lpips_omitted": rl.lpips_omitted})
    if rows:
        mse_mean = float(np.mean([r["mse"] for r in rows]))
        psnr_mean = math.inf if mse_mean == 0.0 else -10.0 * math.log10(mse_mean)
        rows.append({"row": "mean", "ssim": float(np.mean([r["ssim"] for r in rows])), "psnr": psnr_mean,
                     "mse": mse_mean, "mask_bce": float(np.mean([r["mask_bce"] for r in rows])),
                     "recon": float(np.mean([r["recon"] for r in rows])), "lpips_omitted": True})
    return rows

def cmd_eval(cfg: PipelineConfig, out_dir: PathLike, *, mesh_a: Optional[PathLike] = None,
             mesh_b: Optional[PathLike] = None, views_a: Sequence[PathLike] = (),
             views_b: Sequence[PathLike] = ()) -> RunManifest:
    manifest = RunManifest(command="eval", out_dir=out_dir, config=cfg.snapshot())
    if (mesh_a is None) != (mesh_b is None):
        raise InputError("eval necesita ambas mallas (--mesh-a y --mesh-b)")
    if not views_a and mesh_a is None:
        raise InputError("eval necesita mallas y/o vistas para comparar")
    rows: List[dict] = []
    if views_a or views_b:
        with manifest.stage("views"):
            if len(views_a) != len(views_b):
                raise InputError("views-a y views-b deben tener la misma cantidad de imágenes")
            pred = [read_png(manifest.add_input(p)) for p in views_a]
            true = [read_png(manifest.add_input(p)) for p in views_b]
            azimuths = list(cfg.camera.azimuths) if len(pred) == 4 else [float(i) for i in range(len(pred))]
            rows.extend(evaluate_views(pred, true, azimuths))
    if mesh_a is not None:
        with manifest.stage("chamfer"):
            a = read_obj(manifest.add_input(mesh_a))
            b = read_obj(manifest.add_input(mesh_b))
            cd = chamfer_distance(a, b, cfg.run.chamfer_samples, cfg.run.seed, workers=cfg.run.threads)
            rows.append({"row": "mesh", "chamfer": cd, "samples": cfg.run.chamfer_samples, "seed": cfg.run.seed})

    with manifest.output("eval_report.csv").open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=REPORT_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt_metric(r.get(k, "")) for k in REPORT_FIELDS})
    report = {"seed": cfg.run.seed, "rows": [{k: _fmt_metric(v) for k, v in r.items()} for r in rows]}
    manifest.output("eval_report.json").write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    manifest.stats["rows"] = len(rows)
    print(f"[eval] reporte ({len(rows)} filas) guardado en: {manifest.out_dir / 'eval_report.csv'}")
    return _finish(manifest)

# ---------------- schedule ----------------

def cmd_schedule(cfg: PipelineConfig, out_dir: PathLike, *, steps: int = DEFAULT_T,
                 beta_start: float = DEFAULT_BETA_START, beta_end: float = DEFAULT_BETA_END,
                 rescale: bool = True) -> RunManifest:
    manifest = RunManifest(command="schedule", out_dir=out_dir, config=cfg.snapshot())
    with manifest.stage("schedule"):
        sched = linear_beta_schedule(steps, beta_start, beta_end)
        if rescale:
            sched = rescale_zero_terminal_snr(sched)
        rows = schedule_table(sched)
    with manifest.output("schedule.csv").open("w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=["t", "beta", "alpha_bar", "sqrt_alpha_bar", "snr"], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (v if k == "t" else repr(v)) for k, v in r.items()})
    manifest.stats.update(steps=steps, beta_start=beta_start, beta_end=beta_end, rescaled=rescale)
    print(f"[schedule] tabla de {steps} pasos guardada en: {manifest.out_dir / 'schedule.csv'}")
    return _finish(manifest)
