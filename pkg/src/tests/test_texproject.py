import numpy as np
import pytest

from core.errors import InputError, ResolutionMismatchError
from geometry.camera import orbit_rig
from geometry.primitives import icosphere
from geometry.processing import compute_vertex_normals
from isosurface.atlas import generate_uv_atlas
from isosurface.grid import box_grid_spec, sample_grid
from isosurface.marching_tets import marching_tetrahedra
from isosurface.scenes import fixture
from metrics.image_metrics import psnr_mse
from raster.image import Image, pad_gutters
from raster.rasterizer import rasterize, render_textured
from raster.uv_raster import rasterize_uv_space
from texproject.projection import CandidateSet, cull_silhouette, project_views, silhouette_keep
from texproject.selection import select_texels, view_priority
from texproject.texels import TexelMaps, read_texel_cache, write_texel_cache
from texproject.views import ViewSet

AZ = np.array([0.0, 90.0, 180.0, 270.0])

def _sphere_setup(view_res: int = 64, atlas_res: int = 128):
    m, _ = compute_vertex_normals(icosphere(3, radius=0.3))
    m = generate_uv_atlas(m, atlas_res)
    texels = rasterize_uv_space(m, atlas_res)
    cams = orbit_rig(resolution=(view_res, view_res))
    images = [Image.filled(view_res, view_res, (v / 4.0, 0.5, 0.5)) for v in range(4)]
    return m, texels, ViewSet.from_mesh(m, images, cams)

def _row(cands: CandidateSet, flat: int) -> int:
    r = int(np.searchsorted(cands.texel_index, flat))
    assert cands.texel_index[r] == flat
    return r

def _one_texel(coarse) -> TexelMaps:
    t = TexelMaps.empty(1)
    t.valid[0, 0] = True
    t.chart[0, 0] = 0
    return t.with_coarse(np.asarray(coarse, dtype=np.float64).reshape(1, 1, 3))

def _candidates(rgb, present) -> CandidateSet:
    present = np.asarray(present, dtype=bool).reshape(1, 4)
    return CandidateSet(texel_index=np.array([0]), rgb=np.asarray(rgb, dtype=np.float64).reshape(1, 4, 3),
                        in_bounds=present.copy(), depth_ok=np.ones((1, 4), dtype=bool),
                        facing_ok=np.ones((1, 4), dtype=bool), dots=np.full((1, 4), np.nan), azimuths=AZ)

def test_front_pole_seen_only_from_front():
    _, texels, views = _sphere_setup()
    flat = int(np.argmax(np.where(texels.valid, texels.position[..., 2], -np.inf)))
    cands = cull_silhouette(project_views(texels, views), texels, views)
    r = _row(cands, flat)
    assert cands.present[r, 0], "la vista frontal ve el polo frontal"
    assert cands.in_bounds[r, 2] and not cands.depth_ok[r, 2], "la vista trasera lo tiene ocluido"
    assert np.isclose(cands.dots[r, 0], -1.0, atol=0.05)

def test_inner_sphere_has_no_candidates():
    dims, origin, spacing = box_grid_spec(32)
    m, _ = compute_vertex_normals(marching_tetrahedra(sample_grid(fixture("nested_spheres"), dims, origin, spacing)))
    m = generate_uv_atlas(m, 256)
    texels = rasterize_uv_space(m, 256)
    cams = orbit_rig(resolution=(64, 64))
    views = ViewSet.from_mesh(m, [Image.filled(64, 64)] * 4, cams)
    cands = project_views(texels, views)
    pos = texels.position.reshape(-1, 3)[cands.texel_index]
    inner = np.linalg.norm(pos, axis=1) < 0.25
    assert inner.any()
    assert np.all(cands.counts[inner] == 0)
    assert np.any(cands.counts[~inner] > 0)

def test_texel_outside_every_view():
    _, _, views = _sphere_setup()
    t = TexelMaps.empty(2)
    t.valid[0, 0] = True
    t.position[0, 0] = (5.0, 5.0, 0.0)
    t.normal[0, 0] = (0.0, 0.0, 1.0)
    cands = project_views(t, views)
    assert not cands.in_bounds.any()
    _, mask = select_texels(cands, t)
    assert not mask.any()

def test_silhouette_rule_is_inclusive():
    keep = silhouette_keep(np.array([-1.0, -0.2, -0.19, 0.0, 0.5]))
    assert keep.tolist() == [True, True, False, False, False]

def test_stricter_threshold_keeps_subset():
    _, texels, views = _sphere_setup()
    cands = project_views(texels, views)
    loose = cull_silhouette(cands, texels, views, -0.2).present
    strict = cull_silhouette(cands, texels, views, -0.5).present
    assert np.all(loose | ~strict)
    assert strict.sum() < loose.sum()

def test_depth_tolerance_is_monotone():
    _, texels, views = _sphere_setup()
    counts = [project_views(texels, views, eps).depth_ok.sum() for eps in (1e-4, 2e-3, 1e-1)]
    assert counts[0] <= counts[1] <= counts[2]

def test_select_nearest_to_coarse():
    texels = _one_texel((1.0, 0.0, 0.0))
    rgb = [(0, 0, 1), (0, 0, 0), (0.9, 0.05, 0.0), (0, 0, 0)]
    img, mask = select_texels(_candidates(rgb, [1, 0, 1, 0]), texels)
    assert mask[0, 0]
    assert np.allclose(img.rgb[0, 0], (0.9, 0.05, 0.0))

def test_select_ties_prefer_side_view_at_90():
    texels = _one_texel((0.5, 0.5, 0.5))
    rgb = [(0, 0, 0), (0.75, 0.5, 0.5), (0, 0, 0), (0.25, 0.5, 0.5)]
    img, _ = select_texels(_candidates(rgb, [0, 1, 0, 1]), texels)
    assert np.array_equal(img.rgb[0, 0], (0.75, 0.5, 0.5))
    rgb = [(0.75, 0.5, 0.5), (0, 0, 0), (0.25, 0.5, 0.5), (0, 0, 0)]
    img, _ = select_texels(_candidates(rgb, [1, 0, 1, 0]), texels)
    assert np.array_equal(img.rgb[0, 0], (0.75, 0.5, 0.5))

def test_select_single_and_no_candidate():
    texels = _one_texel((0.9, 0.9, 0.9))
    rgb = [(0, 0, 0), (0, 0, 0), (0.3, 0.3, 0.3), (0, 0, 0)]
    img, mask = select_texels(_candidates(rgb, [0, 0, 1, 0]), texels)
    assert mask[0, 0] and np.allclose(img.rgb[0, 0], 0.3)
    img, mask = select_texels(_candidates(rgb, [0, 0, 0, 0]), texels)
    assert not mask[0, 0] and np.allclose(img.rgb[0, 0], 0.9)
    assert img.alpha[0, 0] == 0.0

def test_view_priority_order():
    assert view_priority(AZ).tolist() == [0, 1, 3, 2]
    assert view_priority(np.array([180.0, 270.0, 0.0, 90.0])).tolist() == [3, 2, 0, 1]

def test_candidates_follow_view_permutation():
    _, texels, views = _sphere_setup()
    texels = texels.with_coarse(np.full((128, 128, 3), 0.4))
    perm = [2, 0, 3, 1]
    a = cull_silhouette(project_views(texels, views), texels, views)
    b = cull_silhouette(project_views(texels, views.permuted(perm)), texels, views.permuted(perm))
    assert np.array_equal(b.present, a.present[:, perm])
    assert np.array_equal(b.rgb, a.rgb[:, perm])
    img_a, mask_a = select_texels(a, texels)
    img_b, mask_b = select_texels(b, texels)
    assert np.array_equal(mask_a, mask_b)
    assert np.array_equal(img_a.rgb, img_b.rgb)

def test_viewset_validation():
    m, _, views = _sphere_setup()
    with pytest.raises(InputError):
        ViewSet(images=views.images[:3], cameras=views.cameras[:3], gbuffers=views.gbuffers[:3])
    bad = orbit_rig(azimuths=(0, 45, 180, 270), resolution=(64, 64))
    with pytest.raises(InputError):
        ViewSet.from_mesh(m, views.images, bad)
    small = [Image.filled(32, 32)] + views.images[1:]
    with pytest.raises(ResolutionMismatchError):
        ViewSet(images=small, cameras=views.cameras, gbuffers=views.gbuffers)

def test_reprojection_reproduces_texture():
    m, texels, _ = _sphere_setup(view_res=128, atlas_res=256)
    T = np.zeros((256, 256, 3))
    T[texels.valid] = np.clip(texels.position[texels.valid] + 0.5, 0.0, 1.0)
    tex = pad_gutters(Image(rgb=T, alpha=texels.valid.astype(np.float64)))
    cams = orbit_rig(resolution=(128, 128))
    gbs = [rasterize(m, c) for c in cams]
    views = ViewSet(images=[render_textured(g, tex) for g in gbs], cameras=cams, gbuffers=gbs)
    texels = texels.with_coarse(T)
    cands = cull_silhouette(project_views(texels, views), texels, views)
    img, mask = select_texels(cands, texels)
    assert mask.sum() > 0.5 * texels.valid_count
    psnr, _ = psnr_mse(img.rgb, T, mask)
    assert psnr >= 35.0

def test_texel_cache_round_trip(tmp_path):
    _, texels, _ = _sphere_setup()
    texels = texels.with_coarse(np.full((128, 128, 3), 0.25))
    back = read_texel_cache(write_texel_cache(tmp_path / "t.txlm", texels))
    assert back.atlas_res == 128
    for name in ("position", "normal", "chart", "valid", "coarse"):
        assert np.array_equal(getattr(back, name), getattr(texels, name)), name
