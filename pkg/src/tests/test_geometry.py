import math
import numpy as np
import pytest

from core.errors import FormatError, GeometryError
from geometry.camera import Camera, orbit_rig
from geometry.mesh import Mesh, empty_mesh, rotation_matrix, transform_mesh
from geometry.obj_io import dumps_obj, loads_obj
from geometry.primitives import cube, icosphere, quad, regular_tetrahedron
from geometry.processing import compute_vertex_normals, laplacian_smooth, normalize_to_unit_box

def _noisy_sphere(amplitude: float, seed: int = 0) -> Mesh:
    m = icosphere(3)
    rng = np.random.default_rng(seed)
    r = 1.0 + amplitude * rng.uniform(-1.0, 1.0, m.num_vertices)
    return m.with_(positions=m.positions * r[:, None])

def _radial_spread(positions: np.ndarray) -> float:
    # ajuste de esfera por mínimos cuadrados: |p|² = 2c·p + k
    A = np.hstack([2.0 * positions, np.ones((len(positions), 1))])
    b = (positions ** 2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    d = np.linalg.norm(positions - sol[:3], axis=1)
    return float(d.std())

def test_normalize_fits_unit_box():
    m = Mesh(positions=[[2, 3, 4], [6, 3, 4], [2, 5, 5]], triangles=[[0, 1, 2]])
    out, scale, offset = normalize_to_unit_box(m)
    lo, hi = out.positions.min(axis=0), out.positions.max(axis=0)
    assert np.isclose((hi - lo).max(), 1.0)
    assert np.allclose(0.5 * (lo + hi), 0.0)
    assert np.allclose(m.positions * scale + offset, out.positions)

def test_normalize_is_idempotent():
    once, _, _ = normalize_to_unit_box(_noisy_sphere(0.1))
    twice, scale, offset = normalize_to_unit_box(once)
    assert np.allclose(once.positions, twice.positions, atol=1e-12)
    assert np.isclose(scale, 1.0)

def test_normalize_rejects_empty_and_degenerate():
    with pytest.raises(GeometryError):
        normalize_to_unit_box(empty_mesh())
    point = Mesh(positions=[[1, 1, 1], [1, 1, 1], [1, 1, 1]], triangles=[[0, 1, 2]])
    with pytest.raises(GeometryError):
        normalize_to_unit_box(point)

def test_cube_normals_are_face_normals():
    m, fallback = compute_vertex_normals(cube(split_corners=True))
    assert fallback == 0
    fn = m.face_normals()
    for k in range(3):
        assert np.allclose(m.normals[m.triangles[:, k]], fn)
    # cada normal apunta a un eje
    assert np.allclose(np.abs(m.normals).max(axis=1), 1.0)

def test_icosphere_normals_are_radial():
    m, _ = compute_vertex_normals(icosphere(3))
    radial = m.positions / np.linalg.norm(m.positions, axis=1, keepdims=True)
    cosang = np.einsum("ij,ij->i", m.normals, radial)
    assert np.all(cosang >= math.cos(math.radians(2.0))), "normales a menos de 2° de la radial"

def test_zero_area_triangle_does_not_change_normals():
    base, _ = compute_vertex_normals(icosphere(1))
    p = base.positions
    # triángulo degenerado sobre vértices existentes
    extra = np.vstack([base.triangles, [[0, 0, 1]]])
    m, fallback = compute_vertex_normals(Mesh(positions=p, triangles=extra))
    assert fallback == 0
    assert np.allclose(m.normals, base.normals)

def test_isolated_vertex_gets_fallback_normal():
    m = Mesh(positions=[[0, 0, 0], [1, 0, 0], [0, 1, 0], [5, 5, 5]], triangles=[[0, 1, 2]])
    out, fallback = compute_vertex_normals(m)
    assert fallback == 1
    assert np.allclose(out.normals[3], [0, 0, 1])

def test_smoothing_identity_cases():
    m = _noisy_sphere(0.05)
    assert laplacian_smooth(m, iterations=0) is m
    assert laplacian_smooth(m, iterations=5, lam=0.0) is m
    with pytest.raises(GeometryError):
        laplacian_smooth(m, lam=1.5)

def test_smoothing_tetrahedron_full_step():
    m = regular_tetrahedron()
    out = laplacian_smooth(m, iterations=1, lam=1.0)
    # cada vértice pasa al centroide de los otros tres
    assert np.allclose(out.positions, -m.positions / 3.0)

def test_smoothing_reduces_roughness():
    m = _noisy_sphere(0.08, seed=3)
    out = laplacian_smooth(m, iterations=5, lam=0.5)
    assert _radial_spread(out.positions) < _radial_spread(m.positions)
    assert np.array_equal(out.triangles, m.triangles)

def test_smoothing_commutes_with_rigid_motion():
    m = _noisy_sphere(0.05, seed=1)
    R = rotation_matrix([1.0, 2.0, -0.5], 0.7)
    t = np.array([0.3, -0.2, 1.1])
    a = laplacian_smooth(transform_mesh(m, R, t), 4, 0.5)
    b = transform_mesh(laplacian_smooth(m, 4, 0.5), R, t)
    assert np.allclose(a.positions, b.positions, atol=1e-12)

def test_camera_position_on_orbit():
    rng = np.random.default_rng(7)
    for az, el in rng.uniform([-400, -89], [400, 89], size=(20, 2)):
        cam = Camera(distance=2.5, azimuth_deg=az, elevation_deg=el)
        assert np.isclose(np.linalg.norm(cam.position), 2.5)
        assert np.allclose(cam.forward, -cam.position / 2.5)

def test_camera_azimuth_wraps():
    a = Camera(azimuth_deg=0.0)
    b = Camera(azimuth_deg=360.0)
    assert np.array_equal(a.position, b.position)
    assert np.array_equal(a.view_matrix, b.view_matrix)

def test_camera_front_view_convention():
    cam = Camera(distance=1.5, resolution=(64, 64))
    assert np.allclose(cam.position, [0, 0, 1.5])
    (xy, z) = cam.project(np.array([[0, 0, 0], [0.1, 0, 0], [0, 0.1, 0]]))
    assert np.allclose(xy[0], [32, 32]) and np.isclose(z[0], 1.5)
    assert xy[1, 0] > 32, "+X queda a la derecha en la vista frontal"
    assert xy[2, 1] < 32, "+Y queda arriba (filas menores)"
    side = Camera(azimuth_deg=90.0)
    assert np.allclose(side.position, [1.5, 0, 0])

def test_pixel_ray_hits_projected_point():
    cam = Camera(azimuth_deg=30.0, elevation_deg=20.0, resolution=(40, 30))
    p = np.array([0.1, -0.05, 0.2])
    (xy, z) = cam.project(p[None])
    ray = cam.pixel_ray(xy[0, 0], xy[0, 1])
    d = p - cam.position
    assert np.allclose(ray, d / np.linalg.norm(d))

def test_orbit_rig_offsets_all_views():
    rig = orbit_rig(azimuth_offset=15.0, resolution=(8, 8))
    assert [c.azimuth_deg for c in rig] == [15.0, 105.0, 195.0, 285.0]

def _atlas_quad() -> Mesh:
    m, _ = compute_vertex_normals(quad())
    uvs = np.array([[[0, 1], [1, 1], [1, 0]], [[0, 1], [1, 0], [0, 0]]], dtype=np.float64)
    return m.with_(uvs=uvs, chart_ids=np.array([0, 1]))

def test_has_atlas_needs_uvs_and_charts():
    m = quad()
    assert not m.has_atlas
    assert not m.with_(uvs=_atlas_quad().uvs).has_atlas
    assert _atlas_quad().has_atlas

def test_obj_is_deterministic_and_reloads():
    m = _atlas_quad()
    text = dumps_obj(m, mtllib="mesh.mtl", material="tex")
    assert text == dumps_obj(m, mtllib="mesh.mtl", material="tex")
    back = loads_obj(text)
    assert np.allclose(back.positions, m.positions, atol=1e-9)
    assert np.array_equal(back.triangles, m.triangles)
    assert np.allclose(back.uvs, m.uvs, atol=1e-9)
    assert np.allclose(back.normals, m.normals, atol=1e-9)
    assert np.array_equal(back.chart_ids, m.chart_ids)

def test_obj_fans_polygons_and_negative_indices():
    text = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf -4 -3 -2 -1\n"
    m = loads_obj(text)
    assert m.num_triangles == 2
    assert np.array_equal(m.triangles, [[0, 1, 2], [0, 2, 3]])
    assert m.uvs is None and m.chart_ids is None

def test_obj_bad_index_is_format_error():
    with pytest.raises(FormatError):
        loads_obj("v 0 0 0\nv 1 0 0\nf 1 2 9\n")
    with pytest.raises(FormatError):
        loads_obj("v 0 0 zz\n")
