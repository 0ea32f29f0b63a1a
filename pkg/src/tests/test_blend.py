import numpy as np
import pytest

from blend.problem import BlendProblem, assemble_matrix, build_problem
from blend.solver import blend, blend_texture, solve
from core.errors import InputError, SolverDivergenceError
from texproject.texels import TexelMaps

def _texels(chart: np.ndarray) -> TexelMaps:
    t = TexelMaps.empty(chart.shape[0])
    t.chart = np.asarray(chart, dtype=np.int64)
    t.valid = t.chart >= 0
    return t

def _one_chart(R: int, lo: int = 1, hi=None) -> np.ndarray:
    hi = R - 1 if hi is None else hi
    ch = np.full((R, R), -1, dtype=np.int64)
    ch[lo:hi, lo:hi] = 0
    return ch

def _random_problem(rng, R: int, *, p: float = 0.7, tolerance: float = 1e-10, **kw) -> BlendProblem:
    interior = rng.uniform(size=(R, R)) < p
    interior[0, :] = interior[-1, :] = interior[:, 0] = interior[:, -1] = False
    return BlendProblem(interior=interior, boundary=rng.uniform(size=(R, R, 3)),
                        gx=rng.normal(scale=0.05, size=(R, R, 3)), gy=rng.normal(scale=0.05, size=(R, R, 3)),
                        tolerance=tolerance, **kw)

def _dense_solution(problem: BlendProblem) -> np.ndarray:
    R = problem.atlas_res
    cells = [(r, c) for r in range(R) for c in range(R) if problem.interior[r, c]]
    index = {rc: i for i, rc in enumerate(cells)}
    n = len(cells)
    A = np.zeros((n, n))
    b = np.zeros((n, 3))
    gx, gy, f = problem.gx, problem.gy, problem.boundary
    for i, (r, c) in enumerate(cells):
        A[i, i] = 4.0
        b[i] = gx[r, c - 1] - gx[r, c] + gy[r - 1, c] - gy[r, c]
        for nb in ((r, c + 1), (r, c - 1), (r + 1, c), (r - 1, c)):
            if nb in index:
                A[i, index[nb]] = -1.0
            else:
                b[i] += f[nb]
    return np.linalg.solve(A, b)

def test_constant_guidance_gives_constant_texture():
    R = 16
    texels = _texels(_one_chart(R))
    flat = np.full((R, R, 3), 0.4)
    res = blend(flat, texels.valid, flat, texels)
    assert np.allclose(res.raw[texels.valid], 0.4, atol=1e-6)

def test_projection_equal_to_coarse_is_kept():
    rng = np.random.default_rng(0)
    R = 16
    texels = _texels(_one_chart(R))
    P = rng.uniform(size=(R, R, 3))
    res = blend(P, texels.valid, P, texels)
    assert np.allclose(res.texture.rgb[texels.valid], P[texels.valid], atol=1e-5)

def test_interior_is_chart_eroded_by_one():
    R = 14
    ch = np.full((R, R), -1, dtype=np.int64)
    ch[2:10, 3:13] = 0
    texels = _texels(ch)
    problem = build_problem(np.zeros((R, R, 3)), texels.valid, np.zeros((R, R, 3)), texels)
    expected = np.zeros((R, R), dtype=bool)
    expected[3:9, 4:12] = True
    assert np.array_equal(problem.interior, expected)

def test_matches_dense_solve():
    rng = np.random.default_rng(1)
    for R in (7, 12, 20):
        problem = _random_problem(rng, R)
        res = solve(problem)
        assert np.allclose(res.raw[problem.interior], _dense_solution(problem), atol=1e-5)

def test_reported_residual_matches_recomputed():
    rng = np.random.default_rng(2)
    problem = _random_problem(rng, 24, tolerance=1e-6)
    res = solve(problem)
    A, b = assemble_matrix(problem)
    x = res.raw[problem.interior]
    r = np.linalg.norm(A @ x - b, axis=0) / np.linalg.norm(b, axis=0)
    assert np.allclose(r, res.stats.channel_residuals, rtol=1e-6, atol=1e-12)
    assert res.stats.residual <= 1e-6
    assert res.stats.interior_count == problem.interior_count

def test_empty_mask_returns_coarse_bitwise():
    rng = np.random.default_rng(3)
    R = 12
    texels = _texels(_one_chart(R))
    coarse = rng.uniform(size=(R, R, 3))
    res = blend(rng.uniform(size=(R, R, 3)), np.zeros((R, R), dtype=bool), coarse, texels)
    assert res.stats.trivial and res.stats.iterations == 0
    assert np.array_equal(res.texture.rgb, coarse)

def test_offset_projection_leaves_no_seam():
    R = 32
    texels = _texels(_one_chart(R))
    coarse = np.full((R, R, 3), 0.4)
    rr, cc = np.mgrid[0:R, 0:R]
    disc = (rr - 15.5) ** 2 + (cc - 15.5) ** 2 < 64
    projected = coarse + 0.3
    composite = np.where(disc[..., None], projected, coarse)
    out = blend(projected, disc, coarse, texels).raw

    def jumps(img):
        d = np.abs(np.diff(img, axis=1)).max(axis=2)
        across = disc[:, :-1] != disc[:, 1:]
        return d[across].max(), d[~across & texels.valid[:, :-1] & texels.valid[:, 1:]].max()

    assert jumps(composite)[0] > 0.29
    seam, inside = jumps(out)
    assert seam <= inside + 1e-3

def test_charts_do_not_share_stencils():
    R = 16
    ch = np.full((R, R), -1, dtype=np.int64)
    ch[1:15, 1:8] = 0
    ch[1:15, 8:15] = 1
    texels = _texels(ch)
    rng = np.random.default_rng(4)
    P = rng.uniform(size=(R, R, 3))
    problem = build_problem(P, texels.valid, P, texels)
    r, c = np.nonzero(problem.interior)
    own = ch[r, c]
    for dr, dc in ((0, 1), (0, -1), (1, 0), (-1, 0)):
        assert np.all(ch[r + dr, c + dc] == own)
    assert not problem.interior[:, 7].any() and not problem.interior[:, 8].any()
    assert np.all(problem.gx[:, 7] == 0.0), "sin guía entre cartas vecinas"

def test_zero_guidance_obeys_max_principle():
    rng = np.random.default_rng(5)
    for _ in range(100):
        problem = _random_problem(rng, 12)
        problem.gx[:] = 0.0
        problem.gy[:] = 0.0
        x = solve(problem).raw[problem.interior]
        outer = problem.boundary[~problem.interior]
        assert np.all(x >= outer.min(axis=0) - 1e-8)
        assert np.all(x <= outer.max(axis=0) + 1e-8)

def test_solution_is_linear_in_data():
    rng = np.random.default_rng(6)
    base = _random_problem(rng, 16, tolerance=1e-12)
    scaled = BlendProblem(interior=base.interior, boundary=2.5 * base.boundary, gx=2.5 * base.gx,
                          gy=2.5 * base.gy, tolerance=1e-12)
    a = solve(base).raw[base.interior]
    b = solve(scaled).raw[base.interior]
    assert np.allclose(b, 2.5 * a, atol=1e-6)

def test_iteration_cap_raises_divergence():
    rng = np.random.default_rng(7)
    problem = _random_problem(rng, 24, tolerance=1e-12, max_iterations=1)
    with pytest.raises(SolverDivergenceError) as ex:
        solve(problem)
    assert ex.value.iterations == 1
    assert ex.value.last_residual > 0
    assert ex.value.exit_code == 3

def test_problem_validation():
    R = 6
    interior = np.zeros((R, R), dtype=bool)
    interior[0, 2] = True
    zeros = np.zeros((R, R, 3))
    with pytest.raises(InputError):
        BlendProblem(interior=interior, boundary=zeros, gx=zeros, gy=zeros)
    with pytest.raises(InputError):
        BlendProblem(interior=np.zeros((R, R), dtype=bool), boundary=zeros, gx=zeros, gy=zeros, tolerance=0.0)

def test_blend_texture_is_clamped_raw():
    R = 16
    texels = _texels(_one_chart(R))
    coarse = np.full((R, R, 3), 0.95)
    rr, cc = np.mgrid[0:R, 0:R]
    bump = 1.25 - 0.01 * ((rr - 7.5) ** 2 + (cc - 7.5) ** 2)
    projected = np.repeat(bump[..., None], 3, axis=2)
    res = blend(projected, texels.valid, coarse, texels)
    assert res.raw.max() > 1.0, "la guía empuja por encima de 1"
    tex = blend_texture(projected, texels.valid, coarse, texels)
    assert np.array_equal(tex.rgb, np.clip(res.raw, 0.0, 1.0))
    assert np.array_equal(tex.alpha, texels.valid.astype(np.float64))

def test_chart_ring_takes_coarse():
    R = 16
    texels = _texels(_one_chart(R))
    coarse = np.full((R, R, 3), 0.4)
    projected = np.full((R, R, 3), 0.7)
    res = blend(projected, texels.valid, coarse, texels)
    ring = texels.valid & ~build_problem(projected, texels.valid, coarse, texels).interior
    assert ring.any()
    assert np.array_equal(res.raw[ring], coarse[ring])
    assert np.allclose(res.raw[texels.valid], 0.4, atol=1e-6)

def test_composite_boundary_keeps_projection_on_ring():
    R = 16
    texels = _texels(_one_chart(R))
    coarse = np.full((R, R, 3), 0.4)
    projected = np.full((R, R, 3), 0.7)
    res = blend(projected, texels.valid, coarse, texels, boundary="composite")
    assert np.allclose(res.raw[texels.valid], 0.7, atol=1e-6)

def test_interior_is_eroded_against_mask():
    R = 16
    texels = _texels(_one_chart(R))
    mask = np.zeros((R, R), dtype=bool)
    mask[4:12, 4:12] = True
    rng = np.random.default_rng(8)
    coarse = rng.uniform(size=(R, R, 3))
    projected = rng.uniform(size=(R, R, 3))
    problem = build_problem(projected, mask, coarse, texels)
    expected = np.zeros((R, R), dtype=bool)
    expected[5:11, 5:11] = True
    assert np.array_equal(problem.interior, expected)
    edge = mask & ~expected
    res = solve(problem)
    assert np.array_equal(res.raw[edge], coarse[edge])
    assert np.array_equal(res.raw[~mask], coarse[~mask])

def test_linear_projection_over_flat_coarse_gives_coarse():
    R = 16
    texels = _texels(_one_chart(R))
    coarse = np.full((R, R, 3), 0.5)
    cc = np.mgrid[0:R, 0:R][1]
    projected = np.repeat((0.2 + 0.04 * cc)[..., None], 3, axis=2)
    res = blend(projected, texels.valid, coarse, texels)
    assert np.allclose(res.raw[texels.valid], 0.5, atol=1e-5)

def test_unknown_boundary_mode_is_rejected():
    R = 8
    texels = _texels(_one_chart(R))
    flat = np.full((R, R, 3), 0.5)
    with pytest.raises(InputError):
        build_problem(flat, texels.valid, flat, texels, boundary="dirichlet")
