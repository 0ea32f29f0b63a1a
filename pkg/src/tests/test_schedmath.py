import numpy as np
import pytest

from core.errors import ScheduleError, ShapeMismatchError
from schedmath.latents import LatentSample, add_noise, loss_4v, v_target, v_to_epsilon, v_to_x0
from schedmath.schedule import (DiffusionSchedule, linear_beta_schedule, rescale_zero_terminal_snr,
                                schedule_table, snr)

def _reference_rescale(betas: np.ndarray) -> np.ndarray:
    ac = np.cumprod(1.0 - betas)
    s = np.sqrt(ac)
    s0, sT = s[0], s[-1]
    s = (s - sT) * (s0 / (s0 - sT))
    ac = s ** 2
    alphas = np.concatenate([ac[:1], ac[1:] / ac[:-1]])
    return 1.0 - alphas

def test_two_step_schedule_hits_endpoints():
    sch = linear_beta_schedule(2, 0.00085, 0.012)
    assert sch.betas.tolist() == [0.00085, 0.012]

def test_alpha_bar_is_running_product():
    sch = linear_beta_schedule()
    prod = 1.0
    for b in sch.betas:
        prod *= 1.0 - b
    assert abs(sch.alpha_bars[-1] - prod) <= 1e-12
    assert np.all(np.diff(sch.alpha_bars) < 0)
    assert np.all(np.diff(np.sqrt(sch.betas)) > 0)

def test_rescale_reaches_zero_snr():
    base = linear_beta_schedule()
    sch = rescale_zero_terminal_snr(base)
    assert sch.rescaled
    assert sch.sqrt_alpha_bars[-1] == 0.0
    assert abs(sch.sqrt_alpha_bars[0] - base.sqrt_alpha_bars[0]) <= 1e-12
    assert np.all(np.diff(sch.alpha_bars) < 0)
    ratio = snr(sch)
    assert ratio[-1] == 0.0
    assert np.all(np.diff(ratio) < 0)

def test_rescale_matches_reference():
    base = linear_beta_schedule()
    sch = rescale_zero_terminal_snr(base)
    assert np.allclose(sch.betas, _reference_rescale(base.betas), rtol=0, atol=1e-12)
    assert sch.betas[-1] == 1.0

def test_rescale_rejects_degenerate():
    with pytest.raises(ScheduleError):
        rescale_zero_terminal_snr(rescale_zero_terminal_snr(linear_beta_schedule(10)))
    with pytest.raises(ScheduleError):
        rescale_zero_terminal_snr(DiffusionSchedule.from_betas([0.0, 0.0, 0.0]))

def test_schedule_argument_ranges():
    with pytest.raises(ScheduleError):
        linear_beta_schedule(1)
    with pytest.raises(ScheduleError):
        linear_beta_schedule(10, 0.02, 0.01)
    with pytest.raises(ScheduleError):
        linear_beta_schedule(10).coefficients(10)

def test_add_noise_at_terminal_step_is_pure_noise():
    sch = rescale_zero_terminal_snr(linear_beta_schedule())
    rng = np.random.default_rng(0)
    x0 = rng.normal(size=(1, 4, 8, 3))
    eps = rng.normal(size=(1, 4, 8, 3))
    out = add_noise(x0, eps, sch.T - 1, sch)
    assert np.array_equal(out.as_array(), eps)

def test_add_noise_without_noise_level_is_identity():
    sch = DiffusionSchedule.from_betas([0.0, 0.1, 0.2])
    x0 = np.arange(12.0)
    assert np.array_equal(add_noise(x0, np.ones(12), 0, sch).values, x0)

def test_add_noise_formula():
    sch = linear_beta_schedule()
    rng = np.random.default_rng(1)
    x0, eps = rng.normal(size=50), rng.normal(size=50)
    for t in (0, 17, 500, 999):
        expected = np.sqrt(sch.alpha_bars[t]) * x0 + np.sqrt(1 - sch.alpha_bars[t]) * eps
        assert np.allclose(add_noise(x0, eps, t, sch).values, expected, atol=1e-12)

def test_v_parametrization_round_trips():
    sch = rescale_zero_terminal_snr(linear_beta_schedule())
    rng = np.random.default_rng(2)
    x0 = rng.normal(size=100_000)
    eps = rng.normal(size=100_000)
    for t in rng.integers(0, sch.T, size=100):
        x_t = add_noise(x0, eps, t, sch)
        v = v_target(x0, eps, t, sch)
        assert np.allclose(v_to_epsilon(v, x_t, t, sch).values, eps, atol=1e-9)
        assert np.allclose(v_to_x0(v, x_t, t, sch).values, x0, atol=1e-9)

def test_loss_values():
    a = np.zeros((1, 4, 5, 2))
    assert loss_4v(a, a) == 0.0
    assert np.isclose(loss_4v(a, a + 0.3), 0.09, atol=1e-12)
    rng = np.random.default_rng(3)
    x, y = rng.normal(size=(2, 4, 3, 2)), rng.normal(size=(2, 4, 3, 2))
    total = 0.0
    for p, q in zip(x.ravel(), y.ravel()):
        total += (p - q) ** 2
    assert np.isclose(loss_4v(x, y), total / x.size, rtol=1e-12)

def test_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        loss_4v(np.zeros((1, 4, 2, 3)), np.zeros((1, 4, 3, 2)))
    with pytest.raises(ShapeMismatchError):
        loss_4v(np.zeros(6), np.zeros(7))
    with pytest.raises(ShapeMismatchError):
        LatentSample(values=np.zeros(6), layout=(2, 2))

def test_schedule_table_rows():
    rows = schedule_table(linear_beta_schedule(5))
    assert [r["t"] for r in rows] == [0, 1, 2, 3, 4]
    assert set(rows[0]) == {"t", "beta", "alpha_bar", "sqrt_alpha_bar", "snr"}
