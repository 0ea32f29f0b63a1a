# src/schedmath/schedule.py
"""
Calendarios de ruido de difusión.

linear_beta_schedule: β lineal en espacio √β (convención "scaled linear").
rescale_zero_terminal_snr: desplaza y escala √ᾱ para que el último paso sea ruido puro,
conservando el primero, y rederiva β a partir de los cocientes consecutivos de ᾱ.
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Dict, List, Tuple
import math
import numpy as np

from core.errors import ScheduleError

DEFAULT_T = 1000
DEFAULT_BETA_START = 0.00085
DEFAULT_BETA_END = 0.012

@dataclass(frozen=True, eq=False)
class DiffusionSchedule:
    betas: np.ndarray
    alphas: np.ndarray
    alpha_bars: np.ndarray
    sqrt_alpha_bars: np.ndarray
    rescaled: bool = False

    @property
    def T(self) -> int:
        return len(self.betas)

    @property
    def sqrt_one_minus_alpha_bars(self) -> np.ndarray:
        return np.sqrt(1.0 - self.alpha_bars)

    @staticmethod
    def from_betas(betas) -> "DiffusionSchedule":
        b = np.asarray(betas, dtype=np.float64).reshape(-1)
        if len(b) < 2:
            raise ScheduleError(f"se necesitan al menos 2 pasos, llegaron {len(b)}")
        if not np.all(np.isfinite(b)) or np.any(b < 0) or np.any(b >= 1):
            raise ScheduleError("betas deben estar en [0,1)")
        alphas = 1.0 - b
        alpha_bars = np.cumprod(alphas)
        return DiffusionSchedule(betas=b, alphas=alphas, alpha_bars=alpha_bars,
                                 sqrt_alpha_bars=np.sqrt(alpha_bars))

    def coefficients(self, t: int) -> Tuple[float, float]:
        """(√ᾱ_t, √(1−ᾱ_t)) del paso t."""
        t = int(t)
        if not 0 <= t < self.T:
            raise ScheduleError(f"t={t} fuera de [0,{self.T})")
        return float(self.sqrt_alpha_bars[t]), math.sqrt(1.0 - float(self.alpha_bars[t]))

def linear_beta_schedule(T: int = DEFAULT_T, beta_start: float = DEFAULT_BETA_START,
                         beta_end: float = DEFAULT_BETA_END) -> DiffusionSchedule:
    if int(T) < 2:
        raise ScheduleError(f"T debe ser >= 2: {T}")
    if not (0.0 < beta_start <= beta_end < 1.0):
        raise ScheduleError(f"se requiere 0 < beta_start <= beta_end < 1 ({beta_start}, {beta_end})")
    betas = np.linspace(math.sqrt(beta_start), math.sqrt(beta_end), int(T), dtype=np.float64) ** 2
    betas[0] = beta_start
    betas[-1] = beta_end
    return DiffusionSchedule.from_betas(betas)

def rescale_zero_terminal_snr(schedule: DiffusionSchedule) -> DiffusionSchedule:
    s = schedule.sqrt_alpha_bars.astype(np.float64).copy()
    s0, sT = float(s[0]), float(s[-1])
    if not sT > 0.0:
        raise ScheduleError("el calendario ya tiene √ᾱ terminal = 0")
    if s0 - sT <= 0.0:
        raise ScheduleError("calendario degenerado: √ᾱ_0 == √ᾱ_T")
    s -= sT
    s *= s0 / (s0 - sT)
    s[-1] = 0.0
    alpha_bars = s ** 2
    alphas = np.empty_like(alpha_bars)
    alphas[0] = alpha_bars[0]
    alphas[1:-1] = alpha_bars[1:-1] / alpha_bars[:-2]
    alphas[-1] = 0.0   # evita 0/0 en el último cociente
    return DiffusionSchedule(betas=1.0 - alphas, alphas=alphas, alpha_bars=alpha_bars,
                             sqrt_alpha_bars=s, rescaled=True)

def snr(schedule: DiffusionSchedule) -> np.ndarray:
    """ᾱ/(1−ᾱ) por paso; +inf si ᾱ = 1."""
    ab = schedule.alpha_bars
    with np.errstate(divide="ignore"):
        return np.where(ab < 1.0, ab / np.where(ab < 1.0, 1.0 - ab, 1.0), np.inf)

def schedule_table(schedule: DiffusionSchedule) -> List[Dict[str, float]]:
    ratio = snr(schedule)
    return [
        {"t": t, "beta": float(schedule.betas[t]), "alpha_bar": float(schedule.alpha_bars[t]),
         "sqrt_alpha_bar": float(schedule.sqrt_alpha_bars[t]), "snr": float(ratio[t])}
        for t in range(schedule.T)
    ]
