# src/schedmath/latents.py
"""
Conversiones de la parametrización v y pérdida multivista.

  x_t = √ᾱ·x0 + √(1−ᾱ)·ε
  v   = √ᾱ·ε − √(1−ᾱ)·x0
  ε   = √ᾱ·v + √(1−ᾱ)·x_t
  x0  = √ᾱ·x_t − √(1−ᾱ)·v
"""
from __future__ import annotations
from dataclasses import dataclass
from typing import Optional, Tuple, Union
import numpy as np

from core.errors import InputError, ShapeMismatchError
from .schedule import DiffusionSchedule

@dataclass(frozen=True, eq=False)
class LatentSample:
    """Valores planos con su forma lógica (B,4,N,D) como metadato opaco."""
    values: np.ndarray
    layout: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise InputError("LatentSample con valores no finitos")
        object.__setattr__(self, "values", v)
        if self.layout is not None:
            layout = tuple(int(d) for d in self.layout)
            if int(np.prod(layout)) != v.size:
                raise ShapeMismatchError(f"layout {layout} no corresponde a {v.size} valores")
            object.__setattr__(self, "layout", layout)

    @staticmethod
    def of(array) -> "LatentSample":
        a = np.asarray(array, dtype=np.float64)
        return LatentSample(values=a.reshape(-1), layout=a.shape)

    def like(self, values: np.ndarray) -> "LatentSample":
        return LatentSample(values=values, layout=self.layout)

    def as_array(self) -> np.ndarray:
        return self.values.reshape(self.layout) if self.layout is not None else self.values

    def __len__(self) -> int:
        return self.values.size

Latent = Union[LatentSample, np.ndarray]

def _sample(x: Latent) -> LatentSample:
    return x if isinstance(x, LatentSample) else LatentSample.of(x)

def _pair(a: Latent, b: Latent) -> Tuple[LatentSample, LatentSample]:
    a, b = _sample(a), _sample(b)
    if a.values.size != b.values.size or (a.layout and b.layout and a.layout != b.layout):
        raise ShapeMismatchError(f"formas incompatibles: {a.layout or a.values.size} vs {b.layout or b.values.size}")
    return a, b

def add_noise(x0: Latent, eps: Latent, t: int, schedule: DiffusionSchedule) -> LatentSample:
    x0, eps = _pair(x0, eps)
    a, s = schedule.coefficients(t)
    return x0.like(a * x0.values + s * eps.values)

def v_target(x0: Latent, eps: Latent, t: int, schedule: DiffusionSchedule) -> LatentSample:
    x0, eps = _pair(x0, eps)
    a, s = schedule.coefficients(t)
    return x0.like(a * eps.values - s * x0.values)

def v_to_epsilon(v: Latent, x_t: Latent, t: int, schedule: DiffusionSchedule) -> LatentSample:
    v, x_t = _pair(v, x_t)
    a, s = schedule.coefficients(t)
    return v.like(a * v.values + s * x_t.values)

def v_to_x0(v: Latent, x_t: Latent, t: int, schedule: DiffusionSchedule) -> LatentSample:
    v, x_t = _pair(v, x_t)
    a, s = schedule.coefficients(t)
    return v.like(a * x_t.values - s * v.values)

def loss_4v(eps_true: Latent, eps_pred: Latent) -> float:
    """Error cuadrático medio sobre todos los elementos."""
    a, b = _pair(eps_true, eps_pred)
    if a.values.size == 0:
        return 0.0
    d = a.values - b.values
    return float(np.mean(d * d))
