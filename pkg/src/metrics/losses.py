# src/metrics/losses.py
from __future__ import annotations
from typing import NamedTuple, Optional
import numpy as np

from core.errors import InputError, ResolutionMismatchError

BCE_EPS = 1e-7
W_MSE = 1.0
W_MASK = 0.1
W_LPIPS = 0.5

def mask_bce(alpha_pred: np.ndarray, alpha_true: np.ndarray) -> float:
    p = np.asarray(alpha_pred, dtype=np.float64)
    y = np.asarray(alpha_true, dtype=np.float64)
    if p.shape != y.shape:
        raise ResolutionMismatchError(f"máscaras de distinta resolución: {p.shape} vs {y.shape}")
    p = np.clip(p, BCE_EPS, 1.0 - BCE_EPS)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))

class ReconLoss(NamedTuple):
    total: float
    lpips_omitted: bool

def recon_loss(mse: float, mask_bce_val: float, lpips_val: Optional[float] = None) -> ReconLoss:
    """1·mse + 0.1·bce + 0.5·lpips; sin LPIPS el término vale 0 y se marca la omisión."""
    terms = [mse, mask_bce_val] + ([] if lpips_val is None else [lpips_val])
    if any(v < 0 for v in terms):
        raise InputError("recon_loss requiere términos no negativos")
    total = W_MSE * mse + W_MASK * mask_bce_val + (W_LPIPS * lpips_val if lpips_val is not None else 0.0)
    return ReconLoss(total=float(total), lpips_omitted=lpips_val is None)
