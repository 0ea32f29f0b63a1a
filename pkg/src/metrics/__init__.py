# src/metrics/__init__.py
from .sampling import PointCloudSample, sample_surface
from .chamfer import chamfer_distance, chamfer_from_points
from .image_metrics import ssim, psnr_mse, INFINITE_PSNR
from .losses import mask_bce, recon_loss, ReconLoss

__all__ = [
    "PointCloudSample", "sample_surface", "chamfer_distance", "chamfer_from_points",
    "ssim", "psnr_mse", "INFINITE_PSNR", "mask_bce", "recon_loss", "ReconLoss",
]
