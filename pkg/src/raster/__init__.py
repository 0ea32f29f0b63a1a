# src/raster/__init__.py
from .coverage import Fragments, triangle_fragments, resolve_nearest
from .gbuffer import GBuffer
from .image import Image, pad_gutters, sample_bilinear, sample_uv, read_png, write_png
from .rasterizer import rasterize, render_textured, render_shaded
from .uv_raster import rasterize_uv_space

__all__ = [
    "Fragments", "triangle_fragments", "resolve_nearest", "GBuffer", "Image",
    "pad_gutters", "sample_bilinear", "sample_uv", "read_png", "write_png",
    "rasterize", "render_textured", "render_shaded", "rasterize_uv_space",
]
