# src/isosurface/__init__.py
from .grid import SdfGrid, sample_grid, box_grid_spec, check_domain
from .scenes import AnalyticScene, FIXTURES, fixture
from .marching_tets import marching_tetrahedra
from .atlas import generate_uv_atlas
from .bake import bake_coarse_texture
from .sdfg_io import read_sdfg, write_sdfg

__all__ = [
    "SdfGrid", "sample_grid", "box_grid_spec", "check_domain", "AnalyticScene", "FIXTURES", "fixture",
    "marching_tetrahedra", "generate_uv_atlas", "bake_coarse_texture", "read_sdfg", "write_sdfg",
]
