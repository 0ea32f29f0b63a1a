# src/texproject/__init__.py
from .texels import TexelMaps, read_texel_cache, write_texel_cache
from .views import ViewSet
from .projection import CandidateSet, project_views, cull_silhouette, silhouette_keep
from .selection import select_texels, view_priority

__all__ = [
    "TexelMaps", "read_texel_cache", "write_texel_cache", "ViewSet", "CandidateSet",
    "project_views", "cull_silhouette", "silhouette_keep", "select_texels", "view_priority",
]
