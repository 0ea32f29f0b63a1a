# src/blend/__init__.py
from .problem import BlendProblem, build_problem, assemble_matrix
from .solver import BlendResult, BlendStats, solve, blend, blend_texture

__all__ = ["BlendProblem", "build_problem", "assemble_matrix", "BlendResult", "BlendStats",
           "solve", "blend", "blend_texture"]
