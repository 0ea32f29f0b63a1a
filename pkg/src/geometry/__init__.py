from .mesh import Mesh, empty_mesh, transform_mesh, rotation_matrix
from .camera import Camera, camera_from_orbit, orbit_rig, CANONICAL_AZIMUTHS
from .processing import normalize_to_unit_box, compute_vertex_normals, laplacian_smooth

__all__ = [
    "Mesh",
    "empty_mesh",
    "transform_mesh",
    "rotation_matrix",
    "Camera",
    "camera_from_orbit",
    "orbit_rig",
    "CANONICAL_AZIMUTHS",
    "normalize_to_unit_box",
    "compute_vertex_normals",
    "laplacian_smooth",
]
