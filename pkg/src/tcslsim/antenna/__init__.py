"""Antenna pattern toolkit: storage, synthesis, cut reconstruction, file I/O."""

from .ant3d import (
    ANT3D_FORMAT_VERSION,
    Ant3dFormatError,
    FieldGrid,
    read_ant3d,
    to_field_components,
    write_ant3d,
)
from .cuts import CutPlane, PlaneCut, read_plane_cut_csv, reconstruct_from_cuts
from .pattern import (
    AntennaPattern,
    OrientedPattern,
    Polarization,
    apply_orientation,
    isotropic_pattern,
    local_from_global_matrix,
    make_grids,
    normalize_to_4pi,
    spherical_integral,
)
from .threegpp import (
    ThreeGppParams,
    element_attenuation_db,
    horizontal_attenuation_db,
    horn_pattern,
    synthesize_3gpp,
    vertical_attenuation_db,
)

__all__ = [
    "ANT3D_FORMAT_VERSION",
    "Ant3dFormatError",
    "AntennaPattern",
    "CutPlane",
    "FieldGrid",
    "OrientedPattern",
    "PlaneCut",
    "Polarization",
    "ThreeGppParams",
    "apply_orientation",
    "element_attenuation_db",
    "horizontal_attenuation_db",
    "horn_pattern",
    "isotropic_pattern",
    "local_from_global_matrix",
    "make_grids",
    "normalize_to_4pi",
    "read_ant3d",
    "read_plane_cut_csv",
    "reconstruct_from_cuts",
    "spherical_integral",
    "synthesize_3gpp",
    "to_field_components",
    "vertical_attenuation_db",
    "write_ant3d",
]
