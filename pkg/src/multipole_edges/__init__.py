"""Dipole and quadrupole moment maps of gray-tone images, used as edge detectors."""

from .core import (
    Bitmap,
    ConfigError,
    DipoleField,
    DipoleVector,
    PipelineConfig,
    QuadrupoleField,
    QuadrupoleTensor,
    ScalarField,
    pixel_coordinates,
)
from .moments import (
    WindowSpec,
    charge_map,
    fast_moment_fields,
    global_dipole,
    global_quadrupole,
    local_dipole_field,
    local_mean,
    local_mean_map,
    local_quadrupole_field,
    naive_moment_fields,
    resolve_window,
)
from .pgm import PgmError, read_pgm, write_pgm
from .pipeline import EdgeResult, detect_edges, dipole_magnitude_map, quadrupole_det_map, tone_map

__version__ = "0.1.0"
