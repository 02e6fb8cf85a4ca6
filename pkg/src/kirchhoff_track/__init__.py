"""Born-model scattering frames, zero-diagonal Kirchhoff imaging and tracking
for circular microwave arrays."""

from .errors import (ConfigError, DomainError, IngestError, KirchhoffTrackError, MetricError,
                     NumericError, ShapeError, SingularityError)
from .forward import (Scatterer, ScatteringFrame, Scene, Trajectory, born_matrix, born_s_parameter,
                      contrast, incident_field, position_at, synthesize_frames, validate_scene)
from .geometry import (AntennaArray, ImagingGrid, build_disk_grid, uniform_circular_array,
                       validate_far_condition)
from .imaging import (Imager, ImagingMap, SteeringVector, imaging_map, imaging_value,
                      imaging_value_full, steering_vector)
from .oracle import (StructureParams, array_phase_sum, compare_engine_oracle, e_factor,
                     on_target_magnitude, structure_value)
from .scenario import (PRESETS, Scenario, TrackerParams, default_scenario, load_scenario,
                       run_tracking, sweep_antennas)
from .tracking import Peak, Track, associate, extract_peaks, localization_rmse
from .wavecore import (BackgroundMedium, Wavenumber, bessel_j, bessel_j_orders, complex_wavenumber,
                       hankel1_0, hankel_farfield)

__version__ = "0.1.0"
