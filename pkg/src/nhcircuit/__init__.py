"""Non-Hermitian two-qubit circuit model: spectra, exceptional points, dynamics, nonreciprocity."""

from .config import RunConfig, load_config, parse_config
from .dynamics import EvolveSpec, TrajectoryState, evolve, propagator, steady_populations, trajectory_arrays
from .eplocator import (
    DegeneracyKind,
    DegeneracyLocus,
    eigenvector_angle,
    find_degeneracies_1d,
    find_ep_2d,
)
from .model import (
    CircuitParams,
    DriveParams,
    EffectiveModel,
    coupler_mediated_ge,
    derive_effective_model,
    lambda_from_drive,
    sweep_ge_via_coupler,
)
from .nonreciprocity import DirectionalCoupling, asymmetry_dynamics, directional_coupling, nonrecip_map
from .oracle import FullModel, ReductionReport, adiabatic_elimination, build_full_model, compare_reduction
from .spectrum import SpectrumGrid, SpectrumPoint, discriminant, eigenmodes, scan_2d, track_branches
from .sweep import SweepAxis

__version__ = "0.1.0"
