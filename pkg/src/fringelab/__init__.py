"""Desk-scale simulator for double-slit interference with a multi-mode laser diode and unequal fiber arms."""

from .coherence_analysis import (
    CoherenceFunction,
    coherence_at,
    coherence_from_spectrum,
    coherence_length_from_wavelength,
    coherence_length_gaussian,
    comb_coherence_bruteforce,
    comb_coherence_modulus,
    gaussian_visibility,
    visibility_curve,
)
from .config import RunConfig, parse_config
from .constants import C
from .interference_engine import (
    BENCH_GEOMETRY,
    DoubleSlitGeometry,
    FieldTrace,
    FringePattern,
    PathConfig,
    VisibilityStats,
    delayed_two_beam,
    fringe_pattern,
    fringe_spacing,
    measure_fringe_spacing,
    synthesize_field,
    time_averaged_visibility,
    visibility_statistics,
)
from .spectral_model import (
    ModeComb,
    PowerSpectrum,
    comb_spectrum,
    envelope_linewidth,
    gaussian_spectrum,
    load_spectrum_csv,
    mode_spacing,
)
from .timing_logic import (
    LogicTrace,
    RunSchedule,
    measure_delta_t,
    measure_interference_duration,
    propagation_delays,
    simulate_run,
)

__version__ = "0.1.0"
