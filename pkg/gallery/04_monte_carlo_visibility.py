"""
Monte-Carlo fields with drifting phases
=======================================

Each mode carries a random-walk phase, which gives it a Lorentzian line.
Averaging fringe patterns over many realisations should reproduce the
coherence modulus computed from the spectrum. Short windows can still show
bright fringes when the long-time average does not.
"""

# %%
import numpy as np

from fringelab import (
    C,
    BENCH_GEOMETRY,
    ModeComb,
    PathConfig,
    coherence_at,
    comb_spectrum,
    delayed_two_beam,
    synthesize_field,
    time_averaged_visibility,
    visibility_statistics,
)
from fringelab.interference_engine import instantaneous_visibility
from fringelab.svg import line_plot

from _common import out

L = C / (2 * 10e6)  # 10 MHz spacing keeps traces short
dt = 5e-9
comb = ModeComb(C / 660e-9, L, 5, mode_linewidth=1e5)

# %%
# Ensemble visibility against |gamma| at a few delays on the sample grid.
for steps in (3, 20, 100, 300):
    paths = PathConfig.from_optical_delay(steps * dt * C, split_ratio=0.5)
    est = time_averaged_visibility(comb, paths, BENCH_GEOMETRY, 100e-6, dt, 30)
    g = abs(coherence_at(comb_spectrum(comb), [steps * dt])[0])
    print(f"delay {steps * dt * 1e9:6.0f} ns: simulated {est.mean:.3f} +- {est.stderr:.3f}, |gamma| {g:.3f}")

# %%
# One realisation behind 600 m of fiber: the visibility wanders over time.
paths = PathConfig(2.0, 602.0, split_ratio=0.4)
beams = delayed_two_beam(synthesize_field(comb, 60e-6, 2.5e-9, 1), paths)
v = instantaneous_visibility(beams, 400)
line_plot(np.arange(v.size) * 2.5e-3, v, out("04_instantaneous_visibility.svg"),
          xlabel="time (us)", ylabel="visibility in 1 us window", title="N = 5, 600 m")

# %%
# Occurrence of V > 0.5 in 1 us windows against the number of modes.
for n in (1, 2, 3, 5, 9):
    s = visibility_statistics(ModeComb(C / 660e-9, L, n, mode_linewidth=1e5), paths, BENCH_GEOMETRY, n_seeds=10)
    print(f"N = {n}: P = {s.occurrence_probability:.3f} +- {s.stderr:.3f}, mean run {s.mean_duration * 1e6:.2f} us")
