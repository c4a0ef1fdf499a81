"""Time-domain multi-mode fields, the two-arm delay line and double-slit fringes.

The field is a complex baseband envelope relative to the comb centre
frequency. Each mode carries an independent Wiener phase walk, so every
line is Lorentzian with FWHM equal to the comb's ``mode_linewidth``. The
arm-to-arm carrier phase ``exp(-2j*pi*nu0*delay)`` is applied exactly, while
the envelope delay is rounded to whole samples.

Each fiber arm feeds one slit. Screen intensities are computed in the
Fraunhofer small-angle limit.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.signal import find_peaks

from .constants import C
from .errors import EmptyOverlapError
from .spectral_model import ModeComb

FRINGE_CSV_HEADER = ("x_m", "intensity")
STATS_CSV_HEADER = ("N", "occurrence_probability", "mean_duration_s", "stderr")


@dataclass(frozen=True)
class DoubleSlitGeometry:
    """Double-slit and screen layout, all lengths in metres.

    ``screen_extent`` is the full width of the sampled screen, centred on
    the optical axis.
    """

    wavelength: float
    slit_spacing: float
    slit_width: float
    screen_distance: float
    screen_extent: float = 0.06
    screen_samples: int = 4001

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError("wavelength must be > 0")
        if not 0 < self.slit_width < self.slit_spacing:
            raise ValueError("need 0 < slit_width < slit_spacing")
        if not self.screen_distance >= 100 * self.slit_spacing:
            raise ValueError("screen_distance must be at least 100 * slit_spacing")
        if not self.screen_extent > 0:
            raise ValueError("screen_extent must be > 0")
        if self.screen_samples < 16:
            raise ValueError("screen_samples must be >= 16")

    @property
    def x(self) -> np.ndarray:
        half = 0.5 * self.screen_extent
        return np.linspace(-half, half, self.screen_samples)

    @property
    def lobe_halfwidth(self) -> float:
        """Half-width of the region used for visibility, ``lambda d / (2 a)``."""
        return self.wavelength * self.screen_distance / (2.0 * self.slit_width)

    def envelope(self, x=None) -> np.ndarray:
        """Single-slit intensity envelope ``sinc**2``, unit at the axis."""
        x = self.x if x is None else np.asarray(x, dtype=float)
        # np.sinc(z) = sin(pi z)/(pi z)
        return np.sinc(self.slit_width * x / (self.wavelength * self.screen_distance)) ** 2

    def phase_difference(self, x=None) -> np.ndarray:
        """Optical phase of slit 1 minus slit 2 at screen position ``x``.

        Slit 1 sits at ``+w/2``, slit 2 at ``-w/2``.
        """
        x = self.x if x is None else np.asarray(x, dtype=float)
        return -2.0 * np.pi * self.slit_spacing * x / (self.wavelength * self.screen_distance)


BENCH_GEOMETRY = DoubleSlitGeometry(
    wavelength=660e-9,
    slit_spacing=125e-6,
    slit_width=4e-6,
    screen_distance=0.315,
)


@dataclass(frozen=True)
class PathConfig:
    """Short and long fiber arms behind a splitter sending ``split_ratio`` of the power into ``p1``."""

    p1: float
    p2: float
    refractive_index: float = 1.4677
    split_ratio: float = 0.4

    def __post_init__(self):
        if not 0 <= self.p1 <= self.p2:
            raise ValueError("need 0 <= p1 <= p2")
        if not self.refractive_index >= 1:
            raise ValueError("refractive_index must be >= 1")
        if not 0 < self.split_ratio < 1:
            raise ValueError("split_ratio must be in (0, 1)")

    @classmethod
    def from_optical_delay(cls, delta_l: float, refractive_index: float = 1.4677, split_ratio: float = 0.4):
        """Arms with ``p1 = 0`` and an optical path difference ``n (p2 - p1) = delta_l``."""
        return cls(0.0, delta_l / refractive_index, refractive_index, split_ratio)

    @property
    def delay(self) -> float:
        """Arm-to-arm group delay ``n (p2 - p1) / c`` (s)."""
        return self.refractive_index * (self.p2 - self.p1) / C

    @property
    def optical_path_difference(self) -> float:
        return self.refractive_index * (self.p2 - self.p1)

    @property
    def max_visibility(self) -> float:
        """Splitter-limited contrast ``2 sqrt(r (1 - r))``."""
        r = self.split_ratio
        return 2.0 * math.sqrt(r * (1.0 - r))


@dataclass(frozen=True, eq=False)
class FieldTrace:
    dt: float
    samples: np.ndarray
    comb: ModeComb
    seed: int

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.samples.size) * self.dt

    @property
    def duration(self) -> float:
        return self.samples.size * self.dt


@dataclass(frozen=True, eq=False)
class FringePattern:
    x: np.ndarray
    intensity: np.ndarray
    visibility: float
    window: Tuple[float, float]
    envelope: Optional[np.ndarray] = None


@dataclass(frozen=True)
class VisibilityStats:
    threshold: float
    occurrence_probability: float
    mean_duration: float
    n_trials: int
    window: float
    stderr: float = 0.0
    n_modes: int = 0


def fringe_spacing(geometry: DoubleSlitGeometry) -> float:
    """Expected fringe period ``lambda d / w`` on the screen (m)."""
    return geometry.wavelength * geometry.screen_distance / geometry.slit_spacing


def _check_nyquist(comb: ModeComb, dt: float):
    if comb.span > 0 and not dt < 1.0 / (2.0 * comb.span):
        raise ValueError(
            f"dt={dt:g} s violates the sampling limit 1/(2*span) = {1.0 / (2.0 * comb.span):g} s"
        )


def synthesize_field(comb: ModeComb, duration: float, dt: float, seed: int) -> FieldTrace:
    """Draw one realisation of the comb's field envelope.

    Deterministic in ``seed``. Initial mode phases are uniform; each phase
    then diffuses with variance ``2 pi * linewidth * dt`` per step.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    _check_nyquist(comb, dt)
    if not duration >= 10 * dt:
        raise ValueError("duration must be at least 10 * dt")
    n = int(round(duration / dt))
    rng = np.random.default_rng(seed)
    phi0 = rng.uniform(0.0, 2.0 * np.pi, comb.n_modes)
    t = np.arange(n) * dt
    out = np.zeros(n, dtype=complex)
    sigma = math.sqrt(2.0 * math.pi * comb.mode_linewidth * dt)
    for j in range(comb.n_modes):
        if sigma > 0:
            steps = rng.normal(0.0, sigma, n)
            steps[0] = 0.0
            walk = np.cumsum(steps)
        else:
            walk = 0.0
        phase = 2.0 * np.pi * comb.offsets[j] * t + phi0[j] + walk
        out += math.sqrt(comb.powers[j]) * np.exp(1j * phase)
    out.setflags(write=False)
    return FieldTrace(dt=dt, samples=out, comb=comb, seed=seed)


@dataclass(frozen=True, eq=False)
class TwoBeam:
    """Slit amplitudes ``e1(t)``, ``e2(t)`` behind the delay line.

    ``start1``/``start2`` are the sample indices where each arm's light
    first reaches the slits; ``rounding`` is the difference between the
    realised and exact arm-to-arm delay.
    """

    t: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    start1: int
    start2: int
    delay: float
    rounding: float

    def __iter__(self):
        return zip(self.t, self.e1, self.e2)

    @property
    def overlap(self) -> slice:
        """Samples where both beams are present."""
        return slice(max(self.start1, self.start2), self.t.size)


def delayed_two_beam(trace: FieldTrace, paths: PathConfig) -> TwoBeam:
    """Split ``trace`` into the two arms and delay each by ``n p / c``."""
    dt = trace.dt
    tau1 = paths.refractive_index * paths.p1 / C
    s1 = int(round(tau1 / dt))
    s2 = s1 + int(round(paths.delay / dt))
    n = trace.samples.size
    if s2 >= n:
        raise EmptyOverlapError(
            f"trace of {n * dt:g} s never sees the long arm (delay {paths.delay:g} s)"
        )
    r = paths.split_ratio
    e1 = np.zeros(n, dtype=complex)
    e2 = np.zeros(n, dtype=complex)
    e1[s1:] = math.sqrt(r) * trace.samples[: n - s1]
    # Carrier phase of the extra delay, reduced modulo one cycle before exponentiating.
    cycles = math.fmod(trace.comb.nu0 * paths.delay, 1.0)
    e2[s2:] = math.sqrt(1.0 - r) * np.exp(-2j * np.pi * cycles) * trace.samples[: n - s2]
    return TwoBeam(
        t=trace.t,
        e1=e1,
        e2=e2,
        start1=s1,
        start2=s2,
        delay=paths.delay,
        rounding=(s2 - s1) * dt - paths.delay,
    )


def _contrast(I, env, geometry, x):
    lobe = np.abs(x) < geometry.lobe_halfwidth
    if not np.any(lobe):
        lobe = np.ones_like(x, dtype=bool)
    norm = I[lobe] / env[lobe]
    hi, lo = norm.max(), norm.min()
    if hi + lo <= 0:
        return 0.0
    return float((hi - lo) / (hi + lo))


def fringe_pattern(
    geometry: DoubleSlitGeometry,
    e1,
    e2,
    window: Optional[Tuple[float, float]] = None,
    t=None,
    overlap: float = 1.0,
) -> FringePattern:
    """Screen intensity from slit amplitudes ``e1`` and ``e2``.

    ``e1``/``e2`` are complex scalars (a fixed pair of amplitudes) or
    equal-length sample arrays; arrays are averaged over ``window``
    (``(t_start, t_end)`` with sample times ``t``) or over all samples.
    ``overlap`` scales the interference term (polarisation overlap).

    The reported visibility is the contrast of the intensity divided by the
    single-slit envelope, taken over ``|x| < lambda d / (2 a)``.
    """
    if not 0 <= overlap <= 1:
        raise ValueError("overlap must be in [0, 1]")
    e1 = np.atleast_1d(np.asarray(e1, dtype=complex))
    e2 = np.atleast_1d(np.asarray(e2, dtype=complex))
    if e1.shape != e2.shape:
        raise ValueError("e1 and e2 must have the same shape")
    if window is not None:
        if t is None:
            raise ValueError("window needs the sample times t")
        t = np.asarray(t, dtype=float)
        sel = (t >= window[0]) & (t < window[1])
        if not np.any(sel):
            raise ValueError("averaging window contains no samples")
        e1, e2 = e1[sel], e2[sel]
    else:
        window = (0.0, 0.0) if t is None else (float(t[0]), float(t[-1]))
    s11 = np.mean(np.abs(e1) ** 2)
    s22 = np.mean(np.abs(e2) ** 2)
    s12 = np.mean(e1 * np.conj(e2))
    x = geometry.x
    env = geometry.envelope(x)
    cross = 2.0 * overlap * np.real(s12 * np.exp(1j * geometry.phase_difference(x)))
    I = np.maximum(env * (s11 + s22 + cross), 0.0)
    return FringePattern(x=x, intensity=I, visibility=_contrast(I, env, geometry, x), window=window, envelope=env)


def measure_fringe_spacing(pattern: FringePattern, geometry: DoubleSlitGeometry) -> float:
    """Mean peak-to-peak distance of the fringes inside the central lobe."""
    x = pattern.x
    env = pattern.envelope if pattern.envelope is not None else geometry.envelope(x)
    lobe = np.abs(x) < geometry.lobe_halfwidth
    xs = x[lobe]
    norm = pattern.intensity[lobe] / env[lobe]
    # Prominence filter drops grid-level ripples when the fringes are faint.
    peaks, _ = find_peaks(norm, prominence=1e-6 * norm.max())
    if peaks.size < 2:
        raise ValueError("fewer than two fringe maxima in the central lobe")
    return float((xs[peaks[-1]] - xs[peaks[0]]) / (peaks.size - 1))


def write_fringe_csv(pattern: FringePattern, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FRINGE_CSV_HEADER)
        for x, i in zip(pattern.x, pattern.intensity):
            w.writerow((repr(float(x)), repr(float(i))))


def read_fringe_csv(path) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(x, intensity)`` from a fringe CSV."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != FRINGE_CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(FRINGE_CSV_HEADER)}")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    return data[:, 0], data[:, 1]


@dataclass(frozen=True)
class VisibilityEstimate:
    mean: float
    stderr: float
    values: Tuple[float, ...]


def _seed_list(seed: int, n_seeds: int):
    return [seed + i for i in range(n_seeds)]


def time_averaged_visibility(
    comb: ModeComb,
    paths: PathConfig,
    geometry: DoubleSlitGeometry,
    duration: float,
    dt: float,
    n_seeds: int,
    seed: int = 0,
    overlap: float = 1.0,
) -> VisibilityEstimate:
    """Visibility of the pattern averaged over the whole two-beam interval.

    One field realisation per seed (``seed, seed + 1, ...``); returns the
    ensemble mean and its standard error.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    vals = []
    for s in _seed_list(seed, n_seeds):
        beams = delayed_two_beam(synthesize_field(comb, duration, dt, s), paths)
        ov = beams.overlap
        pat = fringe_pattern(geometry, beams.e1[ov], beams.e2[ov], overlap=overlap)
        vals.append(pat.visibility)
    v = np.array(vals)
    err = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
    return VisibilityEstimate(float(v.mean()), err, tuple(float(a) for a in v))


def instantaneous_visibility(beams: TwoBeam, window_samples: int, overlap: float = 1.0) -> np.ndarray:
    """Fringe contrast on every sliding window of ``window_samples`` within the two-beam interval.

    Uses the continuous-screen contrast ``2 |<e1 e2*>| / (<|e1|^2> + <|e2|^2>)``,
    which is what :func:`fringe_pattern` converges to as the screen grid is
    refined.
    """
    ov = beams.overlap
    e1, e2 = beams.e1[ov], beams.e2[ov]
    if e1.size < window_samples:
        raise EmptyOverlapError("two-beam interval is shorter than the detection window")

    def wsum(a):
        c = np.concatenate(([0], np.cumsum(a)))
        return c[window_samples:] - c[:-window_samples]

    s11 = wsum(np.abs(e1) ** 2)
    s22 = wsum(np.abs(e2) ** 2)
    s12 = wsum(e1 * np.conj(e2))
    den = s11 + s22
    with np.errstate(invalid="ignore", divide="ignore"):
        v = np.where(den > 0, 2.0 * overlap * np.abs(s12) / den, 0.0)
    return v


def _runs(mask: np.ndarray) -> np.ndarray:
    """Lengths of the maximal runs of True in ``mask``."""
    if not mask.any():
        return np.zeros(0, dtype=int)
    d = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts = np.nonzero(d == 1)[0]
    ends = np.nonzero(d == -1)[0]
    return ends - starts


def visibility_statistics(
    comb: ModeComb,
    paths: PathConfig,
    geometry: DoubleSlitGeometry,
    threshold: float = 0.5,
    window: float = 1e-6,
    duration: float = 50e-6,
    dt: float = 2.5e-9,
    n_seeds: int = 20,
    seed: int = 0,
    overlap: float = 1.0,
) -> VisibilityStats:
    """How often, and for how long, short-window fringes exceed ``threshold``.

    Per seed, the instantaneous visibility is evaluated on a window sliding
    one sample at a time across the two-beam interval. The occurrence
    probability is the fraction of window positions at or above
    ``threshold`` (mean over seeds, with its standard error); the mean
    duration pools every above-threshold run from every seed. Runs cut by
    the ends of the trace are counted as they are.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must be in (0, 1)")
    if not window >= 10 * dt:
        raise ValueError("window must be at least 10 * dt")
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    del geometry  # contrast is evaluated in the continuous-screen limit
    w = int(round(window / dt))
    probs, run_lengths = [], []
    for s in _seed_list(seed, n_seeds):
        beams = delayed_two_beam(synthesize_field(comb, duration, dt, s), paths)
        above = instantaneous_visibility(beams, w, overlap) >= threshold
        probs.append(above.mean())
        run_lengths.append(_runs(above))
    p = np.array(probs)
    runs = np.concatenate(run_lengths)
    mean_dur = float(runs.mean() * dt) if runs.size else 0.0
    err = float(p.std(ddof=1) / math.sqrt(p.size)) if p.size > 1 else 0.0
    return VisibilityStats(
        threshold=threshold,
        occurrence_probability=float(p.mean()),
        mean_duration=mean_dur,
        n_trials=n_seeds,
        window=w * dt,
        stderr=err,
        n_modes=comb.n_modes,
    )


def write_stats_csv(stats, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATS_CSV_HEADER)
        for s in stats:
            w.writerow((s.n_modes, repr(s.occurrence_probability), repr(s.mean_duration), repr(s.stderr)))


def read_stats_csv(path):
    """Return a list of ``(N, occurrence_probability, mean_duration_s, stderr)`` rows."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != STATS_CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(STATS_CSV_HEADER)}")
    return [(int(a), float(b), float(c), float(d)) for a, b, c, d in rows[1:]]
