"""Laser power spectra: Gaussian lines, multi-mode combs and measured CSV data.

Everything lives in the frequency domain (Hz). A spectrum is either *sampled*
(a density on a strictly increasing grid) or a *line list* (discrete lines,
each with a power and an optional width). Both kinds are accepted by
:mod:`fringelab.coherence_analysis`.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from .constants import C
from .errors import (
    EstimationError,
    InsufficientDataError,
    NegativePowerError,
    SpectrumFormatError,
)

LINESHAPES = ("gaussian", "lorentzian")

SPECTRUM_CSV_HEADER = ("wavelength_nm", "power")


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PowerSpectrum:
    """Optical power spectrum, sampled or as a list of lines.

    Build one with :meth:`sampled` or :meth:`line_list` rather than calling
    the constructor directly.

    For ``kind == "sampled"``, ``freq`` is the grid and ``power`` the density.
    For ``kind == "line-list"``, ``freq``/``power`` are line positions and
    powers and ``fwhm`` holds per-line widths (zero for ideal delta lines),
    all sharing one ``lineshape``.
    """

    kind: str
    freq: np.ndarray
    power: np.ndarray
    fwhm: Optional[np.ndarray] = None
    lineshape: str = "gaussian"

    def __post_init__(self):
        if self.kind not in ("sampled", "line-list"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        if self.lineshape not in LINESHAPES:
            raise ValueError(f"lineshape must be one of {LINESHAPES}, got {self.lineshape!r}")
        freq, power = self.freq, self.power
        if freq.ndim != 1 or freq.shape != power.shape:
            raise ValueError("freq and power must be 1-D arrays of equal length")
        if not (np.all(np.isfinite(freq)) and np.all(np.isfinite(power))):
            raise ValueError("spectrum contains non-finite values")
        if np.any(power < 0):
            raise NegativePowerError("spectral powers must be >= 0")
        if self.kind == "sampled":
            if freq.size < 2:
                raise InsufficientDataError("a sampled spectrum needs at least 2 samples")
            if np.any(np.diff(freq) <= 0):
                raise ValueError("frequency grid must be strictly increasing")
        else:
            if freq.size < 1:
                raise InsufficientDataError("a line list needs at least one line")
            if np.unique(freq).size != freq.size:
                raise ValueError("line frequencies must be pairwise distinct")
            if self.fwhm is not None and (
                self.fwhm.shape != freq.shape or np.any(self.fwhm < 0)
            ):
                raise ValueError("per-line fwhm must match the lines and be >= 0")

    @classmethod
    def sampled(cls, freq, density) -> "PowerSpectrum":
        return cls("sampled", _frozen(freq), _frozen(density))

    @classmethod
    def line_list(cls, freq, power, fwhm=None, lineshape: str = "gaussian") -> "PowerSpectrum":
        fw = None if fwhm is None else _frozen(np.broadcast_to(fwhm, np.shape(freq)))
        return cls("line-list", _frozen(freq), _frozen(power), fw, lineshape)

    @property
    def is_sampled(self) -> bool:
        return self.kind == "sampled"

    def total_power(self) -> float:
        if self.is_sampled:
            return float(np.trapezoid(self.power, self.freq))
        return float(self.power.sum())

    def centroid(self) -> float:
        """Power-weighted mean frequency (Hz)."""
        if self.is_sampled:
            w = self.power * np.gradient(self.freq)
        else:
            w = self.power
        if w.sum() <= 0:
            raise ValueError("spectrum has zero total power")
        return float(np.sum(w * self.freq) / np.sum(w))

    def sample(self, grid) -> "PowerSpectrum":
        """Render onto a frequency grid. Line lists need nonzero widths."""
        grid = np.asarray(grid, dtype=float)
        if self.is_sampled:
            return PowerSpectrum.sampled(grid, np.interp(grid, self.freq, self.power, left=0.0, right=0.0))
        if self.fwhm is None or np.any(self.fwhm <= 0):
            raise ValueError("cannot sample delta lines; give every line a positive fwhm")
        density = np.zeros_like(grid)
        for f, p, w in zip(self.freq, self.power, self.fwhm):
            density += p * _unit_area_line(grid - f, w, self.lineshape)
        return PowerSpectrum.sampled(grid, density)


def _unit_area_line(offset, fwhm, lineshape):
    if lineshape == "gaussian":
        sigma = fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))
        return np.exp(-0.5 * (offset / sigma) ** 2) / (sigma * math.sqrt(2.0 * math.pi))
    hw = 0.5 * fwhm
    return hw / (math.pi * (offset**2 + hw**2))


@dataclass(frozen=True, eq=False)
class ModeComb:
    """Parametric N-mode Fabry-Perot laser.

    Mode ``n`` sits at ``nu0 + n * k * c / (2 L)`` with ``n`` running over
    integers (odd ``n_modes``) or half-integers (even ``n_modes``) symmetric
    about zero. ``amplitudes`` are per-mode powers; ``None`` means uniform
    unit power. ``mode_linewidth`` is the FWHM of every line in Hz.
    """

    nu0: float
    cavity_length: float
    n_modes: int
    k: int = 1
    amplitudes: Optional[Sequence[float]] = None
    mode_linewidth: float = 0.0
    lineshape: str = "lorentzian"
    _amps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_modes < 1 or int(self.n_modes) != self.n_modes:
            raise ValueError("n_modes must be a positive integer")
        if self.k < 1 or int(self.k) != self.k:
            raise ValueError("k must be a positive integer")
        if not self.cavity_length > 0:
            raise ValueError("cavity_length must be > 0")
        if not self.nu0 > 0:
            raise ValueError("nu0 must be > 0")
        if self.mode_linewidth < 0:
            raise ValueError("mode_linewidth must be >= 0")
        if self.lineshape not in LINESHAPES:
            raise ValueError(f"lineshape must be one of {LINESHAPES}")
        if self.amplitudes is None:
            amps = np.ones(self.n_modes)
        else:
            amps = np.asarray(self.amplitudes, dtype=float)
            if amps.shape != (self.n_modes,):
                raise ValueError(f"amplitudes must have exactly {self.n_modes} entries")
            if np.any(amps < 0) or not np.any(amps > 0):
                raise ValueError("amplitudes must be >= 0 and not all zero")
        object.__setattr__(self, "_amps", _frozen(amps))

    @property
    def powers(self) -> np.ndarray:
        return self._amps

    @property
    def spacing(self) -> float:
        """Frequency step between adjacent lasing modes, k*c/(2L)."""
        return mode_spacing(self.cavity_length, self.k)

    @property
    def mode_indices(self) -> np.ndarray:
        """Symmetric mode indices: integers for odd N, half-integers for even N."""
        return np.arange(self.n_modes) - (self.n_modes - 1) / 2.0

    @property
    def offsets(self) -> np.ndarray:
        """Mode frequencies relative to ``nu0`` (Hz)."""
        return self.mode_indices * self.spacing

    @property
    def frequencies(self) -> np.ndarray:
        return self.nu0 + self.offsets

    @property
    def span(self) -> float:
        """Distance between the outermost modes (Hz)."""
        return (self.n_modes - 1) * self.spacing


def mode_spacing(L: float, k: int = 1) -> float:
    """Longitudinal mode spacing ``k * c / (2 L)`` in Hz."""
    if not L > 0:
        raise ValueError(f"cavity length must be > 0, got {L}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return k * C / (2.0 * L)


def gaussian_line(nu, nu0: float, fwhm: float, p0: float = 1.0):
    """Peak-normalised Gaussian line, ``p0`` at ``nu0`` and half power at ``nu0 +- fwhm/2``."""
    x = 2.0 * math.sqrt(math.log(2.0)) * (np.asarray(nu, dtype=float) - nu0) / fwhm
    return p0 * np.exp(-(x**2))


def gaussian_spectrum(nu0: float, fwhm: float, p0: float, grid) -> PowerSpectrum:
    """Sample a single-mode Gaussian line on ``grid``.

    The grid has to reach at least three linewidths either side of ``nu0``.
    """
    if not fwhm > 0:
        raise ValueError(f"fwhm must be > 0, got {fwhm}")
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid must be a 1-D array with at least 2 points")
    if not grid[0] <= nu0 <= grid[-1]:
        raise ValueError("grid does not contain nu0")
    if grid[0] > nu0 - 3 * fwhm or grid[-1] < nu0 + 3 * fwhm:
        raise ValueError("grid must cover at least nu0 +- 3*fwhm")
    return PowerSpectrum.sampled(grid, gaussian_line(grid, nu0, fwhm, p0))


def frequency_grid(center: float, half_width: float, n: int) -> np.ndarray:
    """Uniform grid of ``n`` points on ``[center - half_width, center + half_width]``."""
    return center + np.linspace(-half_width, half_width, n)


def comb_spectrum(comb: ModeComb) -> PowerSpectrum:
    """Line list with one line per lasing mode of ``comb``."""
    return PowerSpectrum.line_list(
        comb.frequencies,
        comb.powers,
        fwhm=comb.mode_linewidth,
        lineshape=comb.lineshape,
    )


def wavelength_to_frequency(wavelength_m):
    return C / np.asarray(wavelength_m, dtype=float)


def linewidth_nm_to_hz(wavelength_m: float, dlambda_m: float) -> float:
    """Small-bandwidth conversion ``dnu = c * dlambda / lambda**2``."""
    return C * dlambda_m / wavelength_m**2


def load_spectrum_csv(path) -> PowerSpectrum:
    """Read a ``wavelength_nm,power`` CSV into a sampled spectrum.

    Rows may come in any order; the result is sorted by ascending frequency.
    Powers are taken as-is (no Jacobian reweighting from wavelength to
    frequency).
    """
    if not os.path.exists(path):
        raise FileNotFoundError(path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise InsufficientDataError(f"{path}: empty file")
    header = tuple(c.strip() for c in rows[0])
    if header != SPECTRUM_CSV_HEADER:
        raise SpectrumFormatError(f"{path}: expected header {','.join(SPECTRUM_CSV_HEADER)}, got {','.join(header)}")
    wl, pw = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise SpectrumFormatError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            lam, p = float(row[0]), float(row[1])
        except ValueError:
            raise SpectrumFormatError(f"{path}:{lineno}: non-numeric cell in {row!r}") from None
        if not (math.isfinite(lam) and math.isfinite(p)) or lam <= 0:
            raise SpectrumFormatError(f"{path}:{lineno}: wavelength must be finite and > 0")
        if p < 0:
            raise NegativePowerError(f"{path}:{lineno}: negative power {p}")
        wl.append(lam)
        pw.append(p)
    if len(wl) < 2:
        raise InsufficientDataError(f"{path}: need at least 2 data rows, got {len(wl)}")
    freq = _NM_HZ / np.array(wl)
    order = np.argsort(freq)
    return PowerSpectrum.sampled(freq[order], np.array(pw)[order])


# c in nm*Hz; exactly representable, so nm <-> Hz is a single rounded division.
_NM_HZ = C * 1e9


def _nm_for(freq: np.ndarray) -> np.ndarray:
    """Wavelengths (nm) converting back to exactly ``freq`` where such a float exists, else the closest."""
    lam = _NM_HZ / freq
    cands = [lam]
    for direction in (np.inf, -np.inf):
        c = lam
        for _ in range(2):
            c = np.nextafter(c, direction)
            cands.append(c)
    cands = np.array(cands)
    err = np.abs(_NM_HZ / cands - freq)
    return cands[np.argmin(err, axis=0), np.arange(freq.size)]


def write_spectrum_csv(spectrum: PowerSpectrum, path) -> None:
    """Write ``spectrum`` as ``wavelength_nm,power`` rows in ascending wavelength.

    Line lists are written one row per line.
    """
    lam_nm = _nm_for(spectrum.freq)
    order = np.argsort(lam_nm)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SPECTRUM_CSV_HEADER)
        for i in order:
            w.writerow((repr(float(lam_nm[i])), repr(float(spectrum.power[i]))))


@dataclass(frozen=True)
class Linewidth:
    """Result of :func:`envelope_linewidth`."""

    fwhm_hz: float
    center_hz: float
    left_hz: float
    right_hz: float

    @property
    def center_wavelength(self) -> float:
        return C / self.center_hz

    @property
    def fwhm_m(self) -> float:
        """Wavelength-equivalent width ``lambda**2 * dnu / c`` at the centroid."""
        return self.center_wavelength**2 * self.fwhm_hz / C


def _half_crossings(x, y):
    peak = int(np.argmax(y))
    half = 0.5 * y[peak]
    below = y < half
    left = np.nonzero(below[:peak])[0]
    right = np.nonzero(below[peak:])[0]
    if half <= 0 or left.size == 0 or right.size == 0:
        raise EstimationError("spectrum has no half-power crossing on both sides of its maximum")
    i = left[-1]
    j = peak + right[0]
    xl = x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])
    xr = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return xl, xr


def envelope_linewidth(s: PowerSpectrum) -> Linewidth:
    """FWHM of the spectral envelope of a sampled spectrum.

    When the spectrum resolves several longitudinal modes, the envelope is
    the piecewise-linear curve through the modal peaks; otherwise the
    density itself is used. Half-power points are found by linear
    interpolation.
    """
    if not s.is_sampled:
        raise ValueError("envelope_linewidth needs a sampled spectrum")
    x, y = s.freq, s.power
    if np.count_nonzero(y) < 2:
        raise EstimationError("need at least two nonzero samples")
    peaks, _ = find_peaks(y)
    if peaks.size >= 3:
        # Pin the envelope to the outer samples so the half-power crossings stay bracketed.
        idx = np.unique(np.concatenate(([0], peaks, [y.size - 1])))
        env = np.interp(x, x[idx], y[idx])
    else:
        env = y
    left, right = _half_crossings(x, env)
    return Linewidth(fwhm_hz=float(right - left), center_hz=s.centroid(), left_hz=float(left), right_hz=float(right))
