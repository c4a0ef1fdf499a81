"""First-order coherence: closed forms and the spectrum-to-coherence transform.

Sign convention throughout the package: the coherence at delay ``tau`` is
``sum P(nu) exp(+2j*pi*nu*tau) / sum P(nu)``, so ``gamma(0) == 1`` by
construction.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import C
from .spectral_model import ModeComb, PowerSpectrum

# Prefactor in the quoted coherence-length formula l_c = 0.624 c / dnu.
COHERENCE_PREFACTOR = 0.624

VISIBILITY_CSV_HEADER = ("delta_l_m", "visibility")

_CHUNK = 1 << 22


@dataclass(frozen=True, eq=False)
class CoherenceFunction:
    """Complex degree of coherence sampled on a uniform delay grid starting at 0."""

    tau: np.ndarray
    gamma: np.ndarray
    source: str = ""

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.gamma)

    @property
    def delta_l(self) -> np.ndarray:
        """Vacuum path difference ``c * tau`` (m)."""
        return C * self.tau


def _line_factor(tau, fwhm, lineshape):
    # Transform of a unit-area line centred at zero.
    if lineshape == "gaussian":
        return np.exp(-((np.pi * tau * fwhm) ** 2) / (4.0 * math.log(2.0)))
    return np.exp(-np.pi * fwhm * np.abs(tau))


def _coherence_lines(s: PowerSpectrum, tau):
    ref = s.centroid()
    off = s.freq - ref
    fwhm = np.zeros_like(s.freq) if s.fwhm is None else s.fwhm
    total = s.power.sum()
    gamma = np.empty(tau.shape, dtype=complex)
    step = max(1, _CHUNK // off.size)
    for a in range(0, tau.size, step):
        t = tau[a : a + step, None]
        terms = s.power * _line_factor(t, fwhm, s.lineshape) * np.exp(2j * np.pi * off * t)
        gamma[a : a + step] = terms.sum(axis=1) / total
    return gamma * np.exp(2j * np.pi * ref * tau)


def _coherence_sampled(s: PowerSpectrum, tau):
    # Trapezoid-weighted direct transform; works on non-uniform grids too.
    x = s.freq
    w = np.empty_like(x)
    dx = np.diff(x)
    w[0], w[-1] = dx[0] / 2, dx[-1] / 2
    w[1:-1] = (dx[:-1] + dx[1:]) / 2
    weights = s.power * w
    total = weights.sum()
    ref = x[np.argmax(s.power)]
    off = x - ref
    gamma = np.empty(tau.shape, dtype=complex)
    step = max(1, _CHUNK // off.size)
    for a in range(0, tau.size, step):
        t = tau[a : a + step, None]
        gamma[a : a + step] = (weights * np.exp(2j * np.pi * off * t)).sum(axis=1) / total
    return gamma * np.exp(2j * np.pi * ref * tau)


def coherence_at(s: PowerSpectrum, tau) -> np.ndarray:
    """Complex degree of coherence of ``s`` at arbitrary delays ``tau`` (s)."""
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if not s.total_power() > 0:
        raise ValueError("spectrum has zero total power")
    if s.is_sampled:
        return _coherence_sampled(s, tau)
    return _coherence_lines(s, tau)


def coherence_from_spectrum(s: PowerSpectrum, tau_max: float, n_tau: int) -> CoherenceFunction:
    """Normalised field autocorrelation on ``n_tau`` uniform delays in ``[0, tau_max]``.

    Line lists are transformed in closed form (finite sum with per-line
    envelope); sampled spectra by direct numerical quadrature.
    """
    if not tau_max > 0:
        raise ValueError("tau_max must be > 0")
    if n_tau < 2:
        raise ValueError("n_tau must be >= 2")
    tau = np.linspace(0.0, tau_max, n_tau)
    gamma = coherence_at(s, tau)
    gamma[0] = 1.0
    return CoherenceFunction(tau, gamma, source=f"{s.kind} spectrum, {s.freq.size} points")


def gaussian_visibility(tau, fwhm: float):
    """Fringe visibility for a Gaussian line of FWHM ``fwhm`` (Hz) at delay ``tau`` (s)."""
    if not fwhm > 0:
        raise ValueError(f"fwhm must be > 0, got {fwhm}")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be >= 0")
    v = np.exp(-((np.pi * tau * fwhm) ** 2) / (4.0 * math.log(2.0)))
    return float(v) if v.ndim == 0 else v


class CoherenceLength(NamedTuple):
    """Both readings of the Gaussian coherence length (m)."""

    prefactored: float  # 0.624 * lambda**2 / dlambda
    unprefactored: float  # lambda**2 / dlambda


def coherence_length_gaussian(fwhm_hz: float) -> CoherenceLength:
    """Coherence length from a linewidth in Hz."""
    if not fwhm_hz > 0:
        raise ValueError(f"fwhm_hz must be > 0, got {fwhm_hz}")
    base = C / fwhm_hz
    return CoherenceLength(COHERENCE_PREFACTOR * base, base)


def coherence_length_from_wavelength(wavelength: float, dlambda: float) -> CoherenceLength:
    """Coherence length from centre wavelength and linewidth, both in metres."""
    if not (wavelength > 0 and dlambda > 0):
        raise ValueError("wavelength and dlambda must be > 0")
    base = wavelength**2 / dlambda
    return CoherenceLength(COHERENCE_PREFACTOR * base, base)


_SINGULAR = 1e-12


def comb_coherence_modulus(delta_l, N: int, k: int, L: float):
    """Coherence modulus of an N-mode equal-power comb at path difference ``delta_l``.

    ``|sin(k N pi dl / 2L) / (N sin(k pi dl / 2L))|``, with the removable
    singularity at multiples of ``2L/k`` taken as its limit.
    """
    if N < 1 or k < 1 or not L > 0:
        raise ValueError("need N >= 1, k >= 1, L > 0")
    dl = np.asarray(delta_l, dtype=float)
    if np.any(dl < 0):
        raise ValueError("delta_l must be >= 0")
    # Reduce to one period first: keeps the sines accurate for large dl.
    u = np.mod(k * dl / (2.0 * L), 1.0)
    den = N * np.sin(np.pi * u)
    num = np.sin(N * np.pi * u)
    near = np.abs(den) < _SINGULAR * N
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(np.where(near, 1.0, num / np.where(near, 1.0, den)))
    if np.any(near):
        # Limit of sin(N x)/(N sin x) as x -> m*pi is (+-1); near u ~ 1 use u - 1.
        uu = np.where(u > 0.5, u - 1.0, u)
        lim = np.abs(np.cos(N * np.pi * uu))  # exact 1 at the revival, smooth nearby
        out = np.where(near, lim, out)
    out = np.minimum(out, 1.0)
    return float(out) if out.ndim == 0 else out


def comb_coherence_bruteforce(delta_l, comb: ModeComb) -> np.ndarray:
    """Direct sum over the comb lines, ``|sum p_n exp(2j pi nu_n dl / c)| / sum p_n``.

    Independent of :func:`comb_coherence_modulus`; used as its oracle.
    """
    dl = np.atleast_1d(np.asarray(delta_l, dtype=float))
    tau = dl / C
    phases = np.exp(2j * np.pi * np.outer(tau, comb.offsets))
    return np.abs(phases @ comb.powers) / comb.powers.sum()


@dataclass(frozen=True, eq=False)
class VisibilityCurve:
    delta_l: np.ndarray
    visibility: np.ndarray
    label: str = ""


def visibility_curve(spec, delta_l_range, n_points: int) -> VisibilityCurve:
    """Tabulate visibility against path difference.

    ``spec`` is ``("gaussian", fwhm_hz)``, ``("comb", N, k, L)``, a
    :class:`ModeComb` (equal-power closed form) or a :class:`PowerSpectrum`
    (numerical transform). ``delta_l_range`` is ``(start, stop)`` in metres.
    """
    lo, hi = (float(v) for v in delta_l_range)
    if not hi > lo or lo < 0:
        raise ValueError("delta_l range must satisfy 0 <= start < stop")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    dl = np.linspace(lo, hi, n_points)
    if isinstance(spec, PowerSpectrum):
        v = np.abs(coherence_at(spec, dl / C))
        label = f"{spec.kind} spectrum"
    elif isinstance(spec, ModeComb):
        v = comb_coherence_modulus(dl, spec.n_modes, spec.k, spec.cavity_length)
        label = f"comb N={spec.n_modes}"
    elif spec[0] == "gaussian":
        v = gaussian_visibility(dl / C, spec[1])
        label = f"gaussian fwhm={spec[1]:g} Hz"
    elif spec[0] == "comb":
        _, N, k, L = spec
        v = comb_coherence_modulus(dl, N, k, L)
        label = f"comb N={N} k={k} L={L:g} m"
    else:
        raise ValueError(f"unrecognised curve spec {spec!r}")
    return VisibilityCurve(dl, np.minimum(np.asarray(v, dtype=float), 1.0), label)


def write_visibility_csv(curve: VisibilityCurve, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(VISIBILITY_CSV_HEADER)
        for x, v in zip(curve.delta_l, curve.visibility):
            w.writerow((repr(float(x)), repr(float(v))))


def read_visibility_csv(path) -> VisibilityCurve:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != VISIBILITY_CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(VISIBILITY_CSV_HEADER)}")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    return VisibilityCurve(data[:, 0], data[:, 1])
