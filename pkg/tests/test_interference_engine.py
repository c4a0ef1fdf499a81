import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fringelab import (
    C,
    DoubleSlitGeometry,
    ModeComb,
    PathConfig,
    comb_spectrum,
    delayed_two_beam,
    fringe_pattern,
    fringe_spacing,
    measure_fringe_spacing,
    synthesize_field,
    time_averaged_visibility,
    visibility_statistics,
)
from fringelab.coherence_analysis import coherence_at
from fringelab.errors import EmptyOverlapError
from fringelab.interference_engine import (
    instantaneous_visibility,
    read_fringe_csv,
    read_stats_csv,
    write_fringe_csv,
    write_stats_csv,
)

from conftest import DESK_L, NU0


def test_fringe_spacing_values(geometry):
    assert fringe_spacing(geometry) == pytest.approx(1.6632e-3, rel=1e-6)
    g2 = DoubleSlitGeometry(660e-9, 250e-6, 4e-6, 0.315)
    assert fringe_spacing(g2) == pytest.approx(fringe_spacing(geometry) / 2, rel=1e-15)
    assert fringe_spacing(DoubleSlitGeometry(500e-9, 1e-3, 1e-4, 1.0)) == pytest.approx(0.5e-3, rel=1e-12)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(slit_width=200e-6),
        dict(slit_width=0.0),
        dict(screen_distance=0.01),
        dict(screen_samples=8),
    ],
)
def test_geometry_invariants(kwargs):
    args = dict(wavelength=660e-9, slit_spacing=125e-6, slit_width=4e-6, screen_distance=0.315)
    args.update(kwargs)
    with pytest.raises(ValueError):
        DoubleSlitGeometry(**args)


@pytest.mark.parametrize(
    "kwargs",
    [dict(p1=5.0, p2=1.0), dict(p1=-1.0), dict(refractive_index=0.9), dict(split_ratio=0.0), dict(split_ratio=1.0)],
)
def test_path_invariants(kwargs):
    args = dict(p1=0.0, p2=1.0)
    args.update(kwargs)
    with pytest.raises(ValueError):
        PathConfig(**args)


@pytest.mark.parametrize("phase", [0.0, 0.7, math.pi])
def test_equal_beams_full_visibility(geometry, phase):
    p = fringe_pattern(geometry, 1.0, np.exp(1j * phase))
    # grid samples may straddle the exact dark fringe
    assert p.visibility == pytest.approx(1.0, abs=1e-6)
    assert np.all(p.intensity >= 0)


def test_unequal_beams_visibility(geometry):
    p = fringe_pattern(geometry, math.sqrt(0.4), math.sqrt(0.6))
    assert p.visibility == pytest.approx(2 * math.sqrt(0.24), abs=1e-4)
    assert 2 * math.sqrt(0.24) == pytest.approx(0.9798, abs=1e-4)


def test_single_beam_no_fringes(geometry):
    p = fringe_pattern(geometry, 1.0, 0.0)
    assert p.visibility < 0.01


def test_polarisation_overlap_scales_contrast(geometry):
    p = fringe_pattern(geometry, 1.0, 1.0, overlap=0.3)
    assert p.visibility == pytest.approx(0.3, abs=1e-4)


def test_measured_spacing_matches_formula(geometry):
    p = fringe_pattern(geometry, 1.0, 0.8)
    step = geometry.x[1] - geometry.x[0]
    assert abs(measure_fringe_spacing(p, geometry) - fringe_spacing(geometry)) <= step


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.05, 1.0),
    st.floats(0.0, 1.0),
    st.floats(0, 2 * math.pi),
)
def test_energy_conservation(a2, mag, phase):
    # Wide screen so the single-slit lobes are fully captured.
    g = DoubleSlitGeometry(660e-9, 125e-6, 4e-6, 0.315, screen_extent=1.0, screen_samples=40001)
    e1, e2 = 1.0, a2 * mag * np.exp(1j * phase)
    both = fringe_pattern(g, e1, e2)
    one = fringe_pattern(g, e1, 0.0)
    two = fringe_pattern(g, 0.0, e2)
    total = np.trapezoid(both.intensity, g.x)
    parts = np.trapezoid(one.intensity + two.intensity, g.x)
    assert total == pytest.approx(parts, rel=5e-3)


def test_pattern_time_window(geometry):
    t = np.arange(100) * 1e-9
    e1 = np.ones(100, dtype=complex)
    e2 = np.where(t < 50e-9, 0.0, 1.0).astype(complex)
    assert fringe_pattern(geometry, e1, e2, window=(0, 50e-9), t=t).visibility < 0.01
    late = fringe_pattern(geometry, e1, e2, window=(50e-9, 1.0), t=t)
    assert late.visibility == pytest.approx(1.0, abs=1e-9)
    assert late.window == (50e-9, 1.0)
    with pytest.raises(ValueError):
        fringe_pattern(geometry, e1, e2, window=(5.0, 6.0), t=t)


def test_fringe_csv_round_trip(tmp_path, geometry):
    p = fringe_pattern(geometry, 1.0, 0.5j)
    path = tmp_path / "f.csv"
    write_fringe_csv(p, path)
    x, i = read_fringe_csv(path)
    np.testing.assert_array_equal(x, p.x)
    np.testing.assert_array_equal(i, p.intensity)


def test_synthesis_deterministic(desk_comb):
    comb = desk_comb(5, 1e5)
    a = synthesize_field(comb, 5e-6, 5e-9, 11)
    b = synthesize_field(comb, 5e-6, 5e-9, 11)
    c = synthesize_field(comb, 5e-6, 5e-9, 12)
    assert a.samples.tobytes() == b.samples.tobytes()
    assert a.samples.tobytes() != c.samples.tobytes()


def test_single_pure_tone_constant_modulus(desk_comb):
    tr = synthesize_field(desk_comb(1, 0.0), 2e-6, 1e-9, 4)
    np.testing.assert_allclose(np.abs(tr.samples), 1.0, rtol=1e-12)


def test_synthesis_rejects_bad_sampling(desk_comb):
    comb = desk_comb(9)
    with pytest.raises(ValueError, match="sampling"):
        synthesize_field(comb, 1e-5, 1.0 / (2 * comb.span), 0)
    with pytest.raises(ValueError):
        synthesize_field(comb, 5e-9, 1e-9, 0)


def test_ensemble_periodogram_line_powers():
    # 64-sample traces whose mode offsets fall on FFT bins; linewidth well under a bin.
    n, dt = 64, 1.0 / 64 / 1e6  # bin width 1 MHz
    amps = np.array([0.5, 1.0, 2.0, 1.5])
    comb = ModeComb(NU0, C / (2 * 8e6), 4, amplitudes=amps, mode_linewidth=1e4)
    bins = np.rint(comb.offsets / 1e6).astype(int)
    assert np.allclose(comb.offsets / 1e6, bins)
    acc = np.zeros(n)
    for seed in range(1000):
        tr = synthesize_field(comb, n * dt, dt, seed)
        acc += np.abs(np.fft.fft(tr.samples)) ** 2
    acc /= 1000
    got = np.array([acc[(b + np.arange(-2, 3)) % n].sum() for b in bins])
    np.testing.assert_allclose(got / got.sum(), amps / amps.sum(), rtol=0.05)


def test_two_beam_equal_paths(desk_comb):
    tr = synthesize_field(desk_comb(3, 1e5), 5e-6, 5e-9, 1)
    b = delayed_two_beam(tr, PathConfig(10.0, 10.0, split_ratio=0.4))
    ov = b.overlap
    np.testing.assert_allclose(b.e2[ov] / b.e1[ov], math.sqrt(0.6 / 0.4), rtol=1e-12)


def test_two_beam_causality_and_rounding(desk_comb):
    tr = synthesize_field(desk_comb(3, 1e5), 20e-6, 5e-9, 1)
    paths = PathConfig(2.0, 602.0)
    b = delayed_two_beam(tr, paths)
    assert np.all(b.e2[: b.start2] == 0)
    assert np.all(b.e1[: b.start1] == 0)
    assert np.all(b.e2[b.start2 :] != 0)
    assert b.t[b.start2] == pytest.approx(1.4677 * 602.0 / C, abs=2.5e-9)
    assert abs(b.rounding) <= 5e-9
    assert len(list(b)) == tr.samples.size


def test_two_beam_power_ratio(desk_comb):
    tr = synthesize_field(desk_comb(5, 1e5), 200e-6, 5e-9, 3)
    b = delayed_two_beam(tr, PathConfig.from_optical_delay(600.0, split_ratio=0.4))
    ov = b.overlap
    ratio = np.mean(np.abs(b.e1[ov]) ** 2) / np.mean(np.abs(b.e2[ov]) ** 2)
    assert ratio == pytest.approx(0.4 / 0.6, rel=0.01)


def test_two_beam_empty_overlap(desk_comb):
    tr = synthesize_field(desk_comb(1), 1e-6, 5e-9, 0)
    with pytest.raises(EmptyOverlapError):
        delayed_two_beam(tr, PathConfig(0.0, 1000.0))


def test_time_averaged_zero_delay(desk_comb, geometry):
    est = time_averaged_visibility(desk_comb(5, 1e5), PathConfig(1.0, 1.0), geometry, 20e-6, 5e-9, 4)
    assert est.mean == pytest.approx(2 * math.sqrt(0.24), abs=1e-9)
    assert len(est.values) == 4


def test_time_averaged_off_revival_incoherent(desk_comb, geometry):
    # 600 m of fiber, 1 MHz lines: per-mode coherence exp(-pi*lw*tau) ~ 1e-4.
    comb = desk_comb(5, 1e6)
    paths = PathConfig(2.0, 602.0)
    est = time_averaged_visibility(comb, paths, geometry, 100e-6, 5e-9, 10)
    assert est.mean < 0.1


def test_time_averaged_tracks_coherence(desk_comb, geometry):
    comb = desk_comb(3, 2e5)
    dt = 5e-9
    for steps in (7, 33, 140):
        paths = PathConfig.from_optical_delay(steps * dt * C, split_ratio=0.5)
        est = time_averaged_visibility(comb, paths, geometry, 100e-6, dt, 30)
        gamma = abs(coherence_at(comb_spectrum(comb), [steps * dt])[0])
        assert est.mean == pytest.approx(gamma, abs=0.03)


def test_statistics_pure_tone(desk_comb, geometry):
    st_ = visibility_statistics(desk_comb(1, 0.0), PathConfig(2.0, 602.0), geometry, duration=20e-6, n_seeds=3)
    assert st_.occurrence_probability == 1.0
    assert st_.stderr == 0.0
    assert st_.n_trials == 3


def test_statistics_threshold_above_bound(desk_comb, geometry):
    paths = PathConfig(2.0, 602.0)
    st_ = visibility_statistics(
        desk_comb(5, 1e5), paths, geometry, threshold=paths.max_visibility + 0.01, duration=20e-6, n_seeds=3
    )
    assert st_.occurrence_probability == 0.0
    assert st_.mean_duration == 0.0


def test_statistics_validation(desk_comb, geometry):
    paths = PathConfig(2.0, 602.0)
    with pytest.raises(ValueError):
        visibility_statistics(desk_comb(1), paths, geometry, threshold=1.5)
    with pytest.raises(ValueError):
        visibility_statistics(desk_comb(1), paths, geometry, window=1e-9, dt=2.5e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 9), st.floats(0.0, 1e6), st.floats(0.1, 0.9), st.integers(0, 10_000))
def test_instantaneous_visibility_bound(n_modes, lw, r, seed):
    comb = ModeComb(NU0, DESK_L, n_modes, mode_linewidth=lw)
    tr = synthesize_field(comb, 30e-6, 2.5e-9, seed)
    b = delayed_two_beam(tr, PathConfig(2.0, 602.0, split_ratio=r))
    v = instantaneous_visibility(b, 400)
    assert v.max() <= 2 * math.sqrt(r * (1 - r)) + 0.01


def test_stats_csv_round_trip(tmp_path, desk_comb, geometry):
    rows = [
        visibility_statistics(desk_comb(n, 1e5), PathConfig(2.0, 602.0), geometry, duration=10e-6, n_seeds=2)
        for n in (1, 3)
    ]
    p = tmp_path / "s.csv"
    write_stats_csv(rows, p)
    back = read_stats_csv(p)
    assert back == [(s.n_modes, s.occurrence_probability, s.mean_duration, s.stderr) for s in rows]
