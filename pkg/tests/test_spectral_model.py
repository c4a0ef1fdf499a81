import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fringelab import C, ModeComb, PowerSpectrum, comb_spectrum, envelope_linewidth, gaussian_spectrum, mode_spacing
from fringelab.errors import (
    EstimationError,
    InsufficientDataError,
    NegativePowerError,
    SpectrumFormatError,
)
from fringelab.spectral_model import (
    frequency_grid,
    gaussian_line,
    linewidth_nm_to_hz,
    load_spectrum_csv,
    write_spectrum_csv,
)

NU0 = C / 660e-9
FWHM = 1e12


def test_gaussian_peak_and_half_power():
    grid = frequency_grid(NU0, 6 * FWHM, 4097)  # odd count puts nu0 on the grid
    s = gaussian_spectrum(NU0, FWHM, 2.5, grid)
    assert s.power[2048] == 2.5
    half = gaussian_line([NU0 - FWHM / 2, NU0 + FWHM / 2], NU0, FWHM, 2.5)
    np.testing.assert_allclose(half, 1.25, rtol=1e-14)


@given(st.floats(0, 5 * FWHM))
def test_gaussian_even(delta):
    a, b = gaussian_line([NU0 + delta, NU0 - delta], NU0, FWHM)
    assert a == pytest.approx(b, rel=1e-12, abs=1e-300)


def test_gaussian_integral():
    # Closed-form area of a peak-normalised Gaussian with this FWHM.
    grid = frequency_grid(NU0, 6 * FWHM, 4096)
    s = gaussian_spectrum(NU0, FWHM, 3.0, grid)
    expected = 3.0 * FWHM * math.sqrt(math.pi / (4 * math.log(2)))
    assert s.total_power() == pytest.approx(expected, rel=1e-3)


@pytest.mark.parametrize(
    "kwargs, msg",
    [
        (dict(fwhm=0.0), "fwhm"),
        (dict(fwhm=-1.0), "fwhm"),
        (dict(grid=frequency_grid(NU0 + 20 * FWHM, 6 * FWHM, 64)), "nu0"),
        (dict(grid=frequency_grid(NU0, 2 * FWHM, 64)), "3"),
    ],
)
def test_gaussian_spectrum_rejects(kwargs, msg):
    args = dict(nu0=NU0, fwhm=FWHM, p0=1.0, grid=frequency_grid(NU0, 6 * FWHM, 64))
    args.update(kwargs)
    with pytest.raises(ValueError, match=msg):
        gaussian_spectrum(**args)


def test_mode_spacing_values():
    # quoted to the last printed digit
    assert mode_spacing(300e-6) == pytest.approx(499.654e9, abs=0.5e6)
    assert mode_spacing(1.0, 2) == pytest.approx(299.792e6, abs=0.5e3)
    assert mode_spacing(2 * 300e-6) == pytest.approx(mode_spacing(300e-6) / 2, rel=1e-15)
    with pytest.raises(ValueError):
        mode_spacing(0.0)
    with pytest.raises(ValueError):
        mode_spacing(-1.0)


def test_comb_single_mode():
    s = comb_spectrum(ModeComb(NU0, 300e-6, 1))
    assert s.kind == "line-list"
    np.testing.assert_array_equal(s.freq, [NU0])


def test_comb_odd_and_even_positions():
    L = 300e-6
    dq = C / (2 * L)
    s3 = comb_spectrum(ModeComb(NU0, L, 3))
    np.testing.assert_allclose(s3.freq, [NU0 - dq, NU0, NU0 + dq], rtol=1e-15)
    np.testing.assert_array_equal(s3.power, [1.0, 1.0, 1.0])
    s2 = comb_spectrum(ModeComb(NU0, L, 2))
    np.testing.assert_allclose(s2.freq, [NU0 - C / (4 * L), NU0 + C / (4 * L)], rtol=1e-15)


def test_comb_copies_linewidth_and_amplitudes():
    s = comb_spectrum(ModeComb(NU0, 1e-3, 3, amplitudes=[1, 2, 3], mode_linewidth=5e6, lineshape="gaussian"))
    np.testing.assert_array_equal(s.power, [1, 2, 3])
    np.testing.assert_array_equal(s.fwhm, [5e6] * 3)
    assert s.lineshape == "gaussian"


@pytest.mark.parametrize("n", range(1, 65))
def test_comb_line_count_and_symmetry(n):
    s = comb_spectrum(ModeComb(NU0, 250e-6, n, k=2))
    assert s.freq.size == n
    np.testing.assert_allclose((s.freq - NU0) + (s.freq - NU0)[::-1], 0.0, atol=1e-3 * mode_spacing(250e-6))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_modes=0),
        dict(k=0),
        dict(cavity_length=0.0),
        dict(amplitudes=[1.0, 1.0]),
        dict(amplitudes=[0.0, 0.0, 0.0]),
        dict(amplitudes=[1.0, -1.0, 1.0]),
        dict(mode_linewidth=-1.0),
    ],
)
def test_mode_comb_invariants(kwargs):
    args = dict(nu0=NU0, cavity_length=1e-3, n_modes=3)
    args.update(kwargs)
    with pytest.raises(ValueError):
        ModeComb(**args)


def test_power_spectrum_invariants():
    with pytest.raises(NegativePowerError):
        PowerSpectrum.sampled([1.0, 2.0], [1.0, -1.0])
    with pytest.raises(ValueError):
        PowerSpectrum.sampled([2.0, 1.0], [1.0, 1.0])
    with pytest.raises(InsufficientDataError):
        PowerSpectrum.sampled([1.0], [1.0])
    with pytest.raises(ValueError):
        PowerSpectrum.line_list([1.0, 1.0], [1.0, 1.0])


def _write(tmp_path, text, name="s.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_csv_converts_and_sorts(tmp_path):
    p = _write(tmp_path, "wavelength_nm,power\n660.0,1.0\n661.0,0.5\n659.0,0.25\n")
    s = load_spectrum_csv(p)
    assert s.freq.size == 3
    assert np.all(np.diff(s.freq) > 0)
    assert s.freq[1] == pytest.approx(454.231e12, rel=1e-6)
    # shortest wavelength -> highest frequency
    np.testing.assert_array_equal(s.power, [0.5, 1.0, 0.25])


def test_load_csv_two_rows(tmp_path):
    s = load_spectrum_csv(_write(tmp_path, "wavelength_nm,power\n660,1\n661,2\n"))
    assert s.freq.size == 2


def test_load_csv_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_spectrum_csv(tmp_path / "missing.csv")
    with pytest.raises(NegativePowerError):
        load_spectrum_csv(_write(tmp_path, "wavelength_nm,power\n660,1\n661,-0.1\n"))
    with pytest.raises(SpectrumFormatError):
        load_spectrum_csv(_write(tmp_path, "wavelength_nm,power\n660,abc\n661,1\n"))
    with pytest.raises(InsufficientDataError):
        load_spectrum_csv(_write(tmp_path, "wavelength_nm,power\n660,1\n"))
    with pytest.raises(SpectrumFormatError):
        load_spectrum_csv(_write(tmp_path, "lambda,p\n660,1\n661,1\n"))


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(400.0, 1700.0), st.floats(0.0, 1e6)),
        min_size=2,
        max_size=30,
        unique_by=lambda r: r[0],
    )
)
def test_csv_round_trip(tmp_path_factory, rows):
    d = tmp_path_factory.mktemp("rt")
    src = d / "in.csv"
    src.write_text("wavelength_nm,power\n" + "".join(f"{a!r},{b!r}\n" for a, b in rows), encoding="utf-8")
    s = load_spectrum_csv(src)
    write_spectrum_csv(s, d / "out.csv")
    s2 = load_spectrum_csv(d / "out.csv")
    np.testing.assert_array_equal(s2.freq, s.freq)
    np.testing.assert_array_equal(s2.power, s.power)
    assert (d / "out.csv").read_bytes() == _rewrite(d / "out.csv", d / "again.csv")


def _rewrite(src, dst):
    write_spectrum_csv(load_spectrum_csv(src), dst)
    return dst.read_bytes()


@pytest.mark.parametrize("n", [1024, 4096, 16385])
def test_envelope_linewidth_recovers_gaussian(n):
    grid = frequency_grid(NU0, 6 * FWHM, n)
    w = envelope_linewidth(gaussian_spectrum(NU0, FWHM, 1.0, grid))
    step = grid[1] - grid[0]
    assert abs(w.fwhm_hz - FWHM) <= step
    assert w.center_hz == pytest.approx(NU0, rel=1e-12)
    assert w.fwhm_m == pytest.approx((C / NU0) ** 2 * w.fwhm_hz / C)


def test_envelope_linewidth_failures():
    grid = np.linspace(1.0, 2.0, 50)
    single = np.zeros(50)
    single[25] = 1.0
    with pytest.raises(EstimationError):
        envelope_linewidth(PowerSpectrum.sampled(grid, single))
    with pytest.raises(EstimationError):
        envelope_linewidth(PowerSpectrum.sampled(grid, np.ones(50)))
    with pytest.raises(EstimationError):
        envelope_linewidth(PowerSpectrum.sampled(grid, grid))


def resolved_mode_spectrum(env_nm=1.5, spacing_nm=0.25, line_nm=0.05, n=20001):
    """Resolved modes under a Gaussian envelope, built in wavelength like a measured trace."""
    lam0 = 660.0
    lam = np.linspace(lam0 - 3, lam0 + 3, n)
    centres = lam0 + spacing_nm * np.arange(-12, 13)
    p = np.zeros_like(lam)
    for c in centres:
        env = math.exp(-4 * math.log(2) * ((c - lam0) / env_nm) ** 2)
        p += env * np.exp(-4 * math.log(2) * ((lam - c) / line_nm) ** 2)
    freq = C / (lam * 1e-9)
    return PowerSpectrum.sampled(freq[::-1], p[::-1])


def test_envelope_linewidth_multimode():
    w = envelope_linewidth(resolved_mode_spectrum())
    assert w.fwhm_m * 1e9 == pytest.approx(1.5, rel=0.05)


def test_sampling_line_list():
    s = PowerSpectrum.line_list([0.0, 10.0], [1.0, 2.0], fwhm=1.0)
    grid = np.linspace(-20, 30, 5001)
    assert s.sample(grid).total_power() == pytest.approx(3.0, rel=1e-4)
    with pytest.raises(ValueError):
        PowerSpectrum.line_list([0.0], [1.0]).sample(grid)


def test_linewidth_conversion():
    assert linewidth_nm_to_hz(660e-9, 1.5e-9) == pytest.approx(C * 1.5e-9 / 660e-9**2)
