"""
Spectra and coherence length
============================

A Gaussian line of FWHM ``dnu`` has fringe visibility
``V = exp(-(pi tau dnu)^2 / (4 ln 2))``. This script builds such a line for
a 660 nm diode, transforms it numerically, and compares the result with the
closed form. It also prints the two coherence-length conventions side by side.
"""

# %%
# Build the spectrum on a grid that covers six linewidths each side.
import numpy as np

from fringelab import C, coherence_from_spectrum, coherence_length_from_wavelength, gaussian_spectrum, gaussian_visibility
from fringelab.spectral_model import frequency_grid, linewidth_nm_to_hz
from fringelab.svg import line_plot

from _common import out

lam, dlam = 660e-9, 1.5e-9
nu0 = C / lam
fwhm = linewidth_nm_to_hz(lam, dlam)
spec = gaussian_spectrum(nu0, fwhm, 1.0, frequency_grid(nu0, 6 * fwhm, 1 << 14))
print(f"dnu = {fwhm:.4g} Hz for dlambda = {dlam * 1e9} nm")

# %%
# Numerical transform against the closed form.
cf = coherence_from_spectrum(spec, 3 / fwhm, 301)
err = np.max(np.abs(cf.modulus - gaussian_visibility(cf.tau, fwhm)))
print(f"max |numerical - closed form| = {err:.2e}")
line_plot(cf.delta_l * 1e6, cf.modulus, out("01_gaussian_coherence.svg"),
          xlabel="path difference (um)", ylabel="|gamma|", title="Gaussian line, 1.5 nm")

# %%
# Coherence length with and without the 0.624 prefactor.
for d in (1.5e-9, 0.23e-9):
    lc = coherence_length_from_wavelength(lam, d)
    print(f"dlambda = {d * 1e9:.2f} nm: 0.624 c/dnu = {lc.prefactored * 1e6:7.1f} um, "
          f"lambda^2/dlambda = {lc.unprefactored * 1e6:7.1f} um")
