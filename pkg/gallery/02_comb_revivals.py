"""
Coherence revivals of a mode comb
=================================

A laser with ``N`` equal longitudinal modes spaced ``k c / 2L`` has a coherence
modulus that collapses within ``2L / (kN)`` and comes back to 1 every ``2L / k``.
More modes give narrower revival peaks but never remove the revivals.
"""

# %%
import numpy as np

from fringelab import ModeComb, comb_coherence_bruteforce, comb_coherence_modulus, visibility_curve
from fringelab.constants import C
from fringelab.svg import line_plot

from _common import out

L = 300e-6  # a typical diode cavity
period = 2 * L

# %%
# Closed form against an explicit sum over the modes.
comb = ModeComb(C / 660e-9, L, 7)
dl = np.linspace(0, 3 * period, 2001)
gap = np.max(np.abs(comb_coherence_modulus(dl, 7, 1, L) - comb_coherence_bruteforce(dl, comb)))
print(f"closed form vs mode sum: max difference {gap:.1e}")

# %%
# Peak width shrinks with N; revivals stay at multiples of 2L.
for n in (2, 3, 5, 9):
    curve = visibility_curve(("comb", n, 1, L), (0, 3 * period), 2001)
    above = np.mean(curve.visibility > 0.5)
    print(f"N = {n}: fraction of path differences with V > 0.5 is {above:.3f}")
    line_plot(curve.delta_l * 1e3, curve.visibility, out(f"02_comb_N{n}.svg"),
              xlabel="path difference (mm)", ylabel="visibility", title=f"N = {n}")
