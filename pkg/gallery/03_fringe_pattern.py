"""
Double-slit fringe pattern
==========================

Two fiber cores 125 um apart act as slits 4 um wide; the screen sits 31.5 cm
away. The fringe period is ``lambda d / w``. Unequal arm powers from a 40:60
splitter limit the contrast to ``2 sqrt(0.24)``.
"""

# %%
import math

from fringelab import BENCH_GEOMETRY, fringe_pattern, fringe_spacing, measure_fringe_spacing
from fringelab.svg import line_plot

from _common import out

g = BENCH_GEOMETRY
print(f"predicted spacing {fringe_spacing(g) * 1e3:.4f} mm")

# %%
# Coherent beams with a 40:60 power split.
p = fringe_pattern(g, math.sqrt(0.4), math.sqrt(0.6))
print(f"measured spacing {measure_fringe_spacing(p, g) * 1e3:.4f} mm, visibility {p.visibility:.4f}")
line_plot(p.x * 1e3, p.intensity, out("03_fringes.svg"),
          xlabel="screen position (mm)", ylabel="intensity", title="40:60 split")

# %%
# Partial polarisation overlap lowers the contrast proportionally.
for ov in (1.0, 0.5, 0.1):
    print(f"overlap {ov}: V = {fringe_pattern(g, 1.0, 1.0, overlap=ov).visibility:.3f}")
