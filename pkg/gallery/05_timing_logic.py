"""
Detector timing logic
=====================

A switch turns the laser on for 20 us. Light reaches the screen through the
short arm first, then through the 600 m arm. A detector on a bright fringe
and one on a dark fringe feed AND and XOR gates. AND marks the single-beam
windows, whose length is the arm delay. XOR marks the time fringes exist.
"""

# %%
from fringelab import PathConfig, RunSchedule, propagation_delays, simulate_run
from fringelab.svg import step_plot
from fringelab.timing_logic import measure_delta_t, measure_interference_duration

from _common import out

paths = PathConfig(2.0, 602.0, refractive_index=1.4677)
print(f"delta_t = {propagation_delays(paths).delta_t * 1e6:.4f} us")

# %%
trace = simulate_run(RunSchedule(0.0, 20e-6, paths))
for e in trace.events:
    print(f"t = {float(e.t) * 1e6:9.4f} us  D1={e.d1} D2={e.d2}  AND={e.and_out} XOR={e.xor_out}")
print("AND windows (us):", [round(v * 1e6, 4) for v in measure_delta_t(trace)])
print(f"XOR total: {measure_interference_duration(trace) * 1e6:.4f} us")
step_plot([float(e.t) * 1e6 for e in trace.events], [e.xor_out + 2 * e.and_out for e in trace.events],
          out("05_gates.svg"), xlabel="time (us)", ylabel="2*AND + XOR", title="gate outputs")

# %%
# A switch-on time shorter than delta_t: the beams never meet.
short = simulate_run(RunSchedule(0.0, 1e-6, paths))
print(f"degenerate: {short.degenerate}, XOR total {measure_interference_duration(short)}")
