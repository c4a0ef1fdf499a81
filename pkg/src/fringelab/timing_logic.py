"""Event-driven model of the switch / detector / gate chain.

A source switch K gates the laser between ``t_on`` and ``t_off``. Light
reaches the slits through the short arm after ``t0 + t1`` and through the
long arm after ``t0 + t2``. Two ideal threshold detectors sit on a bright
(D1) and a dark (D2) fringe position and feed literal AND / XOR gates.

Event times are kept as :class:`fractions.Fraction`. The float inputs are
converted exactly, so derived delays and interval lengths are exact
rationals and the timing identities hold with ``==``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, NamedTuple, Tuple, Union

from .constants import C_EXACT
from .interference_engine import PathConfig

TRACE_CSV_HEADER = ("t_s", "d1", "d2", "and", "xor")

# Detector bits for each screen state.
_DARK = (0, 0)
_UNIFORM = (1, 1)
_FRINGES = (1, 0)


@dataclass(frozen=True)
class RunSchedule:
    t_on: float
    t_off: float
    paths: PathConfig
    t0: float = 0.0

    def __post_init__(self):
        if not self.t_on >= 0:
            raise ValueError("t_on must be >= 0")
        if not self.t_off > self.t_on:
            raise ValueError("t_off must be > t_on")
        if not self.t0 >= 0:
            raise ValueError("t0 must be >= 0")


class Delays(NamedTuple):
    t1: float
    t2: float
    delta_t: float


def _exact_delays(paths: PathConfig) -> Tuple[Fraction, Fraction]:
    n = Fraction(paths.refractive_index)
    return n * Fraction(paths.p1) / C_EXACT, n * Fraction(paths.p2) / C_EXACT


def propagation_delays(paths: PathConfig) -> Delays:
    """Arm transit times ``n p / c`` and their difference (s)."""
    t1, t2 = _exact_delays(paths)
    return Delays(float(t1), float(t2), float(t2 - t1))


class LogicEvent(NamedTuple):
    t: Fraction
    d1: int
    d2: int
    and_out: int
    xor_out: int


@dataclass(frozen=True)
class LogicTrace:
    """Time-ordered detector/gate transitions. Each event's state holds until the next."""

    events: Tuple[LogicEvent, ...]
    t1: Fraction
    t2: Fraction
    degenerate: bool = False

    @property
    def delta_t(self) -> Fraction:
        return self.t2 - self.t1

    def intervals(self, field: str) -> List[Tuple[Fraction, Fraction]]:
        """Maximal ``[start, end)`` intervals where ``field`` is 1."""
        out = []
        start = None
        for ev in self.events:
            bit = getattr(ev, field)
            if bit and start is None:
                start = ev.t
            elif not bit and start is not None:
                out.append((start, ev.t))
                start = None
        return out


Predicate = Union[bool, Callable[[Fraction, Fraction], bool]]


def _state(d1: int, d2: int) -> Tuple[int, int, int, int]:
    return d1, d2, d1 & d2, d1 ^ d2


def simulate_run(schedule: RunSchedule, interference_active: Predicate = True) -> LogicTrace:
    """Detector and gate outputs over one switch-on/switch-off cycle.

    ``interference_active`` decides whether fringes form while both beams
    overlap; pass a bool or a callable ``(start, end) -> bool`` receiving the
    exact overlap interval. With fringes, D1 (bright) stays 1 and D2 (dark)
    drops to 0; without them the screen is uniformly lit and both read 1.

    If the switch-on time is shorter than the arm delay the beams never
    coexist; the trace is then flagged ``degenerate``.
    """
    t1, t2 = _exact_delays(schedule.paths)
    t_on, t_off, t0 = Fraction(schedule.t_on), Fraction(schedule.t_off), Fraction(schedule.t0)
    a1, b1 = t_on + t0 + t1, t_off + t0 + t1
    a2, b2 = t_on + t0 + t2, t_off + t0 + t2
    degenerate = (t_off - t_on) < (t2 - t1)

    overlap_start, overlap_end = a2, b1
    if overlap_end > overlap_start:
        active = interference_active(overlap_start, overlap_end) if callable(interference_active) else bool(interference_active)
    else:
        active = False

    def screen(t: Fraction) -> Tuple[int, int]:
        beam1 = a1 <= t < b1
        beam2 = a2 <= t < b2
        if beam1 and beam2:
            return _FRINGES if active else _UNIFORM
        if beam1 or beam2:
            return _UNIFORM
        return _DARK

    # The trace opens dark at switch-on; with zero latency, 1 fs before it.
    start = t_on if a1 > t_on else a1 - Fraction(1, 10**15)
    events = [LogicEvent(start, *_state(*_DARK))]
    for t in sorted({a1, b1, a2, b2}):
        st = _state(*screen(t))
        if st != events[-1][1:]:
            events.append(LogicEvent(t, *st))
    return LogicTrace(events=tuple(events), t1=t1, t2=t2, degenerate=degenerate)


def _length(iv) -> float:
    return float(iv[1] - iv[0])


def measure_delta_t(trace: LogicTrace) -> List[float]:
    """Durations of each AND-high interval (s); empty if there are none."""
    return [_length(iv) for iv in trace.intervals("and_out")]


def measure_interference_duration(trace: LogicTrace) -> float:
    """Total time the XOR output is high (s)."""
    return float(sum((b - a for a, b in trace.intervals("xor_out")), Fraction(0)))


def exact_durations(trace: LogicTrace, field: str) -> List[Fraction]:
    return [b - a for a, b in trace.intervals(field)]


def write_trace_csv(trace: LogicTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_CSV_HEADER)
        for ev in trace.events:
            w.writerow((repr(float(ev.t)), ev.d1, ev.d2, ev.and_out, ev.xor_out))


def read_trace_csv(path) -> List[LogicEvent]:
    """Events from a trace CSV; times come back as exact Fractions of the stored floats."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != TRACE_CSV_HEADER:
        raise ValueError(f"{path}: expected header {','.join(TRACE_CSV_HEADER)}")
    return [LogicEvent(Fraction(float(r[0])), *(int(v) for v in r[1:])) for r in rows[1:]]
