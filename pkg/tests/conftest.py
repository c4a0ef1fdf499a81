import pytest

from fringelab import C, ModeComb, BENCH_GEOMETRY

NU0 = C / 660e-9
# Desk-scale cavity: 10 MHz mode spacing keeps Monte-Carlo traces short.
DESK_L = C / (2 * 10e6)

_ACCEPTANCE = []


def record_criterion(number, description, passed, detail=""):
    _ACCEPTANCE.append((number, description, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, desc, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {desc}" + (f" -- {detail}" if detail else ""))


@pytest.fixture
def geometry():
    return BENCH_GEOMETRY


@pytest.fixture
def desk_comb():
    def make(n_modes=5, linewidth=0.0, **kw):
        return ModeComb(NU0, DESK_L, n_modes, mode_linewidth=linewidth, **kw)

    return make
