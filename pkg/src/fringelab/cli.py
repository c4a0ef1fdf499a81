"""``fringelab`` command line.

Subcommands write CSV tables into the output directory (``--out``) and,
with ``--svg``, a matching SVG plot. Exit status: 0 on success, 1 on a
runtime failure, 2 on a usage or configuration error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from . import coherence_analysis as ca
from . import interference_engine as ie
from . import spectral_model as sm
from . import timing_logic as tl
from .config import RunConfig, SEED_ENV, config_from_dict, default_config, parse_config
from .constants import C
from .errors import ConfigError, FringelabError
from .svg import line_plot, step_plot

# Reference calculated delays for these fiber lengths; ten times n*(p2-p1)/c.
_REFERENCE_DT = {600.0: 29.3e-6, 1000.0: 48.9e-6}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--print-config", action="store_true", help="print the effective configuration and exit")
    p.add_argument("--out", help="output directory (default: output.directory from the config)")
    p.add_argument("--svg", action="store_true", help="also write SVG plots")
    p.add_argument("--seed", type=int, help=f"base random seed (fallback: ${SEED_ENV}, then 0)")
    return p


def _comb_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--modes", type=int, help="number of lasing modes")
    p.add_argument("--cavity-length-m", type=float, help="laser cavity length L (m)")
    p.add_argument("--k", type=int, help="mode-order multiplier")
    p.add_argument("--mode-linewidth-hz", type=float, help="per-mode FWHM (Hz)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fringelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="{coherence,fringes,simulate,timing,spectrum}", parser_class=_Parser)
    common = _common()

    p = sub.add_parser("coherence", parents=[common], help="coherence function, coherence length and visibility curve")
    p.add_argument("--gaussian-fwhm-nm", type=float, help="single Gaussian line of this FWHM (nm)")
    p.add_argument("--lambda-nm", type=float, default=None, help="centre wavelength (nm)")
    p.add_argument("--spectrum-csv", help="measured wavelength_nm,power spectrum")
    p.add_argument("--dl-max-m", type=float, help="largest path difference in the curve (m)")
    p.add_argument("--points", type=int, default=501)
    _comb_flags(p)

    p = sub.add_parser("fringes", parents=[common], help="double-slit fringe pattern on the screen")
    p.add_argument("--bench-defaults", "--paper-defaults", dest="bench_defaults", action="store_true", help="660 nm, d = 31.5 cm, w = 125 um, a = 4 um, equal arms")
    p.add_argument("--dl-m", type=float, help="optical path difference n*(p2-p1) (m); 0 gives a fully coherent pattern")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo fringe statistics against mode number")
    p.add_argument("--modes-list", help="comma-separated mode counts, e.g. 1,2,3,5,9")
    p.add_argument("--dl", type=float, help="fiber length difference p2-p1 (m)")
    p.add_argument("--n-seeds", type=int)
    p.add_argument("--threshold", type=float)
    p.add_argument("--window-s", type=float)
    _comb_flags(p)

    p = sub.add_parser("timing", parents=[common], help="detector logic trace and delay measurement")
    p.add_argument("--dl", type=float, help="fiber length difference p2-p1 (m)")
    p.add_argument("--n", type=float, help="fiber refractive index")
    p.add_argument("--t-on-s", type=float)
    p.add_argument("--t-off-s", type=float)
    p.add_argument("--no-interference", action="store_true", help="screen stays uniform while both beams overlap")

    p = sub.add_parser("spectrum", parents=[common], help="synthesise or inspect a spectrum")
    p.add_argument("--input", help="inspect this wavelength_nm,power CSV instead of synthesising")
    p.add_argument("--gaussian-fwhm-nm", type=float, help="synthesise a single Gaussian line (nm)")
    p.add_argument("--lambda-nm", type=float, help="centre wavelength (nm)")
    p.add_argument("--points", type=int, default=4096)
    _comb_flags(p)
    return parser


def _load_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else default_config()
    sim = cfg.simulation
    if args.seed is not None:
        sim = replace(sim, seed=args.seed)
    out = cfg.output
    if args.out:
        out = replace(out, directory=args.out)
    if args.svg:
        out = replace(out, svg=True)
    src = cfg.source
    overrides = {
        "n_modes": getattr(args, "modes", None),
        "cavity_length_m": getattr(args, "cavity_length_m", None),
        "k": getattr(args, "k", None),
        "mode_linewidth_hz": getattr(args, "mode_linewidth_hz", None),
    }
    if getattr(args, "lambda_nm", None) is not None:
        overrides["wavelength_m"] = args.lambda_nm * 1e-9
    src = replace(src, **{k: v for k, v in overrides.items() if v is not None})
    if src.amplitudes is not None and len(src.amplitudes) != src.n_modes:
        src = replace(src, amplitudes=None)
    if getattr(args, "spectrum_csv", None):
        src = replace(src, spectrum_csv=os.path.abspath(args.spectrum_csv))
    # Re-validate so bad overrides surface as configuration errors.
    return config_from_dict(replace(cfg, simulation=sim, output=out, source=src).to_dict())


def _outdir(cfg: RunConfig) -> str:
    os.makedirs(cfg.output.directory, exist_ok=True)
    return cfg.output.directory


def _um(x: float) -> str:
    return f"{x * 1e6:.1f} um"


def cmd_coherence(args, cfg: RunConfig) -> int:
    out = _outdir(cfg)
    lam = cfg.source.wavelength_m
    if args.gaussian_fwhm_nm is not None:
        dlam = args.gaussian_fwhm_nm * 1e-9
        lc = ca.coherence_length_from_wavelength(lam, dlam)
        fwhm_hz = sm.linewidth_nm_to_hz(lam, dlam)
        print(f"lambda = {lam * 1e9:g} nm, dlambda = {args.gaussian_fwhm_nm:g} nm, dnu = {fwhm_hz:.6g} Hz")
        print(f"coherence length 0.624*lambda^2/dlambda = {_um(lc.prefactored)}")
        print(f"coherence length lambda^2/dlambda       = {_um(lc.unprefactored)}")
        dl_max = args.dl_max_m or 3.0 * lc.unprefactored
        curve = ca.visibility_curve(("gaussian", fwhm_hz), (0.0, dl_max), args.points)
    elif cfg.source.spectrum_csv:
        spec = sm.load_spectrum_csv(cfg.source.spectrum_csv)
        width = sm.envelope_linewidth(spec)
        lc = ca.coherence_length_gaussian(width.fwhm_hz)
        print(f"envelope FWHM = {width.fwhm_hz:.6g} Hz ({width.fwhm_m * 1e9:.4g} nm at {width.center_wavelength * 1e9:.2f} nm)")
        print(f"coherence length 0.624*c/dnu = {_um(lc.prefactored)}; c/dnu = {_um(lc.unprefactored)}")
        dl_max = args.dl_max_m or 3.0 * lc.unprefactored
        curve = ca.visibility_curve(spec, (0.0, dl_max), args.points)
    else:
        comb = cfg.comb()
        period = 2.0 * comb.cavity_length / comb.k
        print(f"comb N={comb.n_modes}, spacing {comb.spacing:.6g} Hz, revival period 2L/k = {period:.6g} m")
        print(f"first zero of the comb coherence at 2L/(kN) = {period / comb.n_modes:.6g} m")
        dl_max = args.dl_max_m or 2.5 * period
        curve = ca.visibility_curve(("comb", comb.n_modes, comb.k, comb.cavity_length), (0.0, dl_max), args.points)
    path = os.path.join(out, "visibility.csv")
    ca.write_visibility_csv(curve, path)
    print(f"wrote {path}")
    if cfg.output.svg:
        line_plot(curve.delta_l, curve.visibility, os.path.join(out, "visibility.svg"),
                  xlabel="path difference (m)", ylabel="visibility", title=curve.label)
    return 0


def cmd_fringes(args, cfg: RunConfig) -> int:
    out = _outdir(cfg)
    if args.bench_defaults:
        base = default_config()
        cfg = replace(cfg, geometry=base.geometry, paths=replace(cfg.paths, split_ratio=base.paths.split_ratio))
    geom = cfg.geometry_obj()
    r = cfg.paths.split_ratio
    dl = 0.0 if args.bench_defaults and args.dl_m is None else args.dl_m
    if dl is None:
        dl = cfg.paths.refractive_index * (cfg.paths.p2_m - cfg.paths.p1_m)
    if dl == 0.0:
        pattern = ie.fringe_pattern(geom, np.sqrt(r), np.sqrt(1.0 - r), overlap=cfg.paths.overlap)
    else:
        paths = ie.PathConfig.from_optical_delay(dl, cfg.paths.refractive_index, r)
        sim = cfg.simulation
        trace = ie.synthesize_field(cfg.comb(), sim.duration_s + paths.delay, sim.dt_s, sim.seed)
        beams = ie.delayed_two_beam(trace, paths)
        ov = beams.overlap
        pattern = ie.fringe_pattern(geom, beams.e1[ov], beams.e2[ov], overlap=cfg.paths.overlap)
    expected = ie.fringe_spacing(geom)
    print(f"expected fringe spacing lambda*d/w = {expected * 1e3:.4f} mm")
    try:
        print(f"measured peak spacing             = {ie.measure_fringe_spacing(pattern, geom) * 1e3:.4f} mm")
    except ValueError:
        print("measured peak spacing             = n/a (no resolvable fringes)")
    print(f"visibility = {pattern.visibility:.4f}")
    path = os.path.join(out, "fringes.csv")
    ie.write_fringe_csv(pattern, path)
    print(f"wrote {path}")
    if cfg.output.svg:
        line_plot(pattern.x * 1e3, pattern.intensity, os.path.join(out, "fringes.svg"),
                  xlabel="screen position (mm)", ylabel="intensity", title=f"V = {pattern.visibility:.3f}")
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    out = _outdir(cfg)
    sim = cfg.simulation
    modes = sim.modes
    if args.modes_list:
        try:
            modes = tuple(int(v) for v in args.modes_list.split(","))
        except ValueError:
            raise _UsageError(f"--modes-list: expected comma-separated integers, got {args.modes_list!r}") from None
    paths = cfg.path_config()
    if args.dl is not None:
        paths = replace(paths, p2=paths.p1 + args.dl)
    threshold = sim.threshold if args.threshold is None else args.threshold
    window = sim.window_s if args.window_s is None else args.window_s
    n_seeds = sim.n_seeds if args.n_seeds is None else args.n_seeds
    geom = cfg.geometry_obj()
    print(f"optical delay {paths.optical_path_difference:.6g} m, threshold {threshold:g}, window {window:g} s, {n_seeds} seeds")
    print("N  occurrence  mean_duration_s  stderr")
    rows = []
    for n in modes:
        st = ie.visibility_statistics(
            cfg.comb(n), paths, geom, threshold=threshold, window=window,
            duration=sim.duration_s + paths.delay, dt=sim.dt_s, n_seeds=n_seeds,
            seed=sim.seed, overlap=cfg.paths.overlap,
        )
        rows.append(st)
        print(f"{n:<2d} {st.occurrence_probability:10.4f}  {st.mean_duration:15.4g}  {st.stderr:.4f}")
    probs = [s.occurrence_probability for s in rows]
    if len(probs) > 1:
        d = np.diff(probs)
        trend = "non-increasing" if np.all(d <= 0) else "non-decreasing" if np.all(d >= 0) else "non-monotone"
        print(f"occurrence probability vs N: {trend}")
    path = os.path.join(out, "stats.csv")
    ie.write_stats_csv(rows, path)
    print(f"wrote {path}")
    if cfg.output.svg:
        line_plot([s.n_modes for s in rows], probs, os.path.join(out, "stats.svg"),
                  xlabel="number of modes N", ylabel="occurrence probability", title="fringe occurrence", markers=True)
    return 0


def cmd_timing(args, cfg: RunConfig) -> int:
    out = _outdir(cfg)
    p = cfg.path_config()
    if args.n is not None:
        p = replace(p, refractive_index=args.n)
    if args.dl is not None:
        p = replace(p, p2=p.p1 + args.dl)
    s = cfg.schedule
    sched = tl.RunSchedule(
        s.t_on_s if args.t_on_s is None else args.t_on_s,
        s.t_off_s if args.t_off_s is None else args.t_off_s,
        p,
        s.t0_s,
    )
    delays = tl.propagation_delays(p)
    trace = tl.simulate_run(sched, interference_active=not args.no_interference)
    print(f"t1 = {delays.t1 * 1e6:.6g} us, t2 = {delays.t2 * 1e6:.6g} us")
    print(f"delta_t = n*(p2-p1)/c = {delays.delta_t * 1e6:.4f} us")
    reference = _REFERENCE_DT.get(round(p.p2 - p.p1, 6))
    if reference is not None:
        print(f"note: the reference calculated value for this fiber is {reference * 1e6:.1f} us, "
              f"{reference / delays.delta_t:.2f}x the formula (consistent with {10 * (p.p2 - p.p1):g} m of fiber)")
    print(f"AND-high intervals: {[f'{v * 1e6:.4f} us' for v in tl.measure_delta_t(trace)]}")
    print(f"XOR-high (interference) duration: {tl.measure_interference_duration(trace) * 1e6:.4f} us")
    if trace.degenerate:
        print("degenerate run: switch-on time shorter than delta_t, the beams never overlap")
    path = os.path.join(out, "trace.csv")
    tl.write_trace_csv(trace, path)
    print(f"wrote {path}")
    if cfg.output.svg:
        t = [float(e.t) * 1e6 for e in trace.events]
        step_plot(t, [e.xor_out + 2 * e.and_out for e in trace.events], os.path.join(out, "trace.svg"),
                  xlabel="time (us)", ylabel="2*AND + XOR", title="gate outputs")
    return 0


def cmd_spectrum(args, cfg: RunConfig) -> int:
    out = _outdir(cfg)
    if args.input:
        spec = sm.load_spectrum_csv(args.input)
    elif args.gaussian_fwhm_nm is not None:
        lam = cfg.source.wavelength_m
        nu0 = C / lam
        fwhm = sm.linewidth_nm_to_hz(lam, args.gaussian_fwhm_nm * 1e-9)
        spec = sm.gaussian_spectrum(nu0, fwhm, 1.0, sm.frequency_grid(nu0, 6 * fwhm, args.points))
    else:
        comb = cfg.comb()
        spec = sm.comb_spectrum(comb)
        print(f"comb N={comb.n_modes}: mode spacing {comb.spacing:.6g} Hz, span {comb.span:.6g} Hz")
    if spec.is_sampled:
        width = sm.envelope_linewidth(spec)
        lc = ca.coherence_length_gaussian(width.fwhm_hz)
        print(f"envelope FWHM = {width.fwhm_hz:.6g} Hz = {width.fwhm_m * 1e9:.4g} nm at {width.center_wavelength * 1e9:.3f} nm")
        print(f"coherence length 0.624*c/dnu = {_um(lc.prefactored)}; c/dnu = {_um(lc.unprefactored)}")
    path = os.path.join(out, "spectrum.csv")
    sm.write_spectrum_csv(spec, path)
    print(f"wrote {path} ({spec.freq.size} rows)")
    if cfg.output.svg:
        lam_nm = C / spec.freq * 1e9
        order = np.argsort(lam_nm)
        line_plot(lam_nm[order], spec.power[order], os.path.join(out, "spectrum.svg"),
                  xlabel="wavelength (nm)", ylabel="power", title=f"{spec.kind} spectrum", markers=not spec.is_sampled)
    return 0


_COMMANDS = {
    "coherence": cmd_coherence,
    "fringes": cmd_fringes,
    "simulate": cmd_simulate,
    "timing": cmd_timing,
    "spectrum": cmd_spectrum,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        cfg = _load_config(args)
        if args.print_config:
            sys.stdout.write(cfg.dump())
            return 0
        return _COMMANDS[args.command](args, cfg)
    except (ConfigError, _UsageError) as exc:
        print(f"fringelab {args.command}: {exc}", file=sys.stderr)
        return 2
    except (FringelabError, ValueError, OSError) as exc:
        print(f"fringelab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
