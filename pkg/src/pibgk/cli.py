"""Command line entry point.

Subcommands:
    run <config>       simulate and write snapshot CSVs
    spectrum <config>  eigenvalues of the linearized per-mode operator
    advise <config>    print spectrally vetted projective parameters
    validate <config>  parse and check a configuration, write nothing

Exit codes: 0 success, 1 configuration/validation problems, 2 runtime
instability (NaN/Inf or unphysical moments during a run).  Progress and
diagnostics go to stderr; stdout carries only the advise report.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .bgk import make_rhs
from .config import build_grids, describe, load_config, resolve_scheme, with_overrides
from .errors import (
    AdviceRejected,
    ConfigError,
    NonPositiveDensity,
    NonPositiveTemperature,
    PibgkError,
    StepUnstable,
)
from .integrators import integrate
from .linear_analysis import advise_parameters, build_basis, transport_collision_spectrum
from .scenarios import build_scenario
from .snapshots import (
    distribution_filename,
    snapshot_filename,
    snapshot_from_field,
    write_distribution,
    write_snapshot,
    write_spectrum_csv,
)

_INSTABILITY = (StepUnstable, NonPositiveDensity, NonPositiveTemperature)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="pibgk",
        description="Discrete-velocity BGK solver with projective time integration.",
    )
    parser.add_argument("--version", action="version", version=f"pibgk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate and write snapshots")
    run.add_argument("config", help="YAML configuration file")
    run.add_argument("--output-dir", help="override the configured output directory")
    run.add_argument("--snapshot-times", help="comma separated times overriding the config")
    run.add_argument("--dump-distribution", action="store_true",
                     help="also save the full distribution per snapshot (.npy)")
    run.add_argument("--quiet", action="store_true", help="suppress progress output")

    spec = sub.add_parser("spectrum", help="write eigenvalues of the linearized operator")
    spec.add_argument("config")
    spec.add_argument("--modes", help="comma separated wavenumbers (default: all in 1D)")
    spec.add_argument("--output-dir", help="override the configured output directory")
    spec.add_argument("--quiet", action="store_true")

    adv = sub.add_parser("advise", help="print advised projective parameters")
    adv.add_argument("config")
    adv.add_argument("--quiet", action="store_true")

    val = sub.add_parser("validate", help="parse and validate a configuration")
    val.add_argument("config")
    val.add_argument("--quiet", action="store_true")
    return parser


def _load(path, quiet):
    cfg = load_config(path)
    if not quiet:
        print(describe(cfg), file=sys.stderr)
    return cfg


def _cmd_run(args):
    cfg = _load(args.config, args.quiet)
    if args.output_dir:
        cfg = with_overrides(cfg, output_dir=args.output_dir)
    if args.snapshot_times:
        times = tuple(sorted(set(float(s) for s in args.snapshot_times.split(","))))
        cfg = with_overrides(cfg, snapshot_times=times)
    if args.dump_distribution:
        cfg = with_overrides(cfg, dump_distribution=True)

    space, velocity = build_grids(cfg)
    field = build_scenario(cfg.scenario, space, velocity)

    def advice_sink(advice):
        if not args.quiet:
            p = advice.params
            print(f"advised: inner_dt={p.dt_inner:g} inner_steps={p.damping_steps} "
                  f"outer_dt={p.dt_outer:g} (max amplification {advice.max_amplification:.9f})",
                  file=sys.stderr)

    scheme = resolve_scheme(cfg, space, velocity, advice_sink=advice_sink)
    rhs_values = make_rhs(space, velocity, cfg.epsilon, cfg.reconstruction,
                          cfg.maxwellian_mode, cfg.weno_epsilon)

    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def sink(t, snap_field):
        record = snapshot_from_field(t, snap_field)
        path = outdir / snapshot_filename(t)
        write_snapshot(record, path)
        written.append(path)
        if cfg.dump_distribution:
            write_distribution(snap_field, outdir / distribution_filename(t))

    state = integrate(
        field, scheme, rhs_values, cfg.t_end,
        snapshot_times=cfg.snapshot_times, sink=sink,
        progress_every=0 if args.quiet else cfg.progress_every,
    )
    if not args.quiet:
        print(f"done: {state.steps} steps, {state.rhs_evals} rhs evaluations, "
              f"{len(written)} snapshots in {outdir}", file=sys.stderr)
    return 0


def _cmd_spectrum(args):
    cfg = _load(args.config, args.quiet)
    if args.output_dir:
        cfg = with_overrides(cfg, output_dir=args.output_dir)
    space, velocity = build_grids(cfg)
    basis = build_basis(velocity)
    if args.modes:
        flat = [int(m) for m in args.modes.split(",")]
        if space.dim == 1:
            modes = flat
        else:
            modes = [(m // space.cells[1], m % space.cells[1]) for m in flat]
    elif space.dim == 1:
        modes = list(range(space.cells[0]))
    else:
        from .linear_analysis import _default_mode_sample
        modes = _default_mode_sample(space.cells)
    spectra = transport_collision_spectrum(
        cfg.epsilon, space.spacing if space.dim > 1 else space.spacing[0],
        basis, modes, space.cells if space.dim > 1 else space.cells[0],
        order=cfg.reconstruction,
    )
    outdir = Path(cfg.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "spectrum.csv"
    write_spectrum_csv(spectra, path, n_cells=space.cells)
    if not args.quiet:
        print(f"wrote {path} ({len(modes)} modes)", file=sys.stderr)
    return 0


def _cmd_advise(args):
    cfg = _load(args.config, args.quiet)
    space, velocity = build_grids(cfg)
    basis = build_basis(velocity)
    advice = advise_parameters(
        cfg.epsilon, space.spacing if space.dim > 1 else space.spacing[0],
        basis, space.cells if space.dim > 1 else space.cells[0],
        cfl_fraction=cfg.cfl_fraction,
    )
    p = advice.params
    print(f"inner_dt = {p.dt_inner:.9g}")
    print(f"inner_steps = {p.damping_steps}")
    print(f"outer_dt = {p.dt_outer:.9g}")
    print(f"max_amplification = {advice.max_amplification:.12g}")
    print(f"margin = {advice.margin:.12g}")
    if advice.use_direct_rk4:
        print("recommendation = use direct RK4")
    print(f"note = {advice.note}")
    return 0


def _cmd_validate(args):
    _load(args.config, args.quiet)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "run": _cmd_run,
        "spectrum": _cmd_spectrum,
        "advise": _cmd_advise,
        "validate": _cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except _INSTABILITY as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, AdviceRejected, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PibgkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
