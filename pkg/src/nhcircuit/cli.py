"""Command-line entry point: ``nhcircuit <command> [--config F] [--set k=v ...]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 invariant violation in ``selftest``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import figures
from .config import RunConfig, load_config
from .dynamics import EvolveSpec, evolve
from .eplocator import DegeneracyLocus, find_degeneracies_1d, find_ep_2d, locus_eigenvector_angle
from .errors import ConfigError, NHCircuitError
from .io import Table
from .model import derive_effective_model
from .nonreciprocity import asymmetry_dynamics, identical_qubits, nonrecip_map
from .oracle import ReductionReport, compare_reduction
from .selftest import CheckResult, run_selftest
from .spectrum import SpectrumGrid, eigenmodes, scan_2d

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_SELFTEST = 0, 2, 3, 4


def _header(cfg: RunConfig, command: str, **extra) -> dict:
    h = cfg.header()
    h["command"] = command
    h.update(extra)
    return h


def _axis_header(prefix, ax):
    return {f"{prefix}.name": ax.name, f"{prefix}.start": ax.values[0], f"{prefix}.stop": ax.values[-1],
            f"{prefix}.num": len(ax)}


def cmd_spectrum(cfg):
    m = derive_effective_model(cfg.circuit)
    sp = eigenmodes(m)
    cols = ("g_e", "omega_n", "re_wp", "im_wp", "re_wm", "im_wm", "R", "I", "dEq", "dGq")
    row = (m.g_e, m.omega_n, sp.omega_plus.real, sp.omega_plus.imag, sp.omega_minus.real, sp.omega_minus.imag,
           sp.r_disc, sp.i_disc, sp.delta_e, sp.delta_gamma)
    return Table(cols, [row]), _header(cfg, "spectrum")


def cmd_scan2d(cfg):
    a1, a2 = cfg.scan_axes
    grid = scan_2d(cfg.circuit, a1, a2, workers=cfg.threads)
    return Table(SpectrumGrid.columns, list(grid.rows())), _header(
        cfg, "scan2d", **_axis_header("scan.axis1", a1), **_axis_header("scan.axis2", a2))


def cmd_epfind(cfg):
    if cfg.ep_two_d:
        a1, a2 = cfg.scan_axes
        loci = find_ep_2d(cfg.circuit, a1, a2, tol_disc=cfg.ep_tol_disc)
        extra = {**_axis_header("scan.axis1", a1), **_axis_header("scan.axis2", a2)}
    else:
        loci = find_degeneracies_1d(cfg.circuit, cfg.ep_axis, n_grid=cfg.ep_n_grid, tol_disc=cfg.ep_tol_disc)
        extra = _axis_header("ep.axis", cfg.ep_axis)
    rows = []
    for L in loci:
        rows.append(tuple(L.row()) + (locus_eigenvector_angle(cfg.circuit, L),))
    return Table(DegeneracyLocus.columns + ("eigvec_angle",), rows), _header(
        cfg, "epfind", tol_disc=cfg.ep_tol_disc, n_grid=cfg.ep_n_grid, **extra)


def cmd_evolve(cfg):
    spec: EvolveSpec = cfg.evolve
    states = evolve(derive_effective_model(cfg.circuit), spec)
    extra = {f"evolve.{k}": v for k, v in spec.__dict__.items()}
    return Table(states[0].columns, [s.row() for s in states]), _header(cfg, "evolve", **extra)


def cmd_nonrecip(cfg):
    a1, a2 = cfg.scan_axes
    grid = nonrecip_map(cfg.circuit, a1, a2)
    return Table(grid.columns, list(grid.rows())), _header(
        cfg, "nonrecip", **_axis_header("scan.axis1", a1), **_axis_header("scan.axis2", a2))


def cmd_asym(cfg):
    base = identical_qubits(cfg.circuit, sigma_z=(1.0, 1.0)) if cfg.asym_identical else cfg.circuit
    grid = asymmetry_dynamics(base, cfg.asym_axis, cfg.asym_t_max, cfg.asym_n_steps, engine=cfg.evolve.engine)
    hdr = _header(cfg, "asym", t_max=cfg.asym_t_max, n_steps=cfg.asym_n_steps, identical=cfg.asym_identical,
                  **_axis_header("asym.axis", cfg.asym_axis))
    hdr.update({f"effective.{k}": v for k, v in base.as_dict().items()})
    return Table(grid.columns, list(grid.rows())), hdr


def cmd_oracle(cfg):
    reports = compare_reduction(cfg.circuit, cfg.gamma_a_schedule)
    return Table(ReductionReport.columns, [r.row() for r in reports]), _header(
        cfg, "oracle", gamma_a_schedule=list(cfg.gamma_a_schedule))


SINGLE = {
    "spectrum": cmd_spectrum,
    "scan2d": cmd_scan2d,
    "epfind": cmd_epfind,
    "evolve": cmd_evolve,
    "nonrecip": cmd_nonrecip,
    "asym": cmd_asym,
    "oracle": cmd_oracle,
}


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _run_figure(name, cfg, out_dir):
    kwargs = {"base": cfg.circuit}
    if name == "fig2":
        kwargs["threads"] = cfg.threads
    datasets = figures.FIGURES[name](**kwargs)
    out_dir = Path(out_dir or ".")
    written = []
    for ds, (table, hdr) in datasets.items():
        path = out_dir / f"{ds}.{cfg.format}"
        table.write(path, {**hdr, "command": name}, cfg.format)
        written.append(path)
    return written


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nhcircuit", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--out", metavar="PATH", help="output file (figures: output directory)")
    common.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config value; bare keys address [circuit] (repeatable)")
    common.add_argument("--threads", type=int, help="worker threads for grid sweeps")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in list(SINGLE) + list(figures.FIGURES):
        sub.add_parser(name, parents=[common])
    st = sub.add_parser("selftest", parents=[common])
    st.add_argument("--draws", type=int, default=1000, help="random parameter sets per invariant")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.threads is not None:
        overrides.append(f"output.threads={args.threads}")
    if args.format is not None:
        overrides.append(f'output.format="{args.format}"')
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = args.out or cfg.output_path

    try:
        if args.command in SINGLE:
            table, hdr = SINGLE[args.command](cfg)
            _emit(table.render(hdr, cfg.format), out)
        elif args.command in figures.FIGURES:
            for path in _run_figure(args.command, cfg, out):
                print(path, file=sys.stderr)
        else:
            results = run_selftest(cfg.seed, args.draws)
            table = Table(CheckResult.columns, [r.row() for r in results])
            _emit(table.render(_header(cfg, "selftest", seed=cfg.seed, draws=args.draws), cfg.format), out)
            if not all(r.ok for r in results):
                return EXIT_SELFTEST
    except NHCircuitError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
