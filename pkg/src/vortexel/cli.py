"""Command-line front end.

Subcommands: matelem, scan, dichroism, yalpha, selftest.  Exit codes:
0 success, 1 configuration or usage error, 2 numerical non-convergence (the
best estimate is still written).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONCONVERGED = 2


def _common(parser: argparse.ArgumentParser, needs_config: bool = True):
    if needs_config:
        parser.add_argument("--config", required=True, help="path to the YAML/JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides output.dir)")
    parser.add_argument("--format", choices=("csv", "json"), default=None, help="table format override")
    parser.add_argument("--seed", type=int, default=None, help="seed recorded in the quadrature config")
    parser.add_argument("--no-shortcircuit", action="store_true", help="integrate forbidden channels numerically instead of returning an exact zero")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for scans (results are identical for any count)")
    parser.add_argument("--no-plots", action="store_true", help="skip figure rendering")


def _resolve_output(cfg: RunConfig, args) -> tuple[Path, str, bool]:
    outdir = Path(args.out) if args.out else Path(cfg.output["dir"])
    fmt_kind = args.format or cfg.output["format"]
    plots = cfg.output["plots"] and not args.no_plots
    return outdir, fmt_kind, plots


def cmd_matelem(args) -> int:
    from . import matelem, report

    cfg = load_config(args.config)
    outdir, _, _ = _resolve_output(cfg, args)
    transition = cfg.make_transition()
    qcfg = cfg.make_quadrature(seed=args.seed)
    exit_code = EXIT_OK
    try:
        me = matelem.compute_matrix_element(transition, qcfg, no_shortcircuit=args.no_shortcircuit)
        converged = True
    except matelem.NonConvergence as exc:
        me = exc.result
        converged = False
        exit_code = EXIT_NONCONVERGED
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "matelem.json"
    report.write_matelem_json(me, cfg.as_dict(), path, converged=converged)
    import cmath

    print(f"|M|      = {abs(me.value):.10e}")
    print(f"phase    = {cmath.phase(me.value):+.10f} rad")
    print(f"channel  = {me.channel.channel}")
    print(f"abs_err  = {me.abs_err:.3e}")
    print(f"evals    = {me.quadrature_evals}")
    print(f"written  : {path}")
    if not converged:
        print("warning: quadrature did not converge; best estimate written", file=sys.stderr)
    return exit_code


def cmd_scan(args) -> int:
    from . import matelem, report

    cfg = load_config(args.config)
    outdir, fmt_kind, plots = _resolve_output(cfg, args)
    qcfg = cfg.make_quadrature(seed=args.seed)
    kwargs = cfg.scan_arguments()
    entries = matelem.selection_scan(
        cfg=qcfg,
        no_shortcircuit=args.no_shortcircuit,
        threads=max(1, args.threads),
        **kwargs,
    )
    written = report.write_scan(entries, cfg.as_dict(), outdir, fmt_kind)
    if plots:
        written.append(report.plot_scan(entries, outdir))
    nonzero = sum(1 for e in entries if e.abs_M > 0)
    print(f"{len(entries)} rows ({nonzero} nonzero)")
    for p in written:
        print(f"written  : {p}")
    return EXIT_OK


def cmd_dichroism(args) -> int:
    from . import dichroism, report

    cfg = load_config(args.config)
    outdir, _, plots = _resolve_output(cfg, args)
    if cfg.dichroism is None:
        raise ConfigError("section 'dichroism' is required for this command")
    qcfg = cfg.make_quadrature(seed=args.seed)
    family = cfg.make_family()
    dos = cfg.make_dos()
    rep = dichroism.dichroic_signal(
        family,
        dos,
        cfg.dichroism["l"],
        beam=cfg.make_beam(l=0),
        cm=cfg.make_cm(),
        kernel=cfg.make_kernel(),
        cfg=qcfg,
    )
    written = report.write_dichroism(rep, cfg.as_dict(), outdir)
    if plots:
        written.append(report.plot_dichroism(rep, outdir))
    print(f"gamma(+|l|) = {rep.gamma_plus:.10e}")
    print(f"gamma(-|l|) = {rep.gamma_minus:.10e}")
    print(f"signal      = {rep.signal:+.8f}")
    for p in written:
        print(f"written  : {p}")
    return EXIT_OK


def _parse_int_list(text: str, key: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"flag {key}: expected comma-separated integers, got {text!r}") from exc


def _parse_float_list(text: str, key: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ConfigError(f"flag {key}: expected comma-separated numbers, got {text!r}") from exc


def cmd_yalpha(args) -> int:
    from . import report
    from .kernels import SingularGeometryError, y_alpha

    n_values = _parse_int_list(args.n_eff, "--n-eff")
    f_values = _parse_float_list(args.f_values, "--f-values")
    g_values = _parse_float_list(args.g_values, "--g-values")
    outdir = Path(args.out) if args.out else Path("out")
    rows = []
    for n in n_values:
        for F in f_values:
            for G in g_values:
                try:
                    res = y_alpha(n, F, G, tol=args.tol)
                except SingularGeometryError as exc:
                    raise ConfigError(f"invalid (F, G) pair ({F}, {G}): {exc}") from exc
                rows.append((n, F, G, res.value, res.error))
    path = report.write_yalpha_csv(rows, outdir)
    print(f"{len(rows)} rows")
    print(f"written  : {path}")
    if not args.no_plots:
        print(f"written  : {report.plot_yalpha(rows, outdir)}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(verbose=True)
    return EXIT_OK if ok else EXIT_CONFIG


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vortexel",
        description="Vortex-beam transition matrix elements, OAM selection rules and magnetic dichroism",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("matelem", help="compute one transition matrix element")
    _common(p)
    p.set_defaults(func=cmd_matelem)

    p = sub.add_parser("scan", help="tabulate |M| over winding numbers and sublevels")
    _common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("dichroism", help="golden-rule rates for opposite helicities and the dichroic signal")
    _common(p)
    p.set_defaults(func=cmd_dichroism)

    p = sub.add_parser("yalpha", help="tabulate the generic azimuthal integrals")
    p.add_argument("--n-eff", default="0,1,2", help="comma-separated integer orders")
    p.add_argument("--f-values", default="2", help="comma-separated F values")
    p.add_argument("--g-values", default="0,0.5,1", help="comma-separated G values")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out", default=None)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_yalpha)

    p = sub.add_parser("selftest", help="run the built-in invariant suite")
    p.set_defaults(func=cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
