"""sflow-kit command line entry point."""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import config as cfgmod
from .errors import ConfigError, SflowError
from .report import build_report
from .spectrum import DomainSpec

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2
PROBLEM_COMMANDS = ("index", "sflow", "crossings", "certify", "probe", "report")


def _parser():
    p = argparse.ArgumentParser(prog="sflow-kit", description="Spectral flow and bifurcation certificates "
                                "for 2-component Dirichlet systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write the JSON report here (default: stdout)")
        sp.add_argument("--plots-dir", help="directory for CSV plot tables")
        sp.add_argument("--grid", type=int, help="crossing scan grid / eigen-track grid size")
        sp.add_argument("--n-max", type=int, help="largest Galerkin truncation")
        sp.add_argument("--delta", type=float, help="explicit delta shift for singular endpoints")
        sp.add_argument("--force-galerkin", action="store_true",
                        help="treat the coefficients as x-dependent (skip closed-form engines)")

    sp = sub.add_parser("spectrum", help="Dirichlet eigenvalues of a domain")
    sp.add_argument("config", nargs="?", help="problem JSON (its domain is used)")
    sp.add_argument("--domain", choices=["interval", "rectangle"], default="interval")
    sp.add_argument("--length", type=float, default=math.pi)
    sp.add_argument("--sides", type=float, nargs=2, metavar=("A", "B"))
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--out")

    for name in PROBLEM_COMMANDS:
        sp = sub.add_parser(name, help=f"run the {name} section(s) on a problem")
        sp.add_argument("config")
        common(sp)

    sp = sub.add_parser("battery", help="run the shipped fixture battery")
    sp.add_argument("filter", nargs="?", default=None, help="substring of fixture names to run")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="write the battery table as JSON")
    sp.add_argument("--fixtures-dir", help="alternative fixture directory")
    return p


def _emit(doc, out):
    text = cfgmod.dumps(doc)
    if out:
        cfgmod.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _spectrum(args):
    if args.config:
        domain = cfgmod.load(args.config).domain
    elif args.domain == "rectangle":
        domain = DomainSpec.rectangle(*(args.sides or (1.0, 1.0)))
    else:
        domain = DomainSpec.interval(args.length)
    vals = domain.spectrum(max(args.count, 1)).first(args.count) if args.count > 0 else []
    _emit({"schema_version": 1, "command": "spectrum", "domain": domain.to_dict(),
           "spectrum": [float(v) for v in vals]}, args.out)
    return EXIT_OK


def _problem(args):
    cfg = cfgmod.load(args.config, force_x_dependent=args.force_galerkin)
    over = {"n_max": args.n_max, "delta": args.delta}
    if args.grid:
        over["crossing_grid"] = args.grid
    cfg.numerics = cfg.numerics.replace(**over)
    rep = build_report(cfg, args.command, args.plots_dir, args.grid)
    _emit(rep, args.out)
    if args.command in ("sflow", "report") and not rep["spectral_flow"]["agree"]:
        sys.stderr.write("sflow-kit: spectral flow methods disagree or none succeeded\n")
        return EXIT_ERROR
    if args.command == "certify":
        cert = rep.get("certificate")
        if cert is None:
            sys.stderr.write(f"sflow-kit: {rep['errors'].get('certificate', 'certificate failed')}\n")
            return EXIT_ERROR
        if cert["verdict"] == "inconclusive":
            return EXIT_INCONCLUSIVE
    return EXIT_OK


def _battery(args):
    from .battery import format_table, run_battery
    results = run_battery(args.filter, seed=args.seed, fixtures_dir=args.fixtures_dir)
    sys.stdout.write(format_table(results))
    if args.out:
        cfgmod.write_atomic(args.out, cfgmod.dumps({"results": [r.to_dict() for r in results]}))
    return EXIT_OK if all(r.passed for r in results) else EXIT_ERROR


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.command == "spectrum":
            return _spectrum(args)
        if args.command == "battery":
            return _battery(args)
        return _problem(args)
    except (ConfigError, SflowError, ValueError, OSError) as err:
        sys.stderr.write(f"sflow-kit: {type(err).__name__}: {err}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
