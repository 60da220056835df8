"""Command-line front end: ``gelfand-morse <command> ...``.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 sweep aborted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export
from .config import ConfigError, RunConfig, load_config
from .continuation import (
    IndexMonotonicityError,
    SweepAborted,
    SweepOptions,
    compute_point,
    sweep,
)
from .diagnostics import critical_blowup_ladder, verify_critical_family
from .nonlinearity import check_superlinearity, derive_lower_bound
from .radial_solver import ShootingError
from .spectrum import UnconvergedPointError

log = logging.getLogger("gelfand_morse")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_ABORT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _add_common(p: argparse.ArgumentParser, solver_flags: bool = True):
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--out-dir", type=Path)
    if solver_flags:
        p.add_argument("--rk-tol", type=float)
        p.add_argument("--grid-points", type=int)
        p.add_argument("--max-ell-override", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gelfand-morse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="trace the solution curve over the configured a grid")
    _add_common(p)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("verify-critical", help="check the explicit critical family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=float, nargs="*", default=[])
    p.add_argument("--grid-points", type=int, default=2048)
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("check-nonlinearity", help="certify the superlinear growth condition")
    _add_common(p, solver_flags=False)

    for name, text in (("morse", "Morse index of one solution"),
                       ("diagnose", "diagnostics of one solution")):
        p = sub.add_parser(name, help=text)
        _add_common(p)
        p.add_argument("--a", type=float, required=True, help="center value u(0)")
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    return cfg.with_overrides(
        rk_tol=getattr(args, "rk_tol", None),
        grid_points=getattr(args, "grid_points", None),
        max_ell_override=getattr(args, "max_ell_override", None),
        out_dir=args.out_dir,
    )


def _sweep_options(cfg: RunConfig, jobs: int = 1) -> SweepOptions:
    return SweepOptions(
        solver=cfg.solver,
        decay_radii=cfg.decay_radii,
        fprime_radii=cfg.fprime_radii,
        fmass_radii=cfg.fmass_radii,
        max_ell_override=cfg.max_ell_override,
        jobs=jobs,
    )


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.a_grid is None:
        raise ConfigError(f"{args.config}: sweep needs a [sweep] section")
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")
    f = cfg.build_nonlinearity()
    if cfg.n >= 3:
        cert = check_superlinearity(f, cfg.n, cfg.epsilon, cfg.t0, cfg.t_max, cfg.samples)
        if not cert.holds:
            log.warning("growth condition not certified for %s (eps=%g); "
                        "boundedness experiments are uninformative", f.label, cfg.epsilon)
    try:
        curve = sweep(f, cfg.n, cfg.a_grid, _sweep_options(cfg, args.jobs))
    except SweepAborted as exc:
        print(f"sweep aborted: {exc}", file=sys.stderr)
        for fl in exc.failures[:10]:
            print(f"  a={fl.a:g}: {fl.reason}", file=sys.stderr)
        return EXIT_ABORT
    except IndexMonotonicityError as exc:
        print(f"sweep aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    files = export.write_curve(curve, cfg.out_dir)
    sys.stdout.write(export.summary_text(curve))
    print(f"wrote {files['curve']}")
    return EXIT_OK


def cmd_verify_critical(args) -> int:
    if not 3 <= args.n <= 9:
        print(f"verify-critical needs 3 <= n <= 9, got {args.n}", file=sys.stderr)
        return EXIT_INVALID
    if not args.mu:
        print("verify-critical needs at least one --mu value", file=sys.stderr)
        return EXIT_INVALID
    if any(not m > 0 for m in args.mu):
        print("mu values must be > 0", file=sys.stderr)
        return EXIT_INVALID
    reports = [verify_critical_family(args.n, mu, args.grid_points) for mu in args.mu]
    sups, increasing = critical_blowup_ladder(args.n, args.mu)
    doc = {
        "n": args.n,
        "reports": [r.to_dict() for r in reports],
        "ladder": {"mu": sorted(args.mu, reverse=True), "sup_norm": sups,
                   "strictly_increasing": increasing},
    }
    doc["passed"] = all(r.passed for r in reports) and increasing
    text = export.dumps(doc)
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        (args.out_dir / "critical.json").write_text(text)
    sys.stdout.write(text)
    if doc["passed"]:
        return EXIT_OK
    for r in reports:
        for name, ok in r.checks.items():
            if not ok:
                extra = ""
                if name == "morse_index":
                    extra = (f" (index {r.morse_index}, lowest radial eigenvalue "
                             f"{r.lowest_radial_eig:.3e})")
                print(f"check failed: {name} at n={r.n}, mu={r.mu:g}{extra}", file=sys.stderr)
                return EXIT_CHECK_FAILED
    print("check failed: sup norm not strictly increasing along the mu ladder", file=sys.stderr)
    return EXIT_CHECK_FAILED


def cmd_check_nonlinearity(args) -> int:
    cfg = _config(args)
    f = cfg.build_nonlinearity()
    if cfg.n < 3:
        raise ConfigError("growth condition needs dimension >= 3")
    cert = check_superlinearity(f, cfg.n, cfg.epsilon, cfg.t0, cfg.t_max, cfg.samples)
    doc = {"nonlinearity": f.label, "certificate": cert.to_dict(), "lower_bound": None}
    if cert.holds:
        rep = derive_lower_bound(cert, f, cfg.t_max)
        doc["lower_bound"] = {"c1": rep.c1, "exponent": rep.exponent, "t_max": rep.t_max,
                              "worst_margin": rep.worst_margin, "worst_t": rep.worst_t}
    text = export.dumps(doc)
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        (args.out_dir / "certificate.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _single_point(args, with_diagnostics: bool) -> int:
    cfg = _config(args)
    if args.a < 0:
        raise ConfigError("--a must be >= 0")
    f = cfg.build_nonlinearity()
    try:
        point = compute_point(f, cfg.n, args.a, _sweep_options(cfg))
    except (ShootingError, UnconvergedPointError) as exc:
        print(f"point failed: {exc}", file=sys.stderr)
        return EXIT_ABORT
    rec = export.point_record(point)
    if not with_diagnostics:
        rec["diagnostics"] = {"residual": point.diagnostics.get("residual")}
    text = export.dumps(rec)
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        name = "morse" if not with_diagnostics else "diagnostics"
        (args.out_dir / f"{name}_a{args.a:g}.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "verify-critical": cmd_verify_critical,
    "check-nonlinearity": cmd_check_nonlinearity,
    "morse": lambda args: _single_point(args, False),
    "diagnose": lambda args: _single_point(args, True),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
