"""Command-line interface.

Subcommands: ``simulate`` integrates one configuration and writes a
diagnostics CSV (plus optional snapshots); ``sweep`` runs a convergence
experiment and writes a per-alpha error CSV with a human-readable
summary; ``diagnose`` prints norms and inequality ratios of a stored
snapshot as CSV on standard output.

Exit codes: 0 success, 2 configuration/format errors, 3 blow-up.
All outputs are deterministic: repeated runs of one config are byte
identical, including across sweep concurrency levels.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .diagnostics import (
    cz_ratio,
    gagliardo_ratio,
    l2_norm,
    lp_norm,
    sobolev_norm,
    velocity_l2,
    voigt_energy,
    voigt_enstrophy,
)
from .dynamics import BlowUpError, integrate
from .harness import ConvergenceReport, fit_rate, galerkin_reference_sweep, run_sweep
from .initial_data import realize
from .snapshots import SnapshotError, read_snapshot, snapshot_of, write_snapshot
from .spectral import biot_savart

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3


def _provenance(cfg: RunConfig) -> list[str]:
    lines = [f"# voigt2d {__version__}", f"# config sha256 {cfg.sha256}"]
    lines += [f"# {line}" for line in cfg.effective_lines()]
    return lines


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_simulate(config_path: str) -> int:
    cfg = load_config(config_path)
    record = integrate(realize(cfg.recipe, cfg.grid), cfg.solver_config())
    os.makedirs(cfg.out_dir, exist_ok=True)

    lines = _provenance(cfg)
    lines.append("t,energy,enstrophy,voigt_energy,voigt_enstrophy")
    d = record.diagnostics
    for i, t in enumerate(record.times):
        lines.append(
            ",".join(
                repr(float(x))
                for x in (
                    t,
                    d["energy"][i],
                    d["enstrophy"][i],
                    d["voigt_energy"][i],
                    d["voigt_enstrophy"][i],
                )
            )
        )
    csv_path = os.path.join(cfg.out_dir, "diagnostics.csv")
    _write_lines(csv_path, lines)
    print(f"wrote {csv_path}")

    if record.snapshots and "snapshots" in cfg.formats:
        for index, (t, omega) in enumerate(record.snapshots):
            snap_path = os.path.join(cfg.out_dir, f"snapshot_{index:04d}.vfld")
            write_snapshot(snap_path, snapshot_of(omega, t, record.alpha))
            print(f"wrote {snap_path}")
    return EXIT_OK


def _summary_lines(report: ConvergenceReport) -> list[str]:
    th = report.theoretical
    lines = [
        f"regime: {th.regime}",
        f"reference: {report.plan.reference}",
        f"dt: {report.dt_used!r}",
        f"theoretical velocity slope: "
        + ("none" if th.velocity is None else repr(th.velocity)),
        f"theoretical vorticity slope: "
        + ("none" if th.vorticity is None else repr(th.vorticity)),
        f"theoretical form: {th.description}",
    ]
    for metric, fit in report.fits.items():
        lines.append(
            f"fitted {metric} slope: {fit.slope!r} (stderr {fit.stderr!r})"
        )
    for name, verdict in report.verdicts.items():
        lines.append(f"verdict {name}: {verdict}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return lines


def cmd_sweep(config_path: str | None, self_test: bool, jobs: int) -> int:
    if self_test:
        return _self_test()
    if config_path is None:
        print("sweep: a config path is required unless --self-test", file=sys.stderr)
        return EXIT_CONFIG
    cfg = load_config(config_path)
    plan = cfg.sweep_plan(jobs=jobs)
    if plan.regime == "smooth_2_lt_s_lt_3":
        report = galerkin_reference_sweep(plan, plan.s)
    else:
        report = run_sweep(plan)
    os.makedirs(cfg.out_dir, exist_ok=True)

    lines = _provenance(cfg)
    lines.append("alpha,sup_u_l2,sup_omega_l2,sup_u_h1")
    for i, alpha in enumerate(report.alphas):
        lines.append(
            ",".join(
                repr(float(x))
                for x in (
                    alpha,
                    report.errors["sup_u_l2"][i],
                    report.errors["sup_omega_l2"][i],
                    report.errors["sup_u_h1"][i],
                )
            )
        )
    csv_path = os.path.join(cfg.out_dir, "sweep.csv")
    _write_lines(csv_path, lines)

    summary = _provenance(cfg) + _summary_lines(report)
    summary_path = os.path.join(cfg.out_dir, "summary.txt")
    _write_lines(summary_path, summary)

    print(f"wrote {csv_path}")
    print(f"wrote {summary_path}")
    for line in _summary_lines(report):
        print(line)
    return EXIT_OK


def _self_test() -> int:
    """Exact and perturbed synthetic power laws through the rate fitter."""
    alphas = (1e-2, 1e-3, 1e-4, 1e-5)
    ok = True

    fit = fit_rate([(a, 2.0 * math.sqrt(a)) for a in alphas])
    good = abs(fit.slope - 0.5) <= 1e-10 and abs(fit.intercept - math.log(2.0)) <= 1e-10
    ok &= good
    print(f"self-test e=2*alpha^0.5: slope {fit.slope!r} "
          f"{'PASS' if good else 'FAIL'}")

    fit = fit_rate([(a, 7.0 * a) for a in alphas])
    good = abs(fit.slope - 1.0) <= 1e-10
    ok &= good
    print(f"self-test e=7*alpha: slope {fit.slope!r} {'PASS' if good else 'FAIL'}")

    fit = fit_rate([(a, math.sqrt(a) * (1.0 + 0.01 * math.sin(math.log(a)))) for a in alphas])
    good = 0.49 <= fit.slope <= 0.51
    ok &= good
    print(f"self-test perturbed power law: slope {fit.slope!r} "
          f"{'PASS' if good else 'FAIL'}")
    return EXIT_OK if ok else 1


def cmd_diagnose(
    snapshot_path: str,
    cz: tuple[float, ...],
    gagliardo: tuple[float, ...],
) -> int:
    snap = read_snapshot(snapshot_path)
    with open(snapshot_path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    omega = snap.field()
    u = biot_savart(omega)

    lines = [
        f"# voigt2d {__version__}",
        f"# snapshot sha256 {digest}",
        "quantity,value",
        f"time,{snap.time!r}",
        f"alpha,{snap.alpha!r}",
        f"grid_size,{snap.values.shape[0]}",
        f"omega_l2,{l2_norm(omega)!r}",
        f"omega_sup,{lp_norm(omega, math.inf)!r}",
        f"omega_h1,{sobolev_norm(omega, 1.0)!r}",
        f"velocity_l2,{velocity_l2(u)!r}",
        f"energy,{velocity_l2(u) ** 2!r}",
        f"enstrophy,{l2_norm(omega) ** 2!r}",
        f"voigt_energy,{voigt_energy(u, snap.alpha)!r}",
        f"voigt_enstrophy,{voigt_enstrophy(omega, snap.alpha)!r}",
    ]
    for p in cz:
        lines.append(f"cz_ratio_p{p:g},{cz_ratio(omega, p)!r}")
    for p in gagliardo:
        lines.append(f"gagliardo_ratio_p{p:g},{gagliardo_ratio(omega, p)!r}")
    print("\n".join(lines))
    return EXIT_OK


def _p_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad p list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voigt2d",
        description="Pseudo-spectral Euler / Euler-Voigt solver and "
        "convergence-experiment harness on the 2D torus.",
    )
    parser.add_argument("--version", action="version", version=f"voigt2d {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate one configuration")
    p_sim.add_argument("config", help="path to a run configuration file")

    p_sweep = sub.add_parser("sweep", help="run a convergence experiment")
    p_sweep.add_argument("config", nargs="?", help="path to a run configuration file")
    p_sweep.add_argument(
        "--self-test",
        action="store_true",
        help="check the rate fitter on synthetic power laws and exit",
    )
    p_sweep.add_argument(
        "--jobs", type=int, default=1, help="concurrent (alpha) runs (default 1)"
    )

    p_diag = sub.add_parser("diagnose", help="print norms of a stored snapshot")
    p_diag.add_argument("snapshot", help="path to a .vfld snapshot file")
    p_diag.add_argument(
        "--cz", type=_p_list, default=(), help="comma list of p for cz_ratio rows"
    )
    p_diag.add_argument(
        "--gagliardo",
        type=_p_list,
        default=(),
        help="comma list of p for gagliardo_ratio rows",
    )
    return parser


def entry(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.self_test, args.jobs)
        return cmd_diagnose(args.snapshot, args.cz, args.gagliardo)
    except (ConfigError, SnapshotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BLOWUP


def main() -> None:
    sys.exit(entry())


if __name__ == "__main__":
    main()
