"""Command-line front end.

Subcommands: evaluate, pareto, bargain, nash, stackelberg, sweep, verify.
Every command reads a scenario file (see :mod:`reinsgame.scenario` for the
grammar). Exit codes: 0 success, 1 usage or parse error, 2 numerical
accuracy failure, 3 verification mismatch. CSV output uses the shortest
round-trip decimal representation, so identical scenarios give byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import svg
from .bargaining import welfare
from .contract import pareto_indemnity_parametric
from .errors import GrammarError, IntegrationAccuracyError, ScenarioError
from .game import (
    nash_equilibria,
    stackelberg,
    verify_equilibria_bruteforce,
    welfare_grid,
)
from .riskmeasure import rho_total
from .scenario import Scenario, parse_number, parse_scenario

import numpy as np


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reinsgame",
        description="Reinsurance bargaining analysis under strategically chosen risk aversion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, zetas: bool = False) -> None:
        p.add_argument("--scenario", required=True, help="path to a scenario file")
        p.add_argument("--out", default=None, help="output directory (overrides scenario)")
        p.add_argument(
            "--format",
            choices=("table", "csv", "svg"),
            default=None,
            help="restrict outputs to one kind",
        )
        p.add_argument("--grid", type=int, default=None, help="lattice size for sweeps")
        if zetas:
            p.add_argument("--zeta1", default=None, help="insurer submission (default gamma1)")
            p.add_argument("--zeta2", default=None, help="reinsurer submission (default gamma2)")

    p_eval = sub.add_parser("evaluate", help="print rho(X; gamma) for a list of gammas")
    common(p_eval)
    p_eval.add_argument("--gammas", default=None, help="comma-separated aversions (fractions ok)")

    common(sub.add_parser("pareto", help="print the optimal cover selection"), zetas=True)
    common(sub.add_parser("bargain", help="print the welfare report for one pair"), zetas=True)
    common(sub.add_parser("nash", help="print the equilibrium set report"))
    common(sub.add_parser("stackelberg", help="print both leader cases"))
    common(sub.add_parser("sweep", help="write the gain surfaces over the lattice"))
    common(sub.add_parser("verify", help="brute-force check of the equilibrium set"))
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        scenario = parse_scenario(args.scenario)
    except (ScenarioError, GrammarError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    handler = _COMMANDS[args.command]
    try:
        return handler(scenario, args)
    except IntegrationAccuracyError as exc:
        print(f"numerical accuracy failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:  # pragma: no cover - console-script shim
    raise SystemExit(main())


def _outputs(scenario: Scenario, args) -> frozenset:
    if args.format is not None:
        return frozenset({args.format})
    return scenario.outputs


def _stdout_csv(scenario: Scenario, args) -> bool:
    """CSV on stdout only when a table was not also asked for."""
    wanted = _outputs(scenario, args)
    return "csv" in wanted and "table" not in wanted


def _out_dir(scenario: Scenario, args) -> Path:
    out = Path(args.out) if args.out else scenario.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_n(scenario: Scenario, args) -> int:
    return args.grid if args.grid else scenario.grid_n


def _zetas(scenario: Scenario, args) -> tuple[float, float]:
    spec = scenario.spec
    z1 = parse_number(args.zeta1) if args.zeta1 is not None else spec.gamma1
    z2 = parse_number(args.zeta2) if args.zeta2 is not None else spec.gamma2
    return z1, z2


def _cmd_evaluate(scenario: Scenario, args) -> int:
    spec = scenario.spec
    if args.gammas:
        gammas = [parse_number(part) for part in args.gammas.split(",")]
    else:
        gammas = sorted({0.0, 0.25, 0.5, 0.75, 1.0, spec.gamma1, spec.gamma2})
    rows = [(g, rho_total(spec.family, spec.dist, g)) for g in gammas]
    if _stdout_csv(scenario, args):
        print("gamma,rho_x")
        for g, r in rows:
            print(f"{g!r},{r!r}")
    else:
        print(f"{'gamma':>10}  {'rho(X; gamma)':>16}")
        for g, r in rows:
            print(f"{g:>10.6f}  {r:>16.8f}")
    return 0


def _cmd_pareto(scenario: Scenario, args) -> int:
    spec = scenario.spec
    z1, z2 = _zetas(scenario, args)
    indemnity = pareto_indemnity_parametric(spec.dist, z1, z2, spec.gamma1, spec.gamma2)
    kind = "full cover: I(X) = X" if indemnity.is_full else "null cover: I(X) = 0"
    print(f"optimal cover at (zeta1={z1:g}, zeta2={z2:g}): {kind}")
    print(f"{'x':>12}  {'I(x)':>12}")
    for p in (0.25, 0.5, 0.75, 0.9, 0.99):
        x = spec.dist.quantile(p)
        print(f"{x:>12.6f}  {indemnity(x):>12.6f}")
    if "csv" in _outputs(scenario, args):
        target = _out_dir(scenario, args) / "pareto_indemnity.csv"
        indemnity.save_csv(target)
        print(f"wrote {target}")
    return 0


def _cmd_bargain(scenario: Scenario, args) -> int:
    spec = scenario.spec
    z1, z2 = _zetas(scenario, args)
    report = welfare(spec, z1, z2)
    if _stdout_csv(scenario, args):
        print(report.CSV_HEADER)
        print(report.csv_row())
    else:
        print(f"submitted aversions   zeta1={z1:g}  zeta2={z2:g}")
        print(f"premium               {report.premium:.8f}")
        print(f"raw gains             insurer {report.wg1_hat:.8f}  reinsurer {report.wg2_hat:.8f}")
        print(f"gains after IR gate   insurer {report.wg1:.8f}  reinsurer {report.wg2:.8f}")
        print(
            "posterior risks       "
            f"insurer {report.posterior_rho1:.8f}  reinsurer {report.posterior_rho2:.8f}"
        )
    return 0


def _threshold_json(value: float):
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _cmd_nash(scenario: Scenario, args) -> int:
    spec = scenario.spec
    report = nash_equilibria(spec, diagonal_samples=5)
    payload = {
        "gamma1": spec.gamma1,
        "gamma2": spec.gamma2,
        "delta": spec.delta,
        "every_pair": report.every_pair,
        "diagonal": list(report.diagonal) if report.diagonal else None,
        "gamma_bar_1": _threshold_json(report.gamma_bar_1),
        "gamma_bar_2": _threshold_json(report.gamma_bar_2),
        "trivial_region": None,
        "points": [
            {
                "zeta1": p.zeta1,
                "zeta2": p.zeta2,
                "cover": "full" if p.contract.indemnity.is_full else "null",
                "premium": p.contract.premium,
                "wg1": p.welfare.wg1,
                "wg2": p.welfare.wg2,
            }
            for p in report.per_point
        ],
    }
    if report.trivial_region is not None:
        bar1, bar2 = report.gamma_bar_1, report.gamma_bar_2
        zeta1_intervals = [[0.0, spec.gamma2]]
        if math.isfinite(bar1) and bar1 < 1.0:
            zeta1_intervals.append([bar1, 1.0])  # open at the left end
        zeta2_intervals = [[spec.gamma1, 1.0]]
        if math.isfinite(bar2) and bar2 > 0.0:
            zeta2_intervals.insert(0, [0.0, bar2])  # open at the right end
        payload["trivial_region"] = {
            "zeta1_intervals": zeta1_intervals,
            "zeta2_intervals": zeta2_intervals,
        }
    print(json.dumps(payload, indent=2, sort_keys=True))

    wanted = _outputs(scenario, args)
    if "csv" in wanted:
        grid = verify_equilibria_bruteforce(spec, _grid_n(scenario, args))
        target = _out_dir(scenario, args) / "nash_grid.csv"
        target.write_text(_grid_csv(grid))
        print(f"wrote {target}", file=sys.stderr)
    if "svg" in wanted:
        out = _out_dir(scenario, args)
        (out / "nash_regions.svg").write_text(svg.nash_regions_svg(report, spec.gamma1, spec.gamma2))
        (out / "wg_region.svg").write_text(svg.wg_region_svg(spec))
        print(f"wrote {out / 'nash_regions.svg'} and {out / 'wg_region.svg'}", file=sys.stderr)
    return 0


def _cmd_stackelberg(scenario: Scenario, args) -> int:
    spec = scenario.spec
    rows = [stackelberg(spec, leader) for leader in ("insurer", "reinsurer")]
    if _stdout_csv(scenario, args):
        print("leader,zeta1,zeta2,premium,wg1,wg2,every_pair")
        for r in rows:
            print(
                f"{r.leader},{r.strategy[0]!r},{r.strategy[1]!r},{r.contract.premium!r},"
                f"{r.welfare.wg1!r},{r.welfare.wg2!r},{r.every_pair}"
            )
    else:
        for r in rows:
            tag = " (every pair; zero gains)" if r.every_pair else ""
            print(
                f"leader={r.leader:<9} strategy=({r.strategy[0]:.6f}, {r.strategy[1]:.6f})  "
                f"premium={r.contract.premium:.6f}  WG1={r.welfare.wg1:.6f}  "
                f"WG2={r.welfare.wg2:.6f}{tag}"
            )
    return 0


def _cmd_sweep(scenario: Scenario, args) -> int:
    spec = scenario.spec
    n = _grid_n(scenario, args)
    zetas = np.linspace(0.0, 1.0, n)
    wg1, wg2 = welfare_grid(spec, zetas)
    lines = ["zeta1,zeta2,wg1,wg2"]
    for i, z1 in enumerate(zetas):
        for j, z2 in enumerate(zetas):
            lines.append(
                f"{float(z1)!r},{float(z2)!r},{float(wg1[i, j])!r},{float(wg2[i, j])!r}"
            )
    target = _out_dir(scenario, args) / "sweep_wg.csv"
    target.write_text("\n".join(lines) + "\n")
    print(f"wrote {target}")
    return 0


def _grid_csv(grid) -> str:
    lines = ["zeta1,zeta2,wg1,wg2,grid_nash,analytic_nash,in_band"]
    zetas = grid.zetas
    for i, z1 in enumerate(zetas):
        for j, z2 in enumerate(zetas):
            lines.append(
                f"{float(z1)!r},{float(z2)!r},{float(grid.wg1[i, j])!r},{float(grid.wg2[i, j])!r},"
                f"{int(grid.flagged[i, j])},{int(grid.analytic[i, j])},{int(grid.band[i, j])}"
            )
    return "\n".join(lines) + "\n"


def _cmd_verify(scenario: Scenario, args) -> int:
    spec = scenario.spec
    n = _grid_n(scenario, args)
    grid = verify_equilibria_bruteforce(spec, n)
    flagged = int(grid.flagged.sum())
    analytic = int(grid.analytic.sum())
    print(
        f"grid {n}x{n}: flagged {flagged} lattice equilibria, analytic set covers {analytic}; "
        f"{grid.mismatches.shape[0]} mismatches outside the one-cell boundary band"
    )
    if "csv" in _outputs(scenario, args):
        target = _out_dir(scenario, args) / "nash_grid.csv"
        target.write_text(_grid_csv(grid))
        print(f"wrote {target}")
    if not grid.ok:
        for i, j in grid.mismatches[:10]:
            print(
                f"  mismatch at zeta1={grid.zetas[i]!r}, zeta2={grid.zetas[j]!r}: "
                f"grid={bool(grid.flagged[i, j])} analytic={bool(grid.analytic[i, j])}",
                file=sys.stderr,
            )
        return 3
    return 0


_COMMANDS = {
    "evaluate": _cmd_evaluate,
    "pareto": _cmd_pareto,
    "bargain": _cmd_bargain,
    "nash": _cmd_nash,
    "stackelberg": _cmd_stackelberg,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
}
