#!/usr/bin/env python3
"""Run the headline scenario end to end and drop all artifacts in ./out.

Reproduces the affine case rho(X; gamma) = 1 + gamma * ln(100): the mimic
diagonal of equilibria on [1/3, 2/3], the insurer refusal threshold 5/6, both
Stackelberg corners, and the brute-force lattice verification.
"""

import argparse
import math
from pathlib import Path

import numpy as np

import reinsgame as rg
from reinsgame import svg


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("out/example2"))
    parser.add_argument("--grid", type=int, default=101)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    spec = rg.GameSpec(
        family=rg.MeanCVaRMix(0.99),
        dist=rg.Exponential(1.0),
        gamma1=2.0 / 3.0,
        gamma2=1.0 / 3.0,
        delta=0.8,
    )
    ln100 = math.log(100.0)

    print("== risk of the whole loss ==")
    for gamma in (0.0, spec.gamma2, 0.5, spec.gamma1, 1.0):
        print(f"  rho(X; {gamma:.4f}) = {spec.rho_x(gamma):.8f}   (affine: {1 + gamma * ln100:.8f})")

    print("\n== equilibrium set ==")
    report = rg.nash_equilibria(spec, diagonal_samples=5)
    lo, hi = report.diagonal
    print(f"  mimic diagonal: [{lo:.6f}, {hi:.6f}]")
    print(f"  gamma_bar_1 = {report.gamma_bar_1:.6f}   gamma_bar_2 = {report.gamma_bar_2}")
    for point in report.per_point:
        print(
            f"  (gamma*, gamma*) = ({point.zeta1:.4f}, {point.zeta2:.4f})  "
            f"premium {point.contract.premium:.6f}  WG1 {point.welfare.wg1:.6f}  "
            f"WG2 {point.welfare.wg2:.6f}"
        )

    print("\n== Stackelberg corners ==")
    for leader in ("insurer", "reinsurer"):
        res = rg.stackelberg(spec, leader)
        print(
            f"  {leader:<9} leads: strategy ({res.strategy[0]:.4f}, {res.strategy[1]:.4f})  "
            f"premium {res.contract.premium:.6f}  WG1 {res.welfare.wg1:.6f}  WG2 {res.welfare.wg2:.6f}"
        )

    print("\n== brute-force lattice check ==")
    grid = rg.verify_equilibria_bruteforce(spec, args.grid)
    print(
        f"  {args.grid}x{args.grid} lattice: {int(grid.flagged.sum())} flagged, "
        f"{grid.mismatches.shape[0]} mismatches outside the boundary band"
    )

    zetas = np.linspace(0.0, 1.0, args.grid)
    wg1, wg2 = rg.welfare_grid(spec, zetas)
    rows = ["zeta1,zeta2,wg1,wg2"]
    for i, z1 in enumerate(zetas):
        for j, z2 in enumerate(zetas):
            rows.append(
                f"{float(z1)!r},{float(z2)!r},{float(wg1[i, j])!r},{float(wg2[i, j])!r}"
            )
    (args.out / "sweep_wg.csv").write_text("\n".join(rows) + "\n")
    (args.out / "nash_regions.svg").write_text(
        svg.nash_regions_svg(report, spec.gamma1, spec.gamma2)
    )
    (args.out / "wg_region.svg").write_text(svg.wg_region_svg(spec))
    print(f"\nartifacts in {args.out}")
    return 0 if grid.ok else 3


if __name__ == "__main__":
    raise SystemExit(main())
