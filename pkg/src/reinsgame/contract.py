"""Indemnity schedules and Pareto-optimal cover selection.

An admissible indemnity I vanishes at zero, is non-decreasing and
1-Lipschitz; equivalently it integrates a marginal schedule m with
0 <= m <= 1 (the ceded share of each loss layer). We store the schedule as a
step function on a strictly increasing loss grid starting at 0; beyond the
last grid point the final slope continues, so ``full_cover`` is the identity
on all of [0, inf).

Two Pareto solvers are provided. The parametric one covers a single
distortion family evaluated at two submitted aversions, where the optimal
cover is all-or-nothing. The general layer solver minimizes

    rho_1(X - I(X)) + rho_2(I(X))        over admissible I

for two arbitrary distortion measures by comparing the per-layer prices of
the two agents and ceding exactly the layers the reinsurer values less; on a
tie the layer is ceded.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import LossDistribution
from .errors import GrammarError
from .riskmeasure import DistortionFamily, layer_values

_SLOPE_TOL = 1e-12


class Indemnity:
    """Piecewise-linear indemnity defined by a loss grid and per-cell slopes.

    ``grid`` has M+1 points starting at 0; ``slopes[k]`` applies on
    [grid[k], grid[k+1]) and, for the last cell, onward.
    """

    def __init__(self, grid, slopes):
        g = np.asarray(grid, dtype=float)
        m = np.asarray(slopes, dtype=float)
        if g.ndim != 1 or g.size < 2:
            raise ValueError("grid needs at least two points")
        if g[0] != 0.0:
            raise ValueError("grid must start at 0")
        if not np.all(np.isfinite(g)) or np.any(np.diff(g) <= 0.0):
            raise ValueError("grid must be finite and strictly increasing")
        if m.shape != (g.size - 1,):
            raise ValueError("need exactly one slope per grid cell")
        if np.any(m < -_SLOPE_TOL) or np.any(m > 1.0 + _SLOPE_TOL):
            raise ValueError("slopes must lie in [0, 1]")
        m = np.clip(m, 0.0, 1.0)
        self.grid = g
        self.slopes = m
        self._cum = np.concatenate([[0.0], np.cumsum(m * np.diff(g))])
        for arr in (self.grid, self.slopes, self._cum):
            arr.setflags(write=False)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.grid, arr, side="right") - 1, 0, self.slopes.size - 1)
        out = self._cum[idx] + self.slopes[idx] * (arr - self.grid[idx])
        return float(out) if np.ndim(x) == 0 else out

    def marginal_at(self, z):
        """Slope of the schedule at z (final slope extends past the grid)."""
        arr = np.asarray(z, dtype=float)
        idx = np.clip(np.searchsorted(self.grid, arr, side="right") - 1, 0, self.slopes.size - 1)
        out = self.slopes[idx]
        return float(out) if np.ndim(z) == 0 else out

    @property
    def is_full(self) -> bool:
        return bool(np.all(self.slopes == 1.0))

    @property
    def is_null(self) -> bool:
        return bool(np.all(self.slopes == 0.0))

    def complement(self) -> "Indemnity":
        """Schedule of the retained share, 1 - m."""
        return Indemnity(self.grid, 1.0 - self.slopes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Indemnity):
            return NotImplemented
        return np.array_equal(self.grid, other.grid) and np.array_equal(
            self.slopes, other.slopes
        )

    def __repr__(self) -> str:
        if self.is_full:
            return f"Indemnity(full cover up to {self.grid[-1]:g})"
        if self.is_null:
            return "Indemnity(null cover)"
        return f"Indemnity(cells={self.slopes.size}, up to {self.grid[-1]:g})"

    def to_csv_text(self) -> str:
        """Rows (z_k, m_k): slope m_k applies on [z_{k-1}, z_k), z_0 = 0."""
        lines = ["z,m"]
        for z, m in zip(self.grid[1:], self.slopes):
            lines.append(f"{float(z)!r},{float(m)!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv_text(cls, text: str) -> "Indemnity":
        rows = [line.strip() for line in io.StringIO(text) if line.strip()]
        if not rows or rows[0] != "z,m":
            raise GrammarError("indemnity CSV must start with header 'z,m'")
        zs, ms = [], []
        for row in rows[1:]:
            parts = row.split(",")
            if len(parts) != 2:
                raise GrammarError(f"malformed indemnity row {row!r}")
            zs.append(float(parts[0]))
            ms.append(float(parts[1]))
        return cls(np.concatenate([[0.0], zs]), np.asarray(ms))

    def save_csv(self, path) -> None:
        Path(path).write_text(self.to_csv_text())

    @classmethod
    def load_csv(cls, path) -> "Indemnity":
        return cls.from_csv_text(Path(path).read_text())


@dataclass(frozen=True)
class Contract:
    """An indemnity together with its premium."""

    indemnity: Indemnity
    premium: float

    def __post_init__(self):
        if not self.premium >= 0.0:
            raise ValueError("premium must be non-negative")


def full_cover(dist: LossDistribution) -> Indemnity:
    """I(X) = X."""
    return Indemnity([0.0, dist.support_upper], [1.0])


def null_cover(dist: LossDistribution) -> Indemnity:
    """I(X) = 0."""
    return Indemnity([0.0, dist.support_upper], [0.0])


def is_full_cover_selection(zeta1: float, zeta2: float, gamma1: float, gamma2: float) -> bool:
    """Single-valued optimal-cover rule under submitted aversions.

    Full cession when the insurer submits strictly higher aversion, or on a
    tie that lies between the true aversions (the interval is empty when
    gamma1 < gamma2); null cession otherwise.
    """
    if zeta1 > zeta2:
        return True
    return zeta1 == zeta2 and gamma2 <= zeta1 <= gamma1


def pareto_indemnity_parametric(
    dist: LossDistribution, zeta1: float, zeta2: float, gamma1: float, gamma2: float
) -> Indemnity:
    """Optimal cover within one family at submitted aversions (zeta1, zeta2)."""
    if is_full_cover_selection(zeta1, zeta2, gamma1, gamma2):
        return full_cover(dist)
    return null_cover(dist)


def quantile_grid(dist: LossDistribution, cells: int) -> np.ndarray:
    """Equal-probability loss grid from 0 to the support upper bound."""
    if cells < 1:
        raise ValueError("cells must be positive")
    ps = np.linspace(0.0, 1.0, cells + 1)[:-1]
    zs = dist.quantile(ps)
    return np.unique(np.concatenate([[0.0], zs, [dist.support_upper]]))


def pareto_indemnity_general(
    family: DistortionFamily,
    dist: LossDistribution,
    gamma1: float,
    gamma2: float,
    family2: DistortionFamily | None = None,
    cells: int = 512,
) -> tuple[Indemnity, float]:
    """Minimize rho_1(X - I(X)) + rho_2(I(X)) over discretized indemnities.

    Agent 1 (insurer) prices with ``family`` at ``gamma1``; agent 2 with
    ``family2`` (default: same family) at ``gamma2``. Layers are placed on an
    equal-probability grid with ``cells`` cells; each layer is ceded exactly
    when the reinsurer's price for it does not exceed the insurer's, which is
    the pointwise minimizer. Returns the schedule and the attained objective.
    """
    f2 = family if family2 is None else family2
    breaks = quantile_grid(dist, cells)
    price1 = layer_values(family, dist, gamma1, breaks)
    price2 = layer_values(f2, dist, gamma2, breaks)
    advantage = price2 - price1
    slopes = np.where(advantage <= 0.0, 1.0, 0.0)
    objective = float(price1.sum() + slopes @ advantage)
    return Indemnity(breaks, slopes), objective
