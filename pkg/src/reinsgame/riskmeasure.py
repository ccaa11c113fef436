"""Distortion risk measures over loss layers.

A distortion family supplies g(s; gamma), a probability distortion that is
non-decreasing in s with g(0) = 0 and g(1) = 1 and, on interior s, strictly
increasing in the aversion parameter gamma in [0, 1]. The induced risk of a
non-negative position Y is the survival-distortion integral

    rho(Y; gamma) = integral_0^inf g(S_Y(z); gamma) dz,

extended to cash by translation invariance: rho(Y + c) = rho(Y) + c.

Positions are restricted to comonotone slices of a single loss X: the loss
itself, a ceded part I(X), or the retained part X - I(X), where I is a
1-Lipschitz indemnity (see :mod:`reinsgame.contract`). For those slices the
layer identity

    rho(I(X); gamma) = integral_0^inf I'(z) * g(S_X(z); gamma) dz

turns every evaluation into a weighted survival integral; it is exact because
the loss layers are comonotone. Evaluation strategy, in order of preference:
exact finite sums for empirical laws, closed forms built from partial
expectations where the law provides them, and adaptive quadrature with
absolute tolerance 1e-10 otherwise. Integrals run over [0, support_upper].
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate

from .distributions import Empirical, Exponential, LossDistribution, Uniform
from .errors import GrammarError, IntegrationAccuracyError

if TYPE_CHECKING:  # pragma: no cover
    from .contract import Indemnity

QUAD_ABS_TOL = 1e-10
_QUAD_RAISE_AT = 1e-8


def _check_gamma(gamma: float) -> float:
    g = float(gamma)
    if not (0.0 <= g <= 1.0):
        raise ValueError(f"risk aversion must lie in [0, 1], got {gamma}")
    return g


@dataclass(frozen=True)
class MeanCVaRMix:
    """Mixture distortion g(s; gamma) = (1-gamma)*s + gamma*min(s/(1-alpha), 1).

    gamma = 0 prices at the mean, gamma = 1 at the alpha-level expected
    shortfall; intermediate gamma interpolates linearly.
    """

    alpha: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must lie in (0, 1)")

    def g(self, s, gamma):
        s = np.asarray(s, dtype=float)
        tail = np.minimum(s / (1.0 - self.alpha), 1.0)
        return (1.0 - gamma) * s + gamma * tail

    def kink_levels(self) -> tuple[float, ...]:
        return (1.0 - self.alpha,)

    def layer_closed(self, dist: LossDistribution, gamma: float, x):
        emin = dist.emin(x)
        if emin is None:
            return None
        z_alpha = dist.quantile(self.alpha)
        e_alpha = dist.emin(z_alpha)
        tail = np.minimum(x, z_alpha) + np.maximum(emin - e_alpha, 0.0) / (1.0 - self.alpha)
        return (1.0 - gamma) * emin + gamma * tail


@dataclass(frozen=True)
class ProportionalHazard:
    """Power distortion g(s; gamma) = s**(1-gamma); gamma = 0 is the mean."""

    def g(self, s, gamma):
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            out = np.where(s > 0.0, s ** (1.0 - gamma), 0.0)
        return out

    def kink_levels(self) -> tuple[float, ...]:
        return ()

    def layer_closed(self, dist: LossDistribution, gamma: float, x):
        x = np.asarray(x, dtype=float)
        if isinstance(dist, Exponential):
            k = (1.0 - gamma) * dist.rate
            if k == 0.0:
                return x.copy()
            return -np.expm1(-k * x) / k
        if isinstance(dist, Uniform):
            a, b = dist.a, dist.b
            width = b - a
            expo = 2.0 - gamma
            xc = np.clip(x, a, b)
            inside = a + (width / expo) * (1.0 - ((b - xc) / width) ** expo)
            return np.where(x < a, x, inside)
        return None


class TabulatedFamily:
    """Distortion family given by a table of g values on an (s, gamma) grid.

    Interpolation is bilinear: piecewise linear along s within each gamma
    column, linear between the two bracketing columns. Construction validates
    the boundary conditions g(0)=0 and g(1)=1, monotonicity in s, and strict
    monotonicity in gamma at every interior s node.
    """

    def __init__(self, s_nodes, gamma_nodes, table):
        s = np.asarray(s_nodes, dtype=float)
        g = np.asarray(gamma_nodes, dtype=float)
        t = np.asarray(table, dtype=float)
        if s.ndim != 1 or g.ndim != 1 or t.shape != (s.size, g.size):
            raise GrammarError("table shape must be (len(s_nodes), len(gamma_nodes))")
        if s[0] != 0.0 or s[-1] != 1.0 or np.any(np.diff(s) <= 0.0):
            raise GrammarError("s nodes must increase strictly from 0 to 1")
        if g[0] != 0.0 or g[-1] != 1.0 or np.any(np.diff(g) <= 0.0):
            raise GrammarError("gamma nodes must increase strictly from 0 to 1")
        if np.any(t[0, :] != 0.0) or np.any(t[-1, :] != 1.0):
            raise GrammarError("table must satisfy g(0)=0 and g(1)=1 in every column")
        if np.any(np.diff(t, axis=0) < 0.0):
            raise GrammarError("table must be non-decreasing along s")
        if s.size > 2 and np.any(np.diff(t[1:-1, :], axis=1) <= 0.0):
            raise GrammarError("table must increase strictly in gamma at interior s")
        self._s = s
        self._gamma = g
        self._table = t
        for arr in (self._s, self._gamma, self._table):
            arr.setflags(write=False)

    @classmethod
    def from_csv(cls, path) -> "TabulatedFamily":
        path = Path(path)
        with path.open(newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(cell.strip() for cell in row)]
        if len(rows) < 3:
            raise GrammarError(f"distortion table {path} needs a header and at least two rows")
        try:
            gamma_nodes = [float(cell) for cell in rows[0][1:]]
            body = np.array([[float(cell) for cell in row] for row in rows[1:]])
        except ValueError as exc:
            raise GrammarError(f"non-numeric entry in distortion table {path}") from exc
        return cls(body[:, 0], gamma_nodes, body[:, 1:])

    def g(self, s, gamma):
        s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
        nodes = self._gamma
        if gamma <= nodes[0]:
            column = self._table[:, 0]
        elif gamma >= nodes[-1]:
            column = self._table[:, -1]
        else:
            hi = int(np.searchsorted(nodes, gamma, side="right"))
            lo = hi - 1
            t = (gamma - nodes[lo]) / (nodes[hi] - nodes[lo])
            column = (1.0 - t) * self._table[:, lo] + t * self._table[:, hi]
        return np.interp(s, self._s, column)

    def kink_levels(self) -> tuple[float, ...]:
        return tuple(self._s[1:-1])

    def layer_closed(self, dist, gamma, x):
        return None


DistortionFamily = MeanCVaRMix | ProportionalHazard | TabulatedFamily


def parse_family(text: str, base_dir=None) -> DistortionFamily:
    """Parse the family grammar: ``mean_cvar(alpha)``, ``prop_hazard``,
    ``custom(path/to/table.csv)``."""
    from .distributions import _numeric_args, _split_call

    spec = text.strip()
    name, args = _split_call(spec)
    if name == "mean_cvar":
        (alpha,) = _numeric_args(spec, args, 1)
        try:
            return MeanCVaRMix(alpha)
        except ValueError as exc:
            raise GrammarError(str(exc)) from exc
    if name == "prop_hazard":
        if args:
            raise GrammarError("prop_hazard takes no arguments")
        return ProportionalHazard()
    if name == "custom":
        if len(args) != 1 or not args[0]:
            raise GrammarError(f"custom(...) takes one path argument: {spec!r}")
        path = Path(args[0])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.exists():
            raise GrammarError(f"distortion table not found: {path}")
        return TabulatedFamily.from_csv(path)
    raise GrammarError(f"unknown distortion family {spec!r}")


def distortion(family: DistortionFamily, s, gamma: float):
    """Evaluate g(s; gamma) with domain checks on both arguments."""
    g = _check_gamma(gamma)
    arr = np.asarray(s, dtype=float)
    if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
        raise ValueError("survival level must lie in [0, 1]")
    out = family.g(np.clip(arr, 0.0, 1.0), g)
    return float(out) if np.ndim(s) == 0 else out


@dataclass(frozen=True)
class PayoutSlice:
    """A comonotone slice of the loss: X, I(X) or X - I(X), plus cash.

    ``part`` is one of "total", "ceded", "retained"; the indemnity is
    required except for "total".
    """

    part: str
    indemnity: "Indemnity | None" = None
    cash: float = 0.0

    def __post_init__(self):
        if self.part not in ("total", "ceded", "retained"):
            raise ValueError("part must be 'total', 'ceded' or 'retained'")
        if self.part != "total" and self.indemnity is None:
            raise ValueError(f"part {self.part!r} needs an indemnity")

    @classmethod
    def total(cls, cash: float = 0.0) -> "PayoutSlice":
        return cls("total", None, cash)

    @classmethod
    def ceded(cls, indemnity: "Indemnity", cash: float = 0.0) -> "PayoutSlice":
        return cls("ceded", indemnity, cash)

    @classmethod
    def retained(cls, indemnity: "Indemnity", cash: float = 0.0) -> "PayoutSlice":
        return cls("retained", indemnity, cash)


def rho(family: DistortionFamily, dist: LossDistribution, part: PayoutSlice, gamma: float) -> float:
    """Risk of the designated slice plus cash under g(.; gamma)."""
    g = _check_gamma(gamma)
    if part.part == "total":
        base = rho_total(family, dist, g)
    else:
        ind = part.indemnity
        want_ceded = part.part == "ceded"
        if ind.is_full:
            base = rho_total(family, dist, g) if want_ceded else 0.0
        elif ind.is_null:
            base = 0.0 if want_ceded else rho_total(family, dist, g)
        else:
            base = _rho_sliced(family, dist, g, ind, want_ceded)
    return base + part.cash


def rho_total(family: DistortionFamily, dist: LossDistribution, gamma: float) -> float:
    """rho(X; gamma) for the whole loss."""
    gamma = _check_gamma(gamma)
    if isinstance(dist, Empirical):
        return _rho_total_empirical(family, dist, gamma)
    upper = dist.support_upper
    closed = family.layer_closed(dist, gamma, np.asarray([upper]))
    if closed is not None:
        return float(closed[0])
    return _quad_layer(family, dist, gamma, 0.0, upper)


def layer_values(family: DistortionFamily, dist: LossDistribution, gamma: float, breaks) -> np.ndarray:
    """Integrals of g(S_X(z); gamma) over each cell of an increasing grid.

    These are the Choquet prices of the unit loss layers delimited by
    ``breaks``; every sliced evaluation and the Pareto layer solver are dot
    products against them.
    """
    gamma = _check_gamma(gamma)
    b = np.asarray(breaks, dtype=float)
    if b.ndim != 1 or b.size < 2 or np.any(np.diff(b) <= 0.0):
        raise ValueError("breaks must be a strictly increasing 1-d grid")
    if isinstance(dist, Empirical):
        cum = _empirical_layer_cum(family, dist, gamma, b)
        return np.diff(cum)
    closed = family.layer_closed(dist, gamma, b)
    if closed is not None:
        return np.diff(closed)
    return np.array(
        [_quad_layer(family, dist, gamma, lo, hi) for lo, hi in zip(b[:-1], b[1:])]
    )


def _rho_sliced(family, dist, gamma, ind, want_ceded: bool) -> float:
    upper = dist.support_upper
    grid = ind.grid
    keep = grid < upper
    breaks = np.concatenate([grid[keep], [upper]])
    slopes = ind.marginal_at(breaks[:-1])
    weights = slopes if want_ceded else 1.0 - slopes
    vals = layer_values(family, dist, gamma, breaks)
    return float(np.dot(weights, vals))


def _rho_total_empirical(family, dist: Empirical, gamma: float) -> float:
    surv_after = np.clip(1.0 - dist._cumw, 0.0, 1.0)
    surv_before = np.concatenate([[1.0], surv_after[:-1]])
    steps = family.g(surv_before, gamma) - family.g(surv_after, gamma)
    return float(np.dot(dist.samples, steps))


def _empirical_layer_cum(family, dist: Empirical, gamma: float, zs: np.ndarray) -> np.ndarray:
    bounds = np.unique(np.concatenate([[0.0], dist.samples]))
    level = family.g(np.clip(dist.survival(bounds), 0.0, 1.0), gamma)
    prefix = np.concatenate([[0.0], np.cumsum(np.diff(bounds) * level[:-1])])
    idx = np.clip(np.searchsorted(bounds, zs, side="right") - 1, 0, bounds.size - 1)
    return prefix[idx] + level[idx] * (zs - bounds[idx])


def _quad_layer(family, dist, gamma: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0
    pts = sorted(
        dist.quantile(1.0 - s) for s in family.kink_levels() if 0.0 < 1.0 - s < 1.0
    )
    pts = [p for p in pts if lo < p < hi]

    def integrand(z: float) -> float:
        s = min(max(float(dist.survival(z)), 0.0), 1.0)
        return float(family.g(s, gamma))

    result = integrate.quad(
        integrand,
        lo,
        hi,
        points=pts or None,
        epsabs=QUAD_ABS_TOL,
        epsrel=QUAD_ABS_TOL,
        limit=max(200, 20 + 10 * len(pts)),
        full_output=1,
    )
    value, abserr = result[0], result[1]
    if abserr > _QUAD_RAISE_AT * max(1.0, abs(value)):
        raise IntegrationAccuracyError(
            f"survival-distortion integral on [{lo:g}, {hi:g}] did not converge", abserr
        )
    return float(value)
