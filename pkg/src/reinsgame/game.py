"""Strategic layer: best responses, equilibrium sets, grid verification.

With true aversions gamma1 > gamma2 the submitted pair fixes cover, premium
and gains as in :mod:`reinsgame.bargaining`. Two refusal thresholds organize
the strategy square:

  gamma_bar_1 — the submission level above which the insurer's raw gain is
      negative against every counter-submission, so the IR gate kills every
      trade; +inf when no level is refused.
  gamma_bar_2 — the mirror threshold for the reinsurer; -inf when absent.

At most one of gamma_bar_1 < 1 and gamma_bar_2 > 0 can hold. On
(gamma1, gamma_bar_1], f2(zeta1) is the counter-submission that leaves the
insurer exactly indifferent; f1 mirrors it on [gamma_bar_2, gamma2). Both
are strictly decreasing and found by bisection (closed forms exist only for
affine rho(X; .) and are used as test oracles, not here).

The equilibrium set for gamma1 > gamma2 is the mimic diagonal
{(g, g) : g in [gamma2, gamma1]} — the complete set of equilibria in which
someone strictly gains — together with a trivial rectangle union
{zeta1 in [0, gamma2] or zeta1 > gamma_bar_1} x {zeta2 < gamma_bar_2 or
zeta2 >= gamma1} where all payoffs vanish. When gamma1 <= gamma2 every pair
is an equilibrium with zero gains. Diagonal contracts do not depend on the
bargaining weight; only the choice of the common submission moves value
between the agents.

``verify_equilibria_bruteforce`` recomputes the gain surfaces on a lattice
and flags a point iff no unilateral lattice deviation improves either agent;
a one-cell band around the region boundaries is excluded from comparisons
against the analytic set because strict/weak boundary inequalities cannot be
resolved on a float lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bargaining import GameSpec, WelfareReport, welfare
from .contract import Contract, pareto_indemnity_parametric
from .errors import OracleInapplicableError

BISECT_TOL = 1e-10
_EDGE_SLACK = 1e-9
GRID_NASH_TOL = 1e-9


def _require_beneficial_regime(spec: GameSpec) -> None:
    if not spec.gamma1 > spec.gamma2:
        raise ValueError("defined only in the mutually beneficial regime gamma1 > gamma2")


def _bisect(fn, lo: float, hi: float, tol: float = BISECT_TOL) -> float:
    """Root of a monotone sign-changing function by plain bisection."""
    sign_lo = fn(lo) >= 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (fn(mid) >= 0.0) == sign_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gamma_bar_1(spec: GameSpec) -> float:
    """Insurer refusal threshold; +inf when even zeta1 = 1 is tolerable."""
    _require_beneficial_regime(spec)
    const = spec.rho_x(spec.gamma1) - (1.0 - spec.delta) * spec.rho_x(0.0)

    def raw_gain(z1: float) -> float:
        return const - spec.delta * spec.rho_x(z1)

    if raw_gain(1.0) >= 0.0:
        return math.inf
    return _bisect(raw_gain, 0.0, 1.0)


def gamma_bar_2(spec: GameSpec) -> float:
    """Reinsurer refusal threshold; -inf when even zeta2 = 0 is tolerable."""
    _require_beneficial_regime(spec)
    const = spec.delta * spec.rho_x(1.0) - spec.rho_x(spec.gamma2)

    def raw_gain(z2: float) -> float:
        return const + (1.0 - spec.delta) * spec.rho_x(z2)

    if raw_gain(0.0) >= 0.0:
        return -math.inf
    return _bisect(raw_gain, 0.0, 1.0)


def f2(spec: GameSpec, zeta1: float) -> float:
    """Counter-submission holding the insurer at indifference.

    Defined for zeta1 in (gamma1, gamma_bar_1]; strictly decreasing there.
    """
    _require_beneficial_regime(spec)
    limit = min(gamma_bar_1(spec), 1.0)
    if not (spec.gamma1 < zeta1 <= limit + _EDGE_SLACK):
        raise ValueError(f"zeta1 must lie in (gamma1, gamma_bar_1], got {zeta1}")
    const = spec.rho_x(spec.gamma1) - spec.delta * spec.rho_x(zeta1)

    def insurer_raw_gain(z2: float) -> float:
        return const - (1.0 - spec.delta) * spec.rho_x(z2)

    if insurer_raw_gain(0.0) <= 0.0:
        return 0.0
    return _bisect(insurer_raw_gain, 0.0, zeta1)


def f1(spec: GameSpec, zeta2: float) -> float:
    """Counter-submission holding the reinsurer at indifference.

    Defined for zeta2 in [gamma_bar_2, gamma2); strictly decreasing there.
    """
    _require_beneficial_regime(spec)
    limit = max(gamma_bar_2(spec), 0.0)
    if not (limit - _EDGE_SLACK <= zeta2 < spec.gamma2):
        raise ValueError(f"zeta2 must lie in [gamma_bar_2, gamma2), got {zeta2}")
    const = (1.0 - spec.delta) * spec.rho_x(zeta2) - spec.rho_x(spec.gamma2)

    def reinsurer_raw_gain(z1: float) -> float:
        return const + spec.delta * spec.rho_x(z1)

    if reinsurer_raw_gain(1.0) <= 0.0:
        return 1.0
    return _bisect(reinsurer_raw_gain, zeta2, 1.0)


@dataclass(frozen=True)
class BestResponse:
    """Argmax correspondence value: the whole strategy set, or one point."""

    kind: str
    value: float | None = None

    @classmethod
    def everything(cls) -> "BestResponse":
        return cls("everything")

    @classmethod
    def point(cls, value: float) -> "BestResponse":
        if not (0.0 <= value <= 1.0):
            raise ValueError("best-response point must lie in [0, 1]")
        return cls("point", float(value))

    @property
    def is_everything(self) -> bool:
        return self.kind == "everything"


def best_response_reinsurer(spec: GameSpec, zeta1: float) -> BestResponse:
    """Reinsurer's optimal submissions against an observed zeta1."""
    _require_beneficial_regime(spec)
    if not (0.0 <= zeta1 <= 1.0):
        raise ValueError("zeta1 must lie in [0, 1]")
    if zeta1 <= spec.gamma2:
        return BestResponse.everything()
    if zeta1 <= spec.gamma1:
        return BestResponse.point(zeta1)
    if zeta1 <= gamma_bar_1(spec):
        return BestResponse.point(f2(spec, zeta1))
    return BestResponse.everything()


def best_response_insurer(spec: GameSpec, zeta2: float) -> BestResponse:
    """Insurer's optimal submissions against an observed zeta2."""
    _require_beneficial_regime(spec)
    if not (0.0 <= zeta2 <= 1.0):
        raise ValueError("zeta2 must lie in [0, 1]")
    if zeta2 >= spec.gamma1:
        return BestResponse.everything()
    if zeta2 >= spec.gamma2:
        return BestResponse.point(zeta2)
    if zeta2 >= gamma_bar_2(spec):
        return BestResponse.point(f1(spec, zeta2))
    return BestResponse.everything()


@dataclass(frozen=True)
class TrivialRegion:
    """Rectangle union of zero-gain equilibria (gamma1 > gamma2 regime)."""

    gamma1: float
    gamma2: float
    gamma_bar_1: float
    gamma_bar_2: float

    def contains(self, zeta1, zeta2):
        in_z1 = (np.asarray(zeta1) <= self.gamma2) | (np.asarray(zeta1) > self.gamma_bar_1)
        in_z2 = (np.asarray(zeta2) < self.gamma_bar_2) | (np.asarray(zeta2) >= self.gamma1)
        out = in_z1 & in_z2
        return bool(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class EquilibriumPoint:
    zeta1: float
    zeta2: float
    contract: Contract
    welfare: WelfareReport


@dataclass(frozen=True)
class EquilibriumReport:
    """Analytic description of the equilibrium set plus sampled contracts."""

    every_pair: bool
    diagonal: tuple[float, float] | None
    gamma_bar_1: float
    gamma_bar_2: float
    trivial_region: TrivialRegion | None
    per_point: tuple[EquilibriumPoint, ...]

    def contains(self, zeta1, zeta2):
        """Membership of submitted pairs in the analytic equilibrium set."""
        z1 = np.asarray(zeta1, dtype=float)
        z2 = np.asarray(zeta2, dtype=float)
        if self.every_pair:
            out = np.broadcast_to(True, np.broadcast(z1, z2).shape)
            return True if out.ndim == 0 else np.array(out)
        lo, hi = self.diagonal
        on_diagonal = (z1 == z2) & (z1 >= lo) & (z1 <= hi)
        out = on_diagonal | self.trivial_region.contains(z1, z2)
        return bool(out) if out.ndim == 0 else out


def _equilibrium_point(spec: GameSpec, zeta1: float, zeta2: float) -> EquilibriumPoint:
    indemnity = pareto_indemnity_parametric(spec.dist, zeta1, zeta2, spec.gamma1, spec.gamma2)
    report = welfare(spec, zeta1, zeta2)
    return EquilibriumPoint(zeta1, zeta2, Contract(indemnity, report.premium), report)


def nash_equilibria(spec: GameSpec, diagonal_samples: int = 5) -> EquilibriumReport:
    """Complete analytic equilibrium description for the given game."""
    if spec.gamma1 <= spec.gamma2:
        point = _equilibrium_point(spec, spec.gamma1, spec.gamma2)
        return EquilibriumReport(
            every_pair=True,
            diagonal=None,
            gamma_bar_1=math.inf,
            gamma_bar_2=-math.inf,
            trivial_region=None,
            per_point=(point,),
        )
    bar1 = gamma_bar_1(spec)
    bar2 = gamma_bar_2(spec)
    region = TrivialRegion(spec.gamma1, spec.gamma2, bar1, bar2)
    gammas = np.linspace(spec.gamma2, spec.gamma1, max(2, diagonal_samples))
    points = tuple(_equilibrium_point(spec, float(g), float(g)) for g in gammas)
    return EquilibriumReport(
        every_pair=False,
        diagonal=(spec.gamma2, spec.gamma1),
        gamma_bar_1=bar1,
        gamma_bar_2=bar2,
        trivial_region=region,
        per_point=points,
    )


@dataclass(frozen=True)
class StackelbergResult:
    leader: str
    strategy: tuple[float, float]
    contract: Contract
    welfare: WelfareReport
    every_pair: bool


def stackelberg(spec: GameSpec, leader: str) -> StackelbergResult:
    """Commitment refinement: the leader mimics the follower's true aversion.

    The leader captures the whole joint gain and the follower is left
    indifferent; when gamma1 <= gamma2 every pair is an equilibrium with
    zero gains and a canonical (gamma1, gamma2) profile is reported.
    """
    if leader not in ("insurer", "reinsurer"):
        raise ValueError("leader must be 'insurer' or 'reinsurer'")
    if spec.gamma1 <= spec.gamma2:
        point = _equilibrium_point(spec, spec.gamma1, spec.gamma2)
        return StackelbergResult(
            leader, (spec.gamma1, spec.gamma2), point.contract, point.welfare, every_pair=True
        )
    committed = spec.gamma2 if leader == "insurer" else spec.gamma1
    point = _equilibrium_point(spec, committed, committed)
    return StackelbergResult(
        leader, (committed, committed), point.contract, point.welfare, every_pair=False
    )


def welfare_grid(spec: GameSpec, zetas) -> tuple[np.ndarray, np.ndarray]:
    """Gain surfaces WG1, WG2 on the lattice zetas x zetas.

    Row index is the insurer's submission, column index the reinsurer's.
    Vectorized re-derivation of :func:`reinsgame.bargaining.welfare`, kept
    independent so the grid verifier does not share its code path.
    """
    z = np.asarray(zetas, dtype=float)
    if z.ndim != 1 or np.any(np.diff(z) <= 0.0):
        raise ValueError("zetas must be strictly increasing")
    rx = np.array([spec.rho_x(float(v)) for v in z])
    rx_true1 = spec.rho_x(spec.gamma1)
    rx_true2 = spec.rho_x(spec.gamma2)
    trades = z[:, None] > z[None, :]
    diagonal_ok = (z >= spec.gamma2) & (z <= spec.gamma1)
    trades = trades | np.diag(diagonal_ok)
    blended = spec.delta * rx[:, None] + (1.0 - spec.delta) * rx[None, :]
    raw1 = np.where(trades, rx_true1 - blended, 0.0)
    raw2 = np.where(trades, blended - rx_true2, 0.0)
    rational = (raw1 >= 0.0) & (raw2 >= 0.0)
    return np.where(rational, raw1, 0.0), np.where(rational, raw2, 0.0)


@dataclass(frozen=True)
class GridReport:
    """Outcome of the lattice sweep against the analytic equilibrium set."""

    zetas: np.ndarray
    wg1: np.ndarray
    wg2: np.ndarray
    flagged: np.ndarray
    analytic: np.ndarray
    band: np.ndarray
    mismatches: np.ndarray

    @property
    def ok(self) -> bool:
        return self.mismatches.size == 0

    @property
    def cell(self) -> float:
        return float(self.zetas[1] - self.zetas[0])


def verify_equilibria_bruteforce(
    spec: GameSpec, grid_n: int, tol: float = GRID_NASH_TOL
) -> GridReport:
    """Flag lattice points no unilateral lattice deviation can improve.

    Compares the flagged set against the analytic set, ignoring a one-cell
    band around the region boundary lines, and reports any disagreement.
    """
    if grid_n < 11:
        raise ValueError("grid_n must be at least 11")
    zetas = np.linspace(0.0, 1.0, grid_n)
    wg1, wg2 = welfare_grid(spec, zetas)
    best_reply_1 = wg1.max(axis=0, keepdims=True)  # insurer scans rows within a column
    best_reply_2 = wg2.max(axis=1, keepdims=True)  # reinsurer scans columns within a row
    flagged = (wg1 >= best_reply_1 - tol) & (wg2 >= best_reply_2 - tol)

    report = nash_equilibria(spec, diagonal_samples=2)
    z1 = zetas[:, None]
    z2 = zetas[None, :]
    analytic = report.contains(z1, z2)
    analytic = np.broadcast_to(analytic, flagged.shape)

    cell = zetas[1] - zetas[0]
    band = np.zeros_like(flagged)
    if not report.every_pair:
        edges_z1 = [spec.gamma2]
        if math.isfinite(report.gamma_bar_1):
            edges_z1.append(report.gamma_bar_1)
        edges_z2 = [spec.gamma1]
        if math.isfinite(report.gamma_bar_2):
            edges_z2.append(report.gamma_bar_2)
        for edge in edges_z1:
            band |= np.abs(z1 - edge) <= cell + 1e-12
        for edge in edges_z2:
            band |= np.abs(z2 - edge) <= cell + 1e-12
        band = np.broadcast_to(band, flagged.shape).copy()

    mismatches = np.argwhere((flagged != analytic) & ~band)
    return GridReport(
        zetas=zetas,
        wg1=wg1,
        wg2=wg2,
        flagged=flagged,
        analytic=np.array(analytic),
        band=band,
        mismatches=mismatches,
    )


def is_grid_nash_point(
    spec: GameSpec, zeta1: float, zeta2: float, grid_n: int = 101, tol: float = GRID_NASH_TOL
) -> bool:
    """Check one (possibly off-lattice) pair against lattice deviations."""
    zetas = np.linspace(0.0, 1.0, grid_n)
    here = welfare(spec, zeta1, zeta2)
    best1 = max(welfare(spec, float(v), zeta2).wg1 for v in np.append(zetas, zeta1))
    best2 = max(welfare(spec, zeta1, float(v)).wg2 for v in np.append(zetas, zeta2))
    return here.wg1 >= best1 - tol and here.wg2 >= best2 - tol
