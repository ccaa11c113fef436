"""Premiums and welfare allocation from asymmetric bargaining.

For submitted aversions (zeta1, zeta2) the optimal cover I* is the
all-or-nothing selection of :func:`reinsgame.contract.is_full_cover_selection`.
The premium splits the trade's value as measured under the *submitted*
preferences, with delta in (0, 1) the reinsurer's bargaining weight:

    pi = rho(I*(X); zeta2)
         + delta * [rho(X; zeta1) - rho(X - I*(X); zeta1) - rho(I*(X); zeta2)].

The bracket vanishes on a tie zeta1 == zeta2, so diagonal premiums do not
depend on delta (not even in the last bit through the closed-form path).

Welfare is then judged under the *true* aversions (gamma1, gamma2): the
insurer moves from X to X - I*(X) + pi, the reinsurer from 0 to I*(X) - pi,
and a trade only stands if neither side is worse off than the status quo
(the individual-rationality gate that zeroes both gains otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .contract import Indemnity, is_full_cover_selection
from .distributions import LossDistribution
from .errors import OracleInapplicableError
from .riskmeasure import DistortionFamily, PayoutSlice, rho, rho_total

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _check_unit(name: str, value: float) -> float:
    v = float(value)
    if not (0.0 <= v <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return v


@dataclass(frozen=True)
class GameSpec:
    """True preferences and bargaining weight of one reinsurance game.

    gamma1 / gamma2 are the true risk aversions of insurer and reinsurer;
    delta in (0, 1) is the reinsurer's bargaining power.
    """

    family: DistortionFamily
    dist: LossDistribution
    gamma1: float
    gamma2: float
    delta: float

    def __post_init__(self):
        _check_unit("gamma1", self.gamma1)
        _check_unit("gamma2", self.gamma2)
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie strictly inside (0, 1), got {self.delta}")

    def rho_x(self, gamma: float) -> float:
        """rho(X; gamma) for the whole loss under this game's family."""
        return rho_total(self.family, self.dist, gamma)


@dataclass(frozen=True)
class WelfareReport:
    """Welfare bookkeeping for one submitted pair.

    ``wg*_hat`` are the raw gains before the individual-rationality gate,
    ``wg*`` after it; posterior risks are evaluated under true preferences.
    """

    zeta1: float
    zeta2: float
    premium: float
    wg1_hat: float
    wg2_hat: float
    wg1: float
    wg2: float
    posterior_rho1: float
    posterior_rho2: float

    CSV_HEADER = "zeta1,zeta2,premium,wg1_hat,wg2_hat,wg1,wg2,posterior_rho1,posterior_rho2"

    def csv_row(self) -> str:
        return ",".join(
            repr(v)
            for v in (
                self.zeta1,
                self.zeta2,
                self.premium,
                self.wg1_hat,
                self.wg2_hat,
                self.wg1,
                self.wg2,
                self.posterior_rho1,
                self.posterior_rho2,
            )
        )


def nash_premium(spec: GameSpec, zeta1: float, zeta2: float, indemnity: Indemnity) -> float:
    """Bargained premium for ceding ``indemnity`` at submitted aversions."""
    _check_unit("zeta1", zeta1)
    _check_unit("zeta2", zeta2)
    whole = rho(spec.family, spec.dist, PayoutSlice.total(), zeta1)
    retained = rho(spec.family, spec.dist, PayoutSlice.retained(indemnity), zeta1)
    ceded = rho(spec.family, spec.dist, PayoutSlice.ceded(indemnity), zeta2)
    premium = ceded + spec.delta * (whole - retained - ceded)
    assert premium >= -1e-12, "bargained premium must be non-negative"
    return premium


def welfare(spec: GameSpec, zeta1: float, zeta2: float) -> WelfareReport:
    """Contract outcome and welfare split at one submitted pair."""
    _check_unit("zeta1", zeta1)
    _check_unit("zeta2", zeta2)
    if is_full_cover_selection(zeta1, zeta2, spec.gamma1, spec.gamma2):
        rx_z1 = spec.rho_x(zeta1)
        rx_z2 = spec.rho_x(zeta2)
        premium = rx_z2 + spec.delta * (rx_z1 - rx_z2)
        posterior1 = premium
        posterior2 = spec.rho_x(spec.gamma2) - premium
        wg1_hat = spec.rho_x(spec.gamma1) - posterior1
        wg2_hat = -posterior2 + 0.0  # avoid IEEE -0.0 on the diagonal
    else:
        premium = 0.0
        posterior1 = spec.rho_x(spec.gamma1)
        posterior2 = 0.0
        wg1_hat = 0.0
        wg2_hat = 0.0
    rational = wg1_hat >= 0.0 and wg2_hat >= 0.0
    return WelfareReport(
        zeta1=zeta1,
        zeta2=zeta2,
        premium=premium,
        wg1_hat=wg1_hat,
        wg2_hat=wg2_hat,
        wg1=wg1_hat if rational else 0.0,
        wg2=wg2_hat if rational else 0.0,
        posterior_rho1=posterior1,
        posterior_rho2=posterior2,
    )


def total_welfare(spec: GameSpec, zeta1: float, zeta2: float) -> float:
    """Joint gain of the trade selected at (zeta1, zeta2), under true preferences."""
    _check_unit("zeta1", zeta1)
    _check_unit("zeta2", zeta2)
    if not is_full_cover_selection(zeta1, zeta2, spec.gamma1, spec.gamma2):
        return 0.0
    return spec.rho_x(spec.gamma1) - spec.rho_x(spec.gamma2)


def optimal_gains_nonstrategic(spec: GameSpec) -> tuple[float, float]:
    """Welfare split when both agents submit their true aversions.

    The insurer keeps the share 1 - delta of the joint gain and the
    reinsurer the share delta; no trade (zero gains) when gamma1 < gamma2.
    """
    if spec.gamma1 < spec.gamma2:
        return 0.0, 0.0
    gain = spec.rho_x(spec.gamma1) - spec.rho_x(spec.gamma2)
    return (1.0 - spec.delta) * gain, spec.delta * gain


def bargaining_product_oracle(spec: GameSpec, zeta1: float, zeta2: float) -> float:
    """Premium from direct maximization of the weighted gain product.

    Independent cross-check of :func:`nash_premium`: with the cover fixed at
    the optimal selection, search the premium maximizing

        (gain_insurer)^(1-delta) * (gain_reinsurer)^delta

    over the individually rational bracket, whose endpoints are the two
    indifference premiums. Requires the full-cover regime with a strictly
    positive joint gain; the bracket may still degenerate to a point on the
    submitted diagonal.
    """
    _check_unit("zeta1", zeta1)
    _check_unit("zeta2", zeta2)
    if not is_full_cover_selection(zeta1, zeta2, spec.gamma1, spec.gamma2):
        raise OracleInapplicableError("null cover selected; there is no premium to bargain")
    if not total_welfare(spec, zeta1, zeta2) > 0.0:
        raise OracleInapplicableError("joint welfare gain is not strictly positive")
    lo = spec.rho_x(zeta2)  # reinsurer indifference
    hi = spec.rho_x(zeta1)  # insurer indifference
    if hi < lo:
        raise OracleInapplicableError("indifference premiums bracket is empty")

    one_minus = 1.0 - spec.delta

    def log_product(premium: float) -> float:
        up = hi - premium
        down = premium - lo
        if up <= 0.0 or down <= 0.0:
            return -math.inf
        return one_minus * math.log(up) + spec.delta * math.log(down)

    return _golden_max(log_product, lo, hi, tol=1e-9)


def _golden_max(fn, lo: float, hi: float, tol: float) -> float:
    """Golden-section argmax of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    span = b - a
    if span <= tol:
        return 0.5 * (a + b)
    c = b - _GOLDEN * span
    d = a + _GOLDEN * span
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)
