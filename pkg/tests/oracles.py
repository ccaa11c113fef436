"""Independent reference computations shared by the tests.

Everything here is deliberately written against the raw sample arrays or raw
formulas, not against the library's evaluation paths, so agreement is a real
cross-check.
"""

import math

import numpy as np

LN100 = math.log(100.0)


def affine_rho(gamma: float) -> float:
    """rho(X; gamma) for the headline game (mean/99%-CVaR mix over Exp(1))."""
    return 1.0 + gamma * LN100


def mc_estimate_and_se_mix(samples: np.ndarray, gamma: float, alpha: float):
    """Plug-in estimate of the mean/CVaR-mix risk plus its standard error.

    The estimator is asymptotically linear with influence values
    (1-gamma) * x + gamma * (x - q_alpha)^+ / (1-alpha) (up to a constant),
    so the standard error is the sample standard deviation of those values
    over sqrt(n).
    """
    n = samples.size
    tail = 1.0 - alpha
    q = np.quantile(samples, alpha, method="inverted_cdf")
    excess = np.maximum(samples - q, 0.0)
    cvar_hat = q + excess.mean() / tail
    estimate = (1.0 - gamma) * samples.mean() + gamma * cvar_hat
    influence = (1.0 - gamma) * samples + gamma * excess / tail
    return estimate, float(influence.std(ddof=1) / math.sqrt(n))


def mc_gain_se_mix(samples: np.ndarray, gamma_hi: float, gamma_lo: float, alpha: float) -> float:
    """Standard error of the estimated gain rho(X; hi) - rho(X; lo)."""
    n = samples.size
    tail = 1.0 - alpha
    q = np.quantile(samples, alpha, method="inverted_cdf")
    influence = (gamma_hi - gamma_lo) * (np.maximum(samples - q, 0.0) / tail - samples)
    return float(influence.std(ddof=1) / math.sqrt(n))


def choquet_sum(samples: np.ndarray, weights: np.ndarray, g) -> float:
    """Sorted-sample distortion sum: sum_k x_(k) * [g(S_(k-1)) - g(S_k)]."""
    order = np.argsort(samples, kind="stable")
    x = samples[order]
    w = weights[order]
    surv_after = 1.0 - np.cumsum(w)
    surv_after[-1] = 0.0
    total = 0.0
    surv_before = 1.0
    for xk, sk in zip(x, surv_after):
        total += float(xk) * (g(surv_before) - g(max(sk, 0.0)))
        surv_before = max(sk, 0.0)
    return total
