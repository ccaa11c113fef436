"""Loss distributions: survival functions, quantiles and partial expectations.

Every law here models a non-negative loss that is not almost surely constant.
Unbounded laws are truncated for integration purposes at ``support_upper``,
their (1 - 1e-12)-quantile; the survival mass beyond that point is below
1e-12, so tail integrals move by O(1e-10) at most.

``emin(x)`` is the partial expectation E[min(X, x)] = integral of the
survival function over [0, x]. It is the building block of the closed-form
distortion integrals in :mod:`reinsgame.riskmeasure`; laws without a closed
form return None there and callers fall back to adaptive quadrature.

Quantiles use the left-continuous generalized inverse of the CDF (smallest x
with CDF(x) >= p), the usual value-at-risk convention, with quantile(0)
returning the essential infimum.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import GrammarError

TAIL_EPS = 1e-12


def _prepare(value):
    arr = np.asarray(value, dtype=float)
    return arr, arr.ndim == 0


def _restore(arr, scalar: bool):
    return float(arr) if scalar else arr


class LossDistribution(ABC):
    """Non-negative loss random variable."""

    support_upper: float

    @abstractmethod
    def survival(self, z):
        """P(X > z) for z >= 0; right-continuous and non-increasing."""

    @abstractmethod
    def quantile(self, p):
        """Generalized inverse CDF for p in [0, 1)."""

    @abstractmethod
    def mean(self) -> float:
        """E[X]."""

    def emin(self, x):
        """E[min(X, x)] in closed form, or None when unavailable."""
        return None

    def _check_quantile_level(self, p):
        arr, scalar = _prepare(p)
        if np.any(arr < 0.0) or np.any(arr >= 1.0):
            raise ValueError("quantile level must lie in [0, 1)")
        return arr, scalar

    def _check_not_constant(self) -> None:
        if not self.quantile(0.01) < self.quantile(0.99):
            raise ValueError("loss must not be (almost surely) constant")


class Exponential(LossDistribution):
    """Exponential loss with the given rate (mean = 1/rate)."""

    def __init__(self, rate: float):
        if not rate > 0.0:
            raise ValueError("rate must be positive")
        self.rate = float(rate)
        self.support_upper = self.quantile(1.0 - TAIL_EPS)
        self._check_not_constant()

    def survival(self, z):
        arr, scalar = _prepare(z)
        return _restore(np.exp(-self.rate * arr), scalar)

    def quantile(self, p):
        arr, scalar = _prepare(self._check_quantile_level(p)[0])
        return _restore(-np.log1p(-arr) / self.rate, scalar)

    def mean(self) -> float:
        return 1.0 / self.rate

    def emin(self, x):
        arr, scalar = _prepare(x)
        return _restore(-np.expm1(-self.rate * arr) / self.rate, scalar)

    def __repr__(self) -> str:
        return f"Exponential(rate={self.rate!r})"


class Uniform(LossDistribution):
    """Uniform loss on [a, b] with 0 <= a < b."""

    def __init__(self, a: float, b: float):
        if not (0.0 <= a < b):
            raise ValueError("need 0 <= a < b")
        self.a = float(a)
        self.b = float(b)
        self.support_upper = self.b
        self._check_not_constant()

    def survival(self, z):
        arr, scalar = _prepare(z)
        s = np.clip((self.b - arr) / (self.b - self.a), 0.0, 1.0)
        return _restore(s, scalar)

    def quantile(self, p):
        arr, scalar = _prepare(self._check_quantile_level(p)[0])
        return _restore(self.a + arr * (self.b - self.a), scalar)

    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def emin(self, x):
        arr, scalar = _prepare(x)
        xc = np.clip(arr, self.a, self.b)
        width = self.b - self.a
        inside = self.a + (width * width - (self.b - xc) ** 2) / (2.0 * width)
        out = np.where(arr < self.a, arr, inside)
        return _restore(out, scalar)

    def __repr__(self) -> str:
        return f"Uniform(a={self.a!r}, b={self.b!r})"


class Lognormal(LossDistribution):
    """Lognormal loss: log X ~ Normal(mu, sigma^2)."""

    def __init__(self, mu: float, sigma: float):
        if not sigma > 0.0:
            raise ValueError("sigma must be positive")
        self.mu = float(mu)
        self.sigma = float(sigma)
        self.support_upper = self.quantile(1.0 - TAIL_EPS)
        self._check_not_constant()

    def survival(self, z):
        arr, scalar = _prepare(z)
        with np.errstate(divide="ignore"):
            t = (np.log(np.maximum(arr, 0.0)) - self.mu) / self.sigma
        s = np.where(arr <= 0.0, 1.0, ndtr(-t))
        return _restore(s, scalar)

    def quantile(self, p):
        arr, scalar = _prepare(self._check_quantile_level(p)[0])
        out = np.exp(self.mu + self.sigma * ndtri(arr))
        return _restore(np.where(arr == 0.0, 0.0, out), scalar)

    def mean(self) -> float:
        return float(np.exp(self.mu + 0.5 * self.sigma**2))

    def emin(self, x):
        arr, scalar = _prepare(x)
        pos = np.maximum(arr, TAIL_EPS)
        t = (np.log(pos) - self.mu) / self.sigma
        trunc = self.mean() * ndtr(t - self.sigma) + pos * ndtr(-t)
        return _restore(np.where(arr <= 0.0, 0.0, trunc), scalar)

    def __repr__(self) -> str:
        return f"Lognormal(mu={self.mu!r}, sigma={self.sigma!r})"


class Empirical(LossDistribution):
    """Weighted sample of losses; survival is the right-continuous step function.

    Weights need not be normalized; they are rescaled to sum to one. All
    tail functionals on this law are exact finite sums, never quadrature.
    """

    def __init__(self, samples, weights=None):
        x = np.asarray(samples, dtype=float).ravel()
        if x.size == 0:
            raise ValueError("need at least one sample")
        if not np.all(np.isfinite(x)) or np.any(x < 0.0):
            raise ValueError("samples must be finite and non-negative")
        if weights is None:
            w = np.full(x.size, 1.0 / x.size)
        else:
            w = np.asarray(weights, dtype=float).ravel()
            if w.shape != x.shape:
                raise ValueError("weights must match samples in length")
            if np.any(w < 0.0) or not np.all(np.isfinite(w)):
                raise ValueError("weights must be finite and non-negative")
            total = w.sum()
            if not total > 0.0:
                raise ValueError("weights must not all be zero")
            w = w / total
        order = np.argsort(x, kind="stable")
        self.samples = x[order]
        self.weights = w[order]
        cum = np.cumsum(self.weights)
        cum[-1] = 1.0
        self._cumw = cum
        # prefix sums for exact partial expectations
        self._cum_wx = np.concatenate([[0.0], np.cumsum(self.weights * self.samples)])
        self.support_upper = float(self.samples[-1])
        self.samples.setflags(write=False)
        self.weights.setflags(write=False)
        self._check_not_constant()

    @classmethod
    def from_csv(cls, path) -> "Empirical":
        data = np.loadtxt(Path(path), delimiter=",", ndmin=2)
        if data.shape[1] == 1:
            return cls(data[:, 0])
        if data.shape[1] == 2:
            return cls(data[:, 0], data[:, 1])
        raise GrammarError(f"empirical CSV {path} must have one or two columns")

    def survival(self, z):
        arr, scalar = _prepare(z)
        idx = np.searchsorted(self.samples, arr, side="right")
        cdf = np.where(idx > 0, self._cumw[np.maximum(idx - 1, 0)], 0.0)
        return _restore(np.clip(1.0 - cdf, 0.0, 1.0), scalar)

    def quantile(self, p):
        arr, scalar = _prepare(self._check_quantile_level(p)[0])
        idx = np.searchsorted(self._cumw, arr, side="left")
        idx = np.minimum(idx, self.samples.size - 1)
        return _restore(self.samples[idx], scalar)

    def mean(self) -> float:
        return float(np.dot(self.weights, self.samples))

    def emin(self, x):
        arr, scalar = _prepare(x)
        idx = np.searchsorted(self.samples, arr, side="right")
        below = self._cum_wx[idx]
        tail_mass = np.where(idx > 0, 1.0 - self._cumw[np.maximum(idx - 1, 0)], 1.0)
        return _restore(below + arr * tail_mass, scalar)

    def __repr__(self) -> str:
        return f"Empirical(n={self.samples.size}, mean={self.mean():.6g})"


def parse_distribution(text: str, base_dir=None) -> LossDistribution:
    """Parse the distribution grammar used by scenario files.

    Accepted forms: ``exp(rate)``, ``lognormal(mu,sigma)``, ``uniform(a,b)``,
    ``empirical(path/to.csv)``; the CSV holds one non-negative loss per line
    with an optional second column of weights. Relative paths resolve against
    ``base_dir``.
    """
    spec = text.strip()
    name, args = _split_call(spec)
    if name == "exp":
        (rate,) = _numeric_args(spec, args, 1)
        return Exponential(rate)
    if name == "lognormal":
        mu, sigma = _numeric_args(spec, args, 2)
        return Lognormal(mu, sigma)
    if name == "uniform":
        a, b = _numeric_args(spec, args, 2)
        return Uniform(a, b)
    if name == "empirical":
        if len(args) != 1 or not args[0]:
            raise GrammarError(f"empirical(...) takes one path argument: {spec!r}")
        path = Path(args[0])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        if not path.exists():
            raise GrammarError(f"empirical sample file not found: {path}")
        return Empirical.from_csv(path)
    raise GrammarError(f"unknown distribution {spec!r}")


def _split_call(spec: str):
    if "(" in spec:
        if not spec.endswith(")"):
            raise GrammarError(f"unbalanced parentheses in {spec!r}")
        name, _, inner = spec[:-1].partition("(")
        args = [a.strip() for a in inner.split(",")] if inner.strip() else []
    else:
        name, args = spec, []
    return name.strip().lower(), args


def _numeric_args(spec: str, args, count: int):
    if len(args) != count:
        raise GrammarError(f"{spec!r} needs {count} numeric argument(s)")
    try:
        return tuple(float(a) for a in args)
    except ValueError as exc:
        raise GrammarError(f"non-numeric argument in {spec!r}") from exc
