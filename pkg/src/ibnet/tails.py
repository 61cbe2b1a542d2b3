"""Heavy-tail estimation: CCDF export, power-law fitting, lognormal comparison.

The fitter follows the standard maximum-likelihood recipe for tail
exponents: for every candidate cutoff taken from the observed unique
values, estimate alpha by MLE on the tail and keep the cutoff whose fitted
CCDF is closest to the empirical one in Kolmogorov-Smirnov distance.
Discrete samples use the Hurwitz-zeta likelihood (the closed-form shifted
approximation only seeds the optimizer: it is visibly biased at small
cutoffs); continuous samples use the Pareto closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import erfc, zeta
from scipy.stats import norm

from .errors import DegenerateError, InsufficientDataError


def ccdf(sample: Sequence[float]) -> list[tuple[float, float]]:
    """Ordered (value, P(X > value)) points, one per unique value.

    The last point carries probability 0; probabilities are strictly
    decreasing, ready for log-log plotting.
    """
    xs = np.asarray(sample, dtype=float)
    if xs.size == 0:
        raise DegenerateError("ccdf of an empty sample")
    values, counts = np.unique(xs, return_counts=True)
    n = xs.size
    above = n - np.cumsum(counts)
    return [(float(v), float(a) / n) for v, a in zip(values, above)]


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    x_min: float
    ks: float
    n_tail: int
    discrete: bool

    def loglikelihoods(self, tail: np.ndarray) -> np.ndarray:
        """Pointwise log-density of the fitted tail model on x >= x_min."""
        if self.discrete:
            return -self.alpha * np.log(tail) - np.log(zeta(self.alpha, self.x_min))
        return (
            np.log(self.alpha - 1.0)
            - np.log(self.x_min)
            - self.alpha * np.log(tail / self.x_min)
        )


def _alpha_mle_discrete(tail: np.ndarray, x_min: float) -> float:
    n = len(tail)
    slog = float(np.log(tail).sum())
    # shifted closed form as starting point
    approx = 1.0 + n / np.sum(np.log(tail / (x_min - 0.5))) if x_min > 0.5 else 2.0
    lo, hi = 1.0 + 1e-6, max(8.0, approx + 2.0)

    def nll(a: float) -> float:
        return n * np.log(zeta(a, x_min)) + a * slog

    res = minimize_scalar(nll, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    return float(res.x)


def _ks_discrete(tail: np.ndarray, alpha: float, x_min: float) -> float:
    # CCDF P(X >= v) compared on every integer of the tail support
    values = np.arange(x_min, tail.max() + 1)
    theo = zeta(alpha, values) / zeta(alpha, x_min)
    emp = 1.0 - np.searchsorted(tail, values, side="left") / len(tail)
    return float(np.max(np.abs(emp - theo)))


def _ks_continuous(tail: np.ndarray, alpha: float, x_min: float) -> float:
    n = len(tail)
    theo = 1.0 - (tail / x_min) ** (1.0 - alpha)  # CDF
    emp_hi = np.arange(1, n + 1) / n
    emp_lo = np.arange(0, n) / n
    return float(max(np.max(np.abs(emp_hi - theo)), np.max(np.abs(emp_lo - theo))))


def fit_power_law(
    sample: Sequence[float],
    discrete: bool = True,
    x_min: float | None = None,
    min_tail: int = 10,
) -> PowerLawFit:
    """Fit a power-law tail, selecting the cutoff by KS distance.

    Pass ``x_min`` to pin the cutoff instead of scanning. Raises
    InsufficientDataError when no candidate cutoff keeps at least
    ``min_tail`` observations, DegenerateError when the tail has no spread.
    """
    xs = np.sort(np.asarray(sample, dtype=float))
    if xs.size == 0:
        raise InsufficientDataError("empty sample")
    if np.any(xs <= 0):
        raise DegenerateError("power-law fitting needs strictly positive values")
    if discrete and not np.allclose(xs, np.rint(xs)):
        raise DegenerateError("discrete mode expects integer-valued observations")

    if x_min is not None:
        candidates = np.asarray([float(x_min)])
    else:
        uniq = np.unique(xs)
        if uniq.size < 2:
            raise DegenerateError("all observations are equal; no tail to fit")
        candidates = uniq[:-1]

    best: PowerLawFit | None = None
    for xm in candidates:
        tail = xs[xs >= xm]
        n_tail = int(tail.size)
        if n_tail < min_tail:
            continue
        if tail[0] == tail[-1]:
            continue
        if discrete:
            alpha = _alpha_mle_discrete(tail, float(xm))
            ks = _ks_discrete(tail, alpha, float(xm))
        else:
            alpha = 1.0 + n_tail / float(np.sum(np.log(tail / xm)))
            ks = _ks_continuous(tail, alpha, float(xm))
        if best is None or ks < best.ks:
            best = PowerLawFit(alpha=alpha, x_min=float(xm), ks=ks, n_tail=n_tail, discrete=discrete)
    if best is None:
        raise InsufficientDataError(
            f"no cutoff leaves >= {min_tail} observations with spread in the tail"
        )
    return best


# --------------------------------------------------------------------------
# Power law vs lognormal
# --------------------------------------------------------------------------


class LikelihoodRatioResult(NamedTuple):
    llr: float  # normalized (Vuong) statistic; > 0 favors the power law
    p_value: float
    raw_llr: float
    n_tail: int


def _lognormal_loglik_discrete(tail: np.ndarray, mu: float, sigma: float, x_min: float) -> np.ndarray:
    hi = norm.cdf((np.log(tail + 0.5) - mu) / sigma)
    lo = norm.cdf((np.log(np.maximum(tail - 0.5, 1e-12)) - mu) / sigma)
    z = 1.0 - norm.cdf((np.log(max(x_min - 0.5, 1e-12)) - mu) / sigma)
    return np.log(np.clip((hi - lo) / z, 1e-300, None))


def _lognormal_loglik_continuous(tail: np.ndarray, mu: float, sigma: float, x_min: float) -> np.ndarray:
    lpdf = (
        -np.log(tail)
        - np.log(sigma)
        - 0.5 * np.log(2.0 * np.pi)
        - ((np.log(tail) - mu) ** 2) / (2.0 * sigma**2)
    )
    z = 1.0 - norm.cdf((np.log(x_min) - mu) / sigma)
    return lpdf - np.log(max(z, 1e-300))


def _fit_lognormal_tail(tail: np.ndarray, x_min: float, discrete: bool) -> tuple[float, float]:
    loglik = _lognormal_loglik_discrete if discrete else _lognormal_loglik_continuous
    lt = np.log(tail)
    starts = (
        [lt.mean(), max(lt.std(), 0.1)],
        [lt.mean() - 2.0, 2.0 * max(lt.std(), 0.2)],
    )

    def nll(theta: np.ndarray) -> float:
        mu, sigma = theta
        if sigma <= 0:
            return 1e18
        return -float(loglik(tail, mu, sigma, x_min).sum())

    best = None
    for x0 in starts:
        res = minimize(
            nll, np.asarray(x0), method="Nelder-Mead",
            options={"xatol": 1e-7, "fatol": 1e-7, "maxiter": 5000},
        )
        if best is None or res.fun < best.fun:
            best = res
    return float(best.x[0]), float(best.x[1])


def compare_lognormal(sample: Sequence[float], fit: PowerLawFit) -> LikelihoodRatioResult:
    """Vuong-style log-likelihood ratio of power law against lognormal.

    Both models are evaluated at their maximum-likelihood parameters on the
    tail x >= fit.x_min. Positive values favor the power law; the p-value
    is the two-sided normal approximation for the normalized statistic.
    """
    xs = np.sort(np.asarray(sample, dtype=float))
    tail = xs[xs >= fit.x_min]
    n = int(tail.size)
    if n < 10:
        raise InsufficientDataError(f"tail above x_min={fit.x_min} has only {n} observations")
    l_pl = fit.loglikelihoods(tail)
    mu, sigma = _fit_lognormal_tail(tail, fit.x_min, fit.discrete)
    if fit.discrete:
        l_ln = _lognormal_loglik_discrete(tail, mu, sigma, fit.x_min)
    else:
        l_ln = _lognormal_loglik_continuous(tail, mu, sigma, fit.x_min)
    diff = l_pl - l_ln
    raw = float(diff.sum())
    sd = float(diff.std())
    if sd == 0:
        raise DegenerateError("pointwise likelihoods are identical; ratio test undefined")
    z = raw / (sd * np.sqrt(n))
    p = float(erfc(abs(z) / np.sqrt(2.0)))
    return LikelihoodRatioResult(llr=float(z), p_value=p, raw_llr=raw, n_tail=n)
