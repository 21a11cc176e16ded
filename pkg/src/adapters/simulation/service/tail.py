import logging
import math

import numpy as np
from scipy import linalg, special, stats

from src.adapters.common import error_handler
from ..dto import EmpiricalPMF, TailFit
from src.exceptions import InsufficientSupportError

# (name, design columns of x, a column of the form -f(x) whose coefficient is the tail rate)
_MODELS = (
    ("CMP-like", lambda x: np.column_stack([-x * np.log(x), x, np.ones_like(x)])),
    ("geometric", lambda x: np.column_stack([-x, np.ones_like(x)])),
    ("power-law", lambda x: np.column_stack([-np.log(x), np.ones_like(x)])),
)


def _censored(masses: np.ndarray, tail: float, start: int = 0) -> EmpiricalPMF:
    weights = {start + k: float(p) for k, p in enumerate(masses) if p > 0}
    if tail > 0:
        weights[start + len(masses)] = float(tail)
    return EmpiricalPMF.from_weights(weights, sample_count=0)


def poisson_pmf(mean: float, upper: int) -> EmpiricalPMF:
    """Poisson law on 0..upper, the remaining mass lumped at upper + 1."""
    x = np.arange(upper + 1)
    return _censored(stats.poisson.pmf(x, mean), float(stats.poisson.sf(upper, mean)))


def zero_truncated_poisson_pmf(mean: float, upper: int) -> EmpiricalPMF:
    x = np.arange(1, upper + 1)
    norm = -math.expm1(-mean)
    return _censored(stats.poisson.pmf(x, mean) / norm, float(stats.poisson.sf(upper, mean)) / norm, start=1)


def geometric_pmf(ratio: float, upper: int) -> EmpiricalPMF:
    """P(X = x) = (1 - ratio) ratio^x on 0..upper."""
    x = np.arange(upper + 1)
    return _censored((1 - ratio) * ratio ** x, ratio ** (upper + 1))


def zeta_pmf(exponent: float, upper: int) -> EmpiricalPMF:
    """P(X = x) = x^-exponent / zeta(exponent) on 1..upper."""
    x = np.arange(1, upper + 1, dtype=np.float64)
    norm = special.zeta(exponent, 1)
    return _censored(x ** -exponent / norm, float(special.zeta(exponent, upper + 1) / norm), start=1)


def total_variation(p: EmpiricalPMF, q: EmpiricalPMF) -> float:
    keys = set(p.probabilities) | set(q.probabilities)
    return 0.5 * math.fsum(abs(p.probabilities.get(k, 0.0) - q.probabilities.get(k, 0.0)) for k in keys)


class TailService:
    def __init__(self, min_support: int = 10, logger: logging.Logger | None = None):
        self._min_support = min_support
        self._logger = logger or logging.getLogger(__name__)

    @error_handler
    def fit_tail(self, pmf: EmpiricalPMF) -> TailFit:
        """
        Least-squares fits of log T(x) for the three tail shapes, best by a penalized residual score.
        A fit whose rate a is not positive does not describe a decaying tail and is discarded.
        """
        if len(pmf.support) < self._min_support:
            raise InsufficientSupportError(
                f"tail fit needs at least {self._min_support} support points",
                context={"support_size": len(pmf.support)}
            )
        # the last support point carries the whole remaining tail
        points = [(x, t) for x, t in pmf.survival().items() if x >= 1 and t > 0][:-1]
        if len(points) < 4:
            raise InsufficientSupportError("too few positive support points above zero", context={"points": len(points)})
        x = np.array([p[0] for p in points], dtype=np.float64)
        y = np.log(np.array([p[1] for p in points]))
        n = len(x)

        fits = {}
        for name, design in _MODELS:
            matrix = design(x)
            coefficients, _, _, _ = linalg.lstsq(matrix, y)
            rss = float(np.sum((matrix @ coefficients - y) ** 2))
            score = n * math.log(max(rss / n, 1e-20)) + matrix.shape[1] * math.log(n)
            fits[name] = (coefficients, rss, score if coefficients[0] > 0 else math.inf)

        best = min(fits, key=lambda name: fits[name][2])    # min keeps the first of equal scores
        if math.isinf(fits[best][2]):
            best = min(fits, key=lambda name: fits[name][1])
        coefficients = fits[best][0]
        self._logger.info("Tail fitted", extra={"model": best, "points": n})
        return TailFit(
            model=best,
            a=float(coefficients[0]),
            b=float(coefficients[1]) if best == "CMP-like" else None,
            scores={name: fit[2] for name, fit in fits.items()},
            residuals={name: fit[1] for name, fit in fits.items()},
            support_size=len(pmf.support)
        )
