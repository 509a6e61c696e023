"""Derivative-free minimizers: Nelder-Mead (scipy) and SPSA."""
import logging
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import scipy.optimize as opt

from ..config import config
from ..models.results import OptimizerOptions

logger = logging.getLogger(__name__)

Objective = Callable[[np.ndarray], float]

# Nelder-Mead initial simplex step per coordinate
SIMPLEX_STEP = 0.1
# SPSA gain exponents
SPSA_ALPHA = 0.602
SPSA_GAMMA = 0.101
# SPSA stops once this many consecutive iterates agree within f_tol
SPSA_WINDOW = 10


class MinimizeResult(NamedTuple):
    x: np.ndarray
    fun: float
    evals: int
    converged: bool


class _BudgetExhausted(Exception):
    pass


class _CountingObjective:
    """Counts evaluations, enforces the cap and keeps the best point seen."""

    def __init__(self, f: Objective, max_evals: int):
        self.f = f
        self.max_evals = max_evals
        self.evals = 0
        self.best_x: Optional[np.ndarray] = None
        self.best_f = np.inf

    def __call__(self, x: np.ndarray) -> float:
        if self.evals >= self.max_evals:
            raise _BudgetExhausted
        self.evals += 1
        value = float(self.f(x))
        if self.best_x is None or value < self.best_f:
            self.best_x = np.array(x, dtype=float)
            self.best_f = value
        return value


def _nelder_mead(objective: _CountingObjective, x0: np.ndarray, opts: OptimizerOptions) -> bool:
    d = x0.shape[0]
    simplex = np.vstack([x0, x0 + SIMPLEX_STEP * np.eye(d)])
    try:
        res = opt.minimize(
            objective,
            x0,
            method='Nelder-Mead',
            options={
                'maxfev': opts.max_evals,
                'fatol': opts.f_tol,
                # terminate on the objective spread alone
                'xatol': np.inf,
                'initial_simplex': simplex,
                'adaptive': False,
            },
        )
    except _BudgetExhausted:
        return False
    return bool(res.success)


def _spsa(objective: _CountingObjective, x0: np.ndarray, opts: OptimizerOptions) -> bool:
    rng = np.random.default_rng(opts.seed)
    a = config.get('optimizer.spsa_a', 0.2)
    c = config.get('optimizer.spsa_c', 0.1)
    stability = opts.max_evals / 10.0

    x = x0.copy()
    history = [objective(x)]
    k = 0
    try:
        while True:
            ak = a / (k + 1 + stability) ** SPSA_ALPHA
            ck = c / (k + 1) ** SPSA_GAMMA
            delta = rng.choice([-1.0, 1.0], size=x.shape[0])

            f_plus = objective(x + ck * delta)
            f_minus = objective(x - ck * delta)
            gradient = (f_plus - f_minus) / (2.0 * ck) * delta
            x = x - ak * gradient

            history.append(objective(x))
            recent = history[-SPSA_WINDOW:]
            if len(recent) == SPSA_WINDOW and max(recent) - min(recent) < opts.f_tol:
                return True
            k += 1
    except _BudgetExhausted:
        return False


def minimize(
    f: Objective,
    x0: Sequence[float],
    opts: Optional[OptimizerOptions] = None,
) -> MinimizeResult:
    """
    Minimize ``f`` from ``x0`` without derivatives.

    Nelder-Mead uses reflection/expansion/contraction/shrink coefficients
    1, 2, 0.5, 0.5 and an initial simplex step of 0.1 per coordinate, stopping
    once the simplex objective spread drops below ``f_tol``. SPSA uses gains
    aₖ = a/(k+1+A)^0.602 and cₖ = c/(k+1)^0.101 with A = max_evals/10.

    ``max_evals`` is a hard cap; the result is the best point evaluated, so it
    is never worse than ``f(x0)``.
    """
    opts = opts or OptimizerOptions()
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] == 0:
        raise ValueError("empty parameter vector")

    objective = _CountingObjective(f, opts.max_evals)
    if opts.method == 'spsa':
        converged = _spsa(objective, x0, opts)
    else:
        converged = _nelder_mead(objective, x0, opts)

    if not converged:
        logger.debug("%s stopped after %d evaluations without reaching f_tol=%g",
                     opts.method, objective.evals, opts.f_tol)
    return MinimizeResult(objective.best_x, objective.best_f, objective.evals, converged)
