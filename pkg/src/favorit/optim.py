"""Derivative-free simplex minimizer used by the ARIMA fitter.

Standard Nelder-Mead (reflection 1, expansion 2, contraction 0.5, shrink
0.5) with an evaluation budget and a relative convergence test on the
simplex's objective spread.  No randomness lives here; restart points are
the caller's responsibility, which keeps fits reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MinimizeResult:
    x: np.ndarray
    fun: float
    n_evals: int
    converged: bool


def nelder_mead(
    objective,
    x0,
    initial_step: float = 0.25,
    rel_tol: float = 1e-8,
    max_evals: int = 500,
) -> MinimizeResult:
    """Minimize ``objective`` from ``x0``.

    Stops when the simplex's best-to-worst objective spread falls below
    ``rel_tol`` relative to the best value, or when ``max_evals`` objective
    evaluations have been spent.
    """
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    if dim == 0:
        raise ValueError("nothing to optimize")

    evals = 0

    def call(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        return float(objective(x))

    points = [x0.copy()]
    for i in range(dim):
        step = x0.copy()
        step[i] += initial_step
        points.append(step)
    values = [call(p) for p in points]

    converged = False
    while evals < max_evals:
        order = np.argsort(values, kind="stable")
        points = [points[i] for i in order]
        values = [values[i] for i in order]
        best, worst = values[0], values[-1]
        if worst - best <= rel_tol * (abs(best) + 1e-300):
            converged = True
            break

        centroid = np.mean(points[:-1], axis=0)
        reflected = centroid + (centroid - points[-1])
        f_reflected = call(reflected)
        if values[0] <= f_reflected < values[-2]:
            points[-1], values[-1] = reflected, f_reflected
            continue

        if f_reflected < values[0]:
            expanded = centroid + 2.0 * (centroid - points[-1])
            f_expanded = call(expanded)
            if f_expanded < f_reflected:
                points[-1], values[-1] = expanded, f_expanded
            else:
                points[-1], values[-1] = reflected, f_reflected
            continue

        contracted = centroid + 0.5 * (points[-1] - centroid)
        f_contracted = call(contracted)
        if f_contracted < values[-1]:
            points[-1], values[-1] = contracted, f_contracted
            continue

        # Shrink toward the best point.
        for i in range(1, dim + 1):
            points[i] = points[0] + 0.5 * (points[i] - points[0])
            values[i] = call(points[i])

    order = np.argsort(values, kind="stable")
    best_i = order[0]
    return MinimizeResult(
        x=points[best_i].copy(), fun=values[best_i], n_evals=evals, converged=converged
    )
