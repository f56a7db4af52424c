"""ARIMA(p, d, q) fitting and forecasting on daily price levels.

Fitting minimizes the conditional sum of squares of one-step residuals on
the differenced series.  Coefficients are optimized in an unconstrained
space and mapped through partial autocorrelations, so every fitted model
is stationary and invertible by construction.  A mean term is included
only for undifferenced models.

Model selection runs a small (p, q) grid at a fixed differencing order and
keeps the corrected Akaike score minimizer; ties break toward the simpler
model.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import FitError
from .optim import nelder_mead

MAX_P = 3
MAX_Q = 3
MAX_D = 2

# Keep mapped coefficients strictly inside the stationary region so the
# characteristic roots stay strictly outside the unit circle.
_PAC_BOUND = 1.0 - 1e-10

_RESTARTS = 3
_RESTART_SPREAD = 0.5
_REL_TOL = 1e-8
_EVALS_PER_PARAM = 500


@dataclass(frozen=True)
class ArimaOrder:
    p: int
    d: int
    q: int

    def __post_init__(self) -> None:
        if not (0 <= self.p <= MAX_P):
            raise ValueError(f"p must be in 0..{MAX_P}, got {self.p}")
        if not (0 <= self.d <= MAX_D):
            raise ValueError(f"d must be in 0..{MAX_D}, got {self.d}")
        if not (0 <= self.q <= MAX_Q):
            raise ValueError(f"q must be in 0..{MAX_Q}, got {self.q}")

    @property
    def label(self) -> str:
        return f"({self.p},{self.d},{self.q})"


@dataclass(frozen=True)
class ArimaModel:
    """A fitted model plus the training tail needed to forecast from it."""

    order: ArimaOrder
    ar: tuple[float, ...]
    ma: tuple[float, ...]
    mean: float | None
    sigma2: float
    n_fit: int
    css: float
    aicc: float
    tail_levels: tuple[float, ...]
    tail_residuals: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.ar) != self.order.p:
            raise ValueError("ar length must equal p")
        if len(self.ma) != self.order.q:
            raise ValueError("ma length must equal q")
        if (self.mean is not None) != (self.order.d == 0):
            raise ValueError("mean term is present exactly when d == 0")
        if len(self.tail_levels) != self.order.p + self.order.d + 1:
            raise ValueError("tail_levels must hold p + d + 1 values")
        if len(self.tail_residuals) != self.order.q:
            raise ValueError("tail_residuals must hold q values")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "order": {"p": self.order.p, "d": self.order.d, "q": self.order.q},
            "ar": list(self.ar),
            "ma": list(self.ma),
            "mean": self.mean,
            "sigma2": self.sigma2,
            "n_fit": self.n_fit,
            "css": self.css,
            "aicc": self.aicc,
            "tail_levels": list(self.tail_levels),
            "tail_residuals": list(self.tail_residuals),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ArimaModel":
        order = payload["order"]
        return cls(
            order=ArimaOrder(order["p"], order["d"], order["q"]),
            ar=tuple(payload["ar"]),
            ma=tuple(payload["ma"]),
            mean=payload["mean"],
            sigma2=payload["sigma2"],
            n_fit=payload["n_fit"],
            css=payload["css"],
            aicc=payload["aicc"],
            tail_levels=tuple(payload["tail_levels"]),
            tail_residuals=tuple(payload["tail_residuals"]),
        )


@dataclass(frozen=True)
class ForecastPoint:
    date: dt.date
    predicted: float

    def to_dict(self) -> dict:
        return {"date": self.date.isoformat(), "predicted": self.predicted}


@dataclass(frozen=True)
class OrderSelection:
    order: ArimaOrder
    model: ArimaModel
    scores: dict[ArimaOrder, float] = field(repr=False)


def pacf_to_coeffs(pac) -> np.ndarray:
    """Map partial autocorrelations in (-1, 1) to stationary AR coefficients.

    Durbin-Levinson recursion; the image of (-1, 1)^k is exactly the
    stationary region.
    """
    pac = np.asarray(pac, dtype=float)
    coeffs = pac.copy()
    for k in range(1, pac.size):
        coeffs[:k] = coeffs[:k] - pac[k] * coeffs[:k][::-1]
    return coeffs


def _map_params(u: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    pac_ar = np.clip(np.tanh(u[:p]), -_PAC_BOUND, _PAC_BOUND)
    pac_ma = np.clip(np.tanh(u[p : p + q]), -_PAC_BOUND, _PAC_BOUND)
    phi = pacf_to_coeffs(pac_ar)
    # Negating a stationary coefficient vector lands exactly in the
    # invertible region of 1 + theta_1 z + ... + theta_q z^q.
    theta = -pacf_to_coeffs(pac_ma)
    return phi, theta


def conditional_sum_of_squares(z, phi, theta, mu: float = 0.0) -> tuple[float, np.ndarray]:
    """Residuals of the ARMA recursion with zero start-up residuals.

    Returns (sum of squared residuals, residual array of length n - p).
    """
    z = np.asarray(z, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    p = phi.size
    n = z.size
    if n - p < 1:
        raise FitError("series too short for the autoregressive order")
    zc = z - mu
    a = zc[p:].copy()
    for i in range(1, p + 1):
        a -= phi[i - 1] * zc[p - i : n - i]
    if theta.size:
        e = lfilter([1.0], np.concatenate(([1.0], theta)), a)
    else:
        e = a
    return float(np.dot(e, e)), e


def _min_root_modulus(coeffs, kind: str) -> float:
    # Polynomial 1 - c_1 z - ... - c_k z^k for AR, 1 + c_1 z + ... for MA.
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0:
        return float("inf")
    sign = -1.0 if kind == "ar" else 1.0
    poly = np.concatenate(((sign * coeffs)[::-1], [1.0]))
    roots = np.roots(poly)
    if roots.size == 0:
        return float("inf")
    return float(np.min(np.abs(roots)))


def _poly_roots_outside(coeffs: np.ndarray, kind: str) -> None:
    if _min_root_modulus(coeffs, kind) <= 1.0:
        raise FitError(f"{kind} polynomial has a root on or inside the unit circle")


ADMISSIBLE_ROOT_MODULUS = 1.001
REDUNDANCY_DISTANCE = 0.15


def _inverse_roots(coeffs, kind: str) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0:
        return np.array([])
    sign = -1.0 if kind == "ar" else 1.0
    return np.roots(np.concatenate(([1.0], sign * coeffs)))


def is_admissible(model: "ArimaModel", threshold: float = ADMISSIBLE_ROOT_MODULUS) -> bool:
    """Whether a fit is usable as a model-selection candidate.

    Two degenerate configurations are excluded.  Boundary fits: with zero
    start-up residuals, an MA root walking onto the unit circle soaks up
    the start-up transient and deflates the in-sample score without being
    a better model, so all roots must stay clear of the circle.  Redundant
    fits: a mixed model whose AR and MA polynomials share a near-common
    factor is an over-parametrized disguise of a smaller model that is on
    the grid anyway, and the flat ridge it sits on soaks up sample noise;
    such fits are rejected when an AR and an MA inverse root come within
    0.15 of each other.
    """
    if _min_root_modulus(model.ar, "ar") <= threshold:
        return False
    if _min_root_modulus(model.ma, "ma") <= threshold:
        return False
    if model.order.p and model.order.q:
        ar_inv = _inverse_roots(model.ar, "ar")
        ma_inv = _inverse_roots(model.ma, "ma")
        gap = np.min(np.abs(ar_inv[:, None] - ma_inv[None, :]))
        if gap < REDUNDANCY_DISTANCE:
            return False
    return True


def choose_differencing(x, max_d: int = MAX_D) -> int:
    """Smallest differencing order whose variance is within 1% of the minimum."""
    x = np.asarray(x, dtype=float)
    if x.size < max_d + 3:
        raise FitError("series too short to choose a differencing order")
    variances = []
    for d in range(max_d + 1):
        w = np.diff(x, n=d)
        variances.append(float(np.var(w, ddof=1)))
    vmin = min(variances)
    for d, v in enumerate(variances):
        if v <= 1.01 * vmin:
            return d
    return int(np.argmin(variances))


def fit_arima(x, order: ArimaOrder, seed: int = 0) -> ArimaModel:
    """Fit by conditional sum of squares with restarted simplex search.

    The optimizer runs from the zero-coefficient point and from two seeded
    perturbations of it; the seed only steers those restart points, so a
    fixed seed gives a bit-reproducible fit.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise FitError("series must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise FitError("series contains non-finite values")
    p, d, q = order.p, order.d, order.q
    min_len = d + 10 * max(1, p + q)
    if x.size < min_len:
        raise FitError(
            f"need at least {min_len} observations for order {order.label}, got {x.size}"
        )

    w = np.diff(x, n=d)
    n = w.size
    with_mean = d == 0
    wbar = float(np.mean(w))
    wsd = float(np.std(w))
    if wsd == 0.0 or not math.isfinite(wsd):
        wsd = 1.0

    n_params = p + q + (1 if with_mean else 0)
    if n_params == 0:
        sos, resid = conditional_sum_of_squares(w, [], [], 0.0)
        return _package(order, np.array([]), np.array([]), None, x, w, sos, resid)

    def objective(u: np.ndarray) -> float:
        phi, theta = _map_params(u, p, q)
        mu = wbar + u[p + q] * wsd if with_mean else 0.0
        try:
            sos, _ = conditional_sum_of_squares(w, phi, theta, mu)
        except FloatingPointError:
            return float("inf")
        return sos if math.isfinite(sos) else float("inf")

    budget = _EVALS_PER_PARAM * (p + q + 1)
    starts = [np.zeros(n_params)]
    for restart in range(1, _RESTARTS):
        rng = np.random.default_rng([7, p, d, q, seed, restart])
        starts.append(rng.normal(0.0, _RESTART_SPREAD, size=n_params))

    best = None
    for start in starts:
        result = nelder_mead(objective, start, rel_tol=_REL_TOL, max_evals=budget)
        if best is None or result.fun < best.fun:
            best = result
    if best is None or not math.isfinite(best.fun):
        raise FitError(f"optimization failed for order {order.label}")

    phi, theta = _map_params(best.x, p, q)
    mu = wbar + best.x[p + q] * wsd if with_mean else None
    sos, resid = conditional_sum_of_squares(w, phi, theta, 0.0 if mu is None else mu)
    return _package(order, phi, theta, mu, x, w, sos, resid)


def _package(
    order: ArimaOrder,
    phi: np.ndarray,
    theta: np.ndarray,
    mu: float | None,
    x: np.ndarray,
    w: np.ndarray,
    sos: float,
    resid: np.ndarray,
) -> ArimaModel:
    p, d, q = order.p, order.d, order.q
    _poly_roots_outside(phi, "ar")
    _poly_roots_outside(theta, "ma")
    n_fit = w.size - p
    sigma2 = sos / n_fit
    k = p + q + (1 if mu is not None else 0) + 1
    if sigma2 > 0:
        loglik = -0.5 * n_fit * (math.log(2.0 * math.pi * sigma2) + 1.0)
    else:
        loglik = float("inf")
    aic = -2.0 * loglik + 2.0 * k
    if n_fit - k - 1 > 0:
        aicc = aic + (2.0 * k * (k + 1)) / (n_fit - k - 1)
    else:
        aicc = float("inf")
    tail_levels = tuple(float(v) for v in x[-(p + d + 1) :])
    tail_residuals = tuple(float(v) for v in resid[-q:]) if q else ()
    return ArimaModel(
        order=order,
        ar=tuple(float(v) for v in phi),
        ma=tuple(float(v) for v in theta),
        mean=mu,
        sigma2=float(sigma2),
        n_fit=int(n_fit),
        css=float(sos),
        aicc=float(aicc),
        tail_levels=tail_levels,
        tail_residuals=tail_residuals,
    )


def default_grid(max_p: int = MAX_P, max_q: int = MAX_Q) -> list[tuple[int, int]]:
    return [(p, q) for p in range(max_p + 1) for q in range(max_q + 1)]


def _comparable_aicc(model: ArimaModel, w: np.ndarray, skip: int) -> float:
    """AICc recomputed on the residuals from index ``skip`` onward.

    A model's own score conditions on its first p values, so grids mixing
    different p would compare likelihoods over different samples (which
    systematically favors larger p: each dropped residual removes roughly
    sigma2 from the sum).  Scoring every candidate on the common tail
    removes that bias.
    """
    phi = np.asarray(model.ar)
    theta = np.asarray(model.ma)
    mu = model.mean if model.mean is not None else 0.0
    _, e = conditional_sum_of_squares(w, phi, theta, mu)
    tail = e[skip - model.order.p :] if skip > model.order.p else e
    n_common = tail.size
    sos = float(np.dot(tail, tail))
    k = model.order.p + model.order.q + (1 if model.mean is not None else 0) + 1
    if sos <= 0 or n_common <= k + 1:
        return float("inf")
    sigma2 = sos / n_common
    loglik = -0.5 * n_common * (math.log(2.0 * math.pi * sigma2) + 1.0)
    return -2.0 * loglik + 2.0 * k + (2.0 * k * (k + 1)) / (n_common - k - 1)


def select_order(
    x,
    d: int | None = None,
    grid: list[tuple[int, int]] | None = None,
    seed: int = 0,
) -> OrderSelection:
    """Fit every (p, q) on the grid at a fixed d and keep the best score.

    Candidates are scored by AICc over a common residual sample (skipping
    the first max-p differenced values for everyone, see
    :func:`_comparable_aicc`).  Ranking key is (score, p + q, q), so ties
    resolve toward fewer parameters and, within that, toward the smaller
    moving-average order.
    """
    x = np.asarray(x, dtype=float)
    if d is None:
        d = choose_differencing(x)
    if grid is None:
        grid = default_grid()
    if not grid:
        raise ValueError("order grid is empty")
    w = np.diff(x, n=d)
    skip = max(p for p, _ in grid)

    best_key = None
    best: tuple[ArimaOrder, ArimaModel] | None = None
    scores: dict[ArimaOrder, float] = {}
    for p, q in grid:
        order = ArimaOrder(p, d, q)
        try:
            model = fit_arima(x, order, seed=seed)
        except FitError:
            continue
        if not is_admissible(model):
            scores[order] = float("inf")
            continue
        score = _comparable_aicc(model, w, skip)
        scores[order] = score
        key = (score, p + q, q)
        if best_key is None or key < best_key:
            best_key = key
            best = (order, model)
    if best is None:
        raise FitError("no admissible order on the grid could be fitted")
    return OrderSelection(order=best[0], model=best[1], scores=scores)


def forecast_h(model: ArimaModel, h: int, start: dt.date) -> list[ForecastPoint]:
    """Iterated forecasts for the h days beginning at ``start``.

    Future residuals enter as zero; differenced forecasts integrate back
    through the stored training tail.
    """
    if h < 0:
        raise ValueError("horizon must be nonnegative")
    if h == 0:
        return []
    p, d, q = model.order.p, model.order.d, model.order.q
    levels = np.asarray(model.tail_levels, dtype=float)
    z_hist = list(np.diff(levels, n=d)) if d else list(levels)
    e_hist = list(model.tail_residuals)
    mu = model.mean if model.mean is not None else 0.0

    z_future = []
    for _ in range(h):
        zhat = mu
        for i in range(1, p + 1):
            zhat += model.ar[i - 1] * (z_hist[-i] - mu)
        for j in range(1, q + 1):
            zhat += model.ma[j - 1] * e_hist[-j]
        z_future.append(zhat)
        z_hist.append(zhat)
        e_hist.append(0.0)

    path = np.asarray(z_future, dtype=float)
    for k in range(d, 0, -1):
        anchor = np.diff(levels, n=k - 1)[-1]
        path = anchor + np.cumsum(path)

    return [
        ForecastPoint(date=start + dt.timedelta(days=i), predicted=float(v))
        for i, v in enumerate(path)
    ]
