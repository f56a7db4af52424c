"""ARIMA fitting, order selection, and forecasting."""

import datetime as dt
import math

import numpy as np
import pytest
from scipy.signal import lfilter

from favorit.arima import (
    ArimaModel,
    ArimaOrder,
    choose_differencing,
    conditional_sum_of_squares,
    default_grid,
    fit_arima,
    forecast_h,
    is_admissible,
    pacf_to_coeffs,
    select_order,
)
from favorit.errors import FitError

START = dt.date(2021, 6, 28)


def simulate_arma(phi=(), theta=(), n=500, seed=0, mean=0.0, sigma=1.0, burn=200):
    rng = np.random.default_rng(seed)
    e = rng.normal(0.0, sigma, size=n + burn)
    ar = np.r_[1.0, -np.asarray(phi, dtype=float)]
    ma = np.r_[1.0, np.asarray(theta, dtype=float)]
    x = lfilter(ma, ar, e)
    return x[burn:] + mean


def model_100(order, **overrides):
    """Hand-built model with the training tail spelled out."""
    p, d, q = order
    fields = dict(
        order=ArimaOrder(*order),
        ar=(), ma=(),
        mean=0.0 if d == 0 else None,
        sigma2=1.0, n_fit=100, css=100.0, aicc=10.0,
        tail_levels=tuple(float(i) for i in range(p + d + 1)),
        tail_residuals=tuple(0.0 for _ in range(q)),
    )
    fields.update(overrides)
    return ArimaModel(**fields)


class TestOrderValidation:
    def test_bounds(self):
        assert ArimaOrder(1, 0, 0).label == "(1,0,0)"
        with pytest.raises(ValueError):
            ArimaOrder(4, 0, 0)
        with pytest.raises(ValueError):
            ArimaOrder(0, 3, 0)
        with pytest.raises(ValueError):
            ArimaOrder(0, 0, -1)


class TestPacfTransform:
    def test_first_coefficient_is_the_pac(self):
        np.testing.assert_allclose(pacf_to_coeffs([0.5]), [0.5])

    def test_unit_ball_maps_to_stationary_region(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            k = int(rng.integers(1, 4))
            pac = rng.uniform(-0.999, 0.999, size=k)
            coeffs = pacf_to_coeffs(pac)
            # Characteristic roots inside the unit circle <=> stationary.
            roots = np.roots(np.r_[1.0, -coeffs])
            assert np.all(np.abs(roots) < 1.0 + 1e-9)


class TestConditionalSumOfSquares:
    def test_white_noise_identity(self):
        z = np.array([1.0, -2.0, 3.0])
        sos, e = conditional_sum_of_squares(z, [], [])
        assert sos == pytest.approx(14.0)
        np.testing.assert_allclose(e, z)

    def test_ar1_recursion(self):
        z = np.array([1.0, 2.0, 3.0])
        sos, e = conditional_sum_of_squares(z, [0.5], [])
        # e_t = z_t - 0.5 z_{t-1}, starting from t = p.
        np.testing.assert_allclose(e, [1.5, 2.0])
        assert sos == pytest.approx(1.5**2 + 2.0**2)

    def test_ma1_recursion(self):
        z = np.array([1.0, 1.0, 1.0])
        sos, e = conditional_sum_of_squares(z, [], [0.5])
        # e_t = z_t - 0.5 e_{t-1} with zero start-up.
        np.testing.assert_allclose(e, [1.0, 0.5, 0.75])

    def test_mean_subtracted(self):
        z = np.array([3.0, 3.0, 3.0])
        sos, _ = conditional_sum_of_squares(z, [], [], mu=3.0)
        assert sos == 0.0


class TestChooseDifferencing:
    def test_random_walk_needs_one(self):
        steps = np.random.default_rng(5).normal(0.0, 1.0, 300)
        assert choose_differencing(np.cumsum(steps)) == 1

    def test_white_noise_needs_none(self):
        assert choose_differencing(np.random.default_rng(6).normal(0.0, 1.0, 300)) == 0

    def test_constant_needs_none(self):
        assert choose_differencing(np.full(50, 7.0)) == 0

    def test_short_series_rejected(self):
        with pytest.raises(FitError):
            choose_differencing(np.array([1.0, 2.0]))


class TestFitArima:
    def test_random_walk_model_is_analytic(self):
        x = np.array([10.0, 12.0, 11.0, 15.0, 15.0, 13.0, 14.0, 18.0, 17.0, 16.0, 19.0])
        model = fit_arima(x, ArimaOrder(0, 1, 0))
        assert model.ar == () and model.ma == () and model.mean is None
        w = np.diff(x)
        assert model.sigma2 == pytest.approx(float(np.mean(w**2)))

    def test_ar1_recovery(self):
        x = simulate_arma(phi=[0.5], n=2000, seed=2020)
        model = fit_arima(x, ArimaOrder(1, 0, 0))
        assert abs(model.ar[0] - 0.5) <= 0.08
        assert model.mean == pytest.approx(0.0, abs=0.2)

    def test_residual_mean_small_when_well_specified(self):
        x = simulate_arma(phi=[0.5], n=2000, seed=2020)
        model = fit_arima(x, ArimaOrder(1, 0, 0))
        _, e = conditional_sum_of_squares(x, model.ar, model.ma, model.mean)
        bound = 3.0 * math.sqrt(model.sigma2) / math.sqrt(len(e))
        assert abs(float(np.mean(e))) <= bound

    def test_ma1_recovery(self):
        x = simulate_arma(theta=[0.6], n=2000, seed=77)
        model = fit_arima(x, ArimaOrder(0, 0, 1))
        assert abs(model.ma[0] - 0.6) <= 0.1

    def test_too_short_series_rejected(self):
        with pytest.raises(FitError):
            fit_arima(np.ones(5), ArimaOrder(3, 0, 3))

    def test_non_finite_rejected(self):
        x = np.ones(50)
        x[10] = np.nan
        with pytest.raises(FitError):
            fit_arima(x, ArimaOrder(1, 0, 0))

    def test_mean_term_only_without_differencing(self):
        x = simulate_arma(phi=[0.4], n=200, seed=3, mean=50.0)
        assert fit_arima(x, ArimaOrder(1, 0, 0)).mean is not None
        assert fit_arima(x, ArimaOrder(1, 1, 0)).mean is None

    def test_fitted_roots_outside_unit_circle(self):
        for seed in range(4):
            x = simulate_arma(phi=[0.5, -0.2], theta=[0.3], n=400, seed=seed)
            model = fit_arima(x, ArimaOrder(2, 0, 1), seed=0)
            ar_roots = np.roots(np.r_[1.0, -np.array(model.ar)][::-1]) if model.ar else ()
            ma_roots = np.roots(np.r_[1.0, np.array(model.ma)][::-1]) if model.ma else ()
            assert all(abs(r) > 1.0 for r in ar_roots)
            assert all(abs(r) > 1.0 for r in ma_roots)

    def test_converged_css_is_a_local_minimum(self):
        x = simulate_arma(phi=[0.6], theta=[0.4], n=300, seed=9)
        model = fit_arima(x, ArimaOrder(1, 0, 1), seed=0)
        w = x
        base, _ = conditional_sum_of_squares(w, model.ar, model.ma, model.mean)
        for i in range(len(model.ar)):
            for eps in (-1e-3, 1e-3):
                phi = np.array(model.ar)
                phi[i] += eps
                sos, _ = conditional_sum_of_squares(w, phi, model.ma, model.mean)
                assert sos >= base - 1e-9 * abs(base)
        for j in range(len(model.ma)):
            for eps in (-1e-3, 1e-3):
                theta = np.array(model.ma)
                theta[j] += eps
                sos, _ = conditional_sum_of_squares(w, model.ar, theta, model.mean)
                assert sos >= base - 1e-9 * abs(base)

    def test_same_seed_same_fit(self):
        x = simulate_arma(phi=[0.5], theta=[0.2], n=300, seed=4)
        a = fit_arima(x, ArimaOrder(1, 0, 1), seed=0)
        b = fit_arima(x, ArimaOrder(1, 0, 1), seed=0)
        assert a == b


class TestEquivariance:
    def test_shift_moves_forecasts_by_fitted_mean_difference(self):
        x = simulate_arma(phi=[0.5], n=300, seed=13, mean=100.0)
        base = fit_arima(x, ArimaOrder(1, 0, 0), seed=0)
        shifted = fit_arima(x + 50.0, ArimaOrder(1, 0, 0), seed=0)
        assert shifted.mean - base.mean == pytest.approx(50.0, abs=1e-6)
        fb = forecast_h(base, 5, START)
        fs = forecast_h(shifted, 5, START)
        delta = shifted.mean - base.mean
        for a, b in zip(fb, fs):
            assert b.predicted - a.predicted == pytest.approx(delta, abs=1e-9)

    def test_shift_with_differencing_is_exact_translation(self):
        x = np.cumsum(np.random.default_rng(14).normal(0.0, 1.0, 200)) + 500.0
        base = forecast_h(fit_arima(x, ArimaOrder(1, 1, 0), seed=0), 5, START)
        shifted = forecast_h(fit_arima(x + 25.0, ArimaOrder(1, 1, 0), seed=0), 5, START)
        np.testing.assert_allclose(
            [p.predicted for p in shifted],
            [p.predicted + 25.0 for p in base],
            rtol=1e-9,
        )

    def test_scale_scales_forecasts(self):
        x = simulate_arma(phi=[0.5], n=300, seed=15, mean=100.0)
        base = forecast_h(fit_arima(x, ArimaOrder(1, 0, 0), seed=0), 5, START)
        scaled = forecast_h(fit_arima(4.0 * x, ArimaOrder(1, 0, 0), seed=0), 5, START)
        np.testing.assert_allclose(
            [p.predicted for p in scaled],
            [4.0 * p.predicted for p in base],
            rtol=1e-10,
        )


class TestAdmissibility:
    def test_plain_ar_admissible(self):
        model = model_100((1, 0, 0), ar=(0.5,))
        assert is_admissible(model)

    def test_boundary_ma_rejected(self):
        assert not is_admissible(model_100((0, 0, 1), ma=(-0.9995,)))
        assert is_admissible(model_100((0, 0, 1), ma=(-0.95,)))

    def test_boundary_ar_rejected(self):
        assert not is_admissible(model_100((1, 0, 0), ar=(0.9999,)))

    def test_near_cancelling_mixed_model_rejected(self):
        # AR and MA inverse roots 0.50 vs 0.45: a near-common factor.
        model = model_100((1, 0, 1), ar=(0.5,), ma=(-0.45,))
        assert not is_admissible(model)

    def test_separated_mixed_model_admissible(self):
        model = model_100((1, 0, 1), ar=(0.5,), ma=(0.5,))
        assert is_admissible(model)


class TestSelectOrder:
    def test_white_noise_prefers_smallest_model(self):
        x = np.random.default_rng(0).normal(0.0, 1.0, 400)
        selection = select_order(x, d=0, seed=0)
        assert (selection.order.p, selection.order.d, selection.order.q) == (0, 0, 0)

    def test_ar1_recovered_on_documented_seed(self):
        x = simulate_arma(phi=[0.7], n=1000, seed=0)
        selection = select_order(x, d=0, seed=0)
        assert (selection.order.p, selection.order.d, selection.order.q) == (1, 0, 0)

    def test_scores_cover_grid(self):
        x = np.random.default_rng(1).normal(0.0, 1.0, 200)
        selection = select_order(x, d=0, seed=0)
        assert len(selection.scores) == len(default_grid())

    def test_empty_grid_rejected(self):
        x = np.random.default_rng(1).normal(0.0, 1.0, 200)
        with pytest.raises(ValueError):
            select_order(x, d=0, grid=[], seed=0)

    def test_differencing_chosen_when_unspecified(self):
        x = np.cumsum(np.random.default_rng(8).normal(0.0, 1.0, 300))
        selection = select_order(x, seed=0)
        assert selection.order.d == 1


class TestForecast:
    def test_random_walk_forecasts_flat(self):
        model = model_100((0, 1, 0), tail_levels=(280.0, 300.0))
        points = forecast_h(model, 8, START)
        assert [p.predicted for p in points] == [300.0] * 8

    def test_ar1_analytic_decay(self):
        model = model_100((1, 0, 0), ar=(0.5,), tail_levels=(0.0, 10.0))
        points = forecast_h(model, 4, START)
        np.testing.assert_allclose(
            [p.predicted for p in points], [5.0, 2.5, 1.25, 0.625]
        )

    def test_ar1_with_mean_converges_to_mean(self):
        model = model_100((1, 0, 0), ar=(0.5,), mean=100.0, tail_levels=(0.0, 110.0))
        points = forecast_h(model, 50, START)
        assert points[0].predicted == pytest.approx(105.0)
        assert points[-1].predicted == pytest.approx(100.0, abs=1e-9)

    def test_double_differencing_extends_trend(self):
        model = model_100((0, 2, 0), tail_levels=(0.0, 1.0, 3.0))
        points = forecast_h(model, 3, START)
        np.testing.assert_allclose([p.predicted for p in points], [5.0, 7.0, 9.0])

    def test_ma_uses_stored_residuals_then_forgets(self):
        model = model_100((0, 0, 1), ma=(0.5,), mean=0.0, tail_residuals=(2.0,),
                          tail_levels=(7.0,))
        points = forecast_h(model, 3, START)
        np.testing.assert_allclose([p.predicted for p in points], [1.0, 0.0, 0.0])

    def test_dates_consecutive_from_start(self):
        model = model_100((0, 1, 0), tail_levels=(280.0, 300.0))
        points = forecast_h(model, 3, START)
        assert [p.date for p in points] == [START, START + dt.timedelta(days=1),
                                            START + dt.timedelta(days=2)]

    def test_zero_horizon_empty(self):
        model = model_100((0, 1, 0), tail_levels=(280.0, 300.0))
        assert forecast_h(model, 0, START) == []

    def test_serialization_roundtrip_preserves_forecasts(self):
        x = simulate_arma(phi=[0.4], theta=[0.3], n=300, seed=21, mean=400.0)
        model = fit_arima(x, ArimaOrder(1, 0, 1), seed=0)
        clone = ArimaModel.from_dict(model.to_dict())
        a = [p.predicted for p in forecast_h(model, 8, START)]
        b = [p.predicted for p in forecast_h(clone, 8, START)]
        assert a == b
