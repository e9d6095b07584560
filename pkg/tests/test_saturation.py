import sys
import unittest
from pathlib import Path

import numpy as np

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from phasewave.core.eos import TABLE1_LIQUID, TABLE1_VAPOR, StiffenedGasParams, gibbs  # noqa: E402
from phasewave.core.errors import DegenerateError, DomainError, OutOfRangeError  # noqa: E402
from phasewave.core.runtime import SolverSettings  # noqa: E402
from phasewave.core.saturation import (  # noqa: E402
    T_sat,
    clausius_clapeyron_slope,
    dTsat_dp,
    gibbs_difference,
    p_sat,
    saturation_curve,
    saturation_point,
    saturation_slope,
)


def bisect_p_sat(T: float, lo: float = 1.0, hi: float = 1e8) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(gibbs_difference(TABLE1_VAPOR, TABLE1_LIQUID, mid, T)) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_T_sat(p: float, lo: float = 273.16, hi: float = 647.096) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(gibbs_difference(TABLE1_VAPOR, TABLE1_LIQUID, p, mid)) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class SaturationTest(unittest.TestCase):
    def test_p_sat_matches_bisection_and_balances_gibbs(self) -> None:
        for T in (373.15, 500.0):
            p = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, T)
            self.assertAlmostEqual(p / bisect_p_sat(T), 1.0, places=10)
            g_v = float(gibbs(TABLE1_VAPOR, p, T))
            residual = abs(g_v - float(gibbs(TABLE1_LIQUID, p, T))) / abs(g_v)
            self.assertLess(residual, 1e-10)

    def test_p_sat_magnitudes(self) -> None:
        self.assertTrue(5e4 < p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 373.15) < 5e5)
        self.assertTrue(1e6 < p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 500.0) < 1e7)

    def test_p_sat_increases_with_temperature(self) -> None:
        for T in np.linspace(273.16, 646.9, 50):
            lower = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, float(T))
            upper = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, float(T) + 0.1)
            self.assertGreater(upper, lower)

    def test_T_sat_matches_bisection(self) -> None:
        T_low = T_sat(TABLE1_VAPOR, TABLE1_LIQUID, 1e5)
        T_high = T_sat(TABLE1_VAPOR, TABLE1_LIQUID, 1e6)

        self.assertAlmostEqual(T_low, bisect_T_sat(1e5), places=9)
        self.assertAlmostEqual(T_high, bisect_T_sat(1e6), places=9)
        self.assertGreater(T_high, T_low)

    def test_T_sat_inverts_p_sat(self) -> None:
        for T in np.linspace(280.0, 640.0, 50):
            p = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, float(T))
            self.assertAlmostEqual(T_sat(TABLE1_VAPOR, TABLE1_LIQUID, p) / T, 1.0, places=10)

    def test_closed_form_slope_matches_finite_difference(self) -> None:
        for T in np.concatenate(([373.15, 450.0], np.linspace(280.0, 640.0, 50))):
            point = saturation_point(TABLE1_VAPOR, TABLE1_LIQUID, float(T))
            step = 1e-4 * point.p_sat
            fd = (
                T_sat(TABLE1_VAPOR, TABLE1_LIQUID, point.p_sat + step)
                - T_sat(TABLE1_VAPOR, TABLE1_LIQUID, point.p_sat - step)
            ) / (2.0 * step)
            closed = dTsat_dp(TABLE1_VAPOR, TABLE1_LIQUID, point)
            self.assertGreater(closed, 0.0)
            self.assertLess(abs(closed - fd) / closed, 1e-6)

    def test_clausius_clapeyron_form_agrees_with_closed_form(self) -> None:
        point = saturation_point(TABLE1_VAPOR, TABLE1_LIQUID, 420.0)

        cc = clausius_clapeyron_slope(point.vapor, point.liquid)

        self.assertAlmostEqual(cc / point.slope_dT_dp, 1.0, places=6)

    def test_degenerate_denominator_is_reported(self) -> None:
        same = StiffenedGasParams(gamma=2.0, pi=0.0, C=1.0)

        with self.assertRaises(DegenerateError):
            saturation_slope(same, same, 1e5, 300.0)

    def test_saturation_curve_two_points(self) -> None:
        curve = saturation_curve(TABLE1_VAPOR, TABLE1_LIQUID, 300.0, 600.0, 2)

        self.assertEqual(len(curve.points), 2)
        self.assertEqual(curve.points[0].T, 300.0)
        self.assertEqual(curve.points[-1].T, 600.0)

    def test_full_window_curve_is_monotone_and_flags_critical_end(self) -> None:
        curve = saturation_curve(TABLE1_VAPOR, TABLE1_LIQUID, 273.16, 647.096, 200)

        self.assertEqual(len(curve.points), 200)
        self.assertTrue(np.all(np.diff(curve.pressures) > 0.0))
        self.assertTrue(curve.points[-1].near_critical)
        self.assertFalse(curve.points[0].near_critical)
        for point in curve.points:
            g_v = point.vapor.g
            self.assertLess(abs(g_v - point.liquid.g) / abs(g_v), 1e-6)

    def test_curve_interpolation_helpers(self) -> None:
        curve = saturation_curve(TABLE1_VAPOR, TABLE1_LIQUID, 350.0, 450.0, 11)
        p_mid = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 400.0)

        self.assertAlmostEqual(float(curve.temperature_at(p_mid)[0]), 400.0, places=8)
        self.assertAlmostEqual(curve.pressure_at(400.0) / p_mid, 1.0, places=12)
        self.assertTrue(np.isnan(curve.temperature_at(1.0)[0]))
        self.assertTrue(np.isnan(curve.pressure_at(300.0)))

    def test_window_and_sampling_errors(self) -> None:
        with self.assertRaises(OutOfRangeError):
            p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 200.0)
        with self.assertRaises(OutOfRangeError):
            T_sat(TABLE1_VAPOR, TABLE1_LIQUID, 0.5)
        with self.assertRaises(DomainError):
            saturation_curve(TABLE1_VAPOR, TABLE1_LIQUID, 300.0, 400.0, 1)

    def test_widened_window_is_honoured(self) -> None:
        settings = SolverSettings(t_min=250.0)

        p = p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 260.0, settings)

        self.assertLess(p, p_sat(TABLE1_VAPOR, TABLE1_LIQUID, 273.16, settings))


if __name__ == "__main__":
    unittest.main()
