import json
import math
import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
from scipy.stats import qmc

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from phasewave.core.eos import (  # noqa: E402
    IDEAL_GAS,
    TABLE1_LIQUID,
    TABLE1_VAPOR,
    StiffenedGasParams,
    check_consistency,
    density_from_pT,
    energy,
    enthalpy,
    entropy,
    get_preset,
    gibbs,
    load_params_json,
    params_from_dict,
    params_to_dict,
    phase_state,
    phase_state_from_pT,
    sound_speed,
    temperature,
)
from phasewave.core.errors import ConfigError, DomainError  # noqa: E402


def lhs_states(params: StiffenedGasParams, p_range, T_range, n: int, seed: int):
    sampler = qmc.LatinHypercube(d=2, seed=seed)
    unit = sampler.random(n)
    log_p = np.log(p_range[0]) + unit[:, 0] * (np.log(p_range[1]) - np.log(p_range[0]))
    T = T_range[0] + unit[:, 1] * (T_range[1] - T_range[0])
    return np.exp(log_p), T


class EquationOfStateTest(unittest.TestCase):
    def test_ideal_gas_energy_is_p_over_rho_gamma_minus_one(self) -> None:
        params = StiffenedGasParams(gamma=1.4, pi=0.0, C=1.0)

        self.assertAlmostEqual(float(energy(params, 1.0, 1.0)), 2.5, places=14)

    def test_table1_vapor_closed_forms(self) -> None:
        self.assertAlmostEqual(
            float(energy(TABLE1_VAPOR, 1e5, 0.5)), 1e5 / (0.5 * 0.43) + 2.03e6, delta=1e-6
        )
        self.assertAlmostEqual(float(energy(TABLE1_VAPOR, 1e5, 0.5)), 2.49512e6, delta=5.0)
        self.assertAlmostEqual(float(temperature(TABLE1_VAPOR, 1e5, 0.5)), 447.23, delta=0.01)
        self.assertAlmostEqual(float(sound_speed(TABLE1_VAPOR, 1e5, 0.5)), 534.79, delta=0.01)

    def test_table1_liquid_closed_forms(self) -> None:
        p_bar = 1e5 + 1e9
        self.assertAlmostEqual(
            float(energy(TABLE1_LIQUID, 1e5, 1000.0)),
            (1e5 + 2.35e9) / (1000.0 * 1.35) - 1.167e6,
            delta=1e-6,
        )
        self.assertAlmostEqual(
            float(temperature(TABLE1_LIQUID, 1e5, 1000.0)), p_bar / (1816.0 * 1000.0 * 1.35), places=9
        )
        self.assertAlmostEqual(
            float(sound_speed(TABLE1_LIQUID, 1e5, 1000.0)), math.sqrt(2.35 * p_bar / 1000.0), places=9
        )

    def test_density_from_pT_inverts_temperature(self) -> None:
        for params, p, rho in ((TABLE1_VAPOR, 1e5, 0.5), (TABLE1_LIQUID, 1e5, 1000.0)):
            T = float(temperature(params, p, rho))
            self.assertAlmostEqual(float(density_from_pT(params, p, T)) / rho, 1.0, places=12)

    def test_unit_parameters_give_unit_temperature(self) -> None:
        params = StiffenedGasParams(gamma=2.0, pi=0.0, C=1.0)

        self.assertEqual(float(temperature(params, 1.0, 1.0)), 1.0)

    def test_entropy_is_constant_along_ideal_isentrope(self) -> None:
        p = np.geomspace(1e3, 1e7, 25)
        T = 400.0 * (p / 1e5) ** (0.43 / 1.43)
        s = entropy(TABLE1_VAPOR, p, T)

        self.assertLess(np.max(np.abs(s - s[0])) / abs(s[0]), 1e-12)

    def test_gibbs_closed_form_matches_assembled_definition(self) -> None:
        for params, seed in ((TABLE1_VAPOR, 1), (TABLE1_LIQUID, 2)):
            p, T = lhs_states(params, (1e3, 2e7), (275.0, 640.0), 100, seed)
            rho = density_from_pT(params, p, T)
            assembled = energy(params, p, rho) + p / rho - T * entropy(params, p, T)
            closed = gibbs(params, p, T)
            scale = np.maximum(np.abs(closed), params.C * T)
            self.assertLess(float(np.max(np.abs(assembled - closed) / scale)), 1e-10)

    def test_consistency_residuals_are_small_for_both_phases(self) -> None:
        for params, p, T in ((TABLE1_VAPOR, 1e5, 400.0), (TABLE1_LIQUID, 1e7, 450.0)):
            residuals = check_consistency(params, p, T, h=1e-6)
            self.assertLess(residuals.pressure_relative, 1e-4)
            self.assertLess(residuals.temperature_relative, 1e-4)

    def test_consistency_residuals_converge_at_second_order(self) -> None:
        for params, p, T in ((TABLE1_VAPOR, 1e5, 400.0), (TABLE1_LIQUID, 1e7, 450.0)):
            coarse = check_consistency(params, p, T, h=8e-4)
            fine = check_consistency(params, p, T, h=4e-4)
            self.assertAlmostEqual(coarse.pressure / fine.pressure, 4.0, delta=0.1)
            self.assertAlmostEqual(coarse.temperature / fine.temperature, 4.0, delta=0.1)

    def test_consistency_holds_over_latin_hypercube_sample(self) -> None:
        for params, seed in ((TABLE1_VAPOR, 11), (TABLE1_LIQUID, 12)):
            p, T = lhs_states(params, (1e3, 2e7), (275.0, 640.0), 1000, seed)
            worst = 0.0
            for p_i, T_i in zip(p, T, strict=True):
                residuals = check_consistency(params, float(p_i), float(T_i), h=1e-6)
                worst = max(worst, residuals.pressure_relative, residuals.temperature_relative)
            self.assertLess(worst, 1e-4)

    def test_check_consistency_rejects_large_step(self) -> None:
        with self.assertRaises(DomainError):
            check_consistency(TABLE1_VAPOR, 1e5, 400.0, h=1e-2)

    def test_monotonicity_in_density_and_pressure(self) -> None:
        rho = np.linspace(0.1, 5.0, 50)
        self.assertTrue(np.all(np.diff(temperature(TABLE1_VAPOR, 1e5, rho)) < 0.0))
        p = np.geomspace(1e3, 1e8, 50)
        self.assertTrue(np.all(np.diff(sound_speed(TABLE1_LIQUID, p, 1000.0)) > 0.0))

    def test_phase_state_is_self_consistent(self) -> None:
        state = phase_state(TABLE1_LIQUID, 1e6, 950.0)

        self.assertAlmostEqual(state.e, float(energy(TABLE1_LIQUID, state.p, state.rho)), delta=1e-6)
        self.assertAlmostEqual(
            state.g / (state.e + state.p / state.rho - state.T * state.s), 1.0, places=10
        )

    def test_phase_state_from_pT_matches_density_form(self) -> None:
        from_pT = phase_state_from_pT(TABLE1_VAPOR, 1e5, 400.0)
        from_rho = phase_state(TABLE1_VAPOR, 1e5, from_pT.rho)

        self.assertEqual(from_pT.T, 400.0)
        self.assertAlmostEqual(from_rho.T, 400.0, places=9)
        self.assertAlmostEqual(from_rho.e / from_pT.e, 1.0, places=12)
        self.assertAlmostEqual(from_rho.a / from_pT.a, 1.0, places=12)

    def test_enthalpy_equals_gamma_C_T_plus_q(self) -> None:
        for params, p, T in ((TABLE1_VAPOR, 1e5, 400.0), (TABLE1_LIQUID, 1e6, 350.0)):
            rho = float(density_from_pT(params, p, T))
            expected = params.gamma * params.C * T + params.q
            self.assertAlmostEqual(float(enthalpy(params, p, rho)) / expected, 1.0, places=10)

    def test_inadmissible_states_raise_domain_error(self) -> None:
        with self.assertRaises(DomainError):
            energy(TABLE1_VAPOR, 1e5, 0.0)
        with self.assertRaises(DomainError):
            temperature(TABLE1_LIQUID, -2e9, 1000.0)
        with self.assertRaises(DomainError):
            entropy(TABLE1_VAPOR, 1e5, -1.0)
        with self.assertRaises(DomainError):
            StiffenedGasParams(gamma=1.0, pi=0.0, C=1.0)

    def test_params_json_round_trip_and_presets(self) -> None:
        payload = params_to_dict(TABLE1_LIQUID)
        self.assertEqual(set(payload), {"gamma", "pi", "C", "q", "q_prime"})
        self.assertEqual(params_from_dict(payload), TABLE1_LIQUID)
        self.assertEqual(get_preset(" Table1-Vapor "), TABLE1_VAPOR)
        self.assertEqual(get_preset("ideal-gas"), IDEAL_GAS)

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "liquid.json"
            path.write_text(json.dumps(payload), encoding="utf-8")
            self.assertEqual(load_params_json(path), TABLE1_LIQUID)

    def test_bad_parameter_sources_raise_config_error(self) -> None:
        with self.assertRaises(ConfigError):
            get_preset("table2-vapor")
        with self.assertRaises(ConfigError):
            params_from_dict({"gamma": 1.4})
        with self.assertRaises(ConfigError):
            params_from_dict({"gamma": 0.5, "pi": 0, "C": 1, "q": 0, "q_prime": 0})


if __name__ == "__main__":
    unittest.main()
