import math
import sys
import unittest
from pathlib import Path

import numpy as np

REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from phasewave.core.eos import (  # noqa: E402
    IDEAL_GAS,
    TABLE1_LIQUID,
    TABLE1_VAPOR,
    entropy,
    sound_speed,
    temperature,
)
from phasewave.core.errors import DomainError, VacuumError  # noqa: E402
from phasewave.core.riemann import (  # noqa: E402
    PrimitiveState,
    RiemannInput,
    sample,
    sample_profile,
    solve,
    star_temperatures,
    symmetric_piston_input,
    verify_rankine_hugoniot,
)
from phasewave.core.waves import WaveKind, hugoniot_density_ratio, hugoniot_temperature  # noqa: E402

SOD = RiemannInput(
    left=PrimitiveState(rho=1.0, u=0.0, p=1.0),
    right=PrimitiveState(rho=0.125, u=0.0, p=0.1),
    params=IDEAL_GAS,
)


def ideal_gas_star_oracle(left: PrimitiveState, right: PrimitiveState, gamma: float):
    """独立的二分法星区压力迭代（理想气体）"""

    def side(p: float, state: PrimitiveState) -> float:
        a = math.sqrt(gamma * state.p / state.rho)
        if p > state.p:
            A = 2.0 / ((gamma + 1.0) * state.rho)
            B = (gamma - 1.0) / (gamma + 1.0) * state.p
            return (p - state.p) * math.sqrt(A / (p + B))
        return 2.0 * a / (gamma - 1.0) * ((p / state.p) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)

    du = right.u - left.u
    lo, hi = 1e-12, 100.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if side(mid, left) + side(mid, right) + du > 0.0:
            hi = mid
        else:
            lo = mid
    p_star = 0.5 * (lo + hi)
    u_star = 0.5 * (left.u + right.u) + 0.5 * (side(p_star, right) - side(p_star, left))
    return p_star, u_star


class RiemannSolveTest(unittest.TestCase):
    def test_sod_star_state_matches_oracle(self) -> None:
        solution = solve(SOD)
        p_oracle, u_oracle = ideal_gas_star_oracle(SOD.left, SOD.right, 1.4)

        self.assertAlmostEqual(solution.p_star, p_oracle, delta=1e-8)
        self.assertAlmostEqual(solution.u_star, u_oracle, delta=1e-8)
        self.assertAlmostEqual(solution.p_star, 0.30313, delta=1e-5)
        self.assertAlmostEqual(solution.u_star, 0.92745, delta=1e-5)
        self.assertEqual(solution.left_wave.kind, WaveKind.RAREFACTION)
        self.assertEqual(solution.right_wave.kind, WaveKind.SHOCK)
        self.assertLess(solution.residual, 1e-10)

    def test_wave_ordering(self) -> None:
        solution = solve(SOD)

        self.assertLessEqual(solution.left_wave.head_speed, solution.left_wave.tail_speed)
        self.assertLessEqual(solution.left_wave.tail_speed, solution.contact_speed)
        self.assertLessEqual(solution.contact_speed, solution.right_wave.speed)

    def test_equal_states_give_zero_strength_waves(self) -> None:
        state = PrimitiveState(rho=1.2, u=3.0, p=2.5e5)
        problem = RiemannInput(left=state, right=state, params=IDEAL_GAS)

        solution = solve(problem)

        self.assertEqual(solution.p_star, state.p)
        self.assertEqual(solution.u_star, state.u)
        self.assertAlmostEqual(solution.rho_star_left, state.rho, places=12)
        self.assertAlmostEqual(solution.rho_star_right, state.rho, places=12)
        for residual in verify_rankine_hugoniot(solution, problem):
            self.assertEqual(residual.max_residual, 0.0)

    def test_mirrored_problem_mirrors_solution(self) -> None:
        problem = RiemannInput(
            left=PrimitiveState(rho=1.0, u=0.75, p=1.0),
            right=PrimitiveState(rho=0.125, u=-0.2, p=0.1),
            params=IDEAL_GAS,
        )

        solution = solve(problem)
        mirrored = solve(problem.mirrored())

        self.assertAlmostEqual(mirrored.p_star, solution.p_star, places=12)
        self.assertAlmostEqual(mirrored.u_star, -solution.u_star, places=12)
        self.assertAlmostEqual(mirrored.rho_star_left, solution.rho_star_right, places=12)
        self.assertAlmostEqual(mirrored.rho_star_right, solution.rho_star_left, places=12)
        self.assertEqual(mirrored.left_wave.kind, solution.right_wave.kind)
        self.assertAlmostEqual(mirrored.left_wave.speed, -solution.right_wave.speed, places=12)

    def test_vacuum_generating_data_is_rejected(self) -> None:
        problem = RiemannInput(
            left=PrimitiveState(rho=1.0, u=-10.0, p=1e-3),
            right=PrimitiveState(rho=1.0, u=10.0, p=1e-3),
            params=IDEAL_GAS,
        )

        with self.assertRaises(VacuumError):
            solve(problem)

    def test_inadmissible_initial_state_is_rejected(self) -> None:
        with self.assertRaises(DomainError):
            RiemannInput(
                left=PrimitiveState(rho=0.0, u=0.0, p=1.0),
                right=PrimitiveState(rho=1.0, u=0.0, p=1.0),
                params=IDEAL_GAS,
            )


class RiemannSampleTest(unittest.TestCase):
    def setUp(self) -> None:
        self.solution = solve(SOD)

    def test_far_field_returns_initial_states(self) -> None:
        self.assertEqual(sample(self.solution, SOD, -100.0), SOD.left)
        self.assertEqual(sample(self.solution, SOD, 100.0), SOD.right)

    def test_contact_keeps_pressure_and_velocity(self) -> None:
        eps = 1e-9
        left = sample(self.solution, SOD, self.solution.contact_speed - eps)
        right = sample(self.solution, SOD, self.solution.contact_speed + eps)

        self.assertEqual(left.p, right.p)
        self.assertEqual(left.u, right.u)
        self.assertNotAlmostEqual(left.rho, right.rho, places=3)

    def test_fan_interior_follows_characteristic_and_isentrope(self) -> None:
        xi = -0.5
        gamma = 1.4
        state = sample(self.solution, SOD, xi)
        a = float(sound_speed(IDEAL_GAS, state.p, state.rho))
        a_left = math.sqrt(gamma)

        self.assertAlmostEqual(state.u - a, xi, places=12)
        self.assertAlmostEqual(state.p / state.rho**gamma, 1.0, places=12)
        self.assertAlmostEqual(state.u + 2.0 * a / (gamma - 1.0), 2.0 * a_left / (gamma - 1.0), places=12)
        self.assertTrue(self.solution.left_wave.head_speed < xi < self.solution.left_wave.tail_speed)

    def test_profile_columns(self) -> None:
        xi = np.linspace(-2.0, 2.0, 41)

        profile = sample_profile(self.solution, SOD, xi)

        self.assertEqual(profile.rho.shape, (41,))
        np.testing.assert_allclose(profile.T, temperature(IDEAL_GAS, profile.p, profile.rho))
        self.assertEqual(profile.p[0], 1.0)
        self.assertEqual(profile.p[-1], 0.1)


class RankineHugoniotTest(unittest.TestCase):
    def test_sod_right_shock_satisfies_jump_conditions(self) -> None:
        solution = solve(SOD)

        residuals = verify_rankine_hugoniot(solution, SOD)

        self.assertEqual([r.side for r in residuals], ["right"])
        self.assertLess(residuals[0].max_residual, 1e-8)

    def test_liquid_shock_satisfies_jump_conditions(self) -> None:
        problem = RiemannInput(
            left=PrimitiveState(rho=1000.0, u=0.0, p=5e7),
            right=PrimitiveState(rho=1000.0, u=0.0, p=1e7),
            params=TABLE1_LIQUID,
        )

        solution = solve(problem)
        residuals = verify_rankine_hugoniot(solution, problem)

        self.assertEqual(solution.right_wave.kind, WaveKind.SHOCK)
        self.assertTrue(residuals)
        for residual in residuals:
            self.assertLess(residual.max_residual, 1e-8)
        ratio = float(hugoniot_density_ratio(TABLE1_LIQUID, 1e7, solution.p_star))
        self.assertAlmostEqual(solution.rho_star_right / 1000.0, ratio, places=12)

    def test_entropy_rises_across_shock_and_is_kept_by_rarefaction(self) -> None:
        solution = solve(SOD)
        T_left, T_right = star_temperatures(solution, SOD)
        s_left = float(entropy(IDEAL_GAS, SOD.left.p, float(temperature(IDEAL_GAS, SOD.left.p, SOD.left.rho))))
        s_right = float(entropy(IDEAL_GAS, SOD.right.p, float(temperature(IDEAL_GAS, SOD.right.p, SOD.right.rho))))

        s_star_left = float(entropy(IDEAL_GAS, solution.p_star, T_left))
        s_star_right = float(entropy(IDEAL_GAS, solution.p_star, T_right))

        self.assertLess(abs(s_star_left - s_left) / abs(s_left), 1e-12)
        self.assertGreater(s_star_right, s_right)


class PistonSurrogateTest(unittest.TestCase):
    def test_vapor_compression_produces_two_shocks(self) -> None:
        problem = symmetric_piston_input(TABLE1_VAPOR, 1e5, 400.0, 50.0)

        solution = solve(problem)
        _, T_star = star_temperatures(solution, problem)

        self.assertEqual(solution.left_wave.kind, WaveKind.SHOCK)
        self.assertEqual(solution.right_wave.kind, WaveKind.SHOCK)
        self.assertGreater(solution.right_wave.speed, 0.0)
        self.assertAlmostEqual(solution.u_star, 0.0, places=9)
        self.assertGreater(solution.p_star, 1e5)
        self.assertGreater(T_star, 400.0)
        expected = float(hugoniot_temperature(TABLE1_VAPOR, 1e5, 400.0, solution.p_star))
        self.assertAlmostEqual(T_star / expected, 1.0, places=10)

    def test_expansion_produces_two_rarefactions(self) -> None:
        problem = symmetric_piston_input(TABLE1_LIQUID, 1e6, 400.0, -1.0)

        solution = solve(problem)

        self.assertEqual(solution.left_wave.kind, WaveKind.RAREFACTION)
        self.assertEqual(solution.right_wave.kind, WaveKind.RAREFACTION)
        self.assertLess(solution.p_star, 1e6)


if __name__ == "__main__":
    unittest.main()
