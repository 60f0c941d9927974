"""
Simulator Test Suite

Test Coverage:
--------------
1. Discretization
   - Zero-order hold against closed forms
   - RK4 against zero-order hold for a small step

2. SimConfig
   - Step and duration checks, integrator aliases, time grid

3. Joint simulation
   - Healthy noise-free run keeps every residual at zero
   - Filter error e_p follows its own recursion under actuator, sensor and link attacks
   - Superposition of anomaly responses; the control input never reaches a residual
   - Seeded noise is reproducible
   - Residual table layout

4. Decoupling probes
   - AA residual is blind to both faults
   - Fault residuals see their own fault and ignore the other and every attack
   - SA residual sees sensor attacks only
   - Link attacks blocked by L_p D_ac = 0 and leaking when it fails

Usage:
------
    pytest tests/test_sim.py -v

Expected Results:
-----------------
    - All tests pass; runs use a 10 ms step

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import sys
import unittest
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.design import DetectorBank, benchmark_bank, verify_conditions
from src.model import benchmark_augmented
from src.numerics import DimensionError
from src.sim import SimConfig, decoupling_probe, discretize, joint_system, probe_timeline, simulate
from src.threat import ScenarioTimeline, waveform

FAST = dict(dt=0.01, t_end=3.0)


class TestDiscretize(unittest.TestCase):

    def test_integrator_of_one(self):
        phi, gamma = discretize([[0.0]], [[1.0]], 0.5)
        self.assertAlmostEqual(phi[0, 0], 1.0)
        self.assertAlmostEqual(gamma[0, 0], 0.5)

    def test_first_order_lag(self):
        phi, gamma = discretize([[-1.0]], [[1.0]], 0.1)
        self.assertAlmostEqual(phi[0, 0], np.exp(-0.1), places=12)
        self.assertAlmostEqual(gamma[0, 0], 1.0 - np.exp(-0.1), places=12)

    def test_rk4_close_to_zoh(self):
        a = np.array([[-1.0, 0.5], [0.0, -2.0]])
        b = np.array([[1.0], [1.0]])
        exact = discretize(a, b, 0.01, "zoh")
        approx = discretize(a, b, 0.01, "rk4")
        np.testing.assert_allclose(approx[0], exact[0], atol=1e-9)
        np.testing.assert_allclose(approx[1], exact[1], atol=1e-9)

    def test_empty_input(self):
        phi, gamma = discretize(-np.eye(2), np.zeros((2, 0)), 0.1)
        self.assertEqual(gamma.shape, (2, 0))

    def test_bad_arguments(self):
        with self.assertRaises(ValueError):
            discretize([[0.0]], [[1.0]], 0.0)
        with self.assertRaises(ValueError):
            discretize([[0.0]], [[1.0]], 0.1, "euler")
        with self.assertRaises(DimensionError):
            discretize(np.ones((2, 3)), np.ones((2, 1)), 0.1)


class TestSimConfig(unittest.TestCase):

    def test_grid(self):
        cfg = SimConfig(dt=0.01, t_end=1.0)
        self.assertEqual(cfg.steps, 100)
        grid = cfg.time_grid()
        self.assertEqual(grid.size, 101)
        self.assertAlmostEqual(grid[-1], 1.0)

    def test_validation(self):
        with self.assertRaises(ValueError):
            SimConfig(dt=0.0)
        with self.assertRaises(ValueError):
            SimConfig(dt=0.1, t_end=0.05)
        with self.assertRaises(ValueError):
            SimConfig(integrator="euler")

    def test_integrator_alias(self):
        self.assertEqual(SimConfig(integrator="exact").integrator, "zoh")
        self.assertEqual(SimConfig(integrator="RK4").to_dict()["integrator"], "rk4")


class TestJointSystem(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)

    def test_layout(self):
        a_j, b_j, states, inputs = joint_system(self.aug, self.bank)
        n, size = self.aug.dims.n, self.aug.size
        n_states = size + len(self.bank.categories) * (2 * n + size)
        self.assertEqual(a_j.shape, (n_states, n_states))
        self.assertEqual(states["x"], slice(0, size))
        self.assertEqual(list(inputs), ["u", "a_u", "a_y", "a_c", "f1", "f2", "omega"])
        self.assertEqual(inputs["a_c"].stop - inputs["a_c"].start, self.bank.d_ac.shape[1])
        self.assertEqual(b_j.shape, (n_states, inputs["omega"].stop))

    def test_plant_block_is_the_augmented_model(self):
        a_j, _, states, _ = joint_system(self.aug, self.bank)
        sx = states["x"]
        np.testing.assert_allclose(a_j[sx, sx], self.aug.a)
        # the plant never sees the filters or detectors
        np.testing.assert_allclose(a_j[sx, sx.stop:], 0.0)


class TestSimulate(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)

    def test_healthy_noise_free_run_is_silent(self):
        trace = simulate(self.aug, self.bank, None, SimConfig(noise_on=False, **FAST))
        self.assertFalse(trace.truncated)
        self.assertEqual(trace.t.size, 301)
        for category in self.bank.categories:
            np.testing.assert_allclose(trace.residual_norm(category), 0.0, atol=1e-12)

    def test_filter_error_recursion(self):
        a_u = waveform("a_u", "step", [2.0, 1.0], t0=0.5)
        cfg = SimConfig(noise_on=False, **FAST)
        trace = simulate(self.aug, self.bank, ScenarioTimeline(name="a_u", generators=[a_u]), cfg)

        flt = self.bank["AA"].filter
        phi, gamma = discretize(flt.closed, flt.t_p @ self.aug.plant.b_a_s, cfg.dt)
        values = a_u.evaluate(trace.t)
        expected = np.zeros((trace.t.size, flt.n))
        for k in range(trace.t.size - 1):
            expected[k + 1] = phi @ expected[k] + gamma @ values[k]
        np.testing.assert_allclose(trace.channels["AA"].e_p, expected, atol=1e-9)
        np.testing.assert_allclose(trace.u_star, values @ self.aug.s_a.T)

    def test_filter_error_recursion_mixed_inputs(self):
        # a link signature that reaches L_p so every input shows up in e_p
        bank = DetectorBank(channels=self.bank.channels, d_ac=np.diag([0.0, 0.0, 1.0, 1.0]))
        a_u = waveform("a_u", "step", [2.0, 1.0], t0=0.5)
        a_y = waveform("a_y", "ramp", [1.0, -0.5], t0=0.3)
        a_c = waveform("a_c", "sinusoid", np.ones(4), t0=0.2, frequency=0.5)
        cfg = SimConfig(noise_on=False, **FAST)
        trace = simulate(self.aug, bank, ScenarioTimeline(name="mixed", generators=[a_u, a_y, a_c]), cfg)

        for category in ("AA", "SA"):
            flt = bank[category].filter
            b_e = np.hstack([flt.t_p @ self.aug.plant.b_a_s, -flt.k_p @ self.aug.d_a, -flt.l_p @ bank.d_ac])
            phi, gamma = discretize(flt.closed, b_e, cfg.dt)
            values = np.hstack([a_u.evaluate(trace.t), a_y.evaluate(trace.t), a_c.evaluate(trace.t)])
            expected = np.zeros((trace.t.size, flt.n))
            for k in range(trace.t.size - 1):
                expected[k + 1] = phi @ expected[k] + gamma @ values[k]
            np.testing.assert_allclose(trace.channels[category].e_p, expected, atol=1e-9)

    def test_superposition(self):
        cfg = SimConfig(noise_on=False, **FAST)
        attack = simulate(self.aug, self.bank, probe_timeline(self.aug, self.bank, ["a_u", "a_y"]), cfg)
        faults = simulate(self.aug, self.bank, probe_timeline(self.aug, self.bank, ["f1", "f2"]), cfg)
        both = simulate(self.aug, self.bank, probe_timeline(self.aug, self.bank, ["a_u", "a_y", "f1", "f2"]), cfg)
        for category in self.bank.categories:
            np.testing.assert_allclose(
                both.channels[category].res,
                attack.channels[category].res + faults.channels[category].res,
                atol=1e-8,
            )
        np.testing.assert_allclose(both.x, attack.x + faults.x, atol=1e-8)

    def test_control_input_is_immaterial(self):
        cfg = SimConfig(noise_on=False, **FAST)
        u = waveform("u", "sinusoid", [1.0, -2.0], frequency=0.5)
        a_u = waveform("a_u", "step", [2.0, 1.0], t0=0.5)
        driven = simulate(self.aug, self.bank, ScenarioTimeline(name="u", generators=[u]), cfg)
        self.assertGreater(np.max(np.abs(driven.y_p)), 0.01)
        attacked = simulate(self.aug, self.bank, ScenarioTimeline(name="a_u", generators=[a_u]), cfg)
        both = simulate(self.aug, self.bank, ScenarioTimeline(name="u+a_u", generators=[u, a_u]), cfg)
        for category in self.bank.categories:
            np.testing.assert_allclose(driven.residual_norm(category), 0.0, atol=1e-9)
            np.testing.assert_allclose(both.channels[category].res, attacked.channels[category].res, atol=1e-9)
            np.testing.assert_allclose(both.channels[category].e_p, attacked.channels[category].e_p, atol=1e-9)

    def test_seeded_noise(self):
        cfg = SimConfig(seed=7, **FAST)
        first = simulate(self.aug, self.bank, None, cfg).to_frame()
        second = simulate(self.aug, self.bank, None, cfg).to_frame()
        other = simulate(self.aug, self.bank, None, SimConfig(seed=8, **FAST)).to_frame()
        np.testing.assert_array_equal(first.values, second.values)
        self.assertFalse(np.allclose(first["nres_AF"], other["nres_AF"]))

    def test_frame_columns(self):
        trace = simulate(self.aug, self.bank, None, SimConfig(noise_on=False, dt=0.1, t_end=1.0))
        frame = trace.to_frame()
        self.assertEqual(list(frame.columns[:3]), ["t", "res_AA_1", "res_AA_2"])
        self.assertIn("nres_SF", frame.columns)
        self.assertEqual(len(frame), 11)
        self.assertIn("x_1", trace.to_frame(include_states=True).columns)

    def test_initial_state_checks(self):
        with self.assertRaises(DimensionError):
            simulate(self.aug, self.bank, None, SimConfig(x0=[1.0, 2.0], **FAST))
        with self.assertRaises(ValueError):
            simulate(self.aug, self.bank, None, SimConfig(z0={"XX": [0.0] * 7}, **FAST))

    def test_timeline_width_checked(self):
        timeline = ScenarioTimeline(generators=[waveform("a_u", "step", [1.0, 1.0, 1.0])])
        with self.assertRaises(ValueError):
            simulate(self.aug, self.bank, timeline, SimConfig(**FAST))


class TestDecouplingProbe(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)
        cls.cfg = SimConfig(**FAST)

    def test_attack_residual_ignores_faults(self):
        self.assertLess(decoupling_probe(self.aug, self.bank, "AA", ["f1", "f2"], self.cfg), 1e-8)

    def test_attack_residual_sees_actuator_attack(self):
        self.assertGreater(decoupling_probe(self.aug, self.bank, "AA", ["a_u"], self.cfg), 1e-6)

    def test_fault_residuals(self):
        self.assertLess(decoupling_probe(self.aug, self.bank, "AF", ["f2"], self.cfg), 1e-8)
        self.assertGreater(decoupling_probe(self.aug, self.bank, "AF", ["f1"], self.cfg), 1e-3)

    def test_sensor_attack_residual(self):
        self.assertLess(decoupling_probe(self.aug, self.bank, "SA", ["f1", "f2"], self.cfg), 1e-8)
        self.assertLess(decoupling_probe(self.aug, self.bank, "SA", ["a_u"], self.cfg), 1e-8)
        self.assertGreater(decoupling_probe(self.aug, self.bank, "SA", ["a_y"], self.cfg), 1e-6)
        # the actuator-attack residual is blind to sensor attacks
        self.assertLess(decoupling_probe(self.aug, self.bank, "AA", ["a_y"], self.cfg), 1e-8)

    def test_sensor_fault_residual(self):
        self.assertLess(decoupling_probe(self.aug, self.bank, "SF", ["f1"], self.cfg), 1e-8)
        self.assertGreater(decoupling_probe(self.aug, self.bank, "SF", ["f2"], self.cfg), 1e-3)

    def test_fault_residuals_ignore_attacks(self):
        for category in ("AF", "SF"):
            self.assertLess(decoupling_probe(self.aug, self.bank, category, ["a_u", "a_y"], self.cfg), 1e-8)

    def test_link_attack_blocked_by_signature(self):
        for category in self.bank.categories:
            self.assertLess(decoupling_probe(self.aug, self.bank, category, ["a_c"], self.cfg), 1e-8)

    def test_link_attack_leaks_when_l_p_sees_it(self):
        leaky = DetectorBank(channels=self.bank.channels, d_ac=np.diag([0.0, 0.0, 1.0, 1.0]))
        self.assertGreater(np.linalg.norm(leaky["AA"].filter.l_p @ leaky.d_ac), 1.0)
        self.assertGreater(decoupling_probe(self.aug, leaky, "AA", ["a_c"], self.cfg), 1e-6)
        failed = {c.condition_id for c in verify_conditions(leaky, self.aug).failures}
        self.assertIn("P1.C5", failed)

    def test_unknown_category_and_signal(self):
        with self.assertRaises(ValueError):
            decoupling_probe(self.aug, self.bank, "XX", ["f1"], self.cfg)
        with self.assertRaises(ValueError):
            probe_timeline(self.aug, self.bank, ["u"])

    def test_probe_timeline_name(self):
        self.assertEqual(probe_timeline(self.aug, self.bank, ["f1", "f2"]).name, "probe-f1-f2")
        self.assertEqual(probe_timeline(self.aug, self.bank, []).name, "probe-none")


if __name__ == "__main__":
    unittest.main()
