"""
Threat Model Test Suite

Test Coverage:
--------------
1. Signal generators
   - Waveform shapes, onset, widths
   - Bias faults and link attacks
   - ScenarioTimeline filtering, validation and description

2. Attack constructions
   - Zero-dynamics attack on the benchmark plant's zero
   - Covert attack cancels its footprint at the C&C output
   - Replay window checks, sensor-channel coverage, live capture and replay
   - Undetectable controllable attack: infeasible against the compliant bank,
     invisible to the degraded AA residual

3. Scenarios
   - Named scenarios and config events

Usage:
------
    pytest tests/test_threat.py -v

Expected Results:
-----------------
    - All tests pass; simulations use a 10 ms step and last a few seconds

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import sys
import unittest
from dataclasses import replace
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.design import benchmark_bank
from src.model import PlantModel, benchmark_augmented, benchmark_aux, benchmark_plant, build_augmented
from src.numerics import (
    AttackInfeasibleError,
    CovertnessInfeasibleError,
    InvalidWindowError,
    UnsupportedAttackError,
)
from src.sim import SimConfig, simulate
from src.threat import (
    SCENARIOS,
    ScenarioTimeline,
    bias_fault,
    comm_link_attack,
    covert_amplitude,
    covert_attack,
    generators_from_event,
    live_replay_attack,
    named_scenario,
    replay_attack,
    timeline_from_events,
    undetectable_controllable_attack,
    waveform,
    zero_dynamics_attack,
)

BENCHMARK_ZERO = (np.sqrt(13.0) - 3.0) / 2.0


def _cosine(a, b):
    return abs(float(np.dot(a, b))) / (np.linalg.norm(a) * np.linalg.norm(b))


class TestWaveforms(unittest.TestCase):

    def test_zero_before_onset(self):
        gen = waveform("f1", "step", [40.0], t0=5.0)
        values = gen.evaluate([0.0, 4.999, 5.0, 6.0])
        np.testing.assert_allclose(values[:, 0], [0.0, 0.0, 40.0, 40.0])
        np.testing.assert_allclose(gen(6.0), [40.0])

    def test_shapes(self):
        ramp = waveform("a_u", "ramp", [1.0, 2.0], t0=1.0)
        np.testing.assert_allclose(ramp(3.0), [2.0, 4.0])
        growth = waveform("a_u", "exponential", [1.0, 0.0], t0=0.0, rate=1.0)
        np.testing.assert_allclose(growth(1.0), [np.e, 0.0])
        wave = waveform("a_y", "sinusoid", [2.0, 2.0], frequency=0.25)
        np.testing.assert_allclose(wave(1.0), [2.0, 2.0], atol=1e-12)

    def test_unknown_kind(self):
        with self.assertRaises(ValueError):
            waveform("a_u", "sawtooth", [1.0, 1.0])

    def test_unknown_signal(self):
        with self.assertRaises(ValueError):
            waveform("a_x", "step", [1.0])

    def test_describe_is_plain_data(self):
        data = waveform("f2", "step", [20.0], t0=10.0).describe()
        self.assertEqual(data["signal"], "f2")
        self.assertEqual(data["params"]["amplitude"], [20.0])


class TestFaultsAndLinks(unittest.TestCase):

    def test_bias_fault_broadcasts(self):
        fault = bias_fault("f1", 3.0, t0=1.0, dim=2)
        np.testing.assert_allclose(fault(2.0), [3.0, 3.0])
        np.testing.assert_allclose(fault(0.5), [0.0, 0.0])

    def test_bias_fault_only_on_faults(self):
        with self.assertRaises(ValueError):
            bias_fault("a_u", 1.0)
        with self.assertRaises(ValueError):
            bias_fault("f1", np.nan)

    def test_link_attack_width(self):
        d_ac = np.zeros((4, 2))
        link = comm_link_attack(d_ac, waveform("a_c", "sinusoid", [1.0, 1.0], frequency=0.5))
        self.assertEqual(link.signal, "a_c")
        self.assertEqual(link.dim, 2)
        with self.assertRaises(ValueError):
            comm_link_attack(d_ac, waveform("a_c", "step", [1.0, 1.0, 1.0]))


class TestScenarioTimeline(unittest.TestCase):

    def setUp(self):
        self.aug = benchmark_augmented()
        self.timeline = ScenarioTimeline(
            name="mixed",
            generators=[bias_fault("f1", 40.0, 5.0), waveform("a_u", "step", [2.0, 1.0])],
        )

    def test_active_signals_and_without(self):
        self.assertEqual(self.timeline.active_signals, ["a_u", "f1"])
        reduced = self.timeline.without(["a_u"])
        self.assertEqual(reduced.active_signals, ["f1"])
        self.assertEqual(reduced.name, "mixed-without-a_u")

    def test_validate_widths(self):
        self.timeline.validate(self.aug)
        bad = ScenarioTimeline(generators=[waveform("a_u", "step", [1.0, 1.0, 1.0])])
        with self.assertRaises(ValueError):
            bad.validate(self.aug)

    def test_describe(self):
        data = self.timeline.describe()
        self.assertEqual(data["name"], "mixed")
        self.assertEqual([e["signal"] for e in data["events"]], ["f1", "a_u"])


class TestZeroDynamicsAttack(unittest.TestCase):

    def test_benchmark_zero_and_directions(self):
        plant = benchmark_plant()
        gen = zero_dynamics_attack(plant, scale=1.0, t0=0.0)
        self.assertAlmostEqual(gen.zero, BENCHMARK_ZERO, places=6)
        self.assertEqual(gen.kind, "exponential")
        self.assertAlmostEqual(gen.params["rate"], gen.zero)
        self.assertGreater(_cosine(gen.state_direction, [0.0, 0.0, -0.6514, 1.0]), 0.999)
        self.assertGreater(_cosine(gen.input_direction, [-0.5757, 0.5]), 0.999)
        np.testing.assert_allclose(plant.s_a @ gen.amplitude, gen.input_direction, atol=1e-9)

    def test_growth_rate(self):
        gen = zero_dynamics_attack(benchmark_plant(), scale=2.0, t0=1.0)
        ratio = np.linalg.norm(gen(3.0)) / np.linalg.norm(gen(2.0))
        self.assertAlmostEqual(ratio, np.exp(BENCHMARK_ZERO), places=8)
        np.testing.assert_allclose(gen(0.5), 0.0)

    def test_minimum_phase_plant(self):
        one = np.array([[1.0]])
        plant = PlantModel(a_s=-one, b_s=one, c_s=one, n_s=one, l1=one, l2=one,
                           s_a=one, d_a=one, q_cov=0.1 * one, r_cov=0.1 * one)
        with self.assertRaises(UnsupportedAttackError):
            zero_dynamics_attack(plant)


class TestCovertAttack(unittest.TestCase):

    def setUp(self):
        self.aug = benchmark_augmented()
        self.a_u = waveform("a_u", "step", covert_amplitude(2), t0=1.0)

    def test_output_matches_attack_free(self):
        bank = benchmark_bank(self.aug)
        timeline = ScenarioTimeline(name="covert", generators=[self.a_u, covert_attack(self.aug, self.a_u)])
        cfg = SimConfig(dt=0.01, t_end=5.0, noise_on=False)
        trace = simulate(self.aug, bank, timeline, cfg)
        healthy = simulate(self.aug, bank, None, cfg)
        self.assertGreater(np.max(np.abs(trace.y_p)), 0.1)
        np.testing.assert_allclose(trace.y_star, healthy.y_star, atol=1e-8)

    def test_sample_needs_reset(self):
        attack = covert_attack(self.aug, self.a_u)
        self.assertEqual(attack.signal, "a_y")
        with self.assertRaises(RuntimeError):
            attack.sample(0.0, np.zeros(2))

    def test_rejects_wrong_source(self):
        with self.assertRaises(ValueError):
            covert_attack(self.aug, waveform("a_y", "step", [1.0, 1.0]))
        with self.assertRaises(ValueError):
            covert_attack(self.aug, waveform("a_u", "step", [1.0]))

    def test_rank_deficient_sensor_channels(self):
        weak = replace(benchmark_plant(), d_a=np.array([[0.2, 0.2], [0.2, 0.2]]))
        aug = build_augmented(weak, benchmark_aux())
        with self.assertRaises(CovertnessInfeasibleError):
            covert_attack(aug, self.a_u)

    def test_amplitudes(self):
        np.testing.assert_allclose(covert_amplitude(2), [2.0, 1.0])
        np.testing.assert_allclose(covert_amplitude(1), [2.0])


class TestReplayAttack(unittest.TestCase):

    def setUp(self):
        self.t = np.array([0.0, 1.0, 2.0])
        self.y = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
        self.d_a = 0.2 * np.eye(2)
        self.c = np.hstack([np.eye(2), np.ones((2, 1))])
        self.a_u = waveform("a_u", "step", [1.0, 1.0], t0=2.0)

    def test_replayed_values(self):
        replay, a_u = replay_attack(self.t, self.y, (2.0, 3.0), self.a_u, self.d_a, self.c)
        self.assertIs(a_u, self.a_u)
        self.assertAlmostEqual(replay.delay, 1.0)
        self.assertFalse(replay.live)
        replay.reset(0.01)
        np.testing.assert_allclose(replay.sample(2.5, np.zeros(2)), [7.5, 7.5])
        np.testing.assert_allclose(replay.sample(1.5, np.ones(2)), [0.0, 0.0])
        # y* = y_p + D_a a_y shows the recording
        y_p = np.array([0.3, -0.4])
        np.testing.assert_allclose(y_p + self.d_a @ replay.sample(2.5, y_p), [1.5, 1.5])

    def test_invalid_windows(self):
        with self.assertRaises(InvalidWindowError):
            replay_attack(self.t, self.y, (2.0, 2.0), self.a_u, self.d_a, self.c)
        with self.assertRaises(InvalidWindowError):
            replay_attack(self.t, self.y, (1.0, 3.0), self.a_u, self.d_a, self.c)

    def test_bad_recording(self):
        with self.assertRaises(ValueError):
            replay_attack([0.0, 1.0, 1.0], self.y, (2.0, 3.0), self.a_u, self.d_a, self.c)

    def test_rank_deficient_d_a(self):
        with self.assertRaises(CovertnessInfeasibleError):
            replay_attack(self.t, self.y, (2.0, 3.0), self.a_u, np.ones((2, 2)), self.c)

    def test_sensor_channels_must_cover_outputs(self):
        # one attacked sensor channel cannot rewrite both outputs
        with self.assertRaises(AttackInfeasibleError):
            replay_attack(self.t, self.y, (2.0, 3.0), self.a_u, np.array([[1.0], [0.0]]), self.c)
        narrow = replace(benchmark_plant(), d_a=np.array([[0.2], [0.0]]))
        aug = build_augmented(narrow, benchmark_aux())
        with self.assertRaises(AttackInfeasibleError):
            live_replay_attack(aug, (2.0, 3.0), waveform("a_u", "step", [1.0, 1.0], t0=2.0))

    def test_live_capture_then_replay(self):
        replay, _ = live_replay_attack(benchmark_augmented(), (2.0, 3.0), self.a_u)
        self.assertTrue(replay.live)
        replay.reset(0.5)
        for t in (0.0, 0.5, 1.0, 1.5):
            np.testing.assert_allclose(replay.sample(t, np.full(2, t)), [0.0, 0.0])
        # replays y_p captured at t - 1
        np.testing.assert_allclose(replay.sample(2.5, np.zeros(2)), [7.5, 7.5])
        np.testing.assert_allclose(replay.sample(3.5, np.zeros(2)), [0.0, 0.0])

        replay.reset(0.5)
        with self.assertRaises(RuntimeError):
            replay.sample(2.0, np.zeros(2))

    def test_live_window_needs_a_full_delay(self):
        with self.assertRaises(InvalidWindowError):
            live_replay_attack(benchmark_augmented(), (1.0, 3.0), self.a_u)
        with self.assertRaises(ValueError):
            live_replay_attack(benchmark_augmented(), (2.0, 3.0), waveform("a_y", "step", [1.0, 1.0]))


class TestUndetectableAttack(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)

    def test_compliant_bank_is_safe(self):
        channel = self.bank["AA"]
        with self.assertRaises(AttackInfeasibleError):
            undetectable_controllable_attack(channel.filter, channel.uio.l, self.aug.plant.b_a_s)

    def test_rejects_non_filter(self):
        with self.assertRaises(TypeError):
            undetectable_controllable_attack(np.eye(4), np.eye(2), self.aug.plant.b_a_s)

    def test_degraded_bank_hides_growing_attack(self):
        timeline, degraded = named_scenario("degraded-c9", self.aug, self.bank, t_end=10.0)
        self.assertEqual(degraded.metadata["degraded"], "condition9")
        attack = timeline.generators[0]
        self.assertEqual(attack.params["r_star_dim"], 2)

        trace = simulate(self.aug, degraded, timeline, SimConfig(dt=0.01, t_end=10.0, noise_on=False))
        self.assertFalse(trace.truncated)
        self.assertGreater(np.max(np.linalg.norm(trace.signals["a_u"], axis=1)), 5.0)
        self.assertLess(np.max(trace.residual_norm("AA")), 1e-6)


class TestScenarios(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)

    def test_every_named_scenario_builds(self):
        for name in SCENARIOS:
            timeline, _ = named_scenario(name, self.aug, self.bank)
            self.assertEqual(timeline.name, name)
            self.assertTrue(timeline.generators)

    def test_fault_scenario(self):
        timeline, bank = named_scenario("faults", self.aug, self.bank)
        self.assertIs(bank, self.bank)
        self.assertEqual(timeline.active_signals, ["f1", "f2"])
        np.testing.assert_allclose(timeline.for_signal("f1")[0](6.0), [40.0])

    def test_unknown_scenario(self):
        with self.assertRaises(ValueError):
            named_scenario("stealthy", self.aug, self.bank)

    def test_event_keys_and_kinds(self):
        with self.assertRaises(ValueError):
            generators_from_event({"kind": "step", "signal": "a_u", "when": 1.0}, self.aug)
        with self.assertRaises(ValueError):
            generators_from_event({"kind": "sawtooth", "signal": "a_u"}, self.aug)
        with self.assertRaises(ValueError):
            generators_from_event({"kind": "undetectable"}, self.aug)

    def test_covert_event_gives_pair(self):
        generators = generators_from_event({"kind": "covert", "t0": 2.0}, self.aug)
        self.assertEqual([g.signal for g in generators], ["a_u", "a_y"])

    def test_replay_event_gives_pair(self):
        generators = generators_from_event({"kind": "replay", "params": {"window": [4.0, 6.0]}}, self.aug)
        self.assertEqual([g.signal for g in generators], ["a_u", "a_y"])
        self.assertEqual(generators[0].t0, 4.0)
        self.assertEqual(generators[1].params["window"], [4.0, 6.0])
        with self.assertRaises(ValueError):
            generators_from_event({"kind": "replay"}, self.aug)
        with self.assertRaisesRegex(ValueError, r"scenario\.events\[0\]"):
            timeline_from_events("late", [{"kind": "replay", "params": {"window": [2.0, 6.0]}}], self.aug)

    def test_link_event_uses_bank_width(self):
        generators = generators_from_event(
            {"kind": "sinusoid", "signal": "a_c", "params": {"amplitude": 1.0, "frequency": 0.5}},
            self.aug, self.bank,
        )
        self.assertEqual(generators[0].dim, self.bank.d_ac.shape[1])

    def test_timeline_error_names_event(self):
        events = [{"kind": "bias", "signal": "f1", "params": {"magnitude": 40.0}},
                  {"kind": "nope", "signal": "a_u"}]
        with self.assertRaisesRegex(ValueError, r"scenario\.events\[1\]"):
            timeline_from_events("custom", events, self.aug)


if __name__ == "__main__":
    unittest.main()
