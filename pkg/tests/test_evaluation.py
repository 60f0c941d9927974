"""
Evaluation Test Suite

Test Coverage:
--------------
1. Thresholds
   - Validation, scaling, JSON round trip
   - Monte Carlo calibration flags the structurally silent residuals

2. Detection
   - Debounced first crossing
   - Verdict and crossing order on the fault scenario
   - Covertness gap at the C&C and plant outputs
   - Named-scenario verdicts and crossing order
   - Replay of a quiet recording matches the covert pair

3. TPR campaigns
   - Table grid and campaign timelines
   - Argument checks
   - Small seeded campaign

Usage:
------
    pytest tests/test_evaluation.py -v
    pytest tests/test_evaluation.py -v -m "not slow"  # Skip Monte Carlo tests

Expected Results:
-----------------
    - All tests pass; Monte Carlo tests use a handful of short runs

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import sys
import tempfile
import unittest
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.design import benchmark_bank
from src.evaluation import (
    DEFAULT_FLOOR,
    ThresholdSet,
    calibrate_threshold,
    campaign_timeline,
    covertness_gap,
    detect,
    false_positive_counts,
    first_crossing_index,
    table_grid,
    tpr_campaign,
)
from src.model import benchmark_augmented
from src.sim import SimConfig, simulate
from src.threat import named_scenario, timeline_from_events

CATEGORIES = ["AA", "SA", "AF", "SF"]


class TestThresholdSet(unittest.TestCase):

    def setUp(self):
        self.thresholds = ThresholdSet(
            values={"AA": 1e-6, "SA": 1e-6, "AF": 0.4, "SF": 0.3},
            peaks={"AA": 0.0, "SA": 0.0, "AF": 0.36, "SF": 0.27},
            degenerate={"AA": True, "SA": True, "AF": False, "SF": False},
            n_runs=10,
        )

    def test_rejects_non_positive(self):
        with self.assertRaises(ValueError):
            ThresholdSet(values={"AF": 0.0})
        with self.assertRaises(ValueError):
            ThresholdSet(values={"AF": float("nan")})

    def test_scaled(self):
        doubled = self.thresholds.scaled(2.0)
        self.assertAlmostEqual(doubled["AF"], 0.8)
        self.assertAlmostEqual(self.thresholds["AF"], 0.4)

    def test_json_round_trip(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = self.thresholds.save(Path(tmp) / "nested" / "thresholds.json")
            loaded = ThresholdSet.load(path)
        self.assertEqual(loaded.to_dict(), self.thresholds.to_dict())
        self.assertIn("SF", loaded)
        self.assertNotIn("XX", loaded)

    def test_frame(self):
        frame = self.thresholds.to_frame()
        self.assertEqual(list(frame["category"]), CATEGORIES)
        self.assertEqual(int(frame["degenerate"].sum()), 2)


class TestFirstCrossing(unittest.TestCase):

    def test_debounce(self):
        norms = np.array([0.0, 2.0, 0.0, 2.0, 2.0])
        self.assertEqual(first_crossing_index(norms, 1.0), 1)
        self.assertEqual(first_crossing_index(norms, 1.0, debounce=2), 3)
        self.assertIsNone(first_crossing_index(norms, 1.0, debounce=3))

    def test_strictly_above(self):
        self.assertIsNone(first_crossing_index(np.ones(4), 1.0))

    def test_start(self):
        self.assertEqual(first_crossing_index(np.array([2.0, 0.0, 2.0]), 1.0, start=1), 2)

    def test_short_series(self):
        self.assertIsNone(first_crossing_index(np.array([2.0]), 1.0, debounce=2))


class TestDetect(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)
        timeline, _ = named_scenario("faults", cls.aug, cls.bank)
        cls.trace = simulate(cls.aug, cls.bank, timeline, SimConfig(dt=0.01, t_end=12.0, noise_on=False))
        cls.thresholds = ThresholdSet(values={c: 1e-3 for c in CATEGORIES})

    def test_fault_verdict(self):
        report = detect(self.trace, self.thresholds)
        self.assertEqual(report.verdict, frozenset({"AF", "SF"}))
        self.assertEqual(report.crossing_order(), ["AF", "SF"])
        self.assertGreaterEqual(report["AF"].first_crossing, 5.0)
        self.assertGreaterEqual(report["SF"].first_crossing, 10.0)
        self.assertIsNone(report["AA"].first_crossing)

    def test_report_dict(self):
        data = detect(self.trace, self.thresholds, debounce=3).to_dict()
        self.assertEqual(data["verdict"], ["AF", "SF"])
        self.assertEqual(data["debounce"], 3)
        self.assertFalse(data["truncated"])
        self.assertEqual(set(data["channels"]), set(CATEGORIES))

    def test_t_from_skips_early_alarms(self):
        report = detect(self.trace, self.thresholds, t_from=20.0)
        self.assertEqual(report.verdict, frozenset())
        self.assertGreater(report["AF"].peak, 1e-3)

    def test_argument_checks(self):
        with self.assertRaises(ValueError):
            detect(self.trace, self.thresholds, debounce=0)
        with self.assertRaises(ValueError):
            detect(self.trace, ThresholdSet(values={"AA": 1.0}))


class TestScenarioVerdicts(unittest.TestCase):
    """Noise-free named scenarios against floor-level attack thresholds"""

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)
        cls.thresholds = ThresholdSet(values={"AA": DEFAULT_FLOOR, "SA": DEFAULT_FLOOR, "AF": 1e-3, "SF": 1e-3})

    def _report(self, name, t_end):
        timeline, bank = named_scenario(name, self.aug, self.bank, t_end=t_end)
        trace = simulate(self.aug, bank, timeline, SimConfig(dt=0.01, t_end=t_end, noise_on=False))
        return detect(trace, self.thresholds)

    def test_zero_dynamics_attack_is_seen_only_by_aa(self):
        report = self._report("zero-dynamics", 10.0)
        self.assertEqual(report.verdict, frozenset({"AA"}))

    def test_covert_pair_is_seen_by_both_attack_residuals(self):
        report = self._report("covert", 15.0)
        self.assertEqual(report.verdict, frozenset({"AA", "SA"}))
        self.assertGreaterEqual(report["AA"].first_crossing, 10.0)
        self.assertGreaterEqual(report["SA"].first_crossing, 10.0)

    def test_simultaneous_anomalies_in_onset_order(self):
        report = self._report("simultaneous", 14.0)
        self.assertEqual(report.verdict, frozenset(CATEGORIES))
        order = report.crossing_order()
        self.assertEqual(sorted(order[:2]), ["AA", "SA"])
        self.assertEqual(order[2:], ["AF", "SF"])
        self.assertLess(report["SA"].first_crossing, 5.0)
        self.assertGreaterEqual(report["AF"].first_crossing, 5.0)
        self.assertGreaterEqual(report["SF"].first_crossing, 10.0)

    def test_degraded_bank_misses_the_attack(self):
        report = self._report("degraded-c9", 10.0)
        self.assertNotIn("AA", report.verdict)
        self.assertLess(report["AA"].peak, DEFAULT_FLOOR)

    def test_replay_matches_covert_pair_on_quiet_plant(self):
        cfg = SimConfig(dt=0.01, t_end=14.0, noise_on=False)
        replay = timeline_from_events("replay", [{"kind": "replay", "params": {"window": [8.0, 16.0]}}],
                                      self.aug, self.bank, t_end=14.0)
        covert = timeline_from_events("covert", [{"kind": "covert", "t0": 8.0}], self.aug, self.bank, t_end=14.0)
        replayed = simulate(self.aug, self.bank, replay, cfg)
        hidden = simulate(self.aug, self.bank, covert, cfg)

        # the recording of a quiet plant is zero, so the C&C side sees zero
        np.testing.assert_allclose(replayed.y_star, 0.0, atol=1e-9)
        self.assertGreater(np.max(np.abs(replayed.y_p)), 0.1)
        for category in CATEGORIES:
            np.testing.assert_allclose(replayed.residual_norm(category), hidden.residual_norm(category), atol=1e-8)

        report = detect(replayed, self.thresholds)
        self.assertEqual(report.verdict, frozenset({"AA", "SA"}))
        self.assertGreaterEqual(report["AA"].first_crossing, 8.0)


class TestCovertnessGap(unittest.TestCase):

    def test_covert_pair_is_hidden_at_the_cc_side(self):
        aug = benchmark_augmented()
        bank = benchmark_bank(aug)
        timeline, _ = named_scenario("covert", aug, bank)
        cfg = SimConfig(dt=0.01, t_end=13.0, noise_on=False)
        self.assertLess(covertness_gap(aug, bank, timeline, cfg), 1e-8)
        self.assertGreater(covertness_gap(aug, bank, timeline, cfg, output="y_p"), 0.1)
        with self.assertRaises(ValueError):
            covertness_gap(aug, bank, timeline, cfg, output="x")


class TestCampaignGrid(unittest.TestCase):

    def test_table_grid(self):
        rows = table_grid("SF")
        self.assertEqual(len(rows), 8)
        self.assertEqual(rows[:2], [("SF",), ("SF", "AA")])
        self.assertEqual(rows[-1], ("SF", "AA", "SA", "AF"))
        self.assertTrue(all(r[0] == "SF" for r in rows))
        with self.assertRaises(ValueError):
            table_grid("XX")

    def test_campaign_timeline(self):
        aug = benchmark_augmented()
        timeline = campaign_timeline(aug, ("AA", "SA", "SF"), onset=2.0)
        self.assertEqual(timeline.active_signals, ["a_u", "a_y", "f2"])
        self.assertEqual(timeline.name, "AA & SA & SF")
        np.testing.assert_allclose(timeline.for_signal("a_u")[0](2.0), [2.0, 1.0])

    def test_campaign_checks(self):
        aug = benchmark_augmented()
        bank = benchmark_bank(aug)
        thresholds = ThresholdSet(values={c: 1.0 for c in CATEGORIES})
        cfg = SimConfig(dt=0.01, t_end=6.0)
        with self.assertRaises(ValueError):
            tpr_campaign(aug, bank, thresholds, grid={"AF": [("SF",)]}, n_runs=1, cfg=cfg)
        with self.assertRaises(ValueError):
            tpr_campaign(aug, bank, thresholds, n_runs=0, cfg=cfg)
        with self.assertRaises(ValueError):
            tpr_campaign(aug, bank, thresholds, grid={"AF": [("AF",)]}, n_runs=1, cfg=cfg, onset=6.0)


@pytest.mark.slow
class TestMonteCarlo(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.aug = benchmark_augmented()
        cls.bank = benchmark_bank(cls.aug)
        cls.cfg = SimConfig(dt=0.01, t_end=8.0)
        cls.thresholds = calibrate_threshold(cls.aug, cls.bank, cls.cfg, n_runs=3)

    def test_calibration_flags_silent_residuals(self):
        self.assertTrue(self.thresholds.degenerate["AA"])
        self.assertTrue(self.thresholds.degenerate["SA"])
        self.assertEqual(self.thresholds["AA"], DEFAULT_FLOOR)
        self.assertFalse(self.thresholds.degenerate["AF"])
        self.assertGreater(self.thresholds["AF"], self.thresholds.peaks["AF"])
        self.assertEqual(self.thresholds.n_runs, 3)

    def test_calibration_checks(self):
        with self.assertRaises(ValueError):
            calibrate_threshold(self.aug, self.bank, self.cfg, n_runs=0)
        with self.assertRaises(ValueError):
            calibrate_threshold(self.aug, self.bank, self.cfg, n_runs=1, margin=0.5)

    def test_small_campaign(self):
        grid = {"AA": [("AA",)], "AF": [("AF",), ("AF", "SF")]}
        tables = tpr_campaign(self.aug, self.bank, self.thresholds, grid=grid, n_runs=2, cfg=self.cfg)
        self.assertEqual([t.table for t in tables], ["AA", "AF"])
        self.assertEqual(tables[0]["AA"].tpr, 1.0)
        self.assertEqual(tables[1][("AF", "SF")].tp, 2)
        self.assertEqual(list(tables[1].to_frame().columns), ["combo", "tp", "fn", "tpr"])
        self.assertEqual(tables[1].metadata["n_runs"], 2)

    def test_silent_residual_never_false_alarms(self):
        counts = false_positive_counts(self.aug, self.bank, self.thresholds, n_runs=2, cfg=self.cfg)
        self.assertEqual(counts["AA"], 0)
        self.assertEqual(counts["SA"], 0)


if __name__ == "__main__":
    unittest.main()
