"""
CAFDI Command Line

Subcommands:
- design:    design the detector bank, write bank.json and conditions.json
- run:       simulate a scenario, write the trace CSV and the detection report
- calibrate: Monte Carlo thresholds, write thresholds.json
- tpr:       TPR tables, one CSV and one JSON per target residual
- zeros:     invariant zeros of the configured plant

Exit codes: 0 success, 2 usage or config error, 3 design infeasible or a
failed condition report, 4 simulation truncated.

Usage:
    python scripts/cafdi.py design --preset paper-siv --out results/
    python scripts/cafdi.py run --preset paper-siv --scenario covert --out results/ --plot
    python scripts/cafdi.py calibrate --runs 100 --seed 7 --out results/
    python scripts/cafdi.py design --design-seed 3 --out results/
    python scripts/cafdi.py tpr --thresholds results/thresholds.json --runs 100 --out results/

Author: CAFDI Toolkit Team
Date: 2026-10-17
"""

import argparse
import json
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..design import verify_conditions
from ..evaluation import ThresholdSet, calibrate_threshold, detect, tpr_campaign
from ..model import BENCHMARK_PRESET
from ..numerics import DesignInfeasibleError, invariant_zeros, zero_direction
from ..provenance import AuditLogger, ChecksumManager, MetadataGenerator, hash_document
from ..sim import simulate
from ..threat import SCENARIOS, named_scenario, timeline_from_events
from .config import ConfigDocument, ConfigError, load_config, preset_document

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_TRUNCATED = 4

DEFAULT_RUN_CALIBRATION = 20


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {number}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cafdi",
        description="Cyber attack and fault detection with a bank of filters and UIO detectors",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--preset", default=None, help=f"Built-in model (default {BENCHMARK_PRESET})")
    source.add_argument("--config", type=Path, default=None, help="JSON or YAML config document")
    common.add_argument("--seed", type=int, default=None, help="Overrides sim.seed (noise only)")
    common.add_argument("--design-seed", type=int, default=None, help="Overrides design.seed (filter and gain search)")
    common.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
    common.add_argument("--dt", type=float, default=None, help="Overrides sim.dt [s]")
    common.add_argument("--t-end", type=float, default=None, help="Overrides sim.t_end [s]")
    common.add_argument("--no-noise", action="store_true", help="Switch process and sensor noise off")
    common.add_argument("--audit-dir", type=Path, default=None, help="Write audit trail, checksums and metadata here")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="Design the detector bank and check every condition")

    run = sub.add_parser("run", parents=[common], help="Simulate a scenario and detect")
    run.add_argument("--scenario", choices=SCENARIOS, default=None, help="Named scenario (default: config scenario)")
    run.add_argument("--thresholds", type=Path, default=None, help="thresholds.json (calibrated when absent)")
    run.add_argument("--runs", type=_positive_int, default=DEFAULT_RUN_CALIBRATION,
                     help="Calibration runs when no thresholds file is given")
    run.add_argument("--debounce", type=_positive_int, default=None, help="Overrides eval.debounce")
    run.add_argument("--states", action="store_true", help="Include full states in the trace CSV")
    run.add_argument("--plot", action="store_true", help="Write a residual-norm PNG")

    calibrate = sub.add_parser("calibrate", parents=[common], help="Monte Carlo threshold calibration")
    calibrate.add_argument("--runs", type=_positive_int, default=None, help="Overrides eval.runs")
    calibrate.add_argument("--margin", type=float, default=None, help="Overrides eval.margin")

    tpr = sub.add_parser("tpr", parents=[common], help="TPR tables over the benchmark row grid")
    tpr.add_argument("--thresholds", type=Path, default=None, help="thresholds.json (calibrated when absent)")
    tpr.add_argument("--runs", type=_positive_int, default=None, help="Overrides eval.runs")
    tpr.add_argument("--debounce", type=_positive_int, default=None, help="Overrides eval.debounce")

    sub.add_parser("zeros", parents=[common], help="Invariant zeros and directions of the plant")
    return parser


class CommandContext:
    """Config, settings and artifact bookkeeping of one invocation"""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.doc: ConfigDocument = load_config(args.config) if args.config else preset_document(args.preset or BENCHMARK_PRESET)
        if args.design_seed is not None:
            self.doc = replace(self.doc, design=replace(self.doc.design, seed=args.design_seed))
        self.aug = self.doc.augmented()

        overrides: Dict[str, Any] = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.dt is not None:
            overrides["dt"] = args.dt
        if args.t_end is not None:
            overrides["t_end"] = args.t_end
        if args.no_noise:
            overrides["noise_on"] = False
        try:
            self.cfg = replace(self.doc.sim, **overrides)
        except ValueError as e:
            raise ConfigError(str(e), "sim") from e

        self.out: Path = args.out
        self.out.mkdir(parents=True, exist_ok=True)
        self.config_hash = hash_document(self.doc.to_dict())
        self.artifacts: List[str] = []
        self.started = time.time()

        self.audit: Optional[AuditLogger] = None
        self.checksums: Optional[ChecksumManager] = None
        if args.audit_dir is not None:
            self.audit = AuditLogger(log_dir=args.audit_dir)
            self.checksums = ChecksumManager(Path(args.audit_dir) / "artifact_checksums.json")
            self.audit.log_command(args.command, _jsonable_args(args), self.config_hash)

    def register(self, path: Path, artifact_type: str, description: str):
        self.artifacts.append(str(path))
        print(f"  wrote {path}")
        if self.audit is None:
            return
        checksum = self.checksums.register_file(path)
        self.audit.log_file_operation("created", path, checksum)
        metadata = MetadataGenerator.generate_artifact_metadata(
            path, artifact_type, description,
            parameters={"command": self.args.command, "sim": self.cfg.to_dict()},
            config_hash=self.config_hash, checksum=checksum,
        )
        MetadataGenerator.save_metadata(metadata, Path(self.args.audit_dir) / f"{path.name}.metadata.json")

    def write_json(self, name: str, data: Dict[str, Any], artifact_type: str, description: str) -> Path:
        path = self.out / name
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2)
        self.register(path, artifact_type, description)
        return path

    def finish(self, exit_code: int) -> int:
        if self.audit is not None:
            self.audit.log(f"Command '{self.args.command}' finished", details={"exit_code": exit_code})
            run_metadata = MetadataGenerator.generate_run_metadata(
                self.audit.run_id, self.args.command, self.config_hash, self.cfg.seed,
                self.artifacts, time.time() - self.started, self.audit.user,
            )
            MetadataGenerator.save_metadata(run_metadata, Path(self.args.audit_dir) / f"{self.audit.run_id}_run_metadata.json")
            self.audit.save()
            self.audit.close()
        return exit_code

    def thresholds(self, bank, runs: int) -> ThresholdSet:
        if getattr(self.args, "thresholds", None) is not None:
            return ThresholdSet.load(self.args.thresholds)
        print(f"  calibrating thresholds over {runs} runs")
        return calibrate_threshold(
            self.aug, bank, replace(self.cfg, noise_on=True), runs,
            self.doc.eval.margin, self.doc.eval.floor, progress=True,
        )


def _jsonable_args(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: str(v) if isinstance(v, Path) else v for k, v in vars(args).items()}


def cmd_design(ctx: CommandContext) -> int:
    try:
        bank = ctx.doc.build_bank(ctx.aug)
    except DesignInfeasibleError as e:
        print(f"ERROR: design infeasible [{e.condition_id}]: {e}")
        ctx.write_json("conditions.json", {"passed": False, "failing_condition": e.condition_id, "message": str(e)},
                       "condition_report", "Failed design")
        return EXIT_INFEASIBLE

    report = verify_conditions(bank, ctx.aug)
    ctx.write_json("bank.json", bank.to_dict(), "bank", "Frozen detector bank")
    ctx.write_json("conditions.json", report.to_dict(), "condition_report", "Design condition checks")

    if not report.passed:
        for check in report.failures:
            print(f"  FAILED {check.condition_id} ({check.category}): {check.description}, residual {check.residual:.3g}")
        return EXIT_INFEASIBLE
    print(f"  all {len(report.checks)} conditions pass")
    return EXIT_OK


def cmd_run(ctx: CommandContext) -> int:
    bank = ctx.doc.build_bank(ctx.aug)
    if ctx.args.scenario is not None:
        timeline, bank = named_scenario(ctx.args.scenario, ctx.aug, bank, ctx.cfg.t_end)
    elif ctx.doc.scenario is not None:
        scenario = ctx.doc.scenario
        timeline = timeline_from_events(scenario.get("name", "config"), scenario.get("events", []),
                                        ctx.aug, bank, scenario.get("t_end"))
    else:
        print(f"ERROR: no scenario; pass --scenario with one of: {', '.join(SCENARIOS)}")
        return EXIT_USAGE

    thresholds = ctx.thresholds(bank, ctx.args.runs)
    trace = simulate(ctx.aug, bank, timeline, ctx.cfg)
    debounce = ctx.args.debounce or ctx.doc.eval.debounce
    report = detect(trace, thresholds, debounce)

    name = timeline.name
    ctx.register(trace.to_csv(ctx.out / f"trace_{name}.csv", ctx.args.states), "trace", f"Residual trace of {name}")
    result = report.to_dict()
    result["scenario"] = timeline.describe()
    ctx.write_json(f"detection_{name}.json", result, "detection_report", f"Detection report of {name}")
    if ctx.args.plot:
        from .plots import plot_residuals

        ctx.register(plot_residuals(trace, ctx.out / f"residuals_{name}.png", thresholds, report),
                     "figure", f"Residual norms of {name}")

    print(f"  verdict: {sorted(report.verdict) or 'none'}")
    if trace.truncated:
        print(f"  WARNING: trace truncated at t = {trace.t[-1]:.4g} s")
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_calibrate(ctx: CommandContext) -> int:
    bank = ctx.doc.build_bank(ctx.aug)
    runs = ctx.args.runs or ctx.doc.eval.runs
    margin = ctx.args.margin if ctx.args.margin is not None else ctx.doc.eval.margin
    if margin < 1:
        print(f"ERROR: margin must be >= 1, got {margin}")
        return EXIT_USAGE
    thresholds = calibrate_threshold(ctx.aug, bank, ctx.cfg, runs, margin, ctx.doc.eval.floor, progress=True)
    ctx.write_json("thresholds.json", thresholds.to_dict(), "thresholds", f"Thresholds over {runs} runs")
    for category, eta in thresholds.values.items():
        flag = " (floor)" if thresholds.degenerate[category] else ""
        print(f"  eta_{category} = {eta:.6g}{flag}")
    return EXIT_OK


def cmd_tpr(ctx: CommandContext) -> int:
    bank = ctx.doc.build_bank(ctx.aug)
    runs = ctx.args.runs or ctx.doc.eval.runs
    thresholds = ctx.thresholds(bank, runs)
    tables = tpr_campaign(
        ctx.aug, bank, thresholds, n_runs=runs, base_seed=ctx.cfg.seed, cfg=ctx.cfg,
        debounce=ctx.args.debounce or ctx.doc.eval.debounce, onset=ctx.doc.eval.onset, progress=True,
    )
    for table in tables:
        ctx.register(table.to_csv(ctx.out / f"tpr_{table.table}.csv"), "tpr_table", f"TPR table {table.table}")
        ctx.register(table.to_json(ctx.out / f"tpr_{table.table}.json"), "tpr_table", f"TPR table {table.table}")
        print(f"  {table.table}: " + ", ".join(f"{r.to_dict()['combo']}={r.tpr:.2f}" for r in table.rows))
    return EXIT_OK


def cmd_zeros(ctx: CommandContext) -> int:
    plant = ctx.doc.plant
    zero_set = invariant_zeros(plant.a_s, plant.b_s, plant.c_s)
    directions = []
    for z in zero_set.real_zeros():
        x0, u0 = zero_direction(plant.a_s, plant.b_s, plant.c_s, z=z)
        directions.append({"zero": float(z), "x0": x0.tolist(), "u0": u0.tolist()})
    data = zero_set.to_dict()
    data["real_zero_directions"] = directions
    data["non_minimum_phase"] = [[float(z.real), float(z.imag)] for z in zero_set.unstable()]
    ctx.write_json("zeros.json", data, "zeros", "Invariant zeros of the plant")
    for z in zero_set.zeros:
        print(f"  z = {z.real:.6g}{z.imag:+.6g}j{'  (non-minimum phase)' if z.real > 0 else ''}")
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "run": cmd_run,
    "calibrate": cmd_calibrate,
    "tpr": cmd_tpr,
    "zeros": cmd_zeros,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one subcommand and return its exit code

    argparse errors exit with code 2 through SystemExit.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s | %(levelname)-8s | %(name)s | %(message)s',
    )
    np.set_printoptions(precision=6, suppress=True)

    print(f"cafdi {args.command}")
    try:
        ctx = CommandContext(args)
    except (ValueError, OSError) as e:
        print(f"ERROR: {e}")
        return EXIT_USAGE

    try:
        code = COMMANDS[args.command](ctx)
    except DesignInfeasibleError as e:
        print(f"ERROR: design infeasible [{e.condition_id}]: {e}")
        code = EXIT_INFEASIBLE
    except (ValueError, OSError) as e:
        print(f"ERROR: {e}")
        code = EXIT_USAGE
    return ctx.finish(code)


def console_main():
    sys.exit(main())
