#!/usr/bin/env python3
"""Command line interface for the OT / bit commitment simulator and verifiers.

Commands:

    ot run      --a0 A0 --a1 A1 --i I [--seed S]
    attack      --role alice|bob --epsilon E [--seed S] [--trials N]
    verify      {lemma1,lemma2,sealing,lambda,akn} [--family-size N] [--seed S]
                [--epsilon-grid E1,E2,...] | --config FILE
    qbc run     --b B [--seed S] [--trials N]
                [--alice-attack E | --bob-flip-open | --bob-attack E]

Every command writes a report (``--format csv|json``) to ``--output`` or to
``$CHEATSENSE_OUTPUT_DIR``.  Exit codes: 0 success, 1 verification
violations, 2 usage errors, 3 I/O errors, 4 internal errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from cheatsense import __version__
from cheatsense.adversaries import DEFAULT_EPSILON_GRID, alice_attack, bob_attack, bob_attack_constants
from cheatsense.analysis import (
    MONTE_CARLO_TRIALS,
    Frequency,
    alice_attack_ceiling,
    alice_attack_floor,
    cross_check_frequencies,
    cross_check_ot,
    exact_ot_stats,
    lift_bob_spec,
)
from cheatsense.base import SweepReport
from cheatsense.branching import spawn_generators
from cheatsense.config_loader import load_config, validate_verifications
from cheatsense.exceptions import (
    CheatsenseError,
    InvalidArgumentError,
    InvalidConfigError,
    ProtocolViolationError,
    UnknownVerifierError,
)
from cheatsense.ot import OtInputs, honest_alice, honest_alice_factory, honest_bob, honest_bob_factory, run_ot
from cheatsense.pipeline import PipelineConfig, VerificationPipeline
from cheatsense.qbc import ERR, FlipOpening, HonestDeposit, HonestOpening, LiftedAliceAttack, QbcBob, qbc_branches, run_qbc
from cheatsense.registry import VerifierRegistry
from cheatsense.serialization import serialise_result, transcript_to_dict, write_json

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "CHEATSENSE_OUTPUT_DIR"
EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERNAL = 4
VERIFY_TARGETS = ("lemma1", "lemma2", "sealing", "lambda", "akn")
A1_ADVANTAGE_NOTE = (
    "a1_advantage is sqrt(2)/8 sqrt(eps), about 0.177 sqrt(eps), which is below 0.4 sqrt(eps); "
    "the 0.4 sqrt(eps) figure is met by ancilla_advantage = 1/2 sqrt(eps)"
)


def configure_logging(verbose: bool) -> None:
    """Configure global logging settings.

    Args:
        verbose: If True, set log level to DEBUG; otherwise INFO.
    """
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format="[%(levelname)s] %(message)s")


@dataclass
class RunConfig:
    """Validated settings of one CLI invocation; embedded in every report."""

    command: str
    seed: int = 0
    epsilon_grid: List[float] = field(default_factory=lambda: list(DEFAULT_EPSILON_GRID))
    trials: int = 1
    family_size: int = 1
    output_path: str = ""
    output_format: str = "json"

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidConfigError(f"seed must lie in [0, 2^64), got {self.seed}")
        for eps in self.epsilon_grid:
            if not (isinstance(eps, (int, float)) and math.isfinite(eps) and 0 < eps < 1):
                raise InvalidConfigError(f"epsilon values must lie in (0, 1), got {eps!r}")
        if self.trials < 1:
            raise InvalidConfigError(f"trials must be at least 1, got {self.trials}")
        if self.family_size < 1:
            raise InvalidConfigError(f"family size must be at least 1, got {self.family_size}")
        if self.output_format not in ("csv", "json"):
            raise InvalidConfigError(f"output format must be csv or json, got '{self.output_format}'")

    def provenance(self) -> Dict[str, Any]:
        return {"run": dataclasses.asdict(self), "version": __version__}


def _epsilon_list(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: '{text}'") from None


def _bit(text: str) -> int:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError(f"expected 0 or 1, got '{text}'")
    return int(text)


def _output_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="Report path (default: $CHEATSENSE_OUTPUT_DIR/<command>.<format>)")
    common.add_argument("--format", choices=("csv", "json"), default="json", help="Report format")
    common.add_argument("--seed", type=int, default=0, help="Master seed (64-bit unsigned)")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _output_options()
    parser = argparse.ArgumentParser(description="Simulate weak quantum OT and cheat-sensitive bit commitment.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    ot = commands.add_parser("ot", help="Oblivious transfer")
    ot_commands = ot.add_subparsers(dest="action", required=True)
    ot_run = ot_commands.add_parser("run", parents=[common], help="Run one honest OT")
    ot_run.add_argument("--a0", type=_bit, required=True)
    ot_run.add_argument("--a1", type=_bit, required=True)
    ot_run.add_argument("--i", type=_bit, required=True)

    attack = commands.add_parser("attack", parents=[common], help="Evaluate an explicit attack")
    attack.add_argument("--role", choices=("alice", "bob"), required=True)
    attack.add_argument("--epsilon", type=float, required=True)
    attack.add_argument("--trials", type=int, default=MONTE_CARLO_TRIALS)

    verify = commands.add_parser("verify", parents=[common], help="Run a verifier")
    verify.add_argument("target", nargs="?", choices=VERIFY_TARGETS)
    verify.add_argument("--config", "-c", help="Verification config file (JSON or YAML)")
    verify.add_argument("--family-size", type=int)
    verify.add_argument("--epsilon-grid", type=_epsilon_list)

    qbc = commands.add_parser("qbc", help="Bit commitment")
    qbc_commands = qbc.add_subparsers(dest="action", required=True)
    qbc_run = qbc_commands.add_parser("run", parents=[common], help="Commit to b and open it")
    qbc_run.add_argument("--b", type=_bit, required=True)
    qbc_run.add_argument("--trials", type=int, default=1)
    adversary = qbc_run.add_mutually_exclusive_group()
    adversary.add_argument("--alice-attack", type=float, metavar="EPSILON")
    adversary.add_argument("--bob-flip-open", action="store_true")
    adversary.add_argument("--bob-attack", type=float, metavar="EPSILON")
    return parser


def _command_name(args: argparse.Namespace) -> str:
    if args.command == "verify":
        return f"verify-{args.target or 'config'}"
    if args.command == "attack":
        return f"attack-{args.role}"
    return f"{args.command}-{args.action}"


def _run_config(args: argparse.Namespace, name: str) -> RunConfig:
    grid = list(DEFAULT_EPSILON_GRID)
    if getattr(args, "epsilon_grid", None):
        grid = args.epsilon_grid
    for flag in ("epsilon", "alice_attack", "bob_attack"):
        if getattr(args, flag, None) is not None:
            grid = [getattr(args, flag)]
    output = args.output
    if not output:
        output = os.path.join(os.environ.get(OUTPUT_DIR_ENV, "."), f"{name}.{args.format}")
    return RunConfig(
        command=name,
        seed=args.seed,
        epsilon_grid=grid,
        trials=getattr(args, "trials", 1),
        family_size=getattr(args, "family_size", None) or 1,
        output_path=output,
        output_format=args.format,
    )


def cmd_ot_run(args: argparse.Namespace, config: RunConfig) -> SweepReport:
    inputs = OtInputs(args.a0, args.a1, args.i)
    transcript = run_ot(honest_alice(inputs.a0, inputs.a1), honest_bob(inputs.i), rng=config.seed)
    print(f"bob_output = {transcript.bob_output}")
    row = {"a0": inputs.a0, "a1": inputs.a1, "i": inputs.i, "m": transcript.m, "bob_output": transcript.bob_output}
    violations = [row] if transcript.bob_output != inputs.selected else []
    return SweepReport("ot-run", [row], {"transcript": transcript_to_dict(transcript)}, violations, "honest OT run")


def _merge_checks(row: Dict[str, Any], checks: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    failed = []
    for check in checks:
        name = check["quantity"]
        row[f"sampled_{name}"] = check["sampled"]
        row[f"within_{name}"] = check["within"]
        row["reseeded"] = check["reseeded"]
        if not check["within"]:
            failed.append(check)
    return failed


def cmd_attack(args: argparse.Namespace, config: RunConfig) -> SweepReport:
    eps = config.epsilon_grid[0]
    metadata: Dict[str, Any] = {"seed": config.seed, "trials": config.trials}
    if args.role == "alice":
        spec = alice_attack(eps)
        # The attack commits to a0 = a1 = 0; Bob's error is measured on that pair.
        inputs = [OtInputs(0, 0, i) for i in (0, 1)]
        stats = exact_ot_stats(spec, honest_bob_factory, inputs)
        row: Dict[str, Any] = {
            "role": "alice",
            "epsilon": eps,
            "bob_error_prob": stats.bob_error_prob,
            "advantage": stats.alice_advantage,
            "bias": stats.alice_bias,
            "bias_floor": alice_attack_floor(eps),
            "advantage_ceiling": alice_attack_ceiling(eps),
        }
        checks = cross_check_ot(spec, honest_bob_factory, inputs, config.trials, config.seed, stats=stats)
    else:
        spec = bob_attack(eps)
        inputs = [OtInputs(a0, a1, 0) for a0 in (0, 1) for a1 in (0, 1)]
        stats = exact_ot_stats(honest_alice_factory, spec, inputs)
        constants = bob_attack_constants(eps)
        row = {
            "role": "bob",
            "epsilon": eps,
            "a0_error": 1.0 - stats.bob_pair_stats["a0_correct"],
            "a1_advantage": stats.bob_pair_stats["a1_correct"] - 0.5,
            "a1_advantage_exact": constants["a1_advantage"],
            "a1_advantage_ratio": constants["a1_advantage"] / math.sqrt(eps),
            "ancilla_advantage": constants["ancilla_advantage"],
            "ancilla_ratio": constants["ancilla_advantage"] / math.sqrt(eps),
            "m0_probability": stats.m_distribution.get(0, 0.0),
        }
        checks = cross_check_ot(honest_alice_factory, spec, inputs, config.trials, config.seed, stats=stats)
        metadata["note"] = A1_ADVANTAGE_NOTE
    failed = _merge_checks(row, checks)
    print(", ".join(f"{k} = {v}" for k, v in row.items() if not k.startswith(("sampled_", "within_"))))
    if "note" in metadata:
        print(f"note: {metadata['note']}")
    metadata["checks"] = checks
    return SweepReport(
        f"attack-{args.role}",
        [row],
        metadata,
        failed,
        f"{args.role} attack at epsilon {eps:g}",
    )


def _verifier_params(args: argparse.Namespace) -> Dict[str, Any]:
    schema = VerifierRegistry.get_verifier(args.target)({}).get_required_params()
    given = {"seed": args.seed, "family_size": args.family_size, "epsilon_grid": args.epsilon_grid}
    return {k: v for k, v in given.items() if k in schema and v is not None}


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> List[SweepReport]:
    if args.config:
        pipeline_config = load_config(args.config)
    elif args.target:
        entries = [{"verifier": args.target, "params": _verifier_params(args)}]
        pipeline_config = _pipeline_config(entries)
    else:
        raise InvalidConfigError("verify needs a target or --config")
    pipeline = VerificationPipeline(pipeline_config)
    result = pipeline.run()
    print()
    print(pipeline.get_summary())
    for report in result.reports:
        if "lambda_est" in report.metadata:
            print(f"lambda_est = {report.metadata['lambda_est']}")
        report.metadata["params"] = next(
            (spec["params"] for spec in pipeline_config.verifications if spec["verifier"] == report.verifier_name), {}
        )
    return result.reports


def _pipeline_config(entries: List[Dict[str, Any]]) -> PipelineConfig:
    return PipelineConfig(verifications=validate_verifications({"verifications": entries}))


def _qbc_parties(args: argparse.Namespace):
    if args.alice_attack is not None:
        return LiftedAliceAttack(alice_attack(args.alice_attack)), None
    if args.bob_flip_open:
        return None, QbcBob(HonestDeposit(), FlipOpening())
    if args.bob_attack is not None:
        lifted = lift_bob_spec(bob_attack(args.bob_attack))
        return None, QbcBob(lifted.deposit, lifted.open1 if args.b else lifted.open0)
    return None, QbcBob(HonestDeposit(), HonestOpening())


def _qbc_trials(b: int, alice, bob, seed: int, trials: int) -> List[Dict[str, Any]]:
    rows = []
    for trial, generator in enumerate(spawn_generators(seed, trials)):
        t = run_qbc(b, alice, bob, rng=generator)
        rows.append(
            {
                "trial": trial,
                "b": b,
                "c": t.c_revealed,
                "revealed_b": t.revealed_b,
                "sealing_test": t.sealing_test,
                "binding_test": t.binding_test,
                "alice_verdict": t.alice_verdict,
                "bob_verdict": t.bob_verdict,
                "alice_guess": t.alice_guess,
            }
        )
    return rows


def cmd_qbc_run(args: argparse.Namespace, config: RunConfig) -> SweepReport:
    alice, bob = _qbc_parties(args)
    exact = {"sealing_detection": 0.0, "binding_failure": 0.0}
    for leaf in qbc_branches(args.b, alice, bob):
        exact["sealing_detection"] += leaf.probability * (leaf.value.bob_verdict == ERR)
        exact["binding_failure"] += leaf.probability * (leaf.value.alice_verdict == ERR)

    runs: Dict[int, List[Dict[str, Any]]] = {}

    def sample(seed: int) -> Dict[str, Frequency]:
        rows = runs[seed] = _qbc_trials(args.b, alice, bob, seed, config.trials)
        return {
            "sealing_detection": Frequency(sum(r["bob_verdict"] == ERR for r in rows), len(rows)),
            "binding_failure": Frequency(sum(r["alice_verdict"] == ERR for r in rows), len(rows)),
        }

    checks = cross_check_frequencies(exact, sample, config.seed)
    rows = runs[checks[0]["seed"]]
    if config.trials == 1:
        row = rows[0]
        print(f"opened b = {row['revealed_b']}")
        print(f"sealing test: {row['sealing_test']}, binding test: {row['binding_test']}")
        print(f"alice verdict: {row['alice_verdict']}, bob verdict: {row['bob_verdict']}")
    for check in checks:
        print(f"{check['quantity']}: sampled {check['sampled']:.4f}, exact {check['exact']:.4f}")
    return SweepReport(
        "qbc-run",
        rows,
        {"seed": config.seed, "trials": config.trials, "checks": checks},
        [c for c in checks if not c["within"]],
        f"{config.trials} commitment(s) to b = {args.b}",
    )


def _write(reports: Sequence[SweepReport], config: RunConfig) -> None:
    provenance = config.provenance()
    if len(reports) == 1:
        reports[0].write(config.output_path, config.output_format, provenance)
    elif config.output_format == "json":
        directory = os.path.dirname(config.output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        write_json({"config": serialise_result(provenance), "reports": [r.to_dict() for r in reports]}, config.output_path)
    else:
        root, ext = os.path.splitext(config.output_path)
        for report in reports:
            report.write(f"{root}-{report.verifier_name}{ext}", "csv", provenance)
    logger.info("Report saved to: %s", config.output_path)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    configure_logging(args.verbose)

    name = _command_name(args)
    try:
        config = _run_config(args, name)
        logger.info("Running %s (seed %d)", name, config.seed)
        if args.command == "ot":
            reports = [cmd_ot_run(args, config)]
        elif args.command == "attack":
            reports = [cmd_attack(args, config)]
        elif args.command == "verify":
            reports = cmd_verify(args, config)
        else:
            reports = [cmd_qbc_run(args, config)]
    except (InvalidConfigError, UnknownVerifierError, InvalidArgumentError, ProtocolViolationError) as e:
        logger.error("Usage error: %s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except CheatsenseError as e:
        logger.exception("Internal error during %s: %s", name, e)
        return EXIT_INTERNAL

    try:
        _write(reports, config)
    except OSError as e:
        logger.error("Failed to write report to %s: %s", config.output_path, e)
        return EXIT_IO
    print(f"report: {config.output_path}")

    if any(not r.passed for r in reports):
        logger.warning("%d report(s) with violations", sum(not r.passed for r in reports))
        return EXIT_VIOLATIONS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
