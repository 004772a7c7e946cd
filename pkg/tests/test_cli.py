"""End-to-end tests of the command line entry point."""

import json
import math

import pytest

import cheatsense_cli
from cheatsense.base import BaseVerifier, SweepReport
from cheatsense.exceptions import NumericalError
from cheatsense.registry import VerifierRegistry
from cheatsense_cli import (
    A1_ADVANTAGE_NOTE,
    EXIT_INTERNAL,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VIOLATIONS,
    OUTPUT_DIR_ENV,
    main,
)


def _read(path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


class _FlaggingVerifier(BaseVerifier):
    @property
    def name(self) -> str:
        return "cli-flagging"

    @property
    def description(self) -> str:
        return "test double"

    def get_required_params(self):
        return {}

    def verify(self) -> SweepReport:
        row = {"spec": "flagged"}
        return SweepReport("cli-flagging", rows=[row], violations=[row], message="1 violation")


@pytest.fixture
def flagging_verifier():
    VerifierRegistry.register(_FlaggingVerifier)
    yield "cli-flagging"
    VerifierRegistry._verifiers.pop("cli-flagging", None)


def test_ot_run_examples(tmp_path, capsys) -> None:
    out = tmp_path / "ot.json"
    assert main(["ot", "run", "--a0", "1", "--a1", "0", "--i", "1", "--seed", "7", "-o", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "bob_output = 0" in printed
    assert f"report: {out}" in printed
    report = _read(out)
    assert report["rows"][0]["bob_output"] == 0
    assert report["config"]["run"]["seed"] == 7
    assert "version" in report["config"]

    assert main(["ot", "run", "--a0", "1", "--a1", "1", "--i", "0", "-o", str(out)]) == EXIT_OK
    assert "bob_output = 1" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        ["ot", "run", "--a0", "1", "--a1", "0"],
        ["ot", "run", "--a0", "2", "--a1", "0", "--i", "0"],
        ["attack", "--role", "alice", "--epsilon", "1.5"],
        ["attack", "--role", "bob", "--epsilon", "0"],
        ["attack", "--role", "alice", "--epsilon", "0.04", "--trials", "0"],
        ["qbc", "run", "--b", "0", "--bob-flip-open", "--alice-attack", "0.04"],
        ["verify"],
        ["verify", "nope"],
        ["ot", "run", "--a0", "1", "--a1", "0", "--i", "1", "--format", "xml"],
        ["ot", "run", "--a0", "1", "--a1", "0", "--i", "1", "--seed", "-1"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch) -> None:
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert main(argv) == EXIT_USAGE


def test_help_exits_cleanly() -> None:
    assert main(["--help"]) == EXIT_OK


def test_attack_alice_row(tmp_path) -> None:
    out = tmp_path / "alice.json"
    code = main(["attack", "--role", "alice", "--epsilon", "0.04", "--trials", "400", "--seed", "3", "-o", str(out)])
    assert code == EXIT_OK
    row = _read(out)["rows"][0]
    assert row["advantage"] >= 0.04
    assert row["bob_error_prob"] == pytest.approx(0.02, abs=1e-9)
    assert row["bias"] >= row["bias_floor"]
    assert row["within_alice_correct"]


def test_attack_bob_row(tmp_path) -> None:
    out = tmp_path / "bob.csv"
    code = main(["attack", "--role", "bob", "--epsilon", "0.04", "--trials", "400", "--format", "csv", "-o", str(out)])
    assert code == EXIT_OK
    header, values = out.read_text(encoding="utf-8").splitlines()[:2]
    row = dict(zip(header.split(","), values.split(",")))
    assert float(row["ancilla_advantage"]) >= 0.08
    assert float(row["a1_advantage"]) == pytest.approx(float(row["a1_advantage_exact"]), abs=1e-9)
    assert float(row["m0_probability"]) == pytest.approx(0.5, abs=1e-9)


def test_verify_sealing_grid(tmp_path, capsys) -> None:
    out = tmp_path / "sealing.json"
    assert main(["verify", "sealing", "--epsilon-grid", "0.01,0.04,0.09", "-o", str(out)]) == EXIT_OK
    assert "✓ PASSED" in capsys.readouterr().out
    report = _read(out)
    assert len(report["rows"]) == 4
    assert all("margin" in row for row in report["rows"])
    assert report["violations"] == []
    assert report["metadata"]["params"]["epsilon_grid"] == [0.01, 0.04, 0.09]


def test_verify_lambda_prints_estimate(tmp_path, capsys) -> None:
    out = tmp_path / "lambda.json"
    assert main(["verify", "lambda", "--family-size", "2", "--epsilon-grid", "0.04", "-o", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    line = next(text for text in printed.splitlines() if text.startswith("lambda_est = "))
    assert float(line.split("=")[1]) > 0
    assert _read(out)["metadata"]["lambda_est"] > 0


def test_verify_lemma1_small(tmp_path) -> None:
    out = tmp_path / "lemma1.json"
    assert main(["verify", "lemma1", "--family-size", "3", "--seed", "1", "-o", str(out)]) == EXIT_OK
    assert _read(out)["metadata"]["seed"] == 1


def test_verify_config_file_with_several_verifiers(tmp_path) -> None:
    config = tmp_path / "config.yaml"
    config.write_text(
        "verifications:\n"
        "  - verifier: sealing\n"
        "    params:\n"
        "      epsilon_grid: [0.04]\n"
        "  - verifier: akn\n"
        "    params:\n"
        "      pairs: 2\n"
        "      povms: 3\n"
        "      max_dim: 3\n",
        encoding="utf-8",
    )
    out = tmp_path / "all.json"
    assert main(["verify", "--config", str(config), "-o", str(out)]) == EXIT_OK
    report = _read(out)
    assert [r["metadata"]["verifier"] for r in report["reports"]] == ["sealing", "akn"]

    csv_out = tmp_path / "all.csv"
    assert main(["verify", "--config", str(config), "--format", "csv", "-o", str(csv_out)]) == EXIT_OK
    assert (tmp_path / "all-sealing.csv").exists()
    assert (tmp_path / "all-akn.csv").exists()


def test_violations_exit_1(tmp_path, flagging_verifier) -> None:
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"verifications": [{"verifier": flagging_verifier}]}), encoding="utf-8")
    out = tmp_path / "flagged.json"
    assert main(["verify", "--config", str(config), "-o", str(out)]) == EXIT_VIOLATIONS
    assert _read(out)["violations"] == [{"spec": "flagged"}]


def test_unwritable_output_exits_3(tmp_path) -> None:
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    out = blocker / "report.json"
    assert main(["ot", "run", "--a0", "0", "--a1", "1", "--i", "1", "-o", str(out)]) == EXIT_IO


def test_missing_config_is_a_usage_error(tmp_path) -> None:
    assert main(["verify", "--config", str(tmp_path / "none.json"), "-o", str(tmp_path / "x.json")]) == EXIT_USAGE


def test_default_output_directory(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert main(["ot", "run", "--a0", "0", "--a1", "0", "--i", "0"]) == EXIT_OK
    assert (tmp_path / "ot-run.json").exists()
    assert main(["attack", "--role", "bob", "--epsilon", "0.09", "--trials", "50", "--format", "csv"]) == EXIT_OK
    assert (tmp_path / "attack-bob.csv").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["qbc", "run", "--b", "1", "--trials", "20", "--seed", "5"],
        ["attack", "--role", "alice", "--epsilon", "0.09", "--trials", "100", "--seed", "5"],
        ["verify", "sealing", "--epsilon-grid", "0.04"],
    ],
)
def test_reports_are_byte_identical(argv, tmp_path) -> None:
    out = tmp_path / "report.json"
    assert main(argv + ["-o", str(out)]) == EXIT_OK
    first = out.read_bytes()
    assert main(argv + ["-o", str(out)]) == EXIT_OK
    assert out.read_bytes() == first


def test_honest_qbc_run(tmp_path, capsys) -> None:
    out = tmp_path / "qbc.json"
    assert main(["qbc", "run", "--b", "1", "--seed", "11", "-o", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out
    assert "opened b = 1" in printed
    assert "sealing test: pass, binding test: pass" in printed
    row = _read(out)["rows"][0]
    assert row["alice_verdict"] == 1
    assert row["bob_verdict"] == "ok"


def test_qbc_flip_open_fails_binding_about_half_the_time(tmp_path) -> None:
    out = tmp_path / "flip.json"
    code = main(["qbc", "run", "--b", "0", "--bob-flip-open", "--trials", "400", "--seed", "2", "-o", str(out)])
    assert code == EXIT_OK
    checks = {c["quantity"]: c for c in _read(out)["metadata"]["checks"]}
    assert checks["binding_failure"]["exact"] == pytest.approx(0.5)
    assert 0.35 <= checks["binding_failure"]["sampled"] <= 0.65
    assert checks["sealing_detection"]["exact"] == 0.0


def test_qbc_alice_attack_detection_matches_exact(tmp_path) -> None:
    out = tmp_path / "attack.json"
    code = main(["qbc", "run", "--b", "0", "--alice-attack", "0.04", "--trials", "300", "--seed", "4", "-o", str(out)])
    assert code == EXIT_OK
    checks = {c["quantity"]: c for c in _read(out)["metadata"]["checks"]}
    assert checks["sealing_detection"]["exact"] == pytest.approx(0.01, abs=1e-9)
    assert checks["sealing_detection"]["within"]


def test_qbc_bob_attack_runs(tmp_path) -> None:
    out = tmp_path / "bob.json"
    assert main(["qbc", "run", "--b", "1", "--bob-attack", "0.04", "--trials", "50", "-o", str(out)]) in (
        EXIT_OK,
        EXIT_VIOLATIONS,
    )
    assert len(_read(out)["rows"]) == 50


def test_attack_bob_report_names_a1_shortfall(tmp_path, capsys) -> None:
    out = tmp_path / "bob.json"
    assert main(["attack", "--role", "bob", "--epsilon", "0.04", "--trials", "200", "-o", str(out)]) == EXIT_OK
    assert f"note: {A1_ADVANTAGE_NOTE}" in capsys.readouterr().out
    report = _read(out)
    assert report["metadata"]["note"] == A1_ADVANTAGE_NOTE
    row = report["rows"][0]
    assert row["a1_advantage_ratio"] == pytest.approx(math.sqrt(2) / 8, abs=1e-9)
    assert row["a1_advantage_ratio"] < 0.4 <= row["ancilla_ratio"]


def test_attack_default_trials(tmp_path, monkeypatch) -> None:
    seen = {}

    def record(*args, **kwargs):
        seen["trials"] = args[3]
        return []

    monkeypatch.setattr(cheatsense_cli, "cross_check_ot", record)
    out = tmp_path / "alice.json"
    assert main(["attack", "--role", "alice", "--epsilon", "0.04", "-o", str(out)]) == EXIT_OK
    assert seen["trials"] == 100_000
    assert _read(out)["config"]["run"]["trials"] == 100_000


def test_qbc_checks_record_reseed(tmp_path) -> None:
    out = tmp_path / "qbc.json"
    assert main(["qbc", "run", "--b", "0", "--bob-flip-open", "--trials", "50", "-o", str(out)]) == EXIT_OK
    checks = _read(out)["metadata"]["checks"]
    assert {c["quantity"] for c in checks} == {"binding_failure", "sealing_detection"}
    assert all(c["within"] for c in checks)
    assert all("reseeded" in c and c["trials"] == 50 for c in checks)


def test_qbc_rows_come_from_the_reseeded_run(tmp_path, monkeypatch) -> None:
    calls = []
    honest = cheatsense_cli._qbc_trials

    def skewed(b, alice, bob, seed, trials):
        calls.append(seed)
        rows = honest(b, alice, bob, seed, trials)
        if len(calls) == 1:
            for row in rows:
                row["bob_verdict"] = "err"
        return rows

    monkeypatch.setattr(cheatsense_cli, "_qbc_trials", skewed)
    out = tmp_path / "qbc.json"
    assert main(["qbc", "run", "--b", "1", "--trials", "10", "--seed", "3", "-o", str(out)]) == EXIT_OK
    report = _read(out)
    assert len(calls) == 2
    assert all(c["reseeded"] and c["seed"] == calls[1] for c in report["metadata"]["checks"])
    assert all(r["bob_verdict"] == "ok" for r in report["rows"])


def test_internal_errors_have_their_own_exit_code(tmp_path, monkeypatch) -> None:
    def broken(args, config):
        raise NumericalError("probabilities do not sum to one", {"total": 1.5})

    monkeypatch.setattr(cheatsense_cli, "cmd_ot_run", broken)
    out = tmp_path / "ot.json"
    assert main(["ot", "run", "--a0", "0", "--a1", "0", "--i", "0", "-o", str(out)]) == EXIT_INTERNAL
    assert not out.exists()
