"""Unit tests for verifiers, the registry, the pipeline and config loading."""

import json

import pytest

import cheatsense.verifiers
from cheatsense.base import BaseVerifier, SweepReport
from cheatsense.config_loader import load_config, validate_verifications
from cheatsense.exceptions import InvalidConfigError, UnknownVerifierError
from cheatsense.pipeline import PipelineConfig, VerificationPipeline
from cheatsense.registry import VerifierRegistry
from .conftest import log_report, log_violations


class _AlwaysFails(BaseVerifier):
    @property
    def name(self) -> str:
        return "always-fails"

    @property
    def description(self) -> str:
        return "test double"

    def get_required_params(self):
        return {"reason": {"type": str, "default": "forced", "description": "Why", "required": False}}

    def verify(self) -> SweepReport:
        row = {"spec": "forced", "reason": self.param("reason")}
        return SweepReport("always-fails", rows=[row], violations=[row], message="1 violation")


def test_registry_lists_every_verifier() -> None:
    assert {"akn", "lambda", "lemma1", "lemma2", "sealing"} <= set(VerifierRegistry.list_verifiers())
    assert VerifierRegistry.get_verifier("nope") is None
    assert VerifierRegistry.create_verifier("nope", {}) is None
    assert VerifierRegistry.get_verifier("sealing") is cheatsense.verifiers.SealingVerifier


def test_registry_rejects_unbuildable_class() -> None:
    class Broken(BaseVerifier):
        def __init__(self, config) -> None:
            raise ValueError("no")

    with pytest.raises(RuntimeError):
        VerifierRegistry.register(Broken)


def test_verifier_params_fall_back_to_defaults() -> None:
    verifier = VerifierRegistry.create_verifier("lemma1", {"family_size": 2})
    if verifier is None:
        raise ValueError("lemma1 verifier not found in registry")
    assert verifier.param("family_size") == 2
    assert verifier.param("seed") == verifier.get_required_params()["seed"]["default"]
    assert verifier.description


def test_lemma1_verifier_small() -> None:
    verifier = VerifierRegistry.create_verifier("lemma1", {"family_size": 2, "seed": 7, "epsilon_grid": [0.04]})
    if verifier is None:
        raise ValueError("lemma1 verifier not found in registry")
    report = verifier.verify()
    log_report(report)
    log_violations(report)
    assert report.passed
    assert len(report.rows) == 4


def test_lemma2_verifier_small() -> None:
    verifier = VerifierRegistry.create_verifier("lemma2", {"family_size": 1, "seed": 7, "epsilon_grid": [0.09]})
    if verifier is None:
        raise ValueError("lemma2 verifier not found in registry")
    report = verifier.verify()
    log_report(report)
    assert report.passed
    assert report.rows[0]["witness"]


def test_akn_verifier_small() -> None:
    verifier = VerifierRegistry.create_verifier("akn", {"pairs": 3, "povms": 5, "max_dim": 3})
    if verifier is None:
        raise ValueError("akn verifier not found in registry")
    report = verifier.verify()
    assert report.passed
    assert report.metadata["pairs"] == 3


def test_pipeline_multiple_verifications() -> None:
    config = PipelineConfig(
        verifications=[
            {"verifier": "sealing", "params": {"epsilon_grid": [0.04]}},
            {"verifier": "lambda", "params": {"family_size": 1, "epsilon_grid": [0.04]}},
        ]
    )
    pipeline = VerificationPipeline(config)
    result = pipeline.run()
    log_report(result)
    assert result.passed
    assert result.total_verifications == 2
    assert result.passed_verifications == 2
    assert all(r.duration_seconds is not None for r in result.reports)
    summary = pipeline.get_summary()
    assert summary.startswith("Verification Results:")
    assert "✓ PASSED" in summary
    assert "Passed: 2/2 verifications" in summary


def test_pipeline_reports_failures() -> None:
    VerifierRegistry.register(_AlwaysFails)
    try:
        pipeline = VerificationPipeline(PipelineConfig([{"verifier": "always-fails", "params": {}}]))
        result = pipeline.run()
        assert not result.passed
        assert result.failed_verifications == 1
        summary = pipeline.get_summary()
        assert "✗ FAILED" in summary
        assert "- forced:" in summary
    finally:
        VerifierRegistry._verifiers.pop("always-fails", None)


def test_pipeline_rejects_bad_entries() -> None:
    with pytest.raises(InvalidConfigError):
        VerificationPipeline(PipelineConfig(["sealing"]))
    with pytest.raises(InvalidConfigError):
        VerificationPipeline(PipelineConfig([{"params": {}}]))
    with pytest.raises(UnknownVerifierError):
        VerificationPipeline(PipelineConfig([{"verifier": "nope"}]))
    with pytest.raises(RuntimeError):
        VerificationPipeline(PipelineConfig([])).get_summary()


def test_validate_fills_defaults() -> None:
    normalized = validate_verifications({"verifications": [{"verifier": "akn", "params": {"pairs": 4}}]})
    params = normalized[0]["params"]
    assert params["pairs"] == 4
    assert params["povms"] == 100
    assert params["max_dim"] == 8


@pytest.mark.parametrize(
    "entry",
    [
        {"verifier": "akn", "params": {"unknown": 1}},
        {"verifier": "akn", "params": {"pairs": "many"}},
        {"verifier": "akn", "params": {"pairs": True}},
        {"verifier": "akn", "params": [1, 2]},
        {"params": {}},
        "akn",
    ],
)
def test_validate_rejects_bad_entries(entry) -> None:
    with pytest.raises(InvalidConfigError):
        validate_verifications({"verifications": [entry]})


def test_validate_rejects_bad_structure() -> None:
    with pytest.raises(InvalidConfigError):
        validate_verifications({})
    with pytest.raises(InvalidConfigError):
        validate_verifications({"verifications": {"verifier": "akn"}})
    with pytest.raises(UnknownVerifierError):
        validate_verifications({"verifications": [{"verifier": "nope"}]})


def test_load_json_and_yaml(tmp_path) -> None:
    json_path = tmp_path / "config.json"
    json_path.write_text(json.dumps({"verifications": [{"verifier": "sealing"}]}), encoding="utf-8")
    config = load_config(str(json_path))
    assert config.verifications[0]["params"]["epsilon_grid"] == [0.01, 0.04, 0.09]

    yaml_path = tmp_path / "config.yaml"
    yaml_path.write_text(
        "verifications:\n  - verifier: lambda\n    params:\n      family_size: 3\n      relevance: 0.2\n",
        encoding="utf-8",
    )
    config = load_config(str(yaml_path))
    assert config.verifications[0]["params"]["family_size"] == 3
    assert config.verifications[0]["params"]["relevance"] == 0.2


def test_load_config_errors(tmp_path) -> None:
    with pytest.raises(InvalidConfigError):
        load_config(str(tmp_path / "missing.json"))
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_config(str(bad_json))
    bad_yaml = tmp_path / "bad.yml"
    bad_yaml.write_text("verifications: [\n", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_config(str(bad_yaml))
    listing = tmp_path / "list.json"
    listing.write_text("[]", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_config(str(listing))
    other = tmp_path / "config.toml"
    other.write_text("", encoding="utf-8")
    with pytest.raises(InvalidConfigError):
        load_config(str(other))
