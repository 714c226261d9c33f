from pathlib import Path

import pytest
from pydantic import ValidationError

from pathseries import paths
from pathseries.catalog import CATALOG, get_entry, run_identity, run_many
from pathseries.config import default_config, load_config
from pathseries.errors import UnknownIdentity
from pathseries.models import ConfigModel

REPO_CONFIG = Path(__file__).parents[1] / "data" / "config.yaml"


def test_repo_config_loads():
    cfg = load_config(REPO_CONFIG)
    assert cfg.threads == 1
    assert cfg.max_window == 64
    assert cfg.truncations["thm1_i1"] == 200
    assert cfg.trunc_for("matrix_M", 1) == 1


def test_repo_config_matches_catalog_defaults():
    cfg = load_config(REPO_CONFIG)
    for entry in CATALOG:
        assert cfg.trunc_for(entry.id, entry.default_trunc) == entry.default_trunc


def test_defaults():
    cfg = default_config()
    assert cfg.truncations == {}
    assert cfg.log_level == "INFO"


def test_missing_file(tmp_path: Path):
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "absent.yaml")


def test_empty_file_gives_defaults(tmp_path: Path):
    p = tmp_path / "empty.yaml"
    p.write_text("", encoding="utf-8")
    assert load_config(p) == ConfigModel()


def test_legacy_keys(tmp_path: Path):
    p = tmp_path / "legacy.yaml"
    p.write_text("defaults:\n  qdif: 12\nworkers: 3\nlog_level: debug\n", encoding="utf-8")
    cfg = load_config(p)
    assert cfg.truncations == {"qdif": 12}
    assert cfg.threads == 3
    assert cfg.log_level == "DEBUG"


def test_invalid_values_are_rejected():
    with pytest.raises(ValidationError):
        ConfigModel(truncations={"not_an_identity": 10})
    with pytest.raises(ValidationError):
        ConfigModel(truncations={"qdif": 0})
    with pytest.raises(ValidationError):
        ConfigModel(threads=0)
    with pytest.raises(ValidationError):
        ConfigModel(log_level="LOUD")


def test_catalog_lookup():
    assert get_entry("qdif").entry_point == "transfer:verify_qdif"
    with pytest.raises(UnknownIdentity):
        get_entry("qdif3")
    report = run_identity("euler", 20)
    assert report.passed
    assert report.trunc == 20


@pytest.mark.parametrize("identity,trunc", [("fib_special", 25), ("pow2_special", 25), ("fg_law", 6)])
def test_catalog_wrappers(identity, trunc):
    report = run_identity(identity, trunc)
    assert report.passed, report.details
    assert report.identity == identity
    assert report.trunc == trunc


def test_pow2_wrapper_reports_nonnegativity():
    report = run_identity("pow2_special", 12)
    assert set(report.details["nonnegative_coefficients"]) == {"c1_special", "c2_special"}


@pytest.mark.slow
def test_character_oracle_wrapper():
    report = run_identity("character_oracle", 30)
    assert report.passed, report.first_mismatch
    assert report.details["counts"] == report.details["bfs_counts"]


def test_threaded_run_shares_enumerations(monkeypatch):
    calls = []
    original = paths.enumerate_paths

    def counting(weight, max_degree, **kwargs):
        calls.append((weight.label, max_degree))
        return original(weight, max_degree, **kwargs)

    monkeypatch.setattr(paths, "enumerate_paths", counting)
    monkeypatch.setattr(paths, "_PATH_INDEX", {})
    monkeypatch.setattr(paths, "_IN_FLIGHT", {})
    ids = ["qdif", "transfer16", "bridge_b_i2"]
    reports = run_many(ids, {identity: 12 for identity in ids}, threads=3)
    assert [r.identity for r in reports] == ids
    assert all(r.passed for r in reports), [r.first_mismatch for r in reports]
    assert calls == [("3L0", 11)]
