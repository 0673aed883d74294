import json
import logging
import sys

import pytest

from aertools import __version__
from aertools.classify import load_model
from aertools.cli import main as cli_main
from aertools.status import ExitCodes


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch):
    # the root logger is configured once per process and must survive each run
    monkeypatch.setattr("aertools.cli.logger.init", lambda *args, **kwargs: None)
    monkeypatch.setattr(logging, "shutdown", lambda: None)


@pytest.fixture
def invoke(monkeypatch):
    def _invoke(*args):
        monkeypatch.setattr(sys, "argv", ["aertools", *map(str, args)])
        with pytest.raises(SystemExit) as e:
            cli_main.main()
        return e.value.code

    return _invoke


@pytest.fixture
def corpus(invoke, tmp_path):
    """Manifest of a small synthetic corpus generated through the CLI."""
    code = invoke("synth", "--out", tmp_path / "corpus", "--count", 8, "--length", 1024)
    assert code == ExitCodes.SUCCESS.code
    return tmp_path / "corpus" / "manifest.csv"


def test_version(invoke, capsys):
    assert invoke("--version") == ExitCodes.SUCCESS.code
    assert f"aertools v{__version__}" in capsys.readouterr().out


def test_help(invoke, capsys):
    assert invoke("--help") == ExitCodes.SUCCESS.code
    assert "synth" in capsys.readouterr().out


def test_synth_writes_corpus(corpus, capsys):
    assert corpus.is_file()
    assert len(corpus.read_text().splitlines()) == 1 + 6 * 8
    assert (corpus.parent / "P1" / "angry_000.wav").is_file()


def test_eval_then_report(invoke, corpus, tmp_path, capsys):
    # GIVEN a synthetic corpus
    report = tmp_path / "report.json"
    # WHEN it is evaluated under the one-vs-three protocol
    code = invoke(
        "eval",
        "--manifest",
        corpus,
        "--protocol",
        "one_vs_three",
        "--cascade",
        "off",
        "--format",
        "json",
        "--out",
        report,
    )
    # THEN a report of every split is written
    assert code == ExitCodes.SUCCESS.code
    document = json.loads(report.read_text())
    assert len(document["splits"]) == 4
    assert document["config"]["model.cascade"] == "off"
    # AND it can be re-rendered as text
    capsys.readouterr()
    assert invoke("report", "--input", report) == ExitCodes.SUCCESS.code
    assert capsys.readouterr().out.startswith("# configuration\n")


def test_eval_custom_split(invoke, corpus, capsys):
    code = invoke(
        "eval",
        "--manifest",
        corpus,
        "--protocol",
        "custom",
        "--train",
        "P1,P2",
        "--cascade",
        "off",
        "--format",
        "csv",
    )
    assert code == ExitCodes.SUCCESS.code
    out = capsys.readouterr().out
    assert "1,P1+P2,P3+P4,overall_accuracy" in out


def test_train_writes_model(invoke, corpus, tmp_path):
    model_path = tmp_path / "model.json"
    code = invoke(
        "train", "--manifest", corpus, "--out", model_path, "--speakers", "P1,P2"
    )
    assert code == ExitCodes.SUCCESS.code
    model = load_model(model_path)
    assert len(model.exemplars) == 24
    assert model.cascade is not None


def test_extract_writes_cache(invoke, corpus, tmp_path):
    table = tmp_path / "features.csv"
    code = invoke("extract", "--manifest", corpus, "--out", table, "--levels", 3)
    assert code == ExitCodes.SUCCESS.code
    lines = table.read_text().splitlines()
    assert len(lines) == 1 + 6 * 8
    assert lines[0].startswith("path,speaker,emotion,key,fd_d1")


class TestFailures:
    def test_unknown_option(self, invoke):
        assert invoke("eval", "--bogus") == ExitCodes.CONFIG_ERROR.code

    def test_missing_manifest(self, invoke, tmp_path):
        code = invoke("eval", "--manifest", tmp_path / "absent.csv")
        assert code == ExitCodes.CONFIG_ERROR.code

    def test_custom_without_train(self, invoke, corpus):
        code = invoke("eval", "--manifest", corpus, "--protocol", "custom")
        assert code == ExitCodes.CONFIG_ERROR.code

    def test_bad_config_file(self, invoke, corpus, tmp_path):
        config = tmp_path / "run.conf"
        config.write_text("wavelet.levels = many\n")
        code = invoke("eval", "--manifest", corpus, "--config", config)
        assert code == ExitCodes.CONFIG_ERROR.code

    def test_empty_manifest(self, invoke, tmp_path):
        manifest = tmp_path / "manifest.csv"
        manifest.write_text("path,speaker,emotion\n")
        code = invoke("eval", "--manifest", manifest)
        assert code == ExitCodes.DATA_ERROR.code

    def test_unknown_training_speaker(self, invoke, corpus, tmp_path):
        model_path = tmp_path / "model.json"
        code = invoke(
            "train", "--manifest", corpus, "--out", model_path, "--speakers", "P1,P9"
        )
        assert code == ExitCodes.DATA_ERROR.code
        assert not model_path.exists()
