import pytest

from aertools.status import ExitCodes
from aertools.config import ExperimentConfig, load_config
from aertools.errors import (
    DegenerateSignalError,
    ModelError,
    ParameterError,
    ShapeError,
)
from aertools.experiment import SplitKind
from aertools.features import BoundaryMode, FdMethod, WaveletFamily


def test_defaults():
    config = ExperimentConfig()
    assert config.wavelet.family is WaveletFamily.db4
    assert config.wavelet.levels == 5
    assert config.wavelet.mode is BoundaryMode.symmetric
    assert config.fd.method is FdMethod.higuchi and config.fd.k_max == 8
    assert config.model.cascade
    assert config.protocol is SplitKind.one_vs_three


def test_overrides_convert_text():
    config = ExperimentConfig().with_overrides(
        {
            "wavelet.family": "haar",
            "wavelet.levels": "3",
            "model.cascade": "off",
            "experiment.workers": "4",
            "cache": "",
            "fd.k_max": None,
        }
    )
    assert config.wavelet.family is WaveletFamily.haar
    assert config.wavelet.levels == 3
    assert config.model.cascade is False
    assert config.workers == 4
    assert config.cache is None
    assert config.fd.k_max == 8


@pytest.mark.parametrize(
    "overrides",
    [
        {"wavelet.depth": "3"},
        {"audio.rate": "8000"},
        {"wavelet.levels": "0"},
        {"wavelet.family": "sym4"},
        {"model.cascade": "maybe"},
        {"model.cascade_order": "angry:teo_mean:sideways"},
        {"workers": "0"},
    ],
)
def test_invalid_overrides(overrides):
    with pytest.raises(ParameterError):
        ExperimentConfig().with_overrides(overrides)


def test_snapshot():
    snapshot = ExperimentConfig().snapshot()
    assert snapshot["wavelet.family"] == "db4"
    assert snapshot["model.cascade"] == "on"
    assert snapshot["experiment.cache"] == ""
    extraction = ExperimentConfig().extraction_snapshot()
    assert "model.knn_k" not in extraction
    assert extraction["fd.k_max"] == "8"


class TestLoadConfig:
    def test_file_over_defaults(self, tmp_path):
        # GIVEN a configuration file with comments and blank lines
        path = tmp_path / "run.conf"
        path.write_text(
            "# sub-band analysis\n"
            "wavelet.family = db8\n"
            "\n"
            "fd.k_max = 6  # shorter fit\n"
            "experiment.protocol = two_vs_two\n"
        )
        # WHEN it is loaded
        config = load_config(path)
        # THEN its values replace the defaults and nothing else changes
        assert config.wavelet.family is WaveletFamily.db8
        assert config.fd.k_max == 6
        assert config.protocol is SplitKind.two_vs_two
        assert config.model == ExperimentConfig().model

    def test_flags_over_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("wavelet.levels = 4\n")
        config = load_config(path).with_overrides({"wavelet.levels": 2})
        assert config.wavelet.levels == 2

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("wavelet.levels 4\n")
        with pytest.raises(ParameterError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParameterError):
            load_config(tmp_path / "absent.conf")


@pytest.mark.parametrize(
    "error,code",
    [
        (ParameterError, ExitCodes.CONFIG_ERROR),
        (DegenerateSignalError, ExitCodes.DATA_ERROR),
        (ShapeError, ExitCodes.INTERNAL_ERROR),
        (ModelError, ExitCodes.INTERNAL_ERROR),
    ],
)
def test_errors_carry_exit_codes(error, code):
    assert error("boom").code == code
