import numpy as np
import pytest

from aertools.audio import AudioClip
from aertools.config import ExperimentConfig
from aertools.errors import ShapeError
from aertools.pipeline import SCREEN_FEATURES, FdBands, FeatureVector, extract_features
from aertools.pipeline.vector import DEGENERATE_FD, band_indices


@pytest.fixture(scope="module")
def config():
    return ExperimentConfig()


def extract(clip, config):
    return extract_features(clip, config.wavelet, config.fd, config.frame)


def test_layout(small_vectors):
    # GIVEN vectors extracted with the default five-level decomposition
    for vector, _, _ in small_vectors:
        # THEN each holds 2J + 1 fractal dimensions and six screening statistics
        assert vector.fd_features.size == 11
        assert vector.screen_features.size == len(SCREEN_FEATURES)
        assert len(vector) == 17
        assert vector.names[0] == "fd_d1" and vector.names[10] == "fd_raw"
        assert vector.names[11:] == list(SCREEN_FEATURES)
        assert np.all(np.isfinite(vector.as_array()))


def test_dc_clip_gets_sentinels(caplog, config):
    # GIVEN a constant clip
    clip = AudioClip(np.full(4096, 0.3), sample_rate=8000, source_path="dc.wav")
    # WHEN its features are extracted
    vector = extract(clip, config)
    # THEN every fractal dimension is replaced by the sentinel with a warning
    np.testing.assert_array_equal(vector.fd_features, np.full(11, DEGENERATE_FD))
    assert "fd_raw" in vector.degenerate
    assert any("no usable FD" in r.message for r in caplog.records)


def test_white_noise_is_rough(config):
    samples = 0.1 * np.random.default_rng(17).standard_normal(4096)
    vector = extract(AudioClip(samples, sample_rate=8000), config)
    assert not vector.degenerate
    assert 1.5 <= vector.fd_features[-1] <= 2.1
    assert 1.5 <= vector.fd_features[0] <= 2.1


def test_extraction_is_deterministic(small_corpus, config):
    clip = small_corpus.clips[0]
    assert extract(clip, config) == extract(clip, config)


def test_short_clip_drops_deep_levels(caplog, config):
    # GIVEN a clip too short for five levels and for one analysis frame
    samples = 0.2 * np.random.default_rng(18).standard_normal(200)
    clip = AudioClip(samples, sample_rate=8000, source_path="short.wav")
    # WHEN its features are extracted
    vector = extract(clip, config)
    # THEN the missing level gets sentinels and the layout is unchanged
    assert {"fd_d5", "fd_a5"} <= set(vector.degenerate)
    assert vector.fd_features[4] == DEGENERATE_FD
    assert len(vector) == 17
    assert any("shorter than one frame" in r.message for r in caplog.records)


def test_read_only_clip(config):
    # GIVEN a clip, whose samples are always read-only
    samples = 0.1 * np.random.default_rng(19).standard_normal(2048)
    clip = AudioClip(samples, sample_rate=8000)
    assert not clip.samples.flags.writeable
    # WHEN its features are extracted
    vector = extract(clip, config)
    # THEN every level is computed and the clip is left untouched
    assert not vector.degenerate
    assert np.all(np.isfinite(vector.as_array()))
    np.testing.assert_array_equal(clip.samples, samples)


def test_short_clip_at_high_rate(config):
    # GIVEN a 120-sample clip at 44.1 kHz, too short to resolve pitch
    samples = 0.2 * np.random.default_rng(20).standard_normal(120)
    clip = AudioClip(samples, sample_rate=44100, source_path="tiny.wav")
    # WHEN its features are extracted
    vector = extract(clip, config)
    # THEN pitch is reported absent instead of failing the clip
    assert vector.screen("pitch_mean") == 0.0
    assert len(vector) == 17


@pytest.mark.parametrize(
    "bands,expected",
    [
        (FdBands.all, [0, 1, 2, 3, 4, 5, 6]),
        (FdBands.detail, [0, 1, 2, 6]),
        (FdBands.approx, [3, 4, 5, 6]),
    ],
)
def test_band_indices(bands, expected):
    assert band_indices(3, bands).tolist() == expected


class TestFeatureVector:
    def test_wrong_size(self):
        with pytest.raises(ShapeError):
            FeatureVector(np.ones(4), np.zeros(6), levels=2)

    def test_non_finite(self):
        with pytest.raises(ShapeError):
            FeatureVector([1.0, np.nan, 1.0], np.zeros(6), levels=1)

    def test_read_only(self):
        vector = FeatureVector(np.ones(3), np.zeros(6), levels=1)
        with pytest.raises(ValueError):
            vector.fd_features[0] = 2.0

    def test_screen_lookup(self):
        vector = FeatureVector(np.ones(3), np.arange(6.0), levels=1)
        assert vector.screen("teo_mean") == 2.0
