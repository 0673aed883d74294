import numpy as np
import pytest
from scipy.signal import get_window

from aertools.audio import AudioClip, WindowKind, frame_signal
from aertools.errors import ParameterError, TooShortError


def test_frames_cover_hop_offsets():
    # GIVEN an 8-sample signal
    signal = np.arange(8, dtype=float)
    # WHEN it is cut into rectangular frames of 4 with hop 2
    series = frame_signal(signal, frame_len=4, hop=2)
    # THEN frames cover [0..4), [2..6), [4..8)
    assert series.count == 3
    for i, frame in enumerate(series):
        np.testing.assert_array_equal(frame, signal[2 * i : 2 * i + 4])


def test_hamming_scales_window_by_constant():
    clip = AudioClip(np.full(32, 0.25), sample_rate=8000)
    series = frame_signal(clip, frame_len=16, hop=8, window_kind=WindowKind.hamming)
    expected = 0.25 * get_window("hamming", 16, fftbins=False)
    for frame in series:
        np.testing.assert_allclose(frame, expected, atol=1e-15)


@pytest.mark.parametrize(
    "n,frame_len,hop", [(8, 4, 2), (9, 4, 2), (100, 10, 3), (512, 512, 256)]
)
def test_frame_count(n, frame_len, hop):
    series = frame_signal(np.zeros(n), frame_len, hop)
    assert len(series) == (n - frame_len) // hop + 1
    assert series.frames.shape == (len(series), frame_len)


def test_too_short():
    with pytest.raises(TooShortError):
        frame_signal(np.zeros(3), frame_len=4, hop=1)


@pytest.mark.parametrize("frame_len,hop", [(0, 1), (4, 0)])
def test_invalid_sizes(frame_len, hop):
    with pytest.raises(ParameterError):
        frame_signal(np.zeros(8), frame_len, hop)


def test_back_to_back_frames_rebuild_prefix():
    # GIVEN 1000 samples cut into rectangular frames with hop equal to the length
    signal = np.random.default_rng(8).uniform(-1.0, 1.0, 1000)
    series = frame_signal(AudioClip(signal, sample_rate=8000), 64, 64)
    # THEN the frames laid end to end are the first 15 * 64 samples
    np.testing.assert_array_equal(np.concatenate(list(series)), signal[:960])
