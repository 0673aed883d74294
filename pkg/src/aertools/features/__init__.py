from .fractal import (
    FdEstimate,
    FdMethod,
    HiguchiConfig,
    estimate_fd,
    higuchi_fd,
    higuchi_lengths,
    katz_fd,
)
from .time_features import (
    FrameFeatureTrack,
    TrackKind,
    TrackStats,
    compute_track,
    log_energy,
    pitch_cepstral,
    teager_energy,
    track_stats,
    zero_crossing_rate,
)
from .wavelet import (
    BoundaryMode,
    WaveletDecomposition,
    WaveletFamily,
    WaveletFilterPair,
    dwt_single,
    filter_coeffs,
    idwt_single,
    wavedec,
    waverec,
)
