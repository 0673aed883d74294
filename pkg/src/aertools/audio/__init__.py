from .clip import AudioClip, read_wav, write_wav
from .framing import FrameSeries, WindowKind, frame_signal
from .manifest import (
    DatasetManifest,
    ManifestEntry,
    ManifestReader,
    load_manifest,
)
