from typing import Dict, List, NamedTuple, Tuple

import pytest

from aertools.audio import AudioClip, DatasetManifest
from aertools.config import ExperimentConfig
from aertools.emotion import Emotion
from aertools.experiment.synth import SynthSpec, generate_synthetic
from aertools.pipeline import FeatureVector, extract_features


class Corpus(NamedTuple):
    spec: SynthSpec
    manifest: DatasetManifest
    clips: List[AudioClip]

    @property
    def clip_map(self) -> Dict[str, AudioClip]:
        return {e.path: c for e, c in zip(self.manifest, self.clips)}


@pytest.fixture(scope="session")
def small_corpus() -> Corpus:
    """Four pseudo-speakers with two short clips per emotion each."""
    spec = SynthSpec(per_class_count=8, length=2048, seed=7)
    manifest, clips = generate_synthetic(spec)
    return Corpus(spec, manifest, clips)


@pytest.fixture(scope="session")
def small_vectors(small_corpus) -> List[Tuple[FeatureVector, Emotion, str]]:
    config = ExperimentConfig()
    return [
        (
            extract_features(clip, config.wavelet, config.fd, config.frame),
            entry.emotion,
            entry.speaker,
        )
        for entry, clip in zip(small_corpus.manifest, small_corpus.clips)
    ]
