"""Speaker-split experiments: extract or load cached features, fit, predict, report."""
import logging
import threading
import time
from typing import List, Mapping, Optional, Sequence, Union

from ..audio.clip import AudioClip, read_wav
from ..audio.manifest import DatasetManifest, ManifestEntry
from ..classify.model import fit_model, predict
from ..config import ExperimentConfig
from ..pipeline.cache import FeatureCache
from ..pipeline.vector import FeatureVector, extract_features
from .depot import FeatureDepot
from .protocol import SplitKind, SplitProtocol, make_splits
from .report import EvalReport, mean_accuracy

log = logging.getLogger(__name__)


def build_depot(
    manifest: Union[DatasetManifest, Sequence[ManifestEntry]],
    config: ExperimentConfig = ExperimentConfig(),
    clips: Optional[Mapping[str, AudioClip]] = None,
) -> FeatureDepot:
    """Load a feature record for every given manifest entry into a new depot.

    Clips are taken from `clips` (keyed by manifest path) when present there, otherwise
    decoded from disk. With `config.cache` set, vectors are looked up in and added to
    the feature cache at that path.
    """
    cache = None
    if config.cache:
        cache = FeatureCache(config.cache, config.extraction_snapshot())
    lock = threading.Lock()
    rates = set()

    def extractor(entry: ManifestEntry) -> FeatureVector:
        in_memory = clips is not None and entry.path in clips
        if cache is not None and not in_memory:
            vector = cache.get(entry.path)
            if vector is not None:
                return vector
        if in_memory:
            clip = clips[entry.path]
        else:
            clip = read_wav(entry.path).with_labels(entry.speaker, entry.emotion)
        vector = extract_features(clip, config.wavelet, config.fd, config.frame)
        with lock:
            rates.add(clip.sample_rate)
            if cache is not None and not in_memory:
                cache.put(entry.path, entry.speaker, entry.emotion.value, vector)
        return vector

    start = time.time()
    depot = FeatureDepot()
    num_loaded = depot.load(manifest, extractor, workers=config.workers)
    log.info(
        f"Loaded {num_loaded} of {len(manifest)} feature record(s) in"
        f" {time.time() - start:.2f}s"
    )
    for speaker, statuses in depot.usage_summary().items():
        counts = (f"{len(paths)} {status}" for status, paths in statuses.items())
        log.debug(f"Speaker {speaker}: {', '.join(counts)}")
    if len(rates) > 1:
        log.warning(
            f"Manifest mixes sample rates {sorted(rates)} Hz; features are computed at"
            " native rates"
        )
    if cache is not None:
        cache.save()
    return depot


def run_experiment(
    manifest: DatasetManifest,
    protocol: SplitProtocol,
    config: ExperimentConfig = ExperimentConfig(),
    depot: Optional[FeatureDepot] = None,
    clips: Optional[Mapping[str, AudioClip]] = None,
) -> EvalReport:
    """Fit on the protocol's training speakers and evaluate on its test speakers.

    Utterances whose features could not be extracted are counted as skipped.
    """
    protocol.check(manifest)
    if depot is None:
        depot = build_depot(manifest, config, clips)
    train = depot.labelled(protocol.train_speakers)
    model = fit_model(train, config.model)
    truth, predicted = [], []
    for speaker in sorted(protocol.test_speakers):
        for record in depot.retrieve(speaker):
            truth.append(record.emotion)
            predicted.append(predict(model, record.vector))
            depot.mark(record, FeatureDepot.Status.processed)
    skipped = sum(
        depot.count(speaker, FeatureDepot.Status.failed)
        for speaker in protocol.train_speakers | protocol.test_speakers
        if speaker in depot.speakers
    )
    report = EvalReport.from_predictions(
        truth,
        predicted,
        config.snapshot(),
        sorted(protocol.train_speakers),
        sorted(protocol.test_speakers),
        skipped=skipped,
    )
    log.info(
        f"Split {protocol}: accuracy {report.overall_accuracy:.4f} over"
        f" {report.total} test utterance(s), {skipped} skipped"
    )
    return report


def run_protocol(
    manifest: DatasetManifest,
    config: ExperimentConfig = ExperimentConfig(),
    kind: Optional[Union[SplitKind, str]] = None,
    clips: Optional[Mapping[str, AudioClip]] = None,
) -> List[EvalReport]:
    """Run every split of a protocol over one shared feature depot."""
    kind = SplitKind(kind if kind is not None else config.protocol)
    splits = make_splits(manifest, kind)
    depot = build_depot(manifest, config, clips)
    reports = [run_experiment(manifest, s, config, depot) for s in splits]
    evaluated = depot.retrieve(usage_status=FeatureDepot.Status.processed)
    log.info(
        f"Protocol {kind}: mean accuracy {mean_accuracy(reports):.4f} over"
        f" {len(reports)} split(s); {sum(map(len, evaluated.values()))} of"
        f" {depot.count()} utterance(s) tested at least once"
    )
    return reports
