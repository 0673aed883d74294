"""Evaluation reports: accuracy, per-emotion accuracy and confusion counts per split."""
import csv
import dataclasses
import enum
import io
import json
import logging
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..emotion import EMOTIONS, Emotion
from ..errors import FormatError, InsufficientDataError, ShapeError
from ..util import atomic_write

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_HEADER = ("split", "train", "test", "record", "name", "predicted", "value")


class ReportFormat(str, enum.Enum):
    text = "text"
    csv = "csv"
    json = "json"

    def __str__(self):
        return self.value


@dataclasses.dataclass(frozen=True)
class EvalReport:
    """Outcome of one train/test split.

    Attributes:
        confusion: 6 x 6 counts; rows are true and columns predicted emotions, both in
            `EMOTIONS` order.
        per_emotion_accuracy: Recall of every emotion present in the test split.
        skipped: Utterances of the split that could not be used.
    """

    overall_accuracy: float
    per_emotion_accuracy: Dict[Emotion, float]
    confusion: np.ndarray
    config_snapshot: Dict[str, str]
    train_speakers: Tuple[str, ...]
    test_speakers: Tuple[str, ...]
    skipped: int = 0
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        confusion = np.array(self.confusion, dtype=np.int64)
        if confusion.shape != (len(EMOTIONS), len(EMOTIONS)):
            raise FormatError(f"Confusion matrix has shape {confusion.shape}")
        confusion.setflags(write=False)
        object.__setattr__(self, "confusion", confusion)
        object.__setattr__(self, "train_speakers", tuple(sorted(self.train_speakers)))
        object.__setattr__(self, "test_speakers", tuple(sorted(self.test_speakers)))

    @property
    def total(self) -> int:
        return int(self.confusion.sum())

    def counts(self) -> Dict[Emotion, int]:
        """Test utterances per true emotion (the confusion row sums)."""
        return {e: int(n) for e, n in zip(EMOTIONS, self.confusion.sum(axis=1))}

    @classmethod
    def from_predictions(
        cls,
        truth: Sequence[Emotion],
        predicted: Sequence[Emotion],
        config_snapshot: Mapping[str, str],
        train_speakers: Sequence[str],
        test_speakers: Sequence[str],
        skipped: int = 0,
    ) -> "EvalReport":
        """Tally predictions into a report.

        Raises:
            InsufficientDataError: If there are no predictions.
        """
        if len(truth) != len(predicted):
            raise ShapeError("truth and predictions differ in length")
        if not truth:
            raise InsufficientDataError("No test utterances to evaluate")
        index = {e: i for i, e in enumerate(EMOTIONS)}
        confusion = np.zeros((len(EMOTIONS), len(EMOTIONS)), dtype=np.int64)
        for t, p in zip(truth, predicted):
            confusion[index[Emotion(t)], index[Emotion(p)]] += 1
        rows = confusion.sum(axis=1)
        per_emotion = {
            e: float(confusion[i, i] / rows[i])
            for i, e in enumerate(EMOTIONS)
            if rows[i] > 0
        }
        return cls(
            overall_accuracy=float(np.trace(confusion) / confusion.sum()),
            per_emotion_accuracy=per_emotion,
            confusion=confusion,
            config_snapshot=dict(config_snapshot),
            train_speakers=tuple(train_speakers),
            test_speakers=tuple(test_speakers),
            skipped=skipped,
        )

    def to_record(self) -> dict:
        return {
            "train_speakers": list(self.train_speakers),
            "test_speakers": list(self.test_speakers),
            "overall_accuracy": self.overall_accuracy,
            "per_emotion_accuracy": {
                e.value: a for e, a in self.per_emotion_accuracy.items()
            },
            "confusion": self.confusion.tolist(),
            "skipped": self.skipped,
        }

    @classmethod
    def from_record(
        cls, record: dict, config_snapshot: Mapping[str, str]
    ) -> "EvalReport":
        return cls(
            overall_accuracy=float(record["overall_accuracy"]),
            per_emotion_accuracy={
                Emotion(e): float(a) for e, a in record["per_emotion_accuracy"].items()
            },
            confusion=record["confusion"],
            config_snapshot=dict(config_snapshot),
            train_speakers=tuple(record["train_speakers"]),
            test_speakers=tuple(record["test_speakers"]),
            skipped=int(record["skipped"]),
        )


def mean_accuracy(reports: Sequence[EvalReport]) -> float:
    return float(np.mean([r.overall_accuracy for r in reports]))


def _render_text(reports: Sequence[EvalReport]) -> str:
    out = io.StringIO()
    out.write("# configuration\n")
    for key, value in reports[0].config_snapshot.items():
        out.write(f"{key} = {value}\n")
    corner = "true/pred"
    width = max(len(corner), *(len(e.value) for e in EMOTIONS))
    for i, report in enumerate(reports, start=1):
        out.write(
            f"\n## split {i}: train {'+'.join(report.train_speakers)},"
            f" test {'+'.join(report.test_speakers)}\n"
        )
        out.write(
            f"accuracy {report.overall_accuracy:.4f} over {report.total} utterance(s);"
            f" {report.skipped} skipped\n\n"
        )
        counts = report.counts()
        out.write(f"{'emotion':<{width}}  {'n':>4}  accuracy\n")
        for emotion, accuracy in report.per_emotion_accuracy.items():
            out.write(
                f"{emotion.value:<{width}}  {counts[emotion]:>4}  {accuracy:.4f}\n"
            )
        out.write(f"\n{corner:<{width}}")
        out.write("".join(f"  {e.value[:4]:>4}" for e in EMOTIONS) + "\n")
        for emotion, row in zip(EMOTIONS, report.confusion):
            out.write(f"{emotion.value:<{width}}")
            out.write("".join(f"  {n:>4}" for n in row) + "\n")
    out.write(
        f"\nmean accuracy {mean_accuracy(reports):.4f} over {len(reports)} split(s)\n"
    )
    return out.getvalue()


def _render_csv(reports: Sequence[EvalReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for key, value in reports[0].config_snapshot.items():
        writer.writerow(("", "", "", "config", key, "", value))
    writer.writerow(("", "", "", "schema_version", "", "", SCHEMA_VERSION))
    for i, r in enumerate(reports, start=1):
        split = (i, "+".join(r.train_speakers), "+".join(r.test_speakers))
        writer.writerow((*split, "overall_accuracy", "", "", repr(r.overall_accuracy)))
        writer.writerow((*split, "skipped", "", "", r.skipped))
        for emotion, accuracy in r.per_emotion_accuracy.items():
            writer.writerow(
                (*split, "per_emotion_accuracy", emotion.value, "", repr(accuracy))
            )
        for true, row in zip(EMOTIONS, r.confusion):
            for pred, n in zip(EMOTIONS, row):
                writer.writerow((*split, "confusion", true.value, pred.value, int(n)))
    return out.getvalue()


def _render_json(reports: Sequence[EvalReport]) -> str:
    document = {
        "schema_version": SCHEMA_VERSION,
        "config": reports[0].config_snapshot,
        "mean_accuracy": mean_accuracy(reports),
        "splits": [r.to_record() for r in reports],
    }
    return json.dumps(document, indent=2) + "\n"


_RENDERERS = {
    ReportFormat.text: _render_text,
    ReportFormat.csv: _render_csv,
    ReportFormat.json: _render_json,
}


def emit_report(
    reports: Union[EvalReport, Sequence[EvalReport]],
    format: Union[ReportFormat, str] = ReportFormat.text,
    path: Optional[Union[str, Path]] = None,
) -> str:
    """Render one or more split reports; write them atomically to `path` if given.

    All splits of one experiment share a configuration, so the snapshot is taken from
    the first report.

    Returns:
        The rendered document.
    """
    if isinstance(reports, EvalReport):
        reports = [reports]
    reports = list(reports)
    if not reports:
        raise InsufficientDataError("No reports to emit")
    document = _RENDERERS[ReportFormat(format)](reports)
    if path is not None:
        path = Path(path)
        with atomic_write(path, newline="") as f:
            f.write(document)
        log.info(f"Wrote {format} report of {len(reports)} split(s) to '{path}'")
    return document


def load_report(path: Union[str, Path]) -> List[EvalReport]:
    """Read a JSON report written by `emit_report`.

    Raises:
        FormatError: If the file is not a report of the supported schema version.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            document = json.load(f)
        if document.get("schema_version") != SCHEMA_VERSION:
            raise FormatError(
                f"'{path}': unsupported report schema {document.get('schema_version')}"
            )
        config = document["config"]
        return [EvalReport.from_record(r, config) for r in document["splits"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"'{path}': malformed report ({e})") from e
