import csv
import logging
import re
from collections import Counter
from pathlib import Path
from typing import (
    ClassVar,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
    Union,
)

from ..emotion import Emotion
from ..errors import (
    DuplicateEntryError,
    EmptyManifestError,
    FormatError,
    ParameterError,
)
from ..util import atomic_write

log = logging.getLogger(__name__)

CSV_HEADER = ("path", "speaker", "emotion")

# SAVEE file names start with an emotion code followed by the take number (e.g. sa03)
SAVEE_PREFIXES: Dict[str, str] = {
    "a": "angry",
    "d": "disgust",
    "f": "fear",
    "h": "happy",
    "n": "neutral",
    "sa": "sad",
    "su": "surprise",
}


class ManifestEntry(NamedTuple):
    path: str
    speaker: str
    emotion: Emotion


class DatasetManifest:
    """An ordered, duplicate-free inventory of labelled utterances.

    Attributes:
        entries: Entries in source order.
        speakers: Sorted speaker identifiers present in `entries`.
    """

    def __init__(self, entries: Iterable[ManifestEntry]):
        self.entries: Tuple[ManifestEntry, ...] = tuple(entries)
        if not self.entries:
            raise EmptyManifestError("Manifest contains no valid entries")
        seen = set()
        for entry in self.entries:
            if entry.path in seen:
                raise DuplicateEntryError(f"Duplicate manifest path '{entry.path}'")
            seen.add(entry.path)
        speakers = {e.speaker for e in self.entries}
        self.speakers: Tuple[str, ...] = tuple(sorted(speakers))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ManifestEntry]:
        return iter(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DatasetManifest) and self.entries == other.entries

    def speaker_counts(self) -> Dict[str, int]:
        counts = Counter(e.speaker for e in self.entries)
        return {s: counts[s] for s in self.speakers}

    def for_speakers(self, speakers: Iterable[str]) -> List[ManifestEntry]:
        wanted = set(speakers)
        return [e for e in self.entries if e.speaker in wanted]

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the manifest in the `csv` layout (paths as stored)."""
        path = Path(path)
        with atomic_write(path, newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for entry in self.entries:
                writer.writerow((entry.path, entry.speaker, entry.emotion.value))
        return path


class ManifestReader:
    """Base class of manifest layouts; subclasses register under a layout name.

    A reader yields raw `(path, speaker, emotion_text)` rows; label parsing, filtering
    and validation are shared by all layouts in `load_manifest`.
    """

    _supported_layouts: ClassVar[Dict[str, type]] = {}
    layout: ClassVar[Optional[str]] = None

    def __init_subclass__(cls, layout_name=None, abstract=False, **kwargs):
        super().__init_subclass__(**kwargs)
        if abstract:
            return
        elif layout_name is None:
            raise TypeError(
                f"{cls.__name__} does not specify the required class parameter"
                " 'layout_name'"
            )
        cls.layout = layout_name
        cls._supported_layouts[layout_name] = cls

    def __init__(self, prefix_map: Optional[Mapping[str, str]] = None):
        self.prefix_map = dict(SAVEE_PREFIXES if prefix_map is None else prefix_map)

    @classmethod
    def for_layout(cls, layout: str, **kwargs) -> "ManifestReader":
        if layout not in cls._supported_layouts:
            raise ParameterError(
                f"Unknown manifest layout '{layout}'; expected one of"
                f" {sorted(cls._supported_layouts)}"
            )
        return cls._supported_layouts[layout](**kwargs)

    @classmethod
    def layouts(cls) -> List[str]:
        return sorted(cls._supported_layouts)

    def rows(self, path: Path) -> Iterator[Tuple[str, str, str]]:
        raise NotImplementedError


class CsvManifestReader(ManifestReader, layout_name="csv"):
    """UTF-8 CSV with header `path,speaker,emotion`; relative paths resolve against the
    manifest's directory."""

    def rows(self, path: Path) -> Iterator[Tuple[str, str, str]]:
        base = path.parent
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
                raise FormatError(
                    f"'{path}': expected header {','.join(CSV_HEADER)}, got {header}"
                )
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 3:
                    log.warning(f"'{path.name}' line {lineno}: malformed row; skipping")
                    continue
                clip_path, speaker, emotion = (v.strip() for v in row)
                if not Path(clip_path).is_absolute():
                    clip_path = str(base / clip_path)
                yield clip_path, speaker, emotion


class SaveeDirsReader(ManifestReader, layout_name="savee_dirs"):
    """One directory per speaker; the file name prefix encodes the emotion."""

    _STEM = re.compile(r"^([a-z]+)\d+$")

    def rows(self, path: Path) -> Iterator[Tuple[str, str, str]]:
        if not path.is_dir():
            raise FormatError(f"'{path}' is not a directory")
        for speaker_dir in sorted(p for p in path.iterdir() if p.is_dir()):
            for wav in sorted(speaker_dir.glob("*.wav")):
                match = self._STEM.match(wav.stem.lower())
                code = match.group(1) if match else wav.stem
                emotion = self.prefix_map.get(code, code)
                yield str(wav), speaker_dir.name, emotion


def load_manifest(
    path: Union[str, Path],
    layout: str = "csv",
    prefix_map: Optional[Mapping[str, str]] = None,
) -> DatasetManifest:
    """Read a labelled utterance inventory.

    Rows labelled `neutral` or with an unparseable emotion are skipped, not rejected;
    the number skipped and the per-speaker counts are logged.

    Args:
        path: CSV file (`csv`) or dataset root directory (`savee_dirs`).
        layout: Registered layout name.
        prefix_map: File-name prefix to emotion mapping for `savee_dirs`.

    Raises:
        EmptyManifestError: If no valid entries remain.
        DuplicateEntryError: If a path occurs twice.
    """
    path = Path(path)
    reader = ManifestReader.for_layout(layout, prefix_map=prefix_map)
    entries, skipped = [], 0
    for clip_path, speaker, emotion_text in reader.rows(path):
        emotion = Emotion.parse(emotion_text)
        if emotion is None or not speaker:
            skipped += 1
            continue
        entries.append(ManifestEntry(clip_path, speaker, emotion))
    if skipped:
        log.warning(f"Skipped {skipped} neutral or unlabelled entries in '{path.name}'")
    manifest = DatasetManifest(entries)
    counts = ", ".join(f"{s}={n}" for s, n in manifest.speaker_counts().items())
    log.info(f"Loaded {len(manifest)} entries from '{path.name}' ({counts})")
    return manifest
