"""On-disk feature-vector cache.

A cache is a CSV table with columns `path,speaker,emotion,key` followed by the feature
names of layout v1. The key combines the md5 of the audio file bytes with the md5 of the
extraction settings, so edited files or changed settings miss the cache instead of
serving stale vectors.
"""
import csv
import logging
from pathlib import Path
from typing import Dict, Mapping, Optional, Tuple, Union

from ..errors import FormatError
from ..util import atomic_write, get_md5sum, get_text_md5
from .vector import SCREEN_FEATURES, FeatureVector, feature_names

log = logging.getLogger(__name__)

KEY_COLUMNS = ("path", "speaker", "emotion", "key")


def settings_digest(settings: Mapping[str, str]) -> str:
    return get_text_md5("\n".join(f"{k}={v}" for k, v in sorted(settings.items())))


class FeatureCache:
    """Feature vectors keyed by audio path, valid for one set of extraction settings."""

    def __init__(self, path: Union[str, Path], settings: Mapping[str, str]):
        self.path = Path(path)
        self.settings_digest = settings_digest(settings)
        self._rows: Dict[str, Tuple[str, str, str, FeatureVector]] = {}
        self._dirty = False
        self._log = logging.getLogger(f"{__name__}.{type(self).__name__}")
        if self.path.exists():
            self._read()

    def __len__(self) -> int:
        return len(self._rows)

    def key_for(self, audio_path: Union[str, Path]) -> str:
        return f"{get_md5sum(Path(audio_path))}-{self.settings_digest}"

    def get(self, audio_path: Union[str, Path]) -> Optional[FeatureVector]:
        row = self._rows.get(str(audio_path))
        if row is None:
            return None
        try:
            key = self.key_for(audio_path)
        except OSError:
            return None
        return row[3] if row[2] == key else None

    def put(
        self,
        audio_path: Union[str, Path],
        speaker: str,
        emotion: str,
        vector: FeatureVector,
    ):
        self._rows[str(audio_path)] = (
            speaker,
            emotion,
            self.key_for(audio_path),
            vector,
        )
        self._dirty = True

    def save(self) -> Path:
        """Write the table if anything changed; rows are sorted by path."""
        if not self._dirty:
            return self.path
        levels = {row[3].levels for row in self._rows.values()}
        if len(levels) > 1:
            raise FormatError(f"Cannot cache vectors of mixed depths {sorted(levels)}")
        names = feature_names(levels.pop()) if levels else []
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with atomic_write(self.path, newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow((*KEY_COLUMNS, *names))
            for audio_path in sorted(self._rows):
                speaker, emotion, key, vector = self._rows[audio_path]
                writer.writerow(
                    (
                        audio_path,
                        speaker,
                        emotion,
                        key,
                        *(repr(float(x)) for x in vector.as_array()),
                    )
                )
        self._dirty = False
        self._log.info(f"Wrote {len(self._rows)} feature vector(s) to '{self.path}'")
        return self.path

    def _read(self):
        with open(self.path, encoding="utf-8", newline="") as f:
            rows = list(csv.reader(f))
        if not rows:
            return
        header = rows[0]
        n_features = len(header) - len(KEY_COLUMNS)
        levels = (n_features - len(SCREEN_FEATURES) - 1) // 2
        expected = [*KEY_COLUMNS, *feature_names(levels)]
        if header != expected:
            self._log.warning(f"'{self.path}' is not a feature cache; ignoring it")
            return
        n_fd = 2 * levels + 1
        for lineno, row in enumerate(rows[1:], start=2):
            try:
                values = [float(x) for x in row[len(KEY_COLUMNS) :]]
                vector = FeatureVector(
                    fd_features=values[:n_fd],
                    screen_features=values[n_fd:],
                    levels=levels,
                )
            except (ValueError, FormatError) as e:
                self._log.warning(f"'{self.path}' line {lineno}: {e}; ignoring")
                continue
            self._rows[row[0]] = (row[1], row[2], row[3], vector)
        self._log.debug(f"Loaded {len(self._rows)} cached vector(s) from '{self.path}'")
