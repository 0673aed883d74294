import enum
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ..audio.manifest import DatasetManifest, ManifestEntry
from ..emotion import Emotion
from ..errors import DataError
from ..pipeline.vector import FeatureVector


class FeatureRecord(NamedTuple):
    path: str
    speaker: str
    emotion: Emotion
    vector: FeatureVector


Extractor = Callable[[ManifestEntry], FeatureVector]


class FeatureDepot:
    """Feature-record loader, speaker organiser and usage status tracker.

    Records are grouped by speaker, and retrieval from the depot can be constrained by
    speaker or usage status.

    The depot keeps FeatureDepot.Status usage records for every manifest entry it was
    asked to load, including those whose extraction failed. A record's status is
    automatically updated when it is selected for retrieval, but clients can also
    manually update it, e.g. to reflect that it was used for training or testing. A
    summary of the usage statuses can be generated, e.g. for logging purposes.

    Attributes:
        speakers: Sorted identifiers of the speakers loaded into the depot.
        Status: Enum used to mark the usage status of records in the depot.
    """

    class Status(enum.Enum):
        loaded = enum.auto()
        retrieved = enum.auto()
        processed = enum.auto()
        failed = enum.auto()

        def __str__(self):
            return self.name

    def __init__(self):
        self._log = logging.getLogger(__name__)
        self._records: Dict[str, List[FeatureRecord]] = defaultdict(list)
        self._usage: Dict[str, Dict[str, FeatureDepot.Status]] = defaultdict(dict)

    @property
    def speakers(self) -> List[str]:
        return sorted(self._usage.keys())

    def load(
        self,
        manifest: Union[DatasetManifest, Iterable[ManifestEntry]],
        extractor: Extractor,
        workers: int = 1,
    ) -> int:
        """Extract and load a feature record for every manifest entry.

        Entries whose extraction raises a data or I/O error are marked
        Status.failed with a warning. Entries whose path is already in the depot are
        ignored with a warning.

        Args:
            manifest: Entries to load, in order.
            extractor: Computes the feature vector of one entry.
            workers: Number of extraction threads; results keep manifest order.

        Returns:
            The number of records successfully loaded.
        """
        entries = list(manifest)
        fresh = []
        for entry in entries:
            if entry.path in self._usage[entry.speaker]:
                self._log.warning(f"'{entry.path}' already loaded; ignoring")
                continue
            fresh.append(entry)

        def attempt(entry: ManifestEntry) -> Tuple[ManifestEntry, object]:
            try:
                return entry, extractor(entry)
            except (DataError, OSError) as e:
                return entry, e

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(attempt, fresh))
        else:
            results = [attempt(e) for e in fresh]

        num_loaded = 0
        for entry, outcome in results:
            if isinstance(outcome, Exception):
                self._log.warning(f"'{entry.path}': {outcome}; ignoring")
                self._usage[entry.speaker][entry.path] = self.Status.failed
                continue
            self.add(FeatureRecord(entry.path, entry.speaker, entry.emotion, outcome))
            num_loaded += 1
        return num_loaded

    def add(self, record: FeatureRecord) -> bool:
        """Load a single precomputed record; duplicates are ignored with a warning."""
        usage = self._usage[record.speaker]
        if record.path in usage:
            self._log.warning(f"'{record.path}' already loaded; ignoring")
            return False
        self._records[record.speaker].append(record)
        usage[record.path] = self.Status.loaded
        return True

    def retrieve(
        self,
        speaker: Optional[str] = None,
        usage_status: Optional[Union[Status, Sequence[Optional[Status]]]] = None,
    ) -> Union[List[FeatureRecord], Dict[str, List[FeatureRecord]]]:
        """Retrieve records, optionally of one speaker or with given usage statuses.

        Returned records with usage Status.loaded will automatically have this updated
        to Status.retrieved.

        Args:
            speaker: Restrict the retrieval to records of one speaker.
            usage_status: Only consider records with a given usage status or statuses.

        Returns:
            A list of records in load order if `speaker` is given, else a dictionary
            mapping each speaker to its list of records.

        Raises:
            KeyError: If the depot has never been loaded with entries of `speaker`.
            TypeError: In the event that `usage_status` is not a member of Status
                (or a Sequence thereof).
        """
        if speaker is not None:
            self._ensure_loaded(speaker)
        if usage_status is not None:
            if not isinstance(usage_status, Sequence):
                usage_status = [usage_status]
            for _us in usage_status:
                self._ensure_valid(_us)
        selection = defaultdict(list)
        for spk in [speaker] if speaker is not None else self.speakers:
            for record in self._records[spk]:
                status = self._usage[spk][record.path]
                if usage_status is not None and status not in usage_status:
                    continue
                if status == self.Status.loaded:
                    self._usage[spk][record.path] = self.Status.retrieved
                selection[spk].append(record)
        return selection if speaker is None else selection[speaker]

    def labelled(self, speakers: Iterable[str]) -> List[Tuple[FeatureVector, Emotion]]:
        """(vector, emotion) pairs of the given speakers' records, in speaker order."""
        pairs = []
        for speaker in sorted(set(speakers)):
            pairs.extend((r.vector, r.emotion) for r in self.retrieve(speaker))
        return pairs

    def mark(self, record: FeatureRecord, usage_status: Status) -> bool:
        """Assign a `usage_status` to a `record`.

        Returns:
            True if `record` is found and marked, else False.

        Raises:
            KeyError: If the depot has never been loaded with entries of the record's
                speaker.
            TypeError: In the event that `usage_status` is not a member of Status.
        """
        self._ensure_loaded(record.speaker)
        if record.path not in self._usage[record.speaker]:
            return False
        self._ensure_valid(usage_status)
        self._usage[record.speaker][record.path] = usage_status
        return True

    def count(
        self, speaker: Optional[str] = None, usage_status: Optional[Status] = None
    ) -> int:
        """Return the number of entries of a speaker (or all) with a usage status.

        Raises:
            KeyError: If the depot has never been loaded with entries of `speaker`.
            TypeError: In the event that `usage_status` is not a member of Status.
        """
        if speaker is not None:
            self._ensure_loaded(speaker)
        if usage_status is not None:
            self._ensure_valid(usage_status)
        total = 0
        for spk in [speaker] if speaker is not None else self.speakers:
            statuses = self._usage[spk].values()
            if usage_status is None:
                total += len(statuses)
            else:
                total += sum(1 for s in statuses if s == usage_status)
        return total

    def usage_summary(
        self, speaker: Optional[str] = None
    ) -> Union[Dict[Status, List[str]], Dict[str, Dict[Status, List[str]]]]:
        """Map usage statuses to entry paths, for one speaker or per speaker.

        Raises:
            KeyError: If the depot has never been loaded with entries of `speaker`.
        """
        if speaker is not None:
            self._ensure_loaded(speaker)
        summary = defaultdict(lambda: defaultdict(list))
        for spk in [speaker] if speaker is not None else self.speakers:
            for path, status in self._usage[spk].items():
                summary[spk][status].append(path)
        return summary if speaker is None else summary[speaker]  # type: ignore

    def _ensure_loaded(self, speaker: str):
        if speaker not in self._usage:
            raise KeyError(f"Depot has not been loaded with any entries of '{speaker}'")

    def _ensure_valid(self, usage_status: object):
        if not isinstance(usage_status, FeatureDepot.Status):
            raise TypeError(
                f"usage status '{usage_status}' is not a member of FeatureDepot.Status"
            )
