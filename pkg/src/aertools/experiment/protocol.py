"""Speaker-disjoint train/test splits."""
import dataclasses
import enum
import itertools
import logging
from typing import FrozenSet, Iterable, List, Sequence, Union

from ..audio.manifest import DatasetManifest
from ..errors import ProtocolError

log = logging.getLogger(__name__)


class SplitKind(str, enum.Enum):
    one_vs_three = "one_vs_three"
    two_vs_two = "two_vs_two"
    custom = "custom"

    def __str__(self):
        return self.value


# fewest speakers that leave both sides of every split non-empty
MIN_SPEAKERS = {SplitKind.one_vs_three: 2, SplitKind.two_vs_two: 3}


@dataclasses.dataclass(frozen=True)
class SplitProtocol:
    kind: SplitKind
    train_speakers: FrozenSet[str]
    test_speakers: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, "train_speakers", frozenset(self.train_speakers))
        object.__setattr__(self, "test_speakers", frozenset(self.test_speakers))
        if not self.train_speakers or not self.test_speakers:
            raise ProtocolError("Train and test speaker sets must both be non-empty")
        if self.train_speakers & self.test_speakers:
            raise ProtocolError(
                "Speakers "
                f"{sorted(self.train_speakers & self.test_speakers)} appear on both"
                " sides of the split"
            )

    def __str__(self):
        return f"train={'+'.join(sorted(self.train_speakers))}"

    def check(self, manifest: DatasetManifest):
        """Raise ProtocolError unless every referenced speaker is in `manifest`."""
        unknown = (self.train_speakers | self.test_speakers) - set(manifest.speakers)
        if unknown:
            raise ProtocolError(f"Speakers {sorted(unknown)} are not in the manifest")


def make_splits(
    manifest: Union[DatasetManifest, Iterable[str]], kind: Union[SplitKind, str]
) -> List[SplitProtocol]:
    """All splits of a protocol, speakers taken in sorted order.

    `one_vs_three` trains on each speaker in turn and tests on the rest; `two_vs_two`
    trains on each unordered speaker pair and tests on the rest.

    Raises:
        ProtocolError: If there are too few speakers or `kind` is `custom`.
    """
    kind = SplitKind(kind)
    if isinstance(manifest, DatasetManifest):
        speakers = list(manifest.speakers)
    else:
        speakers = sorted(set(manifest))
    if kind is SplitKind.custom:
        raise ProtocolError("Custom splits are built with `custom_split`")
    if len(speakers) < MIN_SPEAKERS[kind]:
        raise ProtocolError(
            f"Protocol {kind} needs at least {MIN_SPEAKERS[kind]} speakers, got"
            f" {len(speakers)}"
        )
    group = 1 if kind is SplitKind.one_vs_three else 2
    splits = [
        SplitProtocol(kind, frozenset(train), frozenset(speakers) - frozenset(train))
        for train in itertools.combinations(speakers, group)
    ]
    log.debug(f"Protocol {kind}: {len(splits)} split(s) over {len(speakers)} speakers")
    return splits


def custom_split(
    train_speakers: Sequence[str], test_speakers: Sequence[str]
) -> SplitProtocol:
    return SplitProtocol(
        SplitKind.custom, frozenset(train_speakers), frozenset(test_speakers)
    )
