import enum
from typing import Optional


class Emotion(str, enum.Enum):
    """The six emotion categories; neutral is deliberately not a member."""

    angry = "angry"
    disgust = "disgust"
    fear = "fear"
    happy = "happy"
    sad = "sad"
    surprise = "surprise"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> Optional["Emotion"]:
        """Return the member named by `text` (case-insensitive), else None."""
        try:
            return cls(text.strip().lower())
        except ValueError:
            return None


EMOTIONS = tuple(Emotion)
