"""Three-way sentiment labels with a fixed canonical order."""

from __future__ import annotations

import enum


class SentimentLabel(enum.IntEnum):
    """Polarity class. Integer value doubles as the canonical sort/tie-break order."""

    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2

    @property
    def slug(self) -> str:
        return self.name.lower()

    @classmethod
    def parse(cls, text: str) -> "SentimentLabel | None":
        """Parse a label name; ``unknown`` and the empty string map to ``None``."""
        key = text.strip().lower()
        if key in ("", "unknown"):
            return None
        try:
            return cls[key.upper()]
        except KeyError:
            raise ValueError(f"unknown sentiment label {text!r}") from None


LABELS: tuple[SentimentLabel, ...] = tuple(SentimentLabel)
N_CLASSES = len(LABELS)


def label_slug(label: SentimentLabel | None) -> str:
    return "unknown" if label is None else label.slug
