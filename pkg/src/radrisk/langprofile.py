"""Coarse writing-language profiling via Unicode script detection.

Full language identification is out of scope (script != language: it cannot
split Russian from Bulgarian, or US from UK English).  Script-level counts
are enough to show when a corpus is dominated by non-Latin writing, which
is the failure mode that matters for English keyword lexicons.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import textprep
from .corpus import Dataset

# Codepoint ranges for the major scripts, most-specific lookup first.
_SCRIPT_RANGES: dict[str, tuple[tuple[int, int], ...]] = {
    "Latin": (
        (0x0041, 0x005A),
        (0x0061, 0x007A),
        (0x00C0, 0x024F),
        (0x1E00, 0x1EFF),
        (0xFF21, 0xFF3A),
        (0xFF41, 0xFF5A),
    ),
    "Arabic": (
        (0x0600, 0x06FF),
        (0x0750, 0x077F),
        (0x08A0, 0x08FF),
        (0xFB50, 0xFDFF),
        (0xFE70, 0xFEFF),
    ),
    "Cyrillic": (
        (0x0400, 0x04FF),
        (0x0500, 0x052F),
        (0x2DE0, 0x2DFF),
        (0xA640, 0xA69F),
    ),
    "Greek": ((0x0370, 0x03FF), (0x1F00, 0x1FFF)),
    "Hebrew": ((0x0590, 0x05FF),),
    "Devanagari": ((0x0900, 0x097F), (0xA8E0, 0xA8FF)),
    "Bengali": ((0x0980, 0x09FF),),
    "Tamil": ((0x0B80, 0x0BFF),),
    "Thai": ((0x0E00, 0x0E7F),),
    "Hangul": ((0xAC00, 0xD7AF), (0x1100, 0x11FF), (0x3130, 0x318F)),
    "Hiragana": ((0x3040, 0x309F),),
    "Katakana": ((0x30A0, 0x30FF), (0xFF65, 0xFF9F)),
    "Han": ((0x4E00, 0x9FFF), (0x3400, 0x4DBF), (0xF900, 0xFAFF)),
}


@dataclass(frozen=True)
class ScriptDistribution:
    entries: dict[str, float]  # script -> percentage over classified tweets
    n_classified: int
    n_unclassified: int

    @property
    def is_empty(self) -> bool:
        return self.n_classified == 0


def _script_of(ch: str) -> str | None:
    cp = ord(ch)
    for script, ranges in _SCRIPT_RANGES.items():
        for lo, hi in ranges:
            if lo <= cp <= hi:
                return script
    return None


def classify_script(text) -> str | None:
    """Majority Unicode script among alphabetic characters, or None.

    Ties and texts without alphabetic characters are unclassified.
    Digits and punctuation never influence the result.
    """
    if hasattr(text, "text"):
        text = text.text
    counts: dict[str, int] = {}
    for ch in text:
        if not ch.isalpha():
            continue
        script = _script_of(ch)
        if script is not None:
            counts[script] = counts.get(script, 0) + 1
    if not counts:
        return None
    best = max(counts.values())
    winners = [s for s, c in counts.items() if c == best]
    if len(winners) != 1:
        return None
    return winners[0]


def script_distribution(ds: Dataset) -> ScriptDistribution:
    """Per-tweet script classification aggregated to percentages.

    Tweets are cleaned first so URLs do not inflate the Latin share;
    percentages are taken over classified tweets and sorted descending.
    """
    counts: dict[str, int] = {}
    unclassified = 0
    for user in ds.users:
        for tweet in user.tweets:
            script = classify_script(textprep.clean_message(tweet.text))
            if script is None:
                unclassified += 1
            else:
                counts[script] = counts.get(script, 0) + 1
    classified = sum(counts.values())
    if classified == 0:
        return ScriptDistribution(entries={}, n_classified=0, n_unclassified=unclassified)
    entries = {
        script: 100.0 * count / classified
        for script, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    }
    return ScriptDistribution(
        entries=entries, n_classified=classified, n_unclassified=unclassified
    )
