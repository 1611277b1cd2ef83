"""Message preprocessing: cleaning, tokenization, stemming, style features.

The cleaning stage strips URLs and @-mentions before any measurement, so
that style and keyword metrics see only what the user actually wrote.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from . import porter

# URLs first (they may contain '@'), then platform-style mentions.
_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@[A-Za-z0-9_]{1,15}(?![A-Za-z0-9_])")
_WS_RE = re.compile(r"\s+")

# Alphanumeric runs; underscore is a boundary like any other punctuation.
_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Terminal punctuation runs and newlines end sentences; a run of two or
# more dots is an ellipsis and stays inside its sentence.
_BOUNDARY_RE = re.compile(r"[.!?]+|\n")
_ELLIPSIS_RE = re.compile(r"\.{2,}|…")

_ASCII_WORD_RE = re.compile(r"[a-z]+\Z")

# A cleaned message is an ordinary string; the alias documents intent.
CleanText = str


@dataclass(frozen=True)
class Sentence:
    text: str
    char_length: int

    @classmethod
    def from_text(cls, text: str) -> "Sentence":
        return cls(text=text, char_length=len(text))


def _text_of(s) -> str:
    return s.text if isinstance(s, Sentence) else s


def clean_message(raw: str) -> CleanText:
    """Remove URLs and mentions, collapse whitespace, trim."""
    text = _URL_RE.sub(" ", raw)
    text = _MENTION_RE.sub(" ", text)
    text = _WS_RE.sub(" ", text)
    return text.strip()


def split_sentences(text) -> list[Sentence]:
    """Split cleaned text into sentences.

    Boundaries are runs of ``.``, ``!``, ``?`` and newlines.  A run of two
    or more dots (with no ! or ?) is an ellipsis: it is kept inside the
    sentence instead of ending it.  Boundary punctuation is consumed;
    empty fragments are dropped.
    """
    text = _text_of(text)
    sentences = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        run = m.group()
        if run != "\n" and len(run) >= 2 and set(run) == {"."}:
            continue  # ellipsis, not a boundary
        piece = text[start : m.start()].strip()
        if piece:
            sentences.append(Sentence.from_text(piece))
        start = m.end()
    piece = text[start:].strip()
    if piece:
        sentences.append(Sentence.from_text(piece))
    return sentences


def tokenize_words(s, keep_case: bool = False) -> list[str]:
    """Split a sentence (or string) on non-alphanumeric boundaries.

    Tokens are lowercased unless ``keep_case`` is set; the original-case
    forms are thereby available for capitalization analysis.
    """
    tokens = _WORD_RE.findall(_text_of(s))
    if keep_case:
        return tokens
    return [t.lower() for t in tokens]


@lru_cache(maxsize=65536)
def stem_token(token: str) -> str:
    """Stem an ASCII-alphabetic token; anything else passes through."""
    token = token.lower()
    if _ASCII_WORD_RE.match(token):
        return porter.stem(token)
    return token


def detect_ellipsis(s) -> bool:
    """True iff the sentence contains U+2026 or a run of 2+ dots."""
    return _ELLIPSIS_RE.search(_text_of(s)) is not None


def is_fully_capitalized(s) -> bool:
    """True iff the sentence has >= 3 cased letters, all uppercase."""
    cased = [ch for ch in _text_of(s) if ch.isupper() or ch.islower()]
    return len(cased) >= 3 and all(ch.isupper() for ch in cased)
