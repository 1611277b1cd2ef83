"""Indicator keyword sets: seed keywords, synonym expansion, stemmed matching.

Each indicator is scored against a keyword set built in two steps: the seed
keywords are widened with single-word synonyms from a synset file, then the
widened set is reduced to stems, which is what matching looks for in tweets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import RadriskError
from .textprep import stem_token

logger = logging.getLogger(__name__)


class Indicator(str, Enum):
    I1_SWEAR = "I1_SWEAR"
    I1_NEGATIVE = "I1_NEGATIVE"
    I3_DISCRIMINATION = "I3_DISCRIMINATION"
    I4_ANTI_WESTERN = "I4_ANTI_WESTERN"
    I5_PRO_JIHAD = "I5_PRO_JIHAD"


# Seed keywords per indicator. "US" lowercases to "us", which collides with
# the pronoun; it is kept as-is and documented as a known noise source.
_BASE_KEYWORDS: dict[Indicator, tuple[str, ...]] = {
    Indicator.I1_SWEAR: ("shit", "crap", "damn", "fuck"),
    Indicator.I1_NEGATIVE: (
        "hate", "guilt", "shame", "terrible", "horrible", "bad", "fault",
    ),
    Indicator.I3_DISCRIMINATION: (
        "muslim", "sick", "hate", "discrimination", "people", "racism",
        "religion",
    ),
    Indicator.I4_ANTI_WESTERN: (
        "western", "hate", "suck", "people", "west", "europe", "usa", "us",
        "bloody", "sick", "impure", "kuffar", "kafir",
    ),
    Indicator.I5_PRO_JIHAD: (
        "islamic", "state", "caliphate", "rise", "mujahideen", "mujahid",
        "help", "fight", "weapon", "gun", "weapons",
    ),
}

_OVERRIDE_FILENAMES = {ind: f"{ind.value.lower()}.txt" for ind in Indicator}


class LexiconError(RadriskError):
    pass


@dataclass(frozen=True)
class KeywordSet:
    """An indicator's keywords at some stage of the expand-then-stem pipeline."""

    indicator_id: Indicator
    base_keywords: tuple[str, ...]
    expanded_keywords: tuple[str, ...] = ()
    expanded_stems: frozenset[str] = frozenset()

    @property
    def keywords(self) -> tuple[str, ...]:
        return self.expanded_keywords or self.base_keywords


def _normalize(words: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    seen: set[str] = set()
    for w in words:
        w = w.strip().lower()
        if w and w not in seen:
            seen.add(w)
            out.append(w)
    return tuple(out)


def default_keyword_sets() -> list[KeywordSet]:
    """The five built-in keyword sets, seed keywords only."""
    return [
        KeywordSet(indicator_id=ind, base_keywords=_normalize(words))
        for ind, words in _BASE_KEYWORDS.items()
    ]


def load_synonym_lexicon(path: str | Path | None = None) -> dict[str, tuple[str, ...]]:
    """Load a synset file: one ``word: syn1, syn2, ...`` entry per line.

    Defaults to the curated snapshot shipped with the package, which keeps
    expansion deterministic and testable offline.
    """
    if path is None:
        text = (resources.files("radrisk") / "data" / "synsets.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    lexicon: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise LexiconError(f"synset file line {lineno}: expected 'word: synonyms'")
        head, _, tail = line.partition(":")
        word = head.strip().lower()
        if not word:
            raise LexiconError(f"synset file line {lineno}: empty head word")
        syns = tuple(s.strip().lower() for s in tail.split(",") if s.strip())
        lexicon[word] = tuple(dict.fromkeys(lexicon.get(word, ()) + syns))
    return lexicon


def expand_synonyms(ks: KeywordSet, synlex: Mapping[str, Iterable[str]]) -> KeywordSet:
    """Widen the base keywords with their single-word synonyms.

    Multi-word synonyms are excluded (matching is unigram based); keywords
    absent from the lexicon are kept as-is.
    """
    expanded: list[str] = list(ks.base_keywords)
    for kw in ks.base_keywords:
        for syn in synlex.get(kw, ()):
            syn = syn.strip().lower()
            if syn and not any(c.isspace() for c in syn):
                expanded.append(syn)
    return replace(ks, expanded_keywords=_normalize(expanded))


def finalize_stems(ks: KeywordSet) -> KeywordSet:
    """Reduce the (expanded) keywords to their stem set used for matching."""
    stems = frozenset(stem_token(w) for w in ks.keywords)
    return replace(ks, expanded_keywords=ks.keywords, expanded_stems=stems)


def match_count(tokens: Iterable[str], ks: KeywordSet) -> int:
    """Number of tokens whose stem is in the keyword set's stem set."""
    stems = ks.expanded_stems
    return sum(1 for t in tokens if stem_token(t) in stems)


def load_keyword_overrides(directory: str | Path) -> list[KeywordSet]:
    """Replace defaults with per-indicator keyword files from a directory.

    A file named ``<indicator>.txt`` (e.g. ``i5_pro_jihad.txt``) holds one
    keyword per line, ``#`` comments allowed.  Indicators without a file
    keep their built-in seed keywords.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise LexiconError(f"lexicon directory not found: {directory}")
    sets = []
    for ks in default_keyword_sets():
        path = directory / _OVERRIDE_FILENAMES[ks.indicator_id]
        if path.is_file():
            words = [
                line.strip()
                for line in path.read_text("utf-8").splitlines()
                if line.strip() and not line.strip().startswith("#")
            ]
            if not words:
                raise LexiconError(f"lexicon override file is empty: {path}")
            sets.append(replace(ks, base_keywords=_normalize(words)))
            logger.info("lexicon override: %s from %s", ks.indicator_id.value, path)
        else:
            sets.append(ks)
    return sets


def build_keyword_sets(
    lexicon_dir: str | Path | None = None,
    synsets_path: str | Path | None = None,
) -> dict[Indicator, KeywordSet]:
    """Full pipeline: seeds (or overrides) -> synonym expansion -> stems."""
    sets = load_keyword_overrides(lexicon_dir) if lexicon_dir else default_keyword_sets()
    synlex = load_synonym_lexicon(synsets_path)
    return {
        ks.indicator_id: finalize_stems(expand_synonyms(ks, synlex))
        for ks in sets
    }
