"""Classic English suffix-stripping stemmer.

Implements the five-step suffix-stripping algorithm in its canonical form,
i.e. with the long-established refinements of the reference distribution:
words of one or two letters are left untouched, ``bli`` is treated as a
suffix in step 2 (rather than ``abli``), and the ``logi -> log`` rule keeps
the ``l`` with the stem.  Input is expected to be a lowercase run of ASCII
letters; anything else should be filtered by the caller.
"""

from __future__ import annotations

_VOWELS = frozenset("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a consonant at the start of the word, otherwise it is a
        # consonant exactly when the previous letter is not.
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-to-consonant transitions, m in [C](VC){m}[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        cons = _is_consonant(stem, i)
        if cons and prev_vowel:
            m += 1
        prev_vowel = not cons
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # Final consonant-vowel-consonant, where the last consonant is not
    # w, x or y; used to decide whether to restore a trailing e.
    return (
        len(word) >= 3
        and _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _first_rule(word: str, rules) -> str:
    """Apply the first rule whose suffix matches.

    Once a suffix matches, its condition decides the outcome; shorter
    suffixes further down the list are never consulted (longest-match
    semantics, with lists ordered so that overlapping suffixes come
    longest first).
    """
    for suffix, replacement, condition in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if condition is None or condition(stem):
                return stem + replacement
            return word
    return word


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _has_vowel(stem):
                return _step1b_cleanup(stem)
            return word
    return word


def _step1b_cleanup(stem: str) -> str:
    # Runs only when an -ed or -ing suffix was actually removed.
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _positive_measure(stem: str) -> bool:
    return _measure(stem) > 0


def _step2(word: str) -> str:
    rules = [
        ("ational", "ate", _positive_measure),
        ("tional", "tion", _positive_measure),
        ("enci", "ence", _positive_measure),
        ("anci", "ance", _positive_measure),
        ("izer", "ize", _positive_measure),
        ("bli", "ble", _positive_measure),
        ("alli", "al", _positive_measure),
        ("entli", "ent", _positive_measure),
        ("eli", "e", _positive_measure),
        ("ousli", "ous", _positive_measure),
        ("ization", "ize", _positive_measure),
        ("ation", "ate", _positive_measure),
        ("ator", "ate", _positive_measure),
        ("alism", "al", _positive_measure),
        ("iveness", "ive", _positive_measure),
        ("fulness", "ful", _positive_measure),
        ("ousness", "ous", _positive_measure),
        ("aliti", "al", _positive_measure),
        ("iviti", "ive", _positive_measure),
        ("biliti", "ble", _positive_measure),
        # The l belongs with the stem here, so short stems such as geo-
        # behave like longer ones such as archaeo-.
        ("logi", "log", lambda stem: _measure(word[:-3]) > 0),
    ]
    return _first_rule(word, rules)


def _step3(word: str) -> str:
    rules = [
        ("icate", "ic", _positive_measure),
        ("ative", "", _positive_measure),
        ("alize", "al", _positive_measure),
        ("iciti", "ic", _positive_measure),
        ("ical", "ic", _positive_measure),
        ("ful", "", _positive_measure),
        ("ness", "", _positive_measure),
    ]
    return _first_rule(word, rules)


def _measure_gt1(stem: str) -> bool:
    return _measure(stem) > 1


def _step4(word: str) -> str:
    rules = [
        ("al", "", _measure_gt1),
        ("ance", "", _measure_gt1),
        ("ence", "", _measure_gt1),
        ("er", "", _measure_gt1),
        ("ic", "", _measure_gt1),
        ("able", "", _measure_gt1),
        ("ible", "", _measure_gt1),
        ("ant", "", _measure_gt1),
        ("ement", "", _measure_gt1),
        ("ment", "", _measure_gt1),
        ("ent", "", _measure_gt1),
        ("ion", "", lambda stem: _measure(stem) > 1 and stem[-1:] in ("s", "t")),
        ("ou", "", _measure_gt1),
        ("ism", "", _measure_gt1),
        ("ate", "", _measure_gt1),
        ("iti", "", _measure_gt1),
        ("ous", "", _measure_gt1),
        ("ive", "", _measure_gt1),
        ("ize", "", _measure_gt1),
    ]
    return _first_rule(word, rules)


def _step5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step5b(word: str) -> str:
    if word.endswith("ll") and _measure(word) > 1:
        return word[:-1]
    return word


def stem(word: str) -> str:
    """Stem a single lowercase ASCII-alphabetic word."""
    word = word.lower()
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _step2(word)
    word = _step3(word)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word
