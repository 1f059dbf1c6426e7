"""Porter suffix-stripping stemmer (original 1980 rule tables).

Implements the five-step algorithm exactly as published: within a step
the longest matching suffix wins, its condition is then tested, and on
failure no other rule in that step fires.  Words of length one or two
are returned unchanged.

A single pass is not idempotent ("agreed" -> "agree" -> "agre"), so
``stem`` iterates to a fixed point; ``stem_once`` exposes one pass.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    c = word[i]
    if c in _VOWELS:
        return False
    if c == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-to-consonant transitions ([C](VC)^m[V])."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        if _is_consonant(stem, i):
            if prev_vowel:
                m += 1
            prev_vowel = False
        else:
            prev_vowel = True
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (len(word) >= 2 and word[-1] == word[-2]
            and _is_consonant(word, len(word) - 1))


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    return (_is_consonant(word, len(word) - 3)
            and not _is_consonant(word, len(word) - 2)
            and _is_consonant(word, len(word) - 1)
            and word[-1] not in "wxy")


def _longest_rule(word: str, rules):
    best = None
    for suffix, replacement, condition in rules:
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, replacement, condition)
    return best


def _apply_step(word: str, rules) -> str:
    rule = _longest_rule(word, rules)
    if rule is None:
        return word
    suffix, replacement, condition = rule
    stem = word[: len(word) - len(suffix)]
    if condition is None or condition(stem):
        return stem + replacement
    return word


def _step_1ab(word: str) -> str:
    # Step 1a
    word = _apply_step(word, [
        ("sses", "ss", None),
        ("ies", "i", None),
        ("ss", "ss", None),
        ("s", "", None),
    ])
    # Step 1b
    if word.endswith("eed"):
        stem = word[:-3]
        if _measure(stem) > 0:
            word = stem + "ee"
        return word
    removed = False
    if word.endswith("ed") and _contains_vowel(word[:-2]):
        word = word[:-2]
        removed = True
    elif word.endswith("ing") and _contains_vowel(word[:-3]):
        word = word[:-3]
        removed = True
    if removed:
        if word.endswith(("at", "bl", "iz")):
            word = word + "e"
        elif _ends_double_consonant(word) and word[-1] not in "lsz":
            word = word[:-1]
        elif _measure(word) == 1 and _ends_cvc(word):
            word = word + "e"
    return word


def _step_1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


_M_POSITIVE = lambda stem: _measure(stem) > 0  # noqa: E731

_STEP2_RULES = [
    ("ational", "ate", _M_POSITIVE),
    ("tional", "tion", _M_POSITIVE),
    ("enci", "ence", _M_POSITIVE),
    ("anci", "ance", _M_POSITIVE),
    ("izer", "ize", _M_POSITIVE),
    ("abli", "able", _M_POSITIVE),
    ("alli", "al", _M_POSITIVE),
    ("entli", "ent", _M_POSITIVE),
    ("eli", "e", _M_POSITIVE),
    ("ousli", "ous", _M_POSITIVE),
    ("ization", "ize", _M_POSITIVE),
    ("ation", "ate", _M_POSITIVE),
    ("ator", "ate", _M_POSITIVE),
    ("alism", "al", _M_POSITIVE),
    ("iveness", "ive", _M_POSITIVE),
    ("fulness", "ful", _M_POSITIVE),
    ("ousness", "ous", _M_POSITIVE),
    ("aliti", "al", _M_POSITIVE),
    ("iviti", "ive", _M_POSITIVE),
    ("biliti", "ble", _M_POSITIVE),
]

_STEP3_RULES = [
    ("icate", "ic", _M_POSITIVE),
    ("ative", "", _M_POSITIVE),
    ("alize", "al", _M_POSITIVE),
    ("iciti", "ic", _M_POSITIVE),
    ("ical", "ic", _M_POSITIVE),
    ("ful", "", _M_POSITIVE),
    ("ness", "", _M_POSITIVE),
]

_M_GT1 = lambda stem: _measure(stem) > 1  # noqa: E731

_STEP4_RULES = [
    ("al", "", _M_GT1),
    ("ance", "", _M_GT1),
    ("ence", "", _M_GT1),
    ("er", "", _M_GT1),
    ("ic", "", _M_GT1),
    ("able", "", _M_GT1),
    ("ible", "", _M_GT1),
    ("ant", "", _M_GT1),
    ("ement", "", _M_GT1),
    ("ment", "", _M_GT1),
    ("ent", "", _M_GT1),
    ("ion", "", lambda stem: _M_GT1(stem) and stem.endswith(("s", "t"))),
    ("ou", "", _M_GT1),
    ("ism", "", _M_GT1),
    ("ate", "", _M_GT1),
    ("iti", "", _M_GT1),
    ("ous", "", _M_GT1),
    ("ive", "", _M_GT1),
    ("ize", "", _M_GT1),
]


def _step_5a(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            return stem
    return word


def _step_5b(word: str) -> str:
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        return word[:-1]
    return word


def stem_once(word: str) -> str:
    """One pass of the five Porter steps over a lowercase word."""
    if len(word) <= 2:
        return word
    word = _step_1ab(word)
    word = _step_1c(word)
    word = _apply_step(word, _STEP2_RULES)
    word = _apply_step(word, _STEP3_RULES)
    word = _apply_step(word, _STEP4_RULES)
    word = _step_5a(word)
    word = _step_5b(word)
    return word


def stem(word: str, max_passes: int = 20) -> str:
    """Stem to a fixed point so stemming is idempotent."""
    for _ in range(max_passes):
        out = stem_once(word)
        if out == word:
            return out
        word = out
    return word
