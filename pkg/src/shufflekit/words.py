"""Words are tuples of symbol tokens.

A symbol is a non-empty string.  Plain Python strings are accepted anywhere a
word is expected and are split into single-character symbols; sequences of
tokens are taken as-is, so multi-character symbols are possible but must be
passed as lists/tuples.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import InputError

Word = tuple[str, ...]

# Reserved tokens.  EPSILON marks spontaneous automaton moves, END_MARKER the
# right input end-marker of counter machines.  Neither may appear in an
# alphabet or a word.
EPSILON = "<eps>"
END_MARKER = "<end>"
RESERVED = frozenset({EPSILON, END_MARKER})


def as_word(w: str | Iterable[str]) -> Word:
    """Normalise ``w`` to a tuple of symbol tokens."""
    if isinstance(w, str):
        word = tuple(w)
    else:
        word = tuple(w)
    for sym in word:
        if not isinstance(sym, str) or not sym:
            raise InputError(f"bad symbol {sym!r} in word")
        if sym in RESERVED:
            raise InputError(f"reserved token {sym!r} may not appear in a word")
    return word


def fmt_word(w: Word) -> str:
    """Render a word compactly: plain string when all symbols are one char."""
    if all(len(s) == 1 for s in w):
        return "".join(w)
    return "[" + ",".join(w) + "]"


def check_alphabet(alphabet: Iterable[str]) -> tuple[str, ...]:
    """Validate an ordered alphabet: non-empty unique tokens, no reserved ones."""
    alpha = tuple(alphabet)
    seen = set()
    for sym in alpha:
        if not isinstance(sym, str) or not sym:
            raise InputError(f"bad alphabet symbol {sym!r}")
        if sym in RESERVED:
            raise InputError(f"reserved token {sym!r} may not be declared in an alphabet")
        if sym in seen:
            raise InputError(f"duplicate alphabet symbol {sym!r}")
        seen.add(sym)
    return alpha


def merge_alphabets(*alphabets: Iterable[str]) -> tuple[str, ...]:
    """Ordered union: first alphabet's order, then new symbols in sorted order."""
    out: list[str] = []
    seen: set[str] = set()
    extra: set[str] = set()
    for i, alpha in enumerate(alphabets):
        for sym in alpha:
            if sym in seen:
                continue
            if i == 0:
                out.append(sym)
                seen.add(sym)
            else:
                extra.add(sym)
    out.extend(sorted(extra - seen))
    return check_alphabet(out)
