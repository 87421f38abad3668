"""Shuffle constructions on words and regular languages.

The shuffle of two words is the set of all interleavings that preserve each
word's internal order; on languages it is the union over all word pairs.
``enumerate_shuffle`` is the brute-force oracle the test suite leans on.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import ResourceLimitError
from .fa import Nfa, on_common_alphabet
from .words import EPSILON, Word, as_word, merge_alphabets

DEFAULT_ENUMERATION_BOUND = 16


def grid_state(i: int, j: int) -> str:
    return f"({i},{j})"


def naive_shuffle_nfa(
    u: str | Iterable[str],
    v: str | Iterable[str],
    alphabet: Iterable[str] | None = None,
) -> Nfa:
    """The (|u|+1)(|v|+1)-state grid automaton accepting the shuffle of u and v.

    State (i,j) records how much of each word has been consumed; each move
    advances exactly one coordinate on that word's next symbol.
    """
    wu, wv = as_word(u), as_word(v)
    if alphabet is None:
        alpha = merge_alphabets(wu, wv)
    else:
        alpha = merge_alphabets(alphabet, wu, wv)
    states = [grid_state(i, j) for i in range(len(wu) + 1) for j in range(len(wv) + 1)]
    transitions: dict[tuple[str, str], set[str]] = {}
    for i in range(len(wu) + 1):
        for j in range(len(wv) + 1):
            if i < len(wu):
                transitions.setdefault((grid_state(i, j), wu[i]), set()).add(grid_state(i + 1, j))
            if j < len(wv):
                transitions.setdefault((grid_state(i, j), wv[j]), set()).add(grid_state(i, j + 1))
    return Nfa(alpha, states, grid_state(0, 0), {grid_state(len(wu), len(wv))}, transitions)


def is_dfa_when_disjoint(u: str | Iterable[str], v: str | Iterable[str]) -> bool:
    """True iff the two words share no symbol, making the naive automaton a DFA."""
    return not (set(as_word(u)) & set(as_word(v)))


def word_in_shuffle(
    w: str | Iterable[str], u: str | Iterable[str], v: str | Iterable[str]
) -> bool:
    """Membership of ``w`` in the shuffle of ``u`` and ``v``.

    Dynamic programming over reachable grid states; the row of reachable
    v-positions for each u-position is kept as a bitmask, so the whole test is
    O(|w|*|u|) word operations.
    """
    ww, wu, wv = as_word(w), as_word(u), as_word(v)
    if len(ww) != len(wu) + len(wv):
        return False
    lu, lv = len(wu), len(wv)
    vmask: dict[str, int] = {}
    for j, sym in enumerate(wv):
        vmask[sym] = vmask.get(sym, 0) | (1 << j)
    # masks[i] = bitmask over j: prefix consumed so far splits into u[:i], v[:j]
    masks = [1] + [0] * lu
    for sym in ww:
        new = [0] * (lu + 1)
        vm = vmask.get(sym, 0)
        for i in range(lu + 1):
            row = masks[i]
            if not row:
                continue
            if i < lu and wu[i] == sym:
                new[i + 1] |= row
            new[i] |= (row & vm) << 1
        masks = new
        if not any(masks):
            return False
    return bool(masks[lu] & (1 << lv))


def shuffle_nfas(m1: Nfa, m2: Nfa) -> Nfa:
    """Automaton for the shuffle of two regular languages.

    Pair states; every transition advances exactly one coordinate on the
    consumed symbol, and epsilon moves advance one coordinate silently.
    Alphabets are padded to their union first.
    """
    m1, m2 = on_common_alphabet(m1, m2)

    def name(p: str, q: str) -> str:
        return f"({p}|{q})"

    states = [name(p, q) for p in m1.states for q in m2.states]
    transitions: dict[tuple[str, str], set[str]] = {}
    for (src, sym), dsts in m1.transitions.items():
        for q in m2.states:
            transitions.setdefault((name(src, q), sym), set()).update(name(d, q) for d in dsts)
    for (src, sym), dsts in m2.transitions.items():
        for p in m1.states:
            transitions.setdefault((name(p, src), sym), set()).update(name(p, d) for d in dsts)
    finals = {name(p, q) for p in m1.finals for q in m2.finals}
    return Nfa(m1.alphabet, states, name(m1.start, m2.start), finals, transitions)


def enumerate_shuffle(
    u: str | Iterable[str],
    v: str | Iterable[str],
    bound: int = DEFAULT_ENUMERATION_BOUND,
) -> set[Word]:
    """The exact shuffle set, by memoised recursive interleaving.

    Distinct interleavings that spell the same word collapse: the shuffle is a
    set of words.  Guarded by ``bound`` on the combined length.
    """
    wu, wv = as_word(u), as_word(v)
    if len(wu) + len(wv) > bound:
        raise ResourceLimitError(
            f"combined length {len(wu) + len(wv)} exceeds enumeration bound {bound}"
        )
    memo: dict[tuple[int, int], set[Word]] = {}

    def rec(i: int, j: int) -> set[Word]:
        key = (i, j)
        if key in memo:
            return memo[key]
        if i == len(wu) and j == len(wv):
            out: set[Word] = {()}
        else:
            out = set()
            if i < len(wu):
                out |= {(wu[i],) + rest for rest in rec(i + 1, j)}
            if j < len(wv):
                out |= {(wv[j],) + rest for rest in rec(i, j + 1)}
        memo[key] = out
        return out

    return rec(0, 0)
