"""
Interleaving two words
======================

The shuffle of two words is the set of all ways to interleave them while
keeping each word's own letter order.  Three routes compute membership: plain
enumeration, a dynamic program over a position grid, and acceptance by the
grid-shaped automaton.
"""

from shufflekit import (
    accepts,
    enumerate_shuffle,
    fmt_word,
    is_dfa_when_disjoint,
    naive_shuffle_nfa,
    word_in_shuffle,
)

u, v = "ab", "cd"
print(f"all interleavings of {u!r} and {v!r}:")
for w in sorted(enumerate_shuffle(u, v)):
    print("   ", fmt_word(w))

# the naive automaton has one state per pair of positions: (|u|+1)(|v|+1)
m = naive_shuffle_nfa(u, v)
print("naive automaton states:", len(m.states))

# disjoint alphabets make the grid deterministic
print("deterministic grid for aa/bb:", is_dfa_when_disjoint("aa", "bb"))
print("deterministic grid for ab/ba:", is_dfa_when_disjoint("ab", "ba"))

# the three membership routes agree
for w in ["acbd", "abdc", "cdab"]:
    dp = word_in_shuffle(w, u, v)
    nfa = accepts(m, w)
    enum = tuple(w) in enumerate_shuffle(u, v)
    print(f"{w}: dp={dp} nfa={nfa} enumeration={enum}")
    assert dp == nfa == enum
