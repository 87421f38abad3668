"""
Comparing a word shuffle with a regular language
================================================

Three questions about an automaton M and words u, v: does every interleaving
of u and v land in L(M)?  Does L(M) stay inside the interleavings?  Are they
equal?  Each verdict carries a replayable witness when it fails.
"""

from shufflekit import (
    fmt_word,
    lang_equals_word_shuffle,
    lang_subset_word_shuffle,
    naive_shuffle_nfa,
    union,
    word_nfa,
    word_shuffle_subset_lang,
)

# a machine accepting only the word "ab" misses the interleaving "ba"
only_ab = word_nfa("ab", ("a", "b"))
out = word_shuffle_subset_lang("a", "b", only_ab)
print("a shuffle b inside {ab}? ", out.verdict, "witness:", fmt_word(out.witness))

# the naive automaton of the pair always contains the shuffle
m = naive_shuffle_nfa("ab", "ba")
print("shuffle inside its own automaton?", word_shuffle_subset_lang("ab", "ba", m).verdict)

# add one stray word and the reverse inclusion breaks
bigger = union(m, word_nfa("bbbb", ("a", "b")))
out = lang_subset_word_shuffle(bigger, "ab", "ba")
print("grown language still inside the shuffle?", out.verdict, "witness:", fmt_word(out.witness))

# equality is the conjunction of both directions
print("equality on the exact automaton:", lang_equals_word_shuffle(m, "ab", "ba").verdict)
print("equality on the grown automaton:", lang_equals_word_shuffle(bigger, "ab", "ba").verdict)
