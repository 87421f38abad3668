"""
Shuffle of regular languages against a pushdown language
=========================================================

The inclusion test builds the shuffle automaton of the two regular operands,
complements the deterministic pushdown machine, intersects, and checks
emptiness through a grammar.  Witnesses come out of the emptiness engine and
are replayed before being reported.
"""

from shufflekit import (
    Nfa,
    dpda_complement,
    fmt_word,
    npda_accepts,
    shuffle_inclusion_regular_dpda,
    word_nfa,
)
from shufflekit.fixtures import anbn_dpda

balanced = anbn_dpda()  # accepts a^n b^n for n >= 1
print("machine accepts aabb:", npda_accepts(balanced, "aabb"))
print("machine accepts abab:", npda_accepts(balanced, "abab"))

# complement flips every answer
comp = dpda_complement(balanced)
for w in ["", "ab", "aabb", "abab", "ba"]:
    got, flipped = npda_accepts(balanced, w), npda_accepts(comp, w)
    print(f"  {w!r}: machine={got} complement={flipped}")
    assert got != flipped

# {a} shuffle {b} = {ab, ba}, but the balanced machine misses nothing there
m1 = word_nfa("a", ("a", "b"))
m2 = word_nfa("b", ("a", "b"))
out = shuffle_inclusion_regular_dpda(m1, m2, balanced)
print("\n{a} shuffle {b} inside balanced pairs:", out.verdict)

# a* shuffle b* contains unbalanced words, so inclusion fails with a witness
a_star = Nfa(("a", "b"), ["s"], "s", ["s"], {("s", "a"): {"s"}})
b_star = Nfa(("a", "b"), ["t"], "t", ["t"], {("t", "b"): {"t"}})
out = shuffle_inclusion_regular_dpda(a_star, b_star, balanced)
print("a* shuffle b* inside balanced pairs:", out.verdict, "witness:", fmt_word(out.witness))
