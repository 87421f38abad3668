"""
Reversal-bounded counter machines
=================================

The shipped machines recognise languages like a^n b^n with one counter that
switches from counting up to counting down once.  The same pipeline as for
pushdowns exists here: shuffle, complement, product, and a capped emptiness
search whose verdict records whether the cap was ever reached.
"""

from shufflekit import (
    Dcm,
    cm_accepts,
    cm_is_empty,
    cm_shuffle,
    dcm_complement,
    fmt_word,
    normalize_reversals,
    shuffle_inclusion_ncm_dcm,
)
from shufflekit.fixtures import anbn_dcm, matched_block_l1_dcm
from shufflekit.words import END_MARKER

anbn = anbn_dcm()
print("a^n b^n machine:")
for w in ["ab", "aabb", "aab", ""]:
    print(f"  {w!r}:", cm_accepts(anbn, w))

blocks = matched_block_l1_dcm()
print("a^n b a b^n a machine accepts 'ababa':", cm_accepts(blocks, "ababa"))

# complement flips membership everywhere
comp = dcm_complement(anbn)
print("complement accepts the empty word:", cm_accepts(comp, ""))

# emptiness produces a shortest witness, replayed before reporting
out = cm_is_empty(anbn)
print("emptiness of a^n b^n:", out.verdict, "witness:", fmt_word(out.witness))

# shuffle with a one-word machine, then ask inclusion back in the original
lam = Dcm(1, 1, ["a", "b"], ["z", "zf"], "z", ["zf"], {
    ("z", END_MARKER, (0,)): [("zf", "S", (0,))],
})
out = shuffle_inclusion_ncm_dcm(anbn, lam, anbn)
print("shuffle with the empty word stays inside:", out.verdict, out.stats)

# a three-reversal counter splits into two one-reversal counters
two_humps = Dcm(1, 3, ["a", "b"], ["h0", "h1", "h2", "h3", "hf"], "h0", ["hf"], {
    ("h0", "a", (0,)): [("h0", "R", (1,))],
    ("h0", "a", (1,)): [("h0", "R", (1,))],
    ("h0", "b", (1,)): [("h1", "R", (-1,))],
    ("h1", "b", (1,)): [("h1", "R", (-1,))],
    ("h1", "a", (0,)): [("h2", "R", (1,))],
    ("h2", "a", (1,)): [("h2", "R", (1,))],
    ("h2", "b", (1,)): [("h3", "R", (-1,))],
    ("h3", "b", (1,)): [("h3", "R", (-1,))],
    ("h3", END_MARKER, (0,)): [("hf", "S", (0,))],
})
norm = normalize_reversals(two_humps)
print(f"normalised: k={norm.k} r={norm.r} (was k=1 r=3)")
for w in ["abab", "aabbab", "abba"]:
    assert cm_accepts(two_humps, w) == cm_accepts(norm, w)
    print(f"  {w!r}: both machines say", cm_accepts(norm, w))
