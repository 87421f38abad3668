"""
From 3-CNF satisfiability to shuffle non-inclusion
==================================================

A 3-CNF formula maps to two binary words and an automaton so that the formula
is satisfiable exactly when some interleaving of the words escapes the
automaton.  The escaping interleaving encodes the satisfying assignment: one
digit pair per variable.
"""

from shufflekit import fmt_word, sat_brute_force, sat_to_shuffle_noninclusion
from shufflekit.fa import accepts
from shufflekit.reductions import Cnf3, verify_reduction
from shufflekit.shuffle import enumerate_shuffle

for name, formula in [
    ("satisfiable", Cnf3(2, ((1, 2, 2),))),
    ("unsatisfiable", Cnf3(1, ((1, 1, 1), (-1, -1, -1)))),
]:
    inst = sat_to_shuffle_noninclusion(formula)
    print(f"{name}: p={formula.p} q={formula.q}")
    print("  u =", fmt_word(inst.u))
    print("  v =", fmt_word(inst.v))
    print("  brute-force satisfiable:", sat_brute_force(formula))
    escape = next(
        (w for w in sorted(enumerate_shuffle(inst.u, inst.v, bound=32))
         if not accepts(inst.automaton, w)),
        None,
    )
    if escape is None:
        print("  every interleaving is absorbed: inclusion holds")
    else:
        print("  escaping interleaving:", fmt_word(escape))
    out = verify_reduction(inst)
    print("  biconditional verified:", out.verdict)
    assert out.holds
