#!/usr/bin/env python3
"""Regenerate the shipped fixture corpus under fixtures/.

The corpus keeps the acceptance and CLI examples runnable offline: the
shipped counter and pushdown machines, a slice of the naive-shuffle sweep,
two tiny CNF reduction instances, a unary machine, and a semilinear document.
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shufflekit import jsonio
from shufflekit.fa import Nfa
from shufflekit.fixtures import (
    anbn_dcm,
    anbn_dpda,
    matched_block_l1_dcm,
    matched_block_l2_dcm,
    staircase_l1_dpda,
    staircase_l2_dpda,
)
from shufflekit.reductions import Cnf3, sat_to_shuffle_noninclusion
from shufflekit.semilinear import LinearSet, SemilinearSet
from shufflekit.shuffle import naive_shuffle_nfa

ROOT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def put(name, obj, alphabet=None):
    path = os.path.join(ROOT, name)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    jsonio.save(path, obj, alphabet=alphabet)
    print("wrote", os.path.relpath(path))


def main():
    put("counters/anbn_dcm.json", anbn_dcm())
    put("counters/matched_block_l1_dcm.json", matched_block_l1_dcm())
    put("counters/matched_block_l2_dcm.json", matched_block_l2_dcm())
    put("pushdown/anbn_dpda.json", anbn_dpda())
    put("pushdown/staircase_l1_dpda.json", staircase_l1_dpda())
    put("pushdown/staircase_l2_dpda.json", staircase_l2_dpda())

    for u, v in [("ab", "cd"), ("ab", "ba"), ("ab", "ab"), ("aab", "bb")]:
        put(f"shuffle/naive_{u}_{v}.json", naive_shuffle_nfa(u, v))

    states = [f"n{i}" for i in range(7)]
    trans = {(f"n{i}", "a"): {f"n{i+1}"} for i in range(6)}
    put("unary/a4a5.json", Nfa(("a",), states, "n0", {"n4", "n5"}, trans))

    sat = sat_to_shuffle_noninclusion(Cnf3(1, ((1, 1, 1),)))
    put("reductions/sat_taut/u.json", sat.u)
    put("reductions/sat_taut/v.json", sat.v)
    put("reductions/sat_taut/automaton.json", sat.automaton)
    put("reductions/sat_taut/manifest.json", dict(sat.manifest))

    unsat = sat_to_shuffle_noninclusion(Cnf3(1, ((1, 1, 1), (-1, -1, -1))))
    put("reductions/sat_unsat/u.json", unsat.u)
    put("reductions/sat_unsat/v.json", unsat.v)
    put("reductions/sat_unsat/automaton.json", unsat.automaton)
    put("reductions/sat_unsat/manifest.json", dict(unsat.manifest))

    q = SemilinearSet(2, (LinearSet((1, 0), ((1, 1),)), LinearSet((0, 2))))
    put("semilinear/example.json", q, alphabet=["a", "b"])


if __name__ == "__main__":
    main()
