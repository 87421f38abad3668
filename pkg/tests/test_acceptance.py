"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they pass.
Every tolerance, bound, and budget is pinned here.
"""

import itertools
import random
import time
from contextlib import contextmanager

import pytest

from shufflekit.counters import (
    Dcm,
    cm_accepts,
    cm_is_empty,
    cm_pad_alphabet,
    cm_product,
    cm_shuffle,
    dcm_complement,
    default_emptiness_cap,
)
from shufflekit.decide import (
    _matrix_power_accepts,
    _unary_matrix,
    shuffle_inclusion_ncm_dcm,
    shuffle_inclusion_regular_dpda,
    unary_finite_shuffle_inclusion,
    unary_mults_per_length,
)
from shufflekit.decompose import decompose
from shufflekit.fa import Nfa, accepts, determinize, eliminate_eps, equivalent, union, word_nfa
from shufflekit.fixtures import (
    anbn_dcm,
    anbn_dpda,
    anbn_member,
    matched_block_l1_dcm,
    matched_block_l1_member,
    matched_block_l2_dcm,
    matched_block_l2_member,
)
from shufflekit.pushdown import Dpda, dpda_complement, npda_accepts, npda_accepts_search
from shufflekit.reductions import (
    dfa_noninclusion_to_inequality,
    finite_language,
    random_cnf3,
    sat_brute_force,
    sat_to_shuffle_noninclusion,
)
from shufflekit.semilinear import LinearSet, SemilinearSet, parikh, sl_membership, sl_sum
from shufflekit.shuffle import enumerate_shuffle, naive_shuffle_nfa, word_in_shuffle
from shufflekit.words import END_MARKER

AB = ("a", "b")


@contextmanager
def criterion(number, description):
    try:
        yield
    except Exception:
        print(f"ACCEPTANCE criterion-{number} FAIL: {description}")
        raise
    print(f"ACCEPTANCE criterion-{number} PASS: {description}")


def words_over(alphabet, length):
    return [tuple(p) for p in itertools.product(alphabet, repeat=length)]


def all_words_up_to(alphabet, bound):
    out = []
    for n in range(bound + 1):
        out.extend(words_over(alphabet, n))
    return out


def exact_length_language(m, n):
    out = set()
    stack = [(m.start, ())]
    while stack:
        q, prefix = stack.pop()
        if len(prefix) == n:
            if q in m.finals:
                out.add(prefix)
            continue
        for sym in m.alphabet:
            for d in m.moves(q, sym):
                stack.append((d, prefix + (sym,)))
    return out


def test_criterion_1_shuffle_oracle_coherence():
    with criterion(1, "three membership routes agree for all |u|+|v| <= 8"):
        start = time.time()
        for total in range(0, 9):
            for lu in range(0, total + 1):
                for u in words_over(AB, lu):
                    for v in words_over(AB, total - lu):
                        members = enumerate_shuffle(u, v)
                        m = naive_shuffle_nfa(u, v, alphabet=AB)
                        assert len(m.states) == (lu + 1) * (total - lu + 1)
                        # route agreement on every word of the length: set
                        # equality against the automaton's exact-length language
                        assert exact_length_language(m, total) == members
                        for w in members:
                            assert accepts(m, w)
                        for w in words_over(AB, total):
                            assert word_in_shuffle(w, u, v) == (w in members)
        elapsed = time.time() - start
        assert elapsed < 10, f"criterion 1 took {elapsed:.1f}s"


def test_criterion_2_sat_reduction_fidelity():
    with criterion(2, ">= 50 random 3-CNFs: satisfiable iff some interleaving escapes"):
        start = time.time()
        rng = random.Random(1312)
        for _ in range(50):
            f = random_cnf3(rng.randint(1, 4), rng.randint(1, 6), rng)
            inst = sat_to_shuffle_noninclusion(f)
            escaped = any(
                not accepts(inst.automaton, w)
                for w in enumerate_shuffle(inst.u, inst.v, bound=64)
            )
            assert sat_brute_force(f) == escaped, f
        elapsed = time.time() - start
        assert elapsed < 60, f"criterion 2 took {elapsed:.1f}s"


def _inequality_fixtures():
    fixtures = []
    base_pairs = [("ab", "ba"), ("ab", "ab"), ("aab", "b"), ("ba", "ba"), ("abb", "a")]
    for u, v in base_pairs:
        naive = naive_shuffle_nfa(u, v, alphabet=AB)
        fixtures.append((determinize(naive), u, v))  # inclusion holds
        members = sorted(enumerate_shuffle(u, v))
        smaller = word_nfa(members[0], AB)
        for w in members[1 : len(members) // 2 + 1]:
            smaller = union(smaller, word_nfa(w, AB))
        fixtures.append((determinize(smaller), u, v))  # proper subset: still holds
        outsider = next(
            w for w in words_over(AB, len(u) + len(v)) if w not in set(members)
        )
        bigger = union(naive, word_nfa(outsider, AB))
        fixtures.append((determinize(bigger), u, v))  # fails by one word
        fixtures.append((determinize(word_nfa(outsider, AB)), u, v))  # disjoint single word
    return fixtures


def test_criterion_3_dfa_inequality_reduction_fidelity():
    with criterion(3, ">= 20 triples: inclusion iff the rebuilt machine equals the block shuffle"):
        fixtures = _inequality_fixtures()
        assert len(fixtures) >= 20
        for m, u, v in fixtures:
            words = finite_language(m)
            assert words is not None
            included = all(word_in_shuffle(w, tuple(u), tuple(v)) for w in words)
            inst = dfa_noninclusion_to_inequality(m, u, v)
            equal = equivalent(inst.machine, inst.target).holds
            assert included == equal, (u, v)


def _nfa_for(spec):
    if spec == "a*":
        return Nfa(AB, ["s"], "s", ["s"], {("s", "a"): {"s"}})
    if spec == "b*":
        return Nfa(AB, ["s"], "s", ["s"], {("s", "b"): {"s"}})
    if spec == "(ab)*":
        return Nfa(AB, ["s", "t"], "s", ["s"], {("s", "a"): {"t"}, ("t", "b"): {"s"}})
    return word_nfa(spec, AB)


def _dfa_as_dpda(d):
    t = {}
    for (src, sym), dsts in d.transitions.items():
        (dst,) = dsts
        t[(src, sym, "Z")] = [(dst, ("Z",))]
    return Dpda(d.states, d.alphabet, ["Z"], d.start, "Z", d.finals, t)


def _dpda_fixtures():
    anbn = anbn_dpda()
    ab_ba = _dfa_as_dpda(
        determinize(union(word_nfa("ab", AB), word_nfa("ba", AB)))
    )
    sigma_star = _dfa_as_dpda(
        determinize(Nfa(AB, ["u"], "u", ["u"], {("u", "a"): {"u"}, ("u", "b"): {"u"}}))
    )
    prefix_closed = _dfa_as_dpda(determinize(Nfa(
        AB, ["s", "t"], "s", ["s", "t"], {("s", "a"): {"s", "t"}, ("s", "b"): {"t"}}
    )))
    machines1 = ["a", "b", "ab", "a*", "(ab)*"]
    machines2 = ["b", "ba", "b*", ""]
    dpdas = [anbn, ab_ba, sigma_star, prefix_closed]
    cases = []
    for s1 in machines1:
        for s2 in machines2:
            for m3 in dpdas:
                cases.append((_nfa_for(s1), _nfa_for(s2), m3))
    return cases


def _shuffle_member_oracle(m1, m2, w):
    """Independent dynamic program over state pairs of the two machines."""
    e1, e2 = eliminate_eps(m1), eliminate_eps(m2)
    frontier = {(e1.start, e2.start)}
    for sym in w:
        nxt = set()
        for q1, q2 in frontier:
            for d in e1.moves(q1, sym):
                nxt.add((d, q2))
            for d in e2.moves(q2, sym):
                nxt.add((q1, d))
        frontier = nxt
        if not frontier:
            return False
    return any(q1 in e1.finals and q2 in e2.finals for q1, q2 in frontier)


def test_criterion_4_regular_dpda_pipeline():
    with criterion(4, "DPDA pipeline agrees with exhaustive checking; complement xor to length 8"):
        m = anbn_dpda()
        comp = dpda_complement(m)
        for w in all_words_up_to(AB, 8):
            assert npda_accepts(m, w) != npda_accepts(comp, w), w

        cases = _dpda_fixtures()
        assert len(cases) >= 20
        checked_fail = 0
        for m1, m2, m3 in cases:
            out = shuffle_inclusion_regular_dpda(m1, m2, m3)
            violations = [
                w
                for w in all_words_up_to(AB, 8)
                if _shuffle_member_oracle(m1, m2, w) and not npda_accepts_search(m3, w)
            ]
            if out.holds:
                assert not violations
            else:
                assert out.witness is not None
                assert _shuffle_member_oracle(m1, m2, out.witness)
                assert not npda_accepts_search(m3, out.witness)
                assert violations, "pipeline failure must be visible at desk scale"
                checked_fail += 1
        assert checked_fail >= 3


def _finite_ncm(words, alphabet=AB):
    states = {"root"}
    finals = set()
    t = {}
    for w in words:
        cur = "root"
        for i in range(len(w)):
            nxt = "w" + ".".join(w[: i + 1])
            states.add(nxt)
            t.setdefault((cur, w[i], (0,)), set()).add((nxt, "R", (0,)))
            cur = nxt
        fin = f"f:{'.'.join(w)}"
        states.add(fin)
        finals.add(fin)
        t.setdefault((cur, END_MARKER, (0,)), set()).add((fin, "S", (0,)))
    from shufflekit.counters import Ncm

    return Ncm(1, 1, alphabet, sorted(states), "root", finals, t)


def _lambda_dcm(alphabet=AB):
    return Dcm(1, 1, alphabet, ["z", "zf"], "z", ["zf"], {
        ("z", END_MARKER, (0,)): [("zf", "S", (0,))],
    })


def _word_dcm(w, alphabet=AB):
    states = [f"u{i}" for i in range(len(w) + 1)] + ["uf"]
    t = {}
    for i, sym in enumerate(w):
        t[(f"u{i}", sym, (0,))] = [(f"u{i+1}", "R", (0,))]
    t[(f"u{len(w)}", END_MARKER, (0,))] = [("uf", "S", (0,))]
    return Dcm(1, 1, alphabet, states, "u0", ["uf"], t)


def _cm_language_table(m, bound, alphabet):
    return {w: cm_accepts(m, w) for w in all_words_up_to(alphabet, bound)}


def _cm_shuffle_oracle(table1, table2, w):
    """Is w an interleaving of an M1 word and an M2 word?  All colourings."""
    n = len(w)
    for mask in range(1 << n):
        left = tuple(w[i] for i in range(n) if mask & (1 << i))
        right = tuple(w[i] for i in range(n) if not mask & (1 << i))
        if table1.get(left) and table2.get(right):
            return True
    return False


def test_criterion_5_ncm_dcm_pipeline():
    with criterion(5, "counter pipeline agrees with exhaustive checks; caps are 4x-stable"):
        f_ab = _finite_ncm([("a", "b"), ("b", "a")])
        f_a = _finite_ncm([("a",)])
        f_b = _finite_ncm([("b",)])
        anbn = anbn_dcm()
        cases = [
            (f_a, f_b, determinize_dcm_for([("a", "b"), ("b", "a")]), None),
            (f_a, f_b, _word_dcm(("a", "b")), None),
            (f_ab, _lambda_dcm(), determinize_dcm_for([("a", "b"), ("b", "a")]), None),
            (f_ab, _lambda_dcm(), _word_dcm(("a", "b")), None),
            (anbn, _lambda_dcm(), anbn, None),
            (_lambda_dcm(), _lambda_dcm(), anbn, None),
            (anbn, _word_dcm(("a",)), anbn, None),
        ]
        bound = 7
        for m1, m2, m3, cap in cases:
            out = shuffle_inclusion_ncm_dcm(m1, m2, m3, cap)
            t1 = _cm_language_table(m1, bound, AB)
            t2 = _cm_language_table(m2, bound, AB)
            violations = [
                w
                for w in all_words_up_to(AB, bound)
                if _cm_shuffle_oracle(t1, t2, w) and not cm_accepts(m3, w)
            ]
            if out.holds:
                assert not violations
            else:
                assert out.witness is not None and not cm_accepts(m3, out.witness)
            # cap stability: every Empty verdict at the default cap re-checked at 4x
            if out.holds:
                alpha = AB
                shuffled = cm_shuffle(cm_pad_alphabet(m1, alpha), cm_pad_alphabet(m2, alpha))
                product = cm_product(shuffled, dcm_complement(cm_pad_alphabet(m3, alpha)))
                cap_used = cap if cap is not None else default_emptiness_cap(product)
                again = cm_is_empty(product, cap_used * 4)
                assert again.holds, "cap instability detected"


def determinize_dcm_for(words):
    """Deterministic trie machine for a finite language over {a, b}."""
    prefixes = {()}
    for w in words:
        for i in range(len(w) + 1):
            prefixes.add(tuple(w[:i]))
    name = lambda p: "t" + "".join(p)
    t = {}
    for p in prefixes:
        for sym in AB:
            child = p + (sym,)
            if child in prefixes:
                t[(name(p), sym, (0,))] = [(name(child), "R", (0,))]
        if p in {tuple(w) for w in words}:
            t[(name(p), END_MARKER, (0,))] = [("acc", "S", (0,))]
    states = [name(p) for p in sorted(prefixes)] + ["acc"]
    return Dcm(1, 1, AB, states, name(()), ["acc"], t)


def _unary_fixture_machines():
    # lengths 4 or 5 only
    chain = Nfa(("a",), [f"c{i}" for i in range(7)], "c0", {"c4", "c5"},
                {(f"c{i}", "a"): {f"c{i+1}"} for i in range(6)})
    # threshold-plus-period: length >= 3 with length = 3 mod 2 (odd >= 3)
    mod = Nfa(
        ("a",),
        ["m0", "m1", "m2", "m3", "m4"],
        "m0",
        {"m3"},
        {
            ("m0", "a"): {"m1"},
            ("m1", "a"): {"m2"},
            ("m2", "a"): {"m3"},
            ("m3", "a"): {"m4"},
            ("m4", "a"): {"m3"},
        },
    )
    everything = Nfa(("a",), ["u"], "u", ["u"], {("u", "a"): {"u"}})
    return [chain, mod, everything]


def test_criterion_6_unary_matrix_procedure():
    with criterion(6, "matrix route matches direct simulation for d <= 1024 within budget"):
        d1 = list(range(32))
        d2 = [32 * i for i in range(32)]
        sums = sorted({x + y for x in d1 for y in d2})
        assert sums[-1] == 1023 and len(sums) == 1024
        for m in _unary_fixture_machines():
            mat, start, finals = _unary_matrix(m)
            reach = [False] * mat.shape[0]
            reach[start] = True
            import numpy as np

            reach = np.array(reach)
            direct = {}
            direct[0] = bool(reach[finals].any()) if finals else False
            cur = reach
            for d in range(1, 1025):
                cur = (cur.astype(np.uint8) @ mat.astype(np.uint8)) > 0
                direct[d] = bool(cur[finals].any()) if finals else False
            for d in sums:
                ok, mults = _matrix_power_accepts(mat, start, finals, d)
                assert ok == direct[d], (d,)
                assert mults <= unary_mults_per_length(d), (d, mults)
            out = unary_finite_shuffle_inclusion(d1, d2, m)
            assert out.holds == all(direct[d] for d in sums)


def _semilinear_pairs():
    pairs = [
        (SemilinearSet.of_vector((1, 0)), SemilinearSet.of_vector((0, 1))),
        (
            SemilinearSet(2, (LinearSet((0, 0), ((1, 1),)),)),
            SemilinearSet(2, (LinearSet((1, 0)),)),
        ),
        (
            SemilinearSet(2, (LinearSet((2, 0), ((0, 1),)),)),
            SemilinearSet(2, (LinearSet((0, 2), ((1, 0),)),)),
        ),
    ]
    rng = random.Random(99)
    while len(pairs) < 10:
        def rand_set():
            comps = []
            for _ in range(rng.randint(1, 2)):
                const = (rng.randint(0, 2), rng.randint(0, 2))
                periods = tuple(
                    (rng.randint(0, 2), rng.randint(0, 2)) for _ in range(rng.randint(0, 2))
                )
                comps.append(LinearSet(const, periods))
            return SemilinearSet(2, tuple(comps))

        pairs.append((rand_set(), rand_set()))
    return pairs


def test_criterion_7_sum_matches_shuffle_of_preimages():
    with criterion(7, ">= 10 semilinear pairs: preimage of the sum is the shuffle of preimages"):
        pairs = _semilinear_pairs()
        assert len(pairs) >= 10
        for q1, q2 in pairs:
            total = sl_sum(q1, q2)
            for w in all_words_up_to(AB, 8):
                x = parikh(w, AB)
                lhs = sl_membership(total, x)
                rhs = any(
                    sl_membership(q1, (i, j))
                    and sl_membership(q2, (x[0] - i, x[1] - j))
                    for i in range(x[0] + 1)
                    for j in range(x[1] + 1)
                )
                # the vector split always lifts to a word split: colour the
                # positions of w by which preimage word they feed
                assert lhs == rhs, (w, x)


def _is_word_shuffle(words):
    """Brute-force: is this finite set the shuffle of some word pair?"""
    if not words:
        return False
    some = next(iter(words))
    n = len(some)
    for w in words:
        for k in range(0, n + 1):
            u, v = w[:k], w[k:]
            if enumerate_shuffle(u, v) == words:
                return True
    return False


def test_criterion_8_decomposition_sweep():
    with criterion(8, "sweep recovers every pair; broken perturbations return nothing"):
        start = time.time()
        vocab = []
        for n in range(2, 5):
            vocab.extend("".join(p) for p in itertools.product("ab", repeat=n))
        pairs = [(u, v) for u in vocab for v in vocab if len(set(u + v)) >= 2]
        assert len(pairs) >= 121
        for u, v in pairs:
            got = decompose(naive_shuffle_nfa(u, v, alphabet=AB))
            assert got is not None and {got[0], got[1]} == {tuple(u), tuple(v)}, (u, v)

        perturbed = 0
        for u, v in pairs[:: len(pairs) // 140 or 1]:
            members = enumerate_shuffle(u, v)
            n = len(u) + len(v)
            base = naive_shuffle_nfa(u, v, alphabet=AB)
            # adding a word of a different letter count breaks any shuffle shape
            outsider = ("a",) * n
            assert outsider not in members
            assert decompose(union(base, word_nfa(outsider, AB))) is None, (u, v)
            perturbed += 1
            # removing: pick a word whose removal provably leaves a non-shuffle
            removal = next(
                (w for w in sorted(members) if not _is_word_shuffle(members - {w})), None
            )
            if removal is not None:
                kept = sorted(members - {removal})
                m = word_nfa(kept[0], AB)
                for w in kept[1:]:
                    m = union(m, word_nfa(w, AB))
                assert decompose(m) is None, (u, v, removal)
                perturbed += 1
        assert perturbed >= 121
        elapsed = time.time() - start
        assert elapsed < 60, f"criterion 8 took {elapsed:.1f}s"


def test_criterion_9_fixture_sanity():
    with criterion(9, "shipped machines accept exactly their defined languages"):
        for w in all_words_up_to(AB, 12):
            assert cm_accepts(anbn_dcm(), w) == anbn_member(w), w
        l1, l2 = matched_block_l1_dcm(), matched_block_l2_dcm()
        for w in all_words_up_to(AB, 10):
            assert cm_accepts(l1, w) == matched_block_l1_member(w), w
            assert cm_accepts(l2, w) == matched_block_l2_member(w), w
