import itertools

import pytest

from shufflekit.counters import (
    Dcm,
    Ncm,
    check_complete_halting,
    cm_accepts,
    cm_is_empty,
    cm_product,
    cm_shuffle,
    dcm_complement,
    default_emptiness_cap,
    normalize_reversals,
)
from shufflekit.errors import ContractError, InputError
from shufflekit.fixtures import (
    anbn_dcm,
    anbn_member,
    matched_block_l1_dcm,
    matched_block_l1_member,
    matched_block_l2_dcm,
    matched_block_l2_member,
)
from shufflekit.shuffle import enumerate_shuffle
from shufflekit.words import END_MARKER

from helpers import all_words


def lambda_dcm(alphabet=("a", "b")):
    """Machine accepting only the empty word."""
    return Dcm(1, 1, alphabet, ["z", "zf"], "z", ["zf"], {
        ("z", END_MARKER, (0,)): [("zf", "S", (0,))],
    })


def single_word_dcm(w, alphabet=("a", "b")):
    states = [f"u{i}" for i in range(len(w) + 1)] + ["uf"]
    t = {}
    for i, sym in enumerate(w):
        t[(f"u{i}", sym, (0,))] = [(f"u{i+1}", "R", (0,))]
    t[(f"u{len(w)}", END_MARKER, (0,))] = [("uf", "S", (0,))]
    return Dcm(1, 1, alphabet, states, "u0", ["uf"], t)


def finite_ncm(words, alphabet=("a", "b", "c")):
    """Trie-shaped machine for a finite language (no counters used)."""
    states = {"root"}
    finals = set()
    t = {}
    for w in words:
        cur = "root"
        for i, sym in enumerate(w):
            nxt = f"{'.'.join(w[: i + 1])}"
            states.add(nxt)
            t.setdefault((cur, sym, (0,)), set()).add((nxt, "R", (0,)))
            cur = nxt
        fin = f"f:{'.'.join(w)}"
        states.add(fin)
        finals.add(fin)
        t.setdefault((cur, END_MARKER, (0,)), set()).add((fin, "S", (0,)))
    return Ncm(1, 1, alphabet, sorted(states), "root", finals, t)


def test_guard_rule_enforced_at_load():
    with pytest.raises(InputError):
        Ncm(1, 1, ["a"], ["q"], "q", [], {("q", "a", (0,)): [("q", "R", (-1,))]})


def test_anbn_membership():
    m = anbn_dcm()
    assert cm_accepts(m, "aabb")
    assert not cm_accepts(m, "")
    assert cm_accepts(m, "ab")
    assert not cm_accepts(m, "aab")


def test_anbn_exact_up_to_length_12():
    m = anbn_dcm()
    for w in all_words(("a", "b"), 12):
        assert cm_accepts(m, w) == anbn_member(w), w


def test_matched_block_fixtures_exact():
    l1, l2 = matched_block_l1_dcm(), matched_block_l2_dcm()
    for w in all_words(("a", "b"), 10):
        assert cm_accepts(l1, w) == matched_block_l1_member(w), w
        assert cm_accepts(l2, w) == matched_block_l2_member(w), w


def test_matched_block_l1_example():
    assert cm_accepts(matched_block_l1_dcm(), "ababa")


def test_cm_shuffle_with_lambda_is_identity():
    got = cm_shuffle(anbn_dcm(), lambda_dcm())
    for w in all_words(("a", "b"), 8):
        assert cm_accepts(got, w) == anbn_member(w)


def test_cm_shuffle_anbn_with_c():
    c_word = single_word_dcm(("c",), alphabet=("c",))
    got = cm_shuffle(anbn_dcm(), c_word)
    for w in all_words(("a", "b", "c"), 5):
        n_c = sum(1 for s in w if s == "c")
        base = tuple(s for s in w if s != "c")
        expect = n_c == 1 and anbn_member(base) and _preserves_order(w, base)
        assert cm_accepts(got, w) == expect, w


def _preserves_order(w, base):
    # dropping c's preserves relative order by construction
    return True


def test_cm_shuffle_matches_word_enumeration():
    f1 = finite_ncm([("a", "b"), ("b",)])
    f2 = finite_ncm([("c",), ("a", "c")])
    got = cm_shuffle(f1, f2)
    expect = set()
    for u in [("a", "b"), ("b",)]:
        for v in [("c",), ("a", "c")]:
            expect |= enumerate_shuffle(u, v)
    for w in all_words(("a", "b", "c"), 4):
        assert cm_accepts(got, w) == (w in expect), w


def test_cm_shuffle_a_star_b_star():
    a_star = Dcm(1, 1, ["a"], ["s", "sf"], "s", ["sf"], {
        ("s", "a", (0,)): [("s", "R", (0,))],
        ("s", END_MARKER, (0,)): [("sf", "S", (0,))],
    })
    b_star = Dcm(1, 1, ["b"], ["t", "tf"], "t", ["tf"], {
        ("t", "b", (0,)): [("t", "R", (0,))],
        ("t", END_MARKER, (0,)): [("tf", "S", (0,))],
    })
    got = cm_shuffle(a_star, b_star)
    for w in all_words(("a", "b"), 6):
        assert cm_accepts(got, w), w


def test_cm_product_identity_with_universal():
    universal = Dcm(1, 1, ["a", "b"], ["u", "uf"], "u", ["uf"], {
        ("u", "a", (0,)): [("u", "R", (0,))],
        ("u", "b", (0,)): [("u", "R", (0,))],
        ("u", END_MARKER, (0,)): [("uf", "S", (0,))],
    })
    got = cm_product(anbn_dcm(), universal)
    for w in all_words(("a", "b"), 8):
        assert cm_accepts(got, w) == anbn_member(w), w


def test_cm_product_anbn_with_a_star_b_star():
    asbs = Dcm(1, 1, ["a", "b"], ["x", "y", "xf"], "x", ["xf"], {
        ("x", "a", (0,)): [("x", "R", (0,))],
        ("x", "b", (0,)): [("y", "R", (0,))],
        ("y", "b", (0,)): [("y", "R", (0,))],
        ("x", END_MARKER, (0,)): [("xf", "S", (0,))],
        ("y", END_MARKER, (0,)): [("xf", "S", (0,))],
    })
    got = cm_product(anbn_dcm(), asbs)
    for w in all_words(("a", "b"), 8):
        assert cm_accepts(got, w) == anbn_member(w), w


def test_cm_product_disjoint_finite_is_empty():
    f1 = finite_ncm([("a",)])
    f2 = finite_ncm([("b",)])
    out = cm_is_empty(cm_product(f1, f2))
    assert out.holds and not out.bounded


def test_check_complete_halting():
    assert check_complete_halting(anbn_dcm()).holds
    looping = Dcm(1, 1, ["a"], ["q"], "q", [], {
        ("q", END_MARKER, (0,)): [("q", "S", (0,))],
    })
    out = check_complete_halting(looping)
    assert not out.holds
    assert "stay cycle" in out.method


def test_check_complete_halting_allows_drain_loops():
    # a stay loop that strictly decreases a counter terminates
    drain = Dcm(1, 1, ["a"], ["q", "d", "qf"], "q", ["qf"], {
        ("q", "a", (0,)): [("q", "R", (1,))],
        ("q", "a", (1,)): [("q", "R", (1,))],
        ("q", END_MARKER, (1,)): [("q", "S", (-1,))],
        ("q", END_MARKER, (0,)): [("qf", "S", (0,))],
    })
    assert check_complete_halting(drain).holds


def test_dcm_complement_xor_exhaustive():
    for fixture, member in (
        (anbn_dcm(), anbn_member),
        (matched_block_l2_dcm(), matched_block_l2_member),
    ):
        comp = dcm_complement(fixture)
        for w in all_words(("a", "b"), 7):
            got_m = cm_accepts(fixture, w)
            got_c = cm_accepts(comp, w)
            assert got_m != got_c, w
            assert got_m == member(w), w


def test_dcm_complement_accepts_empty_word():
    comp = dcm_complement(anbn_dcm())
    assert cm_accepts(comp, "")


def test_dcm_complement_double_is_identity_on_samples():
    m = anbn_dcm()
    cc = dcm_complement(dcm_complement(m))
    for w in all_words(("a", "b"), 6):
        assert cm_accepts(cc, w) == anbn_member(w), w


def test_cm_is_empty_no_finals():
    m = Ncm(1, 1, ["a"], ["q"], "q", [], {})
    out = cm_is_empty(m, cap=3)
    assert out.holds and not out.bounded


def test_cm_is_empty_witness_anbn():
    out = cm_is_empty(anbn_dcm())
    assert not out.holds and out.witness == ("a", "b")


def test_cm_is_empty_product_with_complement():
    m = anbn_dcm()
    prod = cm_product(m, dcm_complement(m))
    out = cm_is_empty(prod, cap=64)
    assert out.holds


def test_default_cap_formula():
    m = anbn_dcm()
    assert default_emptiness_cap(m) == len(m.states) * 2 * 2 * 4


def test_normalize_reversals_identity_for_r1():
    m = anbn_dcm()
    assert normalize_reversals(m) is m


def test_normalize_reversals_r3_counter_count():
    # {a^n b^n a^m b^m}: one counter, three reversals
    m = _two_humps_r3()
    norm = normalize_reversals(m)
    assert norm.k == 2 and norm.r == 1
    for w in all_words(("a", "b"), 6):
        assert cm_accepts(norm, w) == cm_accepts(m, w), w


def test_normalize_reversals_r2():
    m = _hump_and_rise_r2()
    norm = normalize_reversals(m)
    assert norm.k == 2 and norm.r == 1
    for w in all_words(("a", "b"), 6):
        assert cm_accepts(norm, w) == cm_accepts(m, w), w


def _two_humps_r3():
    """{a^n b^n a^m b^m | n, m > 0} on one 3-reversal counter."""
    t = {
        ("h0", "a", (0,)): [("h0", "R", (1,))],
        ("h0", "a", (1,)): [("h0", "R", (1,))],
        ("h0", "b", (1,)): [("h1", "R", (-1,))],
        ("h1", "b", (1,)): [("h1", "R", (-1,))],
        ("h1", "a", (0,)): [("h2", "R", (1,))],
        ("h2", "a", (1,)): [("h2", "R", (1,))],
        ("h2", "b", (1,)): [("h3", "R", (-1,))],
        ("h3", "b", (1,)): [("h3", "R", (-1,))],
        ("h3", END_MARKER, (0,)): [("hf", "S", (0,))],
    }
    return Dcm(1, 3, ["a", "b"], ["h0", "h1", "h2", "h3", "hf"], "h0", ["hf"], t)


def _hump_and_rise_r2():
    """{a^n b^n a^m | n, m > 0} where the trailing a's climb again (2 reversals)."""
    t = {
        ("g0", "a", (0,)): [("g0", "R", (1,))],
        ("g0", "a", (1,)): [("g0", "R", (1,))],
        ("g0", "b", (1,)): [("g1", "R", (-1,))],
        ("g1", "b", (1,)): [("g1", "R", (-1,))],
        ("g1", "a", (0,)): [("g2", "R", (1,))],
        ("g2", "a", (1,)): [("g2", "R", (1,))],
        ("g2", END_MARKER, (1,)): [("gf", "S", (0,))],
    }
    return Dcm(1, 2, ["a", "b"], ["g0", "g1", "g2", "gf"], "g0", ["gf"], t)


def test_reversal_bound_is_respected():
    # one counter, one reversal: a^n b^n a^k b^k needs three reversals, so the
    # 1-reversal version of the two-hump machine must reject the second hump
    t = {
        ("h0", "a", (0,)): [("h0", "R", (1,))],
        ("h0", "a", (1,)): [("h0", "R", (1,))],
        ("h0", "b", (1,)): [("h1", "R", (-1,))],
        ("h1", "b", (1,)): [("h1", "R", (-1,))],
        ("h1", "a", (0,)): [("h2", "R", (1,))],
        ("h2", "a", (1,)): [("h2", "R", (1,))],
        ("h2", "b", (1,)): [("h3", "R", (-1,))],
        ("h3", "b", (1,)): [("h3", "R", (-1,))],
        ("h3", END_MARKER, (0,)): [("hf", "S", (0,))],
    }
    m = Dcm(1, 1, ["a", "b"], ["h0", "h1", "h2", "h3", "hf"], "h0", ["hf"], t)
    assert not cm_accepts(m, "abab")
