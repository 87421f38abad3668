import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shufflekit.errors import InputError
from shufflekit.fa import Nfa, accepts
from shufflekit.semilinear import (
    LinearSet,
    SemilinearSet,
    comm_membership,
    generate_members,
    nfa_parikh_image,
    parikh,
    sl_membership,
    sl_sum,
)
from shufflekit.shuffle import enumerate_shuffle, word_in_shuffle
from shufflekit.words import EPSILON

from helpers import all_words, nfa_a_star

AB = ("a", "b")


def word_nfa_over(w, alphabet=AB):
    from shufflekit.fa import word_nfa

    return word_nfa(w, alphabet)


def test_parikh_basics():
    assert parikh("", AB) == (0, 0)
    assert parikh("aab", AB) == (2, 1)
    with pytest.raises(InputError):
        parikh("c", AB)


def test_parikh_of_shuffle_members():
    for u, v in [("ab", "ba"), ("aab", "b"), ("", "ab")]:
        expect = tuple(x + y for x, y in zip(parikh(u, AB), parikh(v, AB)))
        for w in enumerate_shuffle(u, v):
            assert parikh(w, AB) == expect


def test_sl_membership_constant_and_diagonal():
    q = SemilinearSet(2, (LinearSet((1, 2)),))
    assert sl_membership(q, (1, 2))
    assert not sl_membership(q, (2, 2))
    diag = SemilinearSet(2, (LinearSet((0, 0), ((1, 1),)),))
    assert sl_membership(diag, (3, 3))
    assert not sl_membership(diag, (2, 3))


def test_sl_membership_dimension_mismatch():
    with pytest.raises(InputError):
        sl_membership(SemilinearSet(2, (LinearSet((0, 0)),)), (1, 2, 3))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_sl_membership_against_generation(data):
    comps = []
    for _ in range(data.draw(st.integers(1, 2))):
        const = tuple(data.draw(st.integers(0, 3)) for _ in range(2))
        nper = data.draw(st.integers(0, 2))
        periods = tuple(
            tuple(data.draw(st.integers(0, 3)) for _ in range(2)) for _ in range(nper)
        )
        comps.append(LinearSet(const, periods))
    q = SemilinearSet(2, tuple(comps))
    members = generate_members(q, 10)
    for x in itertools.product(range(8), repeat=2):
        assert sl_membership(q, x) == (x in members)


def test_sl_sum_identity_and_singletons():
    q = SemilinearSet(2, (LinearSet((1, 2), ((0, 1),)),))
    zero = SemilinearSet.of_vector((0, 0))
    summed = sl_sum(q, zero)
    for x in itertools.product(range(6), repeat=2):
        assert sl_membership(summed, x) == sl_membership(q, x)
    s = sl_sum(SemilinearSet.of_vector((1, 0)), SemilinearSet.of_vector((0, 1)))
    assert sl_membership(s, (1, 1))
    assert not sl_membership(s, (1, 0))


def test_sl_sum_matches_definition_on_generated_members():
    q1 = SemilinearSet(2, (LinearSet((1, 0), ((2, 0), (0, 1))),))
    q2 = SemilinearSet(2, (LinearSet((0, 1), ((1, 1),)), LinearSet((3, 0))))
    s = sl_sum(q1, q2)
    m1 = generate_members(q1, 8)
    m2 = generate_members(q2, 8)
    sums = {tuple(a + b for a, b in zip(x, y)) for x in m1 for y in m2}
    for x in itertools.product(range(9), repeat=2):
        if sl_membership(s, x):
            # every claimed member must decompose
            assert any(
                sl_membership(q1, y) and sl_membership(q2, tuple(a - b for a, b in zip(x, y)))
                for y in itertools.product(range(x[0] + 1), range(x[1] + 1))
            )
        if x in sums:
            assert sl_membership(s, x)


def test_sl_sum_commutative_associative_extensionally():
    q1 = SemilinearSet(2, (LinearSet((1, 0), ((1, 1),)),))
    q2 = SemilinearSet(2, (LinearSet((0, 2)),))
    q3 = SemilinearSet(2, (LinearSet((0, 0), ((0, 1),)),))
    for x in itertools.product(range(7), repeat=2):
        assert sl_membership(sl_sum(q1, q2), x) == sl_membership(sl_sum(q2, q1), x)
        assert sl_membership(sl_sum(sl_sum(q1, q2), q3), x) == sl_membership(
            sl_sum(q1, sl_sum(q2, q3)), x
        )


def test_parikh_image_a_star():
    img = nfa_parikh_image(nfa_a_star())
    assert sl_membership(img, (0,)) and sl_membership(img, (5,))
    members = generate_members(img, 10)
    assert members == {(n,) for n in range(11)}


def test_parikh_image_ab_star():
    m = Nfa(AB, ["s", "t"], "s", ["s"], {("s", "a"): {"t"}, ("t", "b"): {"s"}})
    img = nfa_parikh_image(m)
    # hand construction: constant (0,0), period (1,1)
    for x in itertools.product(range(7), repeat=2):
        assert sl_membership(img, x) == (x[0] == x[1])


def test_parikh_image_agrees_with_acceptance_sampling():
    machines = [
        Nfa(AB, ["s"], "s", ["s"], {("s", "a"): {"s"}, ("s", "b"): {"s"}}),
        Nfa(AB, ["s", "f"], "s", ["f"], {("s", "a"): {"s", "f"}, ("f", "b"): {"f"}}),
        Nfa(
            AB,
            ["s", "m", "f"],
            "s",
            ["f"],
            {("s", "a"): {"m"}, ("m", "b"): {"m"}, ("m", EPSILON): {"f"}, ("f", "a"): {"s"}},
        ),
    ]
    for m in machines:
        img = nfa_parikh_image(m)
        realized = {parikh(w, AB) for w in all_words(AB, 8) if accepts(m, w)}
        for vec in realized:
            assert sl_membership(img, vec)
        # vectors below the sampling horizon that the image claims must be realized
        for vec in generate_members(img, 4):
            if sum(vec) <= 8:
                assert vec in realized


def test_comm_membership():
    m = word_nfa_over("ab")
    assert comm_membership(m, "ab")
    assert comm_membership(m, "ba")
    assert not comm_membership(m, "aa")


def test_lemma_identity_sum_vs_shuffle_of_preimages():
    # extensional identity at desk scale over two letters
    q1 = SemilinearSet(2, (LinearSet((1, 0), ((1, 1),)),))
    q2 = SemilinearSet(2, (LinearSet((0, 1),), LinearSet((2, 0), ((0, 1),))))
    s = sl_sum(q1, q2)
    for w in all_words(AB, 8):
        x = parikh(w, AB)
        lhs = sl_membership(s, x)
        rhs = any(
            sl_membership(q1, y)
            and sl_membership(q2, (x[0] - y[0], x[1] - y[1]))
            for y in itertools.product(range(x[0] + 1), range(x[1] + 1))
        )
        assert lhs == rhs
        if lhs:
            # realize the split at word level: w interleaves a q1-word and a q2-word
            assert _greedy_split_works(w, q1, q2)


def _greedy_split_works(w, q1, q2):
    x = parikh(w, AB)
    for y in itertools.product(range(x[0] + 1), range(x[1] + 1)):
        rem = (x[0] - y[0], x[1] - y[1])
        if sl_membership(q1, y) and sl_membership(q2, rem):
            u = []
            need = list(y)
            v = []
            for sym in w:
                i = AB.index(sym)
                if need[i] > 0:
                    need[i] -= 1
                    u.append(sym)
                else:
                    v.append(sym)
            if word_in_shuffle(w, tuple(u), tuple(v)):
                return True
    return False
