"""Shared test utilities: tiny machines and brute-force oracles."""

from __future__ import annotations

import itertools

from shufflekit.fa import Nfa
from shufflekit.words import Word


def all_words(alphabet, max_len) -> list[Word]:
    out: list[Word] = []
    for n in range(max_len + 1):
        out.extend(itertools.product(alphabet, repeat=n))
    return out


def words_of_length(alphabet, n) -> list[Word]:
    return [tuple(p) for p in itertools.product(alphabet, repeat=n)]


def language_sample(m: Nfa, max_len: int) -> set[Word]:
    """Brute-force language slice by testing every word up to max_len."""
    from shufflekit.fa import accepts

    return {w for w in all_words(m.alphabet, max_len) if accepts(m, w)}


def nfa_a_star() -> Nfa:
    return Nfa(["a"], ["q0"], "q0", ["q0"], {("q0", "a"): {"q0"}})


def nfa_a_plus() -> Nfa:
    return Nfa(
        ["a"], ["q0", "q1"], "q0", ["q1"], {("q0", "a"): {"q0", "q1"}, ("q1", "a"): {"q1"}}
    )


def nfa_a_star_over_ab() -> Nfa:
    return Nfa(["a", "b"], ["q0"], "q0", ["q0"], {("q0", "a"): {"q0"}})


def nfa_universal(alphabet=("a", "b")) -> Nfa:
    return Nfa(alphabet, ["u"], "u", ["u"], {("u", s): {"u"} for s in alphabet})


def nfa_empty(alphabet=("a", "b")) -> Nfa:
    return Nfa(alphabet, ["e"], "e", [], {})
