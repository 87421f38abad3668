"""Shuffle-decomposition extraction for acyclic automata, plus its verifier.

``extract_candidate`` walks the lazily determinised machine from the start
subset: at a point whose residual language is a shuffle of two word suffixes,
the available letters are the (at most two) suffix heads.  Distinct heads
split the walk; equal heads are consumed as one maximal block whose division
between the two words is recovered by checking each split of the block
against the residual language.  Every candidate surviving those checks is
carried upward, so the walk returns exactly the pairs whose shuffle equals
the language, when any exist.

``decompose`` re-verifies the extracted pair against the full machine and
reports nothing rather than an unchecked guess.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError
from .fa import Nfa, determinize, eliminate_eps, equivalent, is_acyclic, pad_alphabet, trim
from .outcome import DecisionOutcome
from .shuffle import naive_shuffle_nfa
from .words import EPSILON, Word, merge_alphabets


@dataclass(frozen=True)
class NotDecomposable:
    reason: str


COLLAPSED_FINAL = "(final)"


def _preprocess(m: Nfa) -> tuple[Nfa, int] | NotDecomposable:
    """Trim, check the level structure, collapse finals, re-trim.

    In a trim acyclic machine every start-to-final path spells an accepted
    word, so a language of uniform word length forces a unique level per
    state; two distinct path lengths to any state witness non-decomposability.
    """
    t = trim(eliminate_eps(m))
    if not t.finals:
        return NotDecomposable("empty language")
    level: dict[str, int] = {t.start: 0}
    order = [t.start]
    frontier = [t.start]
    while frontier:
        nxt: list[str] = []
        for q in frontier:
            for sym in t.alphabet:
                for d in t.moves(q, sym):
                    if d in level:
                        if level[d] != level[q] + 1:
                            return NotDecomposable(
                                f"state {d!r} reachable at distances {level[d]} and {level[q] + 1}"
                            )
                    else:
                        level[d] = level[q] + 1
                        order.append(d)
                        nxt.append(d)
        frontier = nxt
    final_levels = {level[f] for f in t.finals}
    if len(final_levels) != 1:
        return NotDecomposable(f"final states at distances {sorted(final_levels)}")
    total = final_levels.pop()
    # collapse the finals into one sink and drop their outgoing moves
    transitions: dict[tuple[str, str], set[str]] = {}
    for (src, sym), dsts in t.transitions.items():
        if src in t.finals:
            continue
        mapped = {COLLAPSED_FINAL if d in t.finals else d for d in dsts}
        transitions[(src, sym)] = mapped
    states = [q for q in t.states if q not in t.finals] + [COLLAPSED_FINAL]
    start = COLLAPSED_FINAL if t.start in t.finals else t.start
    collapsed = trim(Nfa(t.alphabet, states, start, {COLLAPSED_FINAL}, transitions))
    return collapsed, total


class _Walk:
    def __init__(self, m: Nfa, total: int):
        self.m = m
        self.total = total
        self.subsets_built = 0
        self.verifications = 0
        self._step_cache: dict[tuple[frozenset, str], frozenset] = {}
        self._residual_dfa: dict[frozenset, Nfa] = {}
        self._memo: dict[frozenset, list[tuple[Word, Word]]] = {}

    def step(self, subset: frozenset, sym: str) -> frozenset:
        key = (subset, sym)
        got = self._step_cache.get(key)
        if got is None:
            out: set[str] = set()
            for q in subset:
                out |= self.m.moves(q, sym)
            got = frozenset(out)
            self._step_cache[key] = got
            self.subsets_built += 1
        return got

    def letters(self, subset: frozenset) -> list[str]:
        return [sym for sym in self.m.alphabet if self.step(subset, sym)]

    def residual_matches(self, subset: frozenset, pair: tuple[Word, Word]) -> bool:
        """Does the language from this subset equal the pair's shuffle?"""
        self.verifications += 1
        dfa = self._residual_dfa.get(subset)
        if dfa is None:
            fresh = "(walk:start)"
            transitions: dict[tuple[str, str], set[str]] = {(fresh, EPSILON): set(subset)}
            for key, dsts in self.m.transitions.items():
                transitions[key] = set(dsts)
            sub = Nfa(
                self.m.alphabet, list(self.m.states) + [fresh], fresh, self.m.finals, transitions
            )
            dfa = determinize(sub)
            self._residual_dfa[subset] = dfa
        target = naive_shuffle_nfa(pair[0], pair[1], alphabet=self.m.alphabet)
        return equivalent(dfa, target).holds

    def pairs(self, subset: frozenset, level: int) -> list[tuple[Word, Word]]:
        """Verified candidate pairs whose shuffle equals the residual language."""
        if subset in self._memo:
            return self._memo[subset]
        remaining = self.total - level
        result: list[tuple[Word, Word]] = []
        if remaining == 0:
            result = [((), ())]
            self._memo[subset] = result
            return result
        letters = self.letters(subset)
        assert letters, "trim level structure guarantees progress"
        candidates: set[tuple[Word, Word]] = set()
        if len(letters) <= 2:
            if len(letters) == 2:
                x, y = letters
                below = self.pairs(self.step(subset, x), level + 1)
                for a, b in below:
                    for first, second in ((a, b), (b, a)):
                        if second[:1] == (y,):
                            candidates.add(_canonical(((x,) + first, second)))
                        elif not second:
                            # the other word may be exhausted entirely
                            candidates.add(_canonical(((x,) + first, second)))
            else:
                (x,) = letters
                run = 0
                cur = subset
                while True:
                    nxt = self.step(cur, x)
                    if not nxt:
                        break
                    cur = nxt
                    run += 1
                below = self.pairs(cur, level + run)
                for a, b in below:
                    for first, second in ((a, b), (b, a)):
                        for alpha in range(run + 1):
                            candidates.add(
                                _canonical(((x,) * alpha + first, (x,) * (run - alpha) + second))
                            )
        result = [pair for pair in sorted(candidates) if self.residual_matches(subset, pair)]
        self._memo[subset] = result
        return result


def _canonical(pair: tuple[Word, Word]) -> tuple[Word, Word]:
    a, b = pair
    return (a, b) if a <= b else (b, a)


def extract_candidate(m: Nfa) -> tuple[tuple[Word, Word], dict] | NotDecomposable:
    """Candidate decomposition of an acyclic, non-unary machine.

    Returns ((u, v), stats) if the walk finds a pair whose shuffle matches the
    language; NotDecomposable carries the violated structural check otherwise.
    Callers must still run the full verifier; the walk reasons over the
    collapsed machine only.
    """
    t = trim(eliminate_eps(m))
    if not is_acyclic(t):
        raise ContractError("decomposition requires an acyclic machine")
    used = {sym for (_, sym) in t.transitions}
    if len(used) < 2:
        raise ContractError("decomposition requires a non-unary machine")
    prep = _preprocess(m)
    if isinstance(prep, NotDecomposable):
        return prep
    collapsed, total = prep
    if total < 2:
        return NotDecomposable("words shorter than two letters cannot split into two nonempty words")
    walk = _Walk(collapsed, total)
    start = frozenset({collapsed.start})
    pairs = [p for p in walk.pairs(start, 0) if p[0] and p[1]]
    stats = {"subsets_built": walk.subsets_built, "verifications": walk.verifications}
    if not pairs:
        return NotDecomposable("no split of the language into two word suffixes survives")
    return pairs[0], stats


def verify_word_decomposition(m: Nfa, u: str | Word, v: str | Word) -> DecisionOutcome:
    """Holds iff the machine's language equals the shuffle of the two words."""
    from .words import as_word

    wu, wv = as_word(u), as_word(v)
    alpha = merge_alphabets(m.alphabet, wu, wv)
    target = naive_shuffle_nfa(wu, wv, alphabet=alpha)
    out = equivalent(pad_alphabet(m, alpha), target)
    return DecisionOutcome(
        out.holds, "verify-word-decomposition (holds=equal)", witness=out.witness, stats=out.stats
    )


def decompose(m: Nfa) -> tuple[Word, Word] | None:
    """Extract a candidate pair and return it only if the verifier agrees."""
    got = extract_candidate(m)
    if isinstance(got, NotDecomposable):
        return None
    (u, v), _stats = got
    if not verify_word_decomposition(m, u, v).holds:
        return None
    return (u, v)
