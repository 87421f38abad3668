"""Finite automata and the regular-language algebra used by every pipeline.

Nfa allows epsilon moves (the reserved token ``<eps>``); Dfa is an Nfa that is
epsilon-free, deterministic and complete (totality enforced by an explicit
dead state), so complementation is a final-flag flip.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Mapping

from .errors import ContractError, InputError
from .outcome import DecisionOutcome
from .words import EPSILON, Word, as_word, check_alphabet, merge_alphabets

TransMap = Mapping[tuple[str, str], Iterable[str]]

DEAD_STATE = "{}"  # canonical name of the empty subset / completion sink


class Nfa:
    """Nondeterministic finite automaton with optional epsilon moves.

    Instances are immutable after construction; operations build new machines.
    """

    deterministic = False

    def __init__(
        self,
        alphabet: Iterable[str],
        states: Iterable[str],
        start: str,
        finals: Iterable[str],
        transitions: TransMap,
    ):
        self.alphabet = check_alphabet(alphabet)
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise InputError("duplicate state names")
        self.start = start
        self.finals = frozenset(finals)
        trans: dict[tuple[str, str], frozenset[str]] = {}
        for (src, sym), dsts in transitions.items():
            dset = frozenset(dsts)
            if dset:
                trans[(src, sym)] = dset
        self.transitions = trans
        self._validate()

    def _validate(self) -> None:
        state_set = set(self.states)
        if self.start not in state_set:
            raise InputError(f"start state {self.start!r} not declared")
        if not self.finals <= state_set:
            raise InputError(f"final states {sorted(self.finals - state_set)} not declared")
        symbols = set(self.alphabet)
        for (src, sym), dsts in self.transitions.items():
            if src not in state_set:
                raise InputError(f"transition from undeclared state {src!r}")
            if sym != EPSILON and sym not in symbols:
                raise InputError(f"transition on symbol {sym!r} outside the alphabet")
            if not dsts <= state_set:
                raise InputError(f"transition into undeclared state(s) from {src!r} on {sym!r}")

    # -- basic machinery ---------------------------------------------------

    def moves(self, state: str, symbol: str) -> frozenset[str]:
        return self.transitions.get((state, symbol), frozenset())

    def eps_closure(self, states: Iterable[str]) -> frozenset[str]:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for nxt in self.moves(q, EPSILON):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return frozenset(seen)

    def step(self, subset: frozenset[str], symbol: str) -> frozenset[str]:
        """One symbol of subset propagation, epsilon-closure aware."""
        out: set[str] = set()
        for q in subset:
            out |= self.moves(q, symbol)
        return self.eps_closure(out)

    def has_eps(self) -> bool:
        return any(sym == EPSILON for (_, sym) in self.transitions)

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(states={len(self.states)}, "
            f"alphabet={list(self.alphabet)}, finals={len(self.finals)})"
        )


class Dfa(Nfa):
    """Complete deterministic automaton: no epsilon moves, total transition map."""

    deterministic = True

    def _validate(self) -> None:
        super()._validate()
        for (src, sym), dsts in self.transitions.items():
            if sym == EPSILON:
                raise InputError("Dfa may not contain epsilon moves")
            if len(dsts) != 1:
                raise InputError(f"Dfa transition ({src!r}, {sym!r}) is not single-valued")
        for q in self.states:
            for sym in self.alphabet:
                if (q, sym) not in self.transitions:
                    raise InputError(f"Dfa is not complete: missing ({q!r}, {sym!r})")

    def next_state(self, state: str, symbol: str) -> str:
        (dst,) = self.transitions[(state, symbol)]
        return dst


# -- membership -----------------------------------------------------------


def accepts(m: Nfa, w: str | Iterable[str]) -> bool:
    """True iff ``w`` is accepted, by epsilon-closure-aware state-set propagation."""
    word = as_word(w)
    symbols = set(m.alphabet)
    for sym in word:
        if sym not in symbols:
            raise InputError(f"symbol {sym!r} outside the automaton's alphabet")
    current = m.eps_closure({m.start})
    for sym in word:
        current = m.step(current, sym)
        if not current:
            return False
    return bool(current & m.finals)


# -- constructions ---------------------------------------------------------


def _subset_name(subset: frozenset[str], order: dict[str, int]) -> str:
    return "{" + ",".join(sorted(subset, key=order.__getitem__)) + "}"


def determinize(m: Nfa) -> Dfa:
    """Subset construction; reachable subsets only, completed with a dead state."""
    order = {q: i for i, q in enumerate(m.states)}
    start = m.eps_closure({m.start})
    names: dict[frozenset[str], str] = {start: _subset_name(start, order)}
    queue = deque([start])
    transitions: dict[tuple[str, str], frozenset[str]] = {}
    needs_dead = False
    while queue:
        subset = queue.popleft()
        for sym in m.alphabet:
            nxt = m.step(subset, sym)
            if not nxt:
                needs_dead = True
                transitions[(names[subset], sym)] = frozenset({DEAD_STATE})
                continue
            if nxt not in names:
                names[nxt] = _subset_name(nxt, order)
                queue.append(nxt)
            transitions[(names[subset], sym)] = frozenset({names[nxt]})
    states = list(names.values())
    if needs_dead:
        states.append(DEAD_STATE)
        for sym in m.alphabet:
            transitions[(DEAD_STATE, sym)] = frozenset({DEAD_STATE})
    finals = {name for subset, name in names.items() if subset & m.finals}
    return Dfa(m.alphabet, states, names[start], finals, transitions)


def complement(m: Dfa) -> Dfa:
    """Flip final flags; requires a complete deterministic machine."""
    if not isinstance(m, Dfa):
        raise ContractError("complement requires a deterministic (Dfa) input")
    finals = set(m.states) - m.finals
    return Dfa(m.alphabet, m.states, m.start, finals, m.transitions)


def _require_same_alphabet(m1: Nfa, m2: Nfa, op: str) -> None:
    if m1.alphabet != m2.alphabet:
        raise InputError(
            f"{op} requires a common alphabet: {list(m1.alphabet)} vs {list(m2.alphabet)}"
        )


def intersect(m1: Nfa, m2: Nfa) -> Nfa:
    """Product automaton for the intersection; epsilon moves advance one side."""
    _require_same_alphabet(m1, m2, "intersect")

    def name(p: str, q: str) -> str:
        return f"({p}|{q})"

    start = (m1.start, m2.start)
    seen = {start}
    queue = deque([start])
    transitions: dict[tuple[str, str], set[str]] = {}
    while queue:
        p, q = queue.popleft()
        src = name(p, q)
        targets: list[tuple[str, tuple[str, str]]] = []
        for sym in m1.alphabet:
            for p2 in m1.moves(p, sym):
                for q2 in m2.moves(q, sym):
                    targets.append((sym, (p2, q2)))
        for p2 in m1.moves(p, EPSILON):
            targets.append((EPSILON, (p2, q)))
        for q2 in m2.moves(q, EPSILON):
            targets.append((EPSILON, (p, q2)))
        for sym, pair in targets:
            transitions.setdefault((src, sym), set()).add(name(*pair))
            if pair not in seen:
                seen.add(pair)
                queue.append(pair)
    states = [name(p, q) for (p, q) in seen]
    finals = {name(p, q) for (p, q) in seen if p in m1.finals and q in m2.finals}
    return Nfa(m1.alphabet, states, name(*start), finals, transitions)


def union(m1: Nfa, m2: Nfa) -> Nfa:
    """Fresh start state with epsilon moves into both operands."""
    _require_same_alphabet(m1, m2, "union")
    states = ["u:start"] + [f"1.{q}" for q in m1.states] + [f"2.{q}" for q in m2.states]
    transitions: dict[tuple[str, str], set[str]] = {
        ("u:start", EPSILON): {f"1.{m1.start}", f"2.{m2.start}"}
    }
    for (src, sym), dsts in m1.transitions.items():
        transitions[(f"1.{src}", sym)] = {f"1.{d}" for d in dsts}
    for (src, sym), dsts in m2.transitions.items():
        transitions[(f"2.{src}", sym)] = {f"2.{d}" for d in dsts}
    finals = {f"1.{q}" for q in m1.finals} | {f"2.{q}" for q in m2.finals}
    return Nfa(m1.alphabet, states, "u:start", finals, transitions)


def is_empty(m: Nfa) -> DecisionOutcome:
    """Reachability check; when nonempty the witness is a shortest accepted word.

    Epsilon edges cost nothing, so a 0/1 BFS keeps the witness shortest.
    """
    dist: dict[str, int] = {m.start: 0}
    parent: dict[str, tuple[str, str] | None] = {m.start: None}
    queue: deque[str] = deque([m.start])
    explored = 0
    while queue:
        q = queue.popleft()
        explored += 1
        d = dist[q]
        for sym in (EPSILON, *m.alphabet):
            step = 0 if sym == EPSILON else 1
            for nxt in m.moves(q, sym):
                if nxt not in dist or dist[nxt] > d + step:
                    dist[nxt] = d + step
                    parent[nxt] = (q, sym)
                    if step == 0:
                        queue.appendleft(nxt)
                    else:
                        queue.append(nxt)
    stats = {"states_explored": explored}
    reached = [q for q in m.finals if q in dist]
    if not reached:
        return DecisionOutcome(True, "nfa-emptiness", stats=stats)
    hit = min(reached, key=dist.__getitem__)
    word: list[str] = []
    cur = hit
    while parent[cur] is not None:
        prev, sym = parent[cur]  # type: ignore[misc]
        if sym != EPSILON:
            word.append(sym)
        cur = prev
    witness = tuple(reversed(word))
    assert accepts(m, witness)
    return DecisionOutcome(False, "nfa-emptiness", witness=witness, stats=stats)


def equivalent(m1: Nfa, m2: Nfa) -> DecisionOutcome:
    """Language equality via determinize/complement/intersect/emptiness both ways."""
    _require_same_alphabet(m1, m2, "equivalent")
    d1, d2 = determinize(m1), determinize(m2)
    stats = {"dfa_states": len(d1.states) + len(d2.states)}
    only1 = is_empty(intersect(m1, complement(d2)))
    if not only1.holds:
        return DecisionOutcome(False, "nfa-equivalence", witness=only1.witness, stats=stats)
    only2 = is_empty(intersect(m2, complement(d1)))
    if not only2.holds:
        return DecisionOutcome(False, "nfa-equivalence", witness=only2.witness, stats=stats)
    return DecisionOutcome(True, "nfa-equivalence", stats=stats)


def trim(m: Nfa) -> Nfa:
    """Drop states that are not accessible or not co-accessible."""
    fwd = {m.start}
    queue = deque([m.start])
    succ: dict[str, set[str]] = {}
    pred: dict[str, set[str]] = {}
    for (src, _), dsts in m.transitions.items():
        succ.setdefault(src, set()).update(dsts)
        for d in dsts:
            pred.setdefault(d, set()).add(src)
    while queue:
        q = queue.popleft()
        for nxt in succ.get(q, ()):
            if nxt not in fwd:
                fwd.add(nxt)
                queue.append(nxt)
    bwd = set(m.finals & fwd)
    queue = deque(bwd)
    while queue:
        q = queue.popleft()
        for prv in pred.get(q, ()):
            if prv in fwd and prv not in bwd:
                bwd.add(prv)
                queue.append(prv)
    keep = bwd
    if m.start not in keep:
        # empty language: keep just the start state
        return Nfa(m.alphabet, [m.start], m.start, set(), {})
    states = [q for q in m.states if q in keep]
    transitions = {
        (src, sym): dsts & keep
        for (src, sym), dsts in m.transitions.items()
        if src in keep and dsts & keep
    }
    return Nfa(m.alphabet, states, m.start, m.finals & keep, transitions)


def is_acyclic(m: Nfa) -> bool:
    """True iff no state is reachable from itself by a nonempty path (eps counts)."""
    succ: dict[str, set[str]] = {q: set() for q in m.states}
    for (src, _), dsts in m.transitions.items():
        succ[src].update(dsts)
    color: dict[str, int] = {}  # 0 in progress, 1 done
    for root in m.states:
        if root in color:
            continue
        stack: list[tuple[str, Iterable[str]]] = [(root, iter(succ[root]))]
        color[root] = 0
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in color:
                    color[nxt] = 0
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
                if color[nxt] == 0:
                    return False
            if not advanced:
                color[node] = 1
                stack.pop()
    return True


def is_universal(m: Nfa) -> DecisionOutcome:
    """Holds iff the machine accepts every word over its alphabet."""
    gap = is_empty(complement(determinize(m)))
    if gap.holds:
        return DecisionOutcome(True, "nfa-universality", stats=gap.stats)
    assert gap.witness is not None and not accepts(m, gap.witness)
    return DecisionOutcome(False, "nfa-universality", witness=gap.witness, stats=gap.stats)


# -- helpers used across modules -------------------------------------------


def eliminate_eps(m: Nfa) -> Nfa:
    """Equivalent epsilon-free machine via closure folding."""
    if not m.has_eps():
        return m
    transitions: dict[tuple[str, str], set[str]] = {}
    finals = set()
    for q in m.states:
        closure = m.eps_closure({q})
        if closure & m.finals:
            finals.add(q)
        for sym in m.alphabet:
            out: set[str] = set()
            for c in closure:
                out |= m.moves(c, sym)
            out = set(m.eps_closure(out))
            if out:
                transitions[(q, sym)] = out
    return Nfa(m.alphabet, m.states, m.start, finals, transitions)


def pad_alphabet(m: Nfa, alphabet: Iterable[str]) -> Nfa:
    """Reinterpret ``m`` over a larger alphabet (no new transitions added).

    A Dfa input is re-completed over the new alphabet so it stays a Dfa.
    """
    target = check_alphabet(alphabet)
    missing = set(m.alphabet) - set(target)
    if missing:
        raise InputError(f"target alphabet is missing {sorted(missing)}")
    if target == m.alphabet:
        return m
    if isinstance(m, Dfa):
        transitions: dict[tuple[str, str], frozenset[str]] = dict(m.transitions)
        states = list(m.states)
        if DEAD_STATE not in states:
            states.append(DEAD_STATE)
        for q in states:
            for sym in target:
                transitions.setdefault((q, sym), frozenset({DEAD_STATE}))
        return Dfa(target, states, m.start, m.finals, transitions)
    return Nfa(target, m.states, m.start, m.finals, m.transitions)


def on_common_alphabet(*machines: Nfa) -> list[Nfa]:
    """Pad every machine to the ordered union of all alphabets."""
    target = merge_alphabets(*(m.alphabet for m in machines))
    return [pad_alphabet(m, target) for m in machines]


def word_nfa(w: str | Iterable[str], alphabet: Iterable[str] | None = None) -> Nfa:
    """Chain automaton accepting exactly one word."""
    word = as_word(w)
    alpha = check_alphabet(alphabet) if alphabet is not None else merge_alphabets(word)
    states = [f"w{i}" for i in range(len(word) + 1)]
    transitions = {(f"w{i}", sym): {f"w{i + 1}"} for i, sym in enumerate(word)}
    return Nfa(alpha, states, "w0", {f"w{len(word)}"}, transitions)
