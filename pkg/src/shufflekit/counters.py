"""One-way reversal-bounded counter machines (NCM/DCM).

A machine has k counters, each allowed to switch between non-decreasing and
non-increasing mode at most r times.  Transitions are keyed on the current
state, the symbol under the head (the reserved token ``<end>`` stands for the
right end-marker), and the zero/positive pattern of the counters; a move names
the target state, a head direction (S stay, R right), and a -1/0/+1 update per
counter.  A word is accepted when some derivation reaches a final state while
the remaining input is exactly the end-marker.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Mapping

from .errors import ContractError, InputError
from .outcome import DecisionOutcome
from .words import END_MARKER, Word, as_word, check_alphabet, merge_alphabets

Guard = tuple[int, ...]
Update = tuple[int, ...]
Move = tuple[str, str, Update]  # (target state, "S"|"R", update)
CmTransMap = Mapping[tuple[str, str, Guard], Iterable[Move]]

STAY = "S"
RIGHT = "R"


class Ncm:
    """Nondeterministic reversal-bounded k-counter machine."""

    deterministic = False

    def __init__(
        self,
        k: int,
        r: int,
        alphabet: Iterable[str],
        states: Iterable[str],
        start: str,
        finals: Iterable[str],
        transitions: CmTransMap,
    ):
        if k < 0 or r < 0:
            raise InputError("counter count and reversal bound must be non-negative")
        self.k = k
        self.r = r
        self.alphabet = check_alphabet(alphabet)
        self.states = tuple(states)
        if len(set(self.states)) != len(self.states):
            raise InputError("duplicate state names")
        self.start = start
        self.finals = frozenset(finals)
        trans: dict[tuple[str, str, Guard], frozenset[Move]] = {}
        for (src, sym, guard), moves in transitions.items():
            mset = frozenset((dst, mv, tuple(upd)) for (dst, mv, upd) in moves)
            if mset:
                trans[(src, sym, tuple(guard))] = mset
        self.transitions = trans
        self._validate()

    def _validate(self) -> None:
        state_set = set(self.states)
        if self.start not in state_set:
            raise InputError(f"start state {self.start!r} not declared")
        if not self.finals <= state_set:
            raise InputError("final states not declared")
        symbols = set(self.alphabet) | {END_MARKER}
        for (src, sym, guard), moves in self.transitions.items():
            if src not in state_set:
                raise InputError(f"transition from undeclared state {src!r}")
            if sym not in symbols:
                raise InputError(f"transition on symbol {sym!r} outside alphabet/end-marker")
            if len(guard) != self.k or any(g not in (0, 1) for g in guard):
                raise InputError(f"bad guard {guard!r}")
            for dst, mv, upd in moves:
                if dst not in state_set:
                    raise InputError(f"transition into undeclared state {dst!r}")
                if mv not in (STAY, RIGHT):
                    raise InputError(f"bad head move {mv!r}")
                if len(upd) != self.k or any(u not in (-1, 0, 1) for u in upd):
                    raise InputError(f"bad update {upd!r}")
                for g, u in zip(guard, upd):
                    if g == 0 and u < 0:
                        raise InputError(
                            f"move {src!r}/{sym!r}/{guard!r} decrements a zero counter"
                        )

    def moves(self, state: str, sym: str, guard: Guard) -> frozenset[Move]:
        return self.transitions.get((state, sym, guard), frozenset())

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(k={self.k}, r={self.r}, states={len(self.states)}, "
            f"alphabet={list(self.alphabet)})"
        )


class Dcm(Ncm):
    """Deterministic counter machine: the transition relation is a function."""

    deterministic = True

    def _validate(self) -> None:
        super()._validate()
        for key, moves in self.transitions.items():
            if len(moves) > 1:
                raise InputError(f"Dcm key {key!r} has {len(moves)} moves")


def _guard_of(counters: tuple[int, ...]) -> Guard:
    return tuple(1 if c > 0 else 0 for c in counters)


def _apply_update(
    counters: tuple[int, ...], modes: tuple[int, ...], revs: tuple[int, ...], upd: Update, r: int
) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None:
    """Apply an update, tracking per-counter mode and reversal count.

    Returns None when the move would exceed the reversal bound.  Modes are +1
    (non-decreasing, the initial mode) or -1.
    """
    new_c = list(counters)
    new_m = list(modes)
    new_r = list(revs)
    for i, u in enumerate(upd):
        if u == 0:
            continue
        if u > 0 and new_m[i] < 0:
            new_r[i] += 1
            new_m[i] = 1
        elif u < 0 and new_m[i] > 0:
            new_r[i] += 1
            new_m[i] = -1
        if new_r[i] > r:
            return None
        new_c[i] += u
        assert new_c[i] >= 0, "guard rule violated at runtime"
    return tuple(new_c), tuple(new_m), tuple(new_r)


def default_stay_bound(m: Ncm, word_len: int) -> int:
    """Consecutive-stay allowance: generous for every shipped machine shape."""
    return max(1, len(m.states)) * (word_len + 2) + len(m.states)


def cm_accepts(m: Ncm, w: str | Iterable[str], stay_bound: int | None = None) -> bool:
    """Configuration search for membership.

    Runs are pruned when they exceed ``stay_bound`` consecutive stay moves or
    the per-counter reversal bound; a visited-set cut removes exact
    configuration repeats, so the search always terminates.
    """
    word = as_word(w)
    symbols = set(m.alphabet)
    for sym in word:
        if sym not in symbols:
            raise InputError(f"symbol {sym!r} outside the machine's alphabet")
    if stay_bound is None:
        stay_bound = default_stay_bound(m, len(word))
    if stay_bound < 1:
        raise InputError("stay_bound must be >= 1")
    zeros = tuple([0] * m.k)
    start = (m.start, 0, zeros, tuple([1] * m.k), zeros)
    best_stays: dict[tuple, int] = {start: 0}
    queue: deque[tuple[tuple, int]] = deque([(start, 0)])
    while queue:
        config, stays = queue.popleft()
        if stays > best_stays.get(config, stay_bound):
            continue
        state, pos, counters, modes, revs = config
        if pos == len(word) and state in m.finals:
            return True
        sym = word[pos] if pos < len(word) else END_MARKER
        for dst, mv, upd in m.moves(state, sym, _guard_of(counters)):
            applied = _apply_update(counters, modes, revs, upd, m.r)
            if applied is None:
                continue
            new_c, new_m, new_r = applied
            if mv == STAY:
                new_pos, new_stays = pos, stays + 1
                if new_stays > stay_bound:
                    continue
            else:
                if sym == END_MARKER:
                    continue  # moving right off the marker can never reach acceptance
                new_pos, new_stays = pos + 1, 0
            nxt = (dst, new_pos, new_c, new_m, new_r)
            if new_stays < best_stays.get(nxt, stay_bound + 1):
                best_stays[nxt] = new_stays
                queue.append((nxt, new_stays))
    return False


def default_emptiness_cap(m: Ncm) -> int:
    return max(1, len(m.states)) * (2**m.k) * (m.r + 1) * 4


def cm_is_empty(m: Ncm, cap: int | None = None) -> DecisionOutcome:
    """Capped certificate-producing emptiness search.

    A NonEmpty verdict carries a witness replayed through ``cm_accepts`` and is
    unconditionally sound.  An Empty verdict is certified only for runs whose
    counters stay within ``cap``: when the cap ever cuts a branch the outcome
    is flagged bounded.
    """
    if cap is None:
        cap = default_emptiness_cap(m)
    if cap < 1:
        raise InputError("cap must be >= 1")
    zeros = tuple([0] * m.k)
    heads = tuple(m.alphabet) + (END_MARKER,)
    parents: dict[tuple, tuple[tuple, str | None] | None] = {}
    queue: deque[tuple] = deque()
    for head in heads:
        config = (m.start, head, zeros, tuple([1] * m.k), zeros)
        parents[config] = None
        queue.append(config)
    capped = False
    explored = 0
    goal: tuple | None = None
    while queue and goal is None:
        config = queue.popleft()
        explored += 1
        state, head, counters, modes, revs = config
        if head == END_MARKER and state in m.finals:
            goal = config
            break
        for dst, mv, upd in m.moves(state, head, _guard_of(counters)):
            applied = _apply_update(counters, modes, revs, upd, m.r)
            if applied is None:
                continue
            new_c, new_m, new_r = applied
            if any(c > cap for c in new_c):
                capped = True
                continue
            if mv == STAY:
                nxt = (dst, head, new_c, new_m, new_r)
                if nxt not in parents:
                    parents[nxt] = (config, None)
                    queue.append(nxt)
            else:
                if head == END_MARKER:
                    continue
                for new_head in heads:
                    nxt = (dst, new_head, new_c, new_m, new_r)
                    if nxt not in parents:
                        parents[nxt] = (config, head)
                        queue.append(nxt)
    stats = {"configurations": explored, "cap": cap}
    if goal is None:
        return DecisionOutcome(True, "ncm-emptiness", bounded=capped, stats=stats)
    rev_word: list[str] = []
    cur: tuple | None = goal
    while cur is not None:
        entry = parents[cur]
        if entry is None:
            break
        prev, consumed = entry
        if consumed is not None:
            rev_word.append(consumed)
        cur = prev
    witness: Word = tuple(reversed(rev_word))
    assert cm_accepts(m, witness), "emptiness witness failed re-verification"
    return DecisionOutcome(False, "ncm-emptiness", witness=witness, stats=stats)


# -- constructions ----------------------------------------------------------


def _pad_counters(m: Ncm, k: int) -> Ncm:
    """Reinterpret over k >= m.k counters; the extra counters are never touched."""
    if k == m.k:
        return m
    if k < m.k:
        raise InputError("cannot shrink counter count")
    extra = k - m.k
    transitions: dict[tuple[str, str, Guard], set[Move]] = {}
    for (src, sym, guard), moves in m.transitions.items():
        for tail in itertools.product((0, 1), repeat=extra):
            key = (src, sym, guard + tail)
            transitions.setdefault(key, set()).update(
                (dst, mv, upd + (0,) * extra) for (dst, mv, upd) in moves
            )
    return Ncm(k, m.r, m.alphabet, m.states, m.start, m.finals, transitions)


def cm_pad_alphabet(m: Ncm, alphabet: Iterable[str]) -> Ncm:
    target = check_alphabet(alphabet)
    if set(m.alphabet) - set(target):
        raise InputError("target alphabet is missing symbols")
    cls = Dcm if isinstance(m, Dcm) else Ncm
    return cls(m.k, m.r, target, m.states, m.start, m.finals, m.transitions)


def cm_shuffle(m1: Ncm, m2: Ncm) -> Ncm:
    """Machine for the shuffle of the two languages.

    Pair states carry a per-symbol owner commitment: a stay move of either
    machine commits the current input symbol to that machine until its right
    move consumes it, so stay-chains always read the symbol their machine will
    actually consume.  Machine 1 runs on the first block of counters, machine 2
    on the second.
    """
    alpha = merge_alphabets(m1.alphabet, m2.alphabet)
    m1 = cm_pad_alphabet(m1, alpha)
    m2 = cm_pad_alphabet(m2, alpha)
    k1, k2 = m1.k, m2.k
    r = max(m1.r, m2.r)

    def name(p: str, q: str, owner: int) -> str:
        return f"({p}|{q}|{owner})"

    guards2 = list(itertools.product((0, 1), repeat=k2))
    guards1 = list(itertools.product((0, 1), repeat=k1))
    zeros1, zeros2 = (0,) * k1, (0,) * k2

    transitions: dict[tuple[str, str, Guard], set[Move]] = {}
    seen: set[tuple[str, str, int]] = set()
    queue: deque[tuple[str, str, int]] = deque()

    def visit(p: str, q: str, owner: int) -> str:
        key = (p, q, owner)
        if key not in seen:
            seen.add(key)
            queue.append(key)
        return name(p, q, owner)

    start = visit(m1.start, m2.start, 0)
    while queue:
        p, q, owner = queue.popleft()
        src = name(p, q, owner)
        for sym in alpha:
            if owner in (0, 1):
                for g1 in guards1:
                    for dst, mv, upd in m1.moves(p, sym, g1):
                        new_owner = 1 if mv == STAY else 0
                        tgt = visit(dst, q, new_owner)
                        for g2 in guards2:
                            transitions.setdefault((src, sym, g1 + g2), set()).add(
                                (tgt, mv, upd + zeros2)
                            )
            if owner in (0, 2):
                for g2 in guards2:
                    for dst, mv, upd in m2.moves(q, sym, g2):
                        new_owner = 2 if mv == STAY else 0
                        tgt = visit(p, dst, new_owner)
                        for g1 in guards1:
                            transitions.setdefault((src, sym, g1 + g2), set()).add(
                                (tgt, mv, zeros1 + upd)
                            )
        if owner == 0:
            # end-marker processing: both machines run their stay chains; right
            # moves off the marker are truncated (acceptance happens at the marker)
            for g1 in guards1:
                for dst, mv, upd in m1.moves(p, END_MARKER, g1):
                    if mv != STAY:
                        continue
                    tgt = visit(dst, q, 0)
                    for g2 in guards2:
                        transitions.setdefault((src, END_MARKER, g1 + g2), set()).add(
                            (tgt, STAY, upd + zeros2)
                        )
            for g2 in guards2:
                for dst, mv, upd in m2.moves(q, END_MARKER, g2):
                    if mv != STAY:
                        continue
                    tgt = visit(p, dst, 0)
                    for g1 in guards1:
                        transitions.setdefault((src, END_MARKER, g1 + g2), set()).add(
                            (tgt, STAY, zeros1 + upd)
                        )
    states = [name(*key) for key in seen]
    finals = {
        name(p, q, o) for (p, q, o) in seen if o == 0 and p in m1.finals and q in m2.finals
    }
    return Ncm(k1 + k2, r, alpha, states, name(m1.start, m2.start, 0), finals, transitions)


def cm_product(m1: Ncm, m2: Ncm) -> Ncm:
    """Intersection by parallel simulation on concatenated counters.

    Both machines consume the same symbols.  Stay interleaving is resolved by a
    fixed discipline: machine 1 runs until it commits to its right move (whose
    update is applied by a product stay step), then machine 2 runs and its
    right move performs the shared consumption.  At the end-marker the turn may
    also be handed over freely so either machine can be frozen in a final state.
    """
    alpha = merge_alphabets(m1.alphabet, m2.alphabet)
    m1 = cm_pad_alphabet(m1, alpha)
    m2 = cm_pad_alphabet(m2, alpha)
    k1, k2 = m1.k, m2.k
    r = max(m1.r, m2.r)

    def name(p: str, q: str, phase: int) -> str:
        return f"({p}|{q}|{phase})"

    guards1 = list(itertools.product((0, 1), repeat=k1))
    guards2 = list(itertools.product((0, 1), repeat=k2))
    zeros1, zeros2 = (0,) * k1, (0,) * k2

    transitions: dict[tuple[str, str, Guard], set[Move]] = {}
    seen: set[tuple[str, str, int]] = set()
    queue: deque[tuple[str, str, int]] = deque()

    def visit(p: str, q: str, phase: int) -> str:
        key = (p, q, phase)
        if key not in seen:
            seen.add(key)
            queue.append(key)
        return name(p, q, phase)

    start = visit(m1.start, m2.start, 1)
    syms = tuple(alpha) + (END_MARKER,)
    while queue:
        p, q, phase = queue.popleft()
        src = name(p, q, phase)
        for sym in syms:
            if phase == 1:
                for g1 in guards1:
                    for dst, mv, upd in m1.moves(p, sym, g1):
                        if mv == STAY:
                            tgt = visit(dst, q, 1)
                        elif sym == END_MARKER:
                            continue  # truncated: acceptance happens at the marker
                        else:
                            tgt = visit(dst, q, 2)
                        for g2 in guards2:
                            transitions.setdefault((src, sym, g1 + g2), set()).add(
                                (tgt, STAY, upd + zeros2)
                            )
                if sym == END_MARKER:
                    tgt = visit(p, q, 2)  # free hand-over at the marker
                    for g1 in guards1:
                        for g2 in guards2:
                            transitions.setdefault((src, sym, g1 + g2), set()).add(
                                (tgt, STAY, zeros1 + zeros2)
                            )
            else:
                for g2 in guards2:
                    for dst, mv, upd in m2.moves(q, sym, g2):
                        if mv == STAY:
                            tgt = visit(p, dst, 2)
                        elif sym == END_MARKER:
                            continue
                        else:
                            tgt = visit(p, dst, 1)
                        head = STAY if (mv == STAY or sym == END_MARKER) else RIGHT
                        for g1 in guards1:
                            transitions.setdefault((src, sym, g1 + g2), set()).add(
                                (tgt, head, zeros1 + upd)
                            )
    states = [name(*key) for key in seen]
    finals = {
        name(p, q, ph) for (p, q, ph) in seen if ph == 2 and p in m1.finals and q in m2.finals
    }
    return Ncm(k1 + k2, r, alpha, states, start, finals, transitions)


# -- completion, halting check, complement ---------------------------------


def _dead_name(states: Iterable[str]) -> str:
    name = "(dead)"
    taken = set(states)
    while name in taken:
        name += "'"
    return name


def cm_complete(m: Ncm) -> tuple[Ncm, str]:
    """Total version of the machine: undefined keys move right into a dead state."""
    dead = _dead_name(m.states)
    transitions: dict[tuple[str, str, Guard], set[Move]] = {
        key: set(moves) for key, moves in m.transitions.items()
    }
    zeros = (0,) * m.k
    syms = tuple(m.alphabet) + (END_MARKER,)
    for state in tuple(m.states) + (dead,):
        for sym in syms:
            for guard in itertools.product((0, 1), repeat=m.k):
                key = (state, sym, guard)
                if key not in transitions or not transitions[key]:
                    transitions[key] = {(dead, RIGHT, zeros)}
    cls = Dcm if isinstance(m, Dcm) else Ncm
    return (
        cls(m.k, m.r, m.alphabet, tuple(m.states) + (dead,), m.start, m.finals, transitions),
        dead,
    )


def _sccs(nodes: list, edges: dict) -> list[list]:
    """Iterative Tarjan strongly-connected components."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(edges.get(nxt, ()))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if not advanced:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        q = stack.pop()
                        on_stack.discard(q)
                        comp.append(q)
                        if q == node:
                            break
                    out.append(comp)
    return out


def _next_guards(guard: Guard, upd: Update) -> list[Guard]:
    """Over-approximate the guard pattern after one update."""
    options: list[tuple[int, ...]] = []
    for g, u in zip(guard, upd):
        if g == 0:
            options.append((1,) if u > 0 else (0,))
        elif u < 0:
            options.append((0, 1))
        else:
            options.append((1,))
    return [tuple(combo) for combo in itertools.product(*options)]


def _stay_graph_terminates(m: Ncm, sym: str) -> tuple[bool, tuple[str, Guard] | None]:
    """Size-change check: every stay chain at this head symbol is finite.

    Nodes are (state, guard) pairs; an SCC is benign when some counter is never
    incremented inside it, in which case its decrement edges can fire only
    finitely often and are removed before re-checking the remainder.
    """
    edges: dict[tuple[str, Guard], list[tuple[tuple[str, Guard], Update]]] = {}
    nodes: set[tuple[str, Guard]] = set()
    for (src, s, guard), moves in m.transitions.items():
        if s != sym:
            continue
        nodes.add((src, guard))
        for dst, mv, upd in moves:
            if mv != STAY:
                continue
            for g2 in _next_guards(guard, upd):
                nodes.add((dst, g2))
                edges.setdefault((src, guard), []).append(((dst, g2), upd))

    def check(sub_nodes: list, sub_edges: dict) -> tuple[bool, tuple[str, Guard] | None]:
        node_set = set(sub_nodes)
        adjacency = {
            n: [t for (t, _) in sub_edges.get(n, []) if t in node_set] for n in sub_nodes
        }
        for comp in _sccs(sub_nodes, adjacency):
            comp_set = set(comp)
            inside = [
                (n, t, u)
                for n in comp
                for (t, u) in sub_edges.get(n, [])
                if t in comp_set
            ]
            if not inside:
                continue
            chosen = None
            for i in range(m.k):
                if all(u[i] <= 0 for (_, _, u) in inside) and any(
                    u[i] < 0 for (_, _, u) in inside
                ):
                    chosen = i
                    break
            if chosen is None:
                return False, comp[0]
            remaining = {
                n: [(t, u) for (t, u) in sub_edges.get(n, []) if not (t in comp_set and u[chosen] < 0)]
                for n in comp
            }
            ok, offender = check(comp, remaining)
            if not ok:
                return False, offender
        return True, None

    return check(sorted(nodes), edges)


def check_complete_halting(m: Dcm) -> DecisionOutcome:
    """Precondition guard for complementation.

    Holds iff, after completion, every configuration has a move and every stay
    chain terminates (no stay cycle survives the per-counter ranking argument).
    """
    if not isinstance(m, Dcm):
        raise ContractError("check_complete_halting expects a deterministic machine")
    completed, _ = cm_complete(m)
    for sym in tuple(m.alphabet) + (END_MARKER,):
        ok, offender = _stay_graph_terminates(completed, sym)
        if not ok:
            state, guard = offender  # type: ignore[misc]
            return DecisionOutcome(
                False,
                f"dcm-complete-halting: stay cycle at state {state!r} guard {guard} on {sym!r}",
                stats={"states": len(completed.states)},
            )
    return DecisionOutcome(True, "dcm-complete-halting", stats={"states": len(completed.states)})


def dcm_complement(m: Dcm) -> Dcm:
    """Complement of a complete-and-halting deterministic machine.

    The completed machine is augmented with a bit recording whether a final
    state has been visited while the head sits on the end-marker; the unique
    right move off the marker is routed through an exit state whose final flag
    is the flip of that bit.
    """
    halting = check_complete_halting(m)
    if not halting.holds:
        raise ContractError(halting.method)
    completed, dead = cm_complete(m)

    def name(q: str, b: int) -> str:
        return f"[{q}|{b}]"

    exits = {0: "[exit|0]", 1: "[exit|1]"}
    done = "[done]"
    zeros = (0,) * m.k
    transitions: dict[tuple[str, str, Guard], set[Move]] = {}
    states: list[str] = [name(q, b) for q in completed.states for b in (0, 1)]
    states += [exits[0], exits[1], done]
    for (src, sym, guard), moves in completed.transitions.items():
        (move,) = tuple(moves)
        dst, mv, upd = move
        for b in (0, 1):
            key = (name(src, b), sym, guard)
            nb = 1 if (b or src in completed.finals) else 0
            if sym != END_MARKER:
                transitions[key] = {(name(dst, 0), mv, upd)}
            elif mv == STAY:
                transitions[key] = {(name(dst, nb), STAY, upd)}
            else:
                transitions[key] = {(exits[nb], STAY, upd)}
    for b in (0, 1):
        for guard in itertools.product((0, 1), repeat=m.k):
            transitions[(exits[b], END_MARKER, guard)] = {(done, RIGHT, zeros)}
    out = Dcm(
        m.k,
        m.r,
        m.alphabet,
        states,
        name(completed.start, 0),
        {exits[0]},
        transitions,
    )
    completed_out, _ = cm_complete(out)
    return completed_out


# -- reversal normalisation --------------------------------------------------


def normalize_reversals(m: Ncm) -> Ncm:
    """Language-preserving rebuild with 1-reversal counters.

    Each original counter's alternating up/down phases are split across
    ceil((r+1)/2) fresh counters; on the reversal that starts a new up phase
    the live value is drained into the next counter by a stay loop before the
    pending move is applied.
    """
    if m.r <= 1:
        return m
    per = (m.r + 2) // 2  # ceil((r+1)/2)
    k2 = m.k * per

    def phys(j: int, phase: int) -> int:
        return j * per + phase // 2

    # A pending record freezes a move while value transfers run:
    # (head symbol, target state, target phases, head move, residual update,
    #  counters still to drain).
    def sname(q: str, phases: tuple[int, ...], pend) -> str:
        base = f"{q}|ph{','.join(map(str, phases))}"
        if pend is None:
            return base
        sym, tgt, tph, mv, residual, drains = pend
        return (
            f"{base}|pend:{sym}>{tgt}|{','.join(map(str, tph))}"
            f"|{mv}|{','.join(map(str, residual))}|{','.join(map(str, drains))}"
        )

    all_guards = list(itertools.product((0, 1), repeat=k2))
    transitions: dict[tuple[str, str, Guard], set[Move]] = {}
    seen: set = set()
    queue: deque = deque()

    def visit(node) -> str:
        if node not in seen:
            seen.add(node)
            queue.append(node)
        return sname(*node)

    start = visit((m.start, (0,) * m.k, None))
    syms = tuple(m.alphabet) + (END_MARKER,)
    finals: set[str] = set()

    while queue:
        node = queue.popleft()
        q, phases, pend = node
        src = sname(*node)
        if pend is None and q in m.finals:
            finals.add(src)
        if pend is not None:
            sym, p_target, phases_target, d_move, residual, drains = pend
            j = drains[0]
            old = phys(j, phases[j])
            new = old + 1
            for guard in all_guards:
                if guard[old] == 1:
                    upd = [0] * k2
                    upd[old], upd[new] = -1, 1
                    transitions.setdefault((src, sym, guard), set()).add((src, STAY, tuple(upd)))
                else:
                    rest = drains[1:]
                    if rest:
                        tgt = visit(
                            (q, phases, (sym, p_target, phases_target, d_move, residual, rest))
                        )
                        transitions.setdefault((src, sym, guard), set()).add(
                            (tgt, STAY, (0,) * k2)
                        )
                    else:
                        if any(g == 0 and u < 0 for g, u in zip(guard, residual)):
                            continue
                        tgt = visit((p_target, phases_target, None))
                        transitions.setdefault((src, sym, guard), set()).add(
                            (tgt, d_move, residual)
                        )
            continue
        for sym in syms:
            for g in itertools.product((0, 1), repeat=m.k):
                for dst, mv, upd in m.moves(q, sym, g):
                    new_phases = list(phases)
                    drains: list[int] = []
                    ok = True
                    for j, u in enumerate(upd):
                        ph = phases[j]
                        if u > 0 and ph % 2 == 1:
                            if ph + 1 > m.r:
                                ok = False
                                break
                            new_phases[j] = ph + 1
                            drains.append(j)
                        elif u < 0 and ph % 2 == 0:
                            if ph + 1 > m.r:
                                ok = False
                                break
                            new_phases[j] = ph + 1
                    if not ok:
                        continue
                    residual = [0] * k2
                    for j, u in enumerate(upd):
                        residual[phys(j, new_phases[j])] = u
                    residual_t = tuple(residual)
                    matching = [
                        guard
                        for guard in all_guards
                        if all(guard[phys(j, phases[j])] == g[j] for j in range(m.k))
                    ]
                    if not drains:
                        tgt = visit((dst, tuple(new_phases), None))
                        for guard in matching:
                            if any(gg == 0 and u < 0 for gg, u in zip(guard, residual_t)):
                                continue
                            transitions.setdefault((src, sym, guard), set()).add(
                                (tgt, mv, residual_t)
                            )
                    else:
                        pend_rec = (sym, dst, tuple(new_phases), mv, residual_t, tuple(drains))
                        tgt = visit((q, phases, pend_rec))
                        for guard in matching:
                            transitions.setdefault((src, sym, guard), set()).add(
                                (tgt, STAY, (0,) * k2)
                            )
    states = [sname(*node) for node in seen]
    return Ncm(k2, 1, m.alphabet, states, start, finals, transitions)
