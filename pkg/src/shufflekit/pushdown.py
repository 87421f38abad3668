"""Pushdown machines: NPDA membership/emptiness and DPDA complementation.

Acceptance is by final state after consuming the whole input, with any stack.
Membership goes through the classic pushdown-to-grammar conversion and CYK on
a Chomsky normal form; emptiness uses the same triple construction, driven
lazily as a shortest-derivation saturation so only derivable triples are ever
materialised.

Deterministic machines admit complementation.  To keep spontaneous runs
finite without the full predicting-machine construction, a Dpda's spontaneous
(lambda) rules must not grow the stack: each pushes at most one symbol, and
the rewrite graph over (state, stack-top) pairs must be acyclic.  Violations
are rejected at load time with the offending rule.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from collections.abc import Iterable, Mapping

from .errors import ContractError, InputError
from .fa import Nfa
from .outcome import DecisionOutcome
from .words import EPSILON, Word, as_word, check_alphabet

PdaMove = tuple[str, tuple[str, ...]]  # (target state, pushed symbols, new top first)
PdaTransMap = Mapping[tuple[str, str, str], Iterable[PdaMove]]


class Npda:
    """Nondeterministic pushdown automaton, final-state acceptance."""

    deterministic = False

    def __init__(
        self,
        states: Iterable[str],
        alphabet: Iterable[str],
        stack_alphabet: Iterable[str],
        start: str,
        initial_stack: str,
        finals: Iterable[str],
        transitions: PdaTransMap,
    ):
        self.states = tuple(states)
        self.alphabet = check_alphabet(alphabet)
        self.stack_alphabet = tuple(stack_alphabet)
        self.start = start
        self.initial_stack = initial_stack
        self.finals = frozenset(finals)
        trans: dict[tuple[str, str, str], frozenset[PdaMove]] = {}
        for (src, sym, top), moves in transitions.items():
            mset = frozenset((dst, tuple(push)) for (dst, push) in moves)
            if mset:
                trans[(src, sym, top)] = mset
        self.transitions = trans
        self._validate()

    def _validate(self) -> None:
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise InputError("duplicate state names")
        stack_set = set(self.stack_alphabet)
        if len(stack_set) != len(self.stack_alphabet):
            raise InputError("duplicate stack symbols")
        if self.start not in state_set:
            raise InputError(f"start state {self.start!r} not declared")
        if self.initial_stack not in stack_set:
            raise InputError(f"initial stack symbol {self.initial_stack!r} not declared")
        if not self.finals <= state_set:
            raise InputError("final states not declared")
        symbols = set(self.alphabet)
        for (src, sym, top), moves in self.transitions.items():
            if src not in state_set:
                raise InputError(f"transition from undeclared state {src!r}")
            if sym != EPSILON and sym not in symbols:
                raise InputError(f"transition on {sym!r} outside the input alphabet")
            if top not in stack_set:
                raise InputError(f"transition on undeclared stack symbol {top!r}")
            for dst, push in moves:
                if dst not in state_set:
                    raise InputError(f"transition into undeclared state {dst!r}")
                if any(s not in stack_set for s in push):
                    raise InputError(f"push string {push!r} leaves the stack alphabet")

    def moves(self, state: str, sym: str, top: str) -> frozenset[PdaMove]:
        return self.transitions.get((state, sym, top), frozenset())

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(states={len(self.states)}, "
            f"alphabet={list(self.alphabet)}, stack={list(self.stack_alphabet)})"
        )


class Dpda(Npda):
    """Deterministic pushdown automaton.

    Per (state, stack-top) either exactly one lambda rule and no symbol rules,
    or at most one rule per input symbol.  Lambda rules push at most one symbol
    and their rewrite graph is acyclic, so spontaneous runs always terminate.
    """

    deterministic = True

    def _validate(self) -> None:
        super()._validate()
        by_pair: dict[tuple[str, str], dict[str, int]] = {}
        for (src, sym, top), moves in self.transitions.items():
            if len(moves) > 1:
                raise InputError(f"nondeterministic moves at {(src, sym, top)!r}")
            by_pair.setdefault((src, top), {})[sym] = len(moves)
        for (src, top), syms in by_pair.items():
            if EPSILON in syms and len(syms) > 1:
                raise InputError(
                    f"state {src!r} mixes a lambda rule with symbol rules on top {top!r}"
                )
        rewrite_edges: dict[tuple[str, str], list[tuple[str, str]]] = {}
        for (src, sym, top), moves in self.transitions.items():
            if sym != EPSILON:
                continue
            ((dst, push),) = tuple(moves)
            if len(push) > 1:
                raise ContractError(
                    f"lambda rule at {(src, top)!r} pushes {len(push)} symbols; "
                    "lambda rules may push at most one"
                )
            if len(push) == 1:
                rewrite_edges.setdefault((src, top), []).append((dst, push[0]))
        self._check_rewrite_acyclic(rewrite_edges)

    @staticmethod
    def _check_rewrite_acyclic(edges: dict) -> None:
        color: dict = {}
        for root in edges:
            if root in color:
                continue
            stack = [(root, iter(edges.get(root, ())))]
            color[root] = 0
            while stack:
                node, it = stack[-1]
                advanced = False
                for nxt in it:
                    if nxt not in color:
                        color[nxt] = 0
                        stack.append((nxt, iter(edges.get(nxt, ()))))
                        advanced = True
                        break
                    if color[nxt] == 0:
                        raise ContractError(
                            f"lambda rewrite cycle through (state, top) {nxt!r}"
                        )
                if not advanced:
                    color[node] = 1
                    stack.pop()


# -- bounded direct simulation (test oracle) ---------------------------------


def npda_accepts_search(
    m: Npda, w: str | Iterable[str], max_steps: int = 20000, max_stack: int | None = None
) -> bool:
    """Breadth-first configuration search with explicit bounds.

    An independent membership route used to cross-check the grammar pipeline;
    sound only within the step/stack bounds, which is all the fixtures need.
    """
    word = as_word(w)
    if max_stack is None:
        max_stack = 4 * (len(word) + 4)
    start = (m.start, 0, (m.initial_stack,))
    seen = {start}
    queue = deque([start])
    steps = 0
    while queue and steps < max_steps:
        state, pos, stack = queue.popleft()
        steps += 1
        if pos == len(word) and state in m.finals:
            return True
        if stack:
            top, rest = stack[0], stack[1:]
            succ: list[tuple[str, int, tuple[str, ...]]] = []
            for dst, push in m.moves(state, EPSILON, top):
                succ.append((dst, pos, push + rest))
            if pos < len(word):
                for dst, push in m.moves(state, word[pos], top):
                    succ.append((dst, pos + 1, push + rest))
            for cfg in succ:
                if len(cfg[2]) <= max_stack and cfg not in seen:
                    seen.add(cfg)
                    queue.append(cfg)
    return False


# -- pushdown-to-grammar machinery -------------------------------------------


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    while name in taken:
        name += "'"
    taken.add(name)
    return name


class _TripleSystem:
    """Empty-stack conversion plus push normalisation, as flat rule lists.

    Rules are grouped by push arity so the triple grammar
    [p A q] -> x | x [r B q] | x [r B s][s C q] can be driven directly.
    """

    def __init__(self, m: Npda):
        taken = set(m.states)
        self.start_state = _fresh("pda:start", taken)
        self.drain = _fresh("pda:drain", taken)
        stack_taken = set(m.stack_alphabet)
        self.bottom = _fresh("pda:bottom", stack_taken)
        self.pop_rules: list[tuple[str, str, str, str]] = []
        self.rewrite_rules: list[tuple[str, str, str, str, str]] = []
        self.push2_rules: list[tuple[str, str, str, str, str, str]] = []
        self.states: set[str] = set(m.states) | {self.start_state, self.drain}
        self.stack_symbols: set[str] = set(m.stack_alphabet) | {self.bottom}
        self.alphabet = m.alphabet

        def add(src: str, sym: str, top: str, dst: str, push: tuple[str, ...]) -> None:
            if len(push) == 0:
                self.pop_rules.append((src, sym, top, dst))
            elif len(push) == 1:
                self.rewrite_rules.append((src, sym, top, dst, push[0]))
            elif len(push) == 2:
                self.push2_rules.append((src, sym, top, dst, push[0], push[1]))
            else:
                # split long pushes through fresh states, two symbols at a time
                mid = _fresh(f"{src}>push", taken)
                self.states.add(mid)
                add(src, sym, top, mid, push[-2:])
                add(mid, EPSILON, push[-2], dst, push[:-2] + (push[-2],))

        add(self.start_state, EPSILON, self.bottom, m.start, (m.initial_stack, self.bottom))
        for (src, sym, top), moves in m.transitions.items():
            for dst, push in moves:
                add(src, sym, top, dst, push)
        for f in m.finals:
            for top in self.stack_symbols:
                add(f, EPSILON, top, self.drain, ())
        for top in self.stack_symbols:
            add(self.drain, EPSILON, top, self.drain, ())


def _saturate(system: _TripleSystem) -> dict[tuple[str, str, str], tuple[int, tuple]]:
    """Shortest-word saturation over pop triples.

    Returns, for every derivable triple (p, A, q), the length of a shortest
    word taking p with A on top to q with A popped, plus the rule application
    realising it (for witness reconstruction).
    """
    best: dict[tuple[str, str, str], tuple[int, tuple]] = {}
    heap: list[tuple[int, tuple[str, str, str], tuple]] = []
    rewrites_by_head: dict[tuple[str, str], list] = {}
    for rule in system.rewrite_rules:
        src, sym, top, dst, pushed = rule
        rewrites_by_head.setdefault((dst, pushed), []).append(rule)
    push2_by_left: dict[tuple[str, str], list] = {}
    push2_by_right_stack: dict[str, list] = {}
    for rule in system.push2_rules:
        src, sym, top, dst, first, second = rule
        push2_by_left.setdefault((dst, first), []).append(rule)
        push2_by_right_stack.setdefault(second, []).append(rule)
    settled_by_head: dict[tuple[str, str], list[str]] = {}

    def offer(triple, cost, how):
        cur = best.get(triple)
        if cur is None or cost < cur[0]:
            best[triple] = (cost, how)
            heapq.heappush(heap, (cost, triple, how))

    for src, sym, top, dst in system.pop_rules:
        offer((src, top, dst), 0 if sym == EPSILON else 1, ("pop", sym))

    settled: set = set()
    while heap:
        cost, triple, how = heapq.heappop(heap)
        if triple in settled:
            continue
        if best[triple][0] < cost:
            continue
        settled.add(triple)
        p, a, q = triple
        settled_by_head.setdefault((p, a), []).append(q)
        for rule in rewrites_by_head.get((p, a), ()):
            src, sym, top, _, _ = rule
            step = 0 if sym == EPSILON else 1
            offer((src, top, q), cost + step, ("rewrite", sym, triple))
        # triple as the left body of a push-2 rule
        for rule in push2_by_left.get((p, a), ()):
            src, sym, top, dst, first, second = rule
            step = 0 if sym == EPSILON else 1
            for q2 in settled_by_head.get((q, second), ()):
                right = (q, second, q2)
                offer(
                    (src, top, q2),
                    cost + step + best[right][0],
                    ("push2", sym, triple, right),
                )
        # triple as the right body of a push-2 rule
        for rule in push2_by_right_stack.get(a, ()):
            src, sym, top, dst, first, second = rule
            step = 0 if sym == EPSILON else 1
            left = (dst, first, p)
            if left in settled:
                offer(
                    (src, top, q),
                    best[left][0] + cost + step,
                    ("push2", sym, left, triple),
                )
    return {t: v for t, v in best.items() if t in settled}


def _witness_from(how_map, triple) -> Word:
    kind = how_map[triple][1]
    if kind[0] == "pop":
        sym = kind[1]
        return () if sym == EPSILON else (sym,)
    if kind[0] == "rewrite":
        _, sym, inner = kind
        head = () if sym == EPSILON else (sym,)
        return head + _witness_from(how_map, inner)
    _, sym, left, right = kind
    head = () if sym == EPSILON else (sym,)
    return head + _witness_from(how_map, left) + _witness_from(how_map, right)


def npda_is_empty(m: Npda) -> DecisionOutcome:
    """Holds iff the language is empty; otherwise carries a shortest witness."""
    system = _TripleSystem(m)
    derivable = _saturate(system)
    stats = {"derivable_triples": len(derivable)}
    starts = [
        t
        for t in derivable
        if t[0] == system.start_state and t[1] == system.bottom
    ]
    if not starts:
        return DecisionOutcome(True, "npda-emptiness", stats=stats)
    top = min(starts, key=lambda t: derivable[t][0])
    witness = _witness_from(derivable, top)
    assert npda_accepts(m, witness), "emptiness witness failed re-verification"
    return DecisionOutcome(False, "npda-emptiness", witness=witness, stats=stats)


# -- grammar extraction and CYK ----------------------------------------------


def _triple_grammar(m: Npda):
    """Productions over derivable triples, restricted to those reachable from S."""
    system = _TripleSystem(m)
    derivable = _saturate(system)
    gen = set(derivable)
    start = ("S",)
    prods: dict[object, list[tuple]] = {start: []}
    settled_by_head: dict[tuple[str, str], list[str]] = {}
    for p, a, q in gen:
        settled_by_head.setdefault((p, a), []).append(q)
    for q in settled_by_head.get((system.start_state, system.bottom), ()):
        prods[start].append(((system.start_state, system.bottom, q),))
    for src, sym, top, dst in system.pop_rules:
        t = (src, top, dst)
        if t in gen:
            prods.setdefault(t, []).append((sym,) if sym != EPSILON else ())
    for src, sym, top, dst, pushed in system.rewrite_rules:
        for q in settled_by_head.get((dst, pushed), ()):
            t = (src, top, q)
            body = ((dst, pushed, q),)
            if sym != EPSILON:
                body = (sym,) + body
            prods.setdefault(t, []).append(body)
    for src, sym, top, dst, first, second in system.push2_rules:
        for s in settled_by_head.get((dst, first), ()):
            for q in settled_by_head.get((s, second), ()):
                t = (src, top, q)
                body = ((dst, first, s), (s, second, q))
                if sym != EPSILON:
                    body = (sym,) + body
                prods.setdefault(t, []).append(body)
    # forward reachability from S
    reachable = {start}
    queue = deque([start])
    terminals = set(m.alphabet)
    while queue:
        nt = queue.popleft()
        for body in prods.get(nt, ()):
            for piece in body:
                if piece in terminals:
                    continue
                if piece not in reachable and piece in prods:
                    reachable.add(piece)
                    queue.append(piece)
    return start, {nt: bodies for nt, bodies in prods.items() if nt in reachable}, terminals


def _to_cnf(start, prods, terminals):
    """Chomsky normal form: TERM, BIN, DEL, UNIT in the usual order."""
    fresh = itertools.count()
    new_prods: dict[object, set[tuple]] = {nt: set(map(tuple, bodies)) for nt, bodies in prods.items()}
    wrapped_start = ("S0",)
    new_prods[wrapped_start] = {(start,)}

    term_wrap: dict[str, object] = {}

    def wrap(sym):
        if sym not in term_wrap:
            nt = ("T", sym)
            term_wrap[sym] = nt
            new_prods.setdefault(nt, set()).add((sym,))
        return term_wrap[sym]

    # TERM: terminals only in length-1 bodies
    for nt in list(new_prods):
        bodies = new_prods[nt]
        out = set()
        for body in bodies:
            if len(body) >= 2:
                body = tuple(wrap(s) if s in terminals else s for s in body)
            out.add(body)
        new_prods[nt] = out
    # BIN
    for nt in list(new_prods):
        out = set()
        for body in new_prods[nt]:
            while len(body) > 2:
                mid = ("B", next(fresh))
                new_prods[mid] = {body[-2:]}
                body = body[:-2] + (mid,)
            out.add(body)
        new_prods[nt] = out
    # DEL: nullable elimination
    nullable = set()
    changed = True
    while changed:
        changed = False
        for nt, bodies in new_prods.items():
            if nt in nullable:
                continue
            for body in bodies:
                if all(p in nullable for p in body):
                    nullable.add(nt)
                    changed = True
                    break
    for nt in list(new_prods):
        out = set()
        for body in new_prods[nt]:
            variants = [()]
            for piece in body:
                nxt = [v + (piece,) for v in variants]
                if piece in nullable:
                    nxt += list(variants)
                variants = nxt
            for v in variants:
                if v:
                    out.add(v)
        new_prods[nt] = out
    # UNIT
    def unit_closure(nt):
        seen = {nt}
        stack = [nt]
        while stack:
            cur = stack.pop()
            for body in new_prods.get(cur, ()):
                if len(body) == 1 and body[0] in new_prods and body[0] not in seen:
                    seen.add(body[0])
                    stack.append(body[0])
        return seen

    final: dict[object, set[tuple]] = {}
    for nt in new_prods:
        out = set()
        for reachable_nt in unit_closure(nt):
            for body in new_prods.get(reachable_nt, ()):
                if len(body) == 2 or (len(body) == 1 and body[0] in terminals):
                    out.add(body)
        final[nt] = out
    return wrapped_start, final, start in nullable


def _cnf_for(m: Npda):
    """CNF grammar of the machine's language, cached on the (immutable) machine."""
    cached = m.__dict__.get("_cnf_cache")
    if cached is None:
        start, prods, terminals = _triple_grammar(m)
        if not prods.get(start):
            cached = (None, None, False)
        else:
            cached = _to_cnf(start, prods, terminals)
        m.__dict__["_cnf_cache"] = cached
    return cached


def npda_accepts(m: Npda, w: str | Iterable[str]) -> bool:
    """Membership via grammar conversion and CYK on a normal form."""
    word = as_word(w)
    symbols = set(m.alphabet)
    for sym in word:
        if sym not in symbols:
            raise InputError(f"symbol {sym!r} outside the machine's alphabet")
    cnf_start, cnf, start_null = _cnf_for(m)
    if cnf_start is None:
        return False
    if not word:
        return start_null
    by_terminal: dict[str, set] = {}
    by_first: dict[object, list[tuple]] = {}
    for nt, bodies in cnf.items():
        for body in bodies:
            if len(body) == 1:
                by_terminal.setdefault(body[0], set()).add(nt)
            else:
                by_first.setdefault(body[0], []).append((nt, body[1]))
    n = len(word)
    table: list[list[set]] = [[set() for _ in range(n + 1)] for _ in range(n)]
    for i, sym in enumerate(word):
        table[i][i + 1] = set(by_terminal.get(sym, ()))
    for span in range(2, n + 1):
        for i in range(0, n - span + 1):
            j = i + span
            cell = table[i][j]
            for k in range(i + 1, j):
                left, right = table[i][k], table[k][j]
                if not left or not right:
                    continue
                for b in left:
                    for nt, c in by_first.get(b, ()):
                        if c in right:
                            cell.add(nt)
    return cnf_start in table[0][n]


# -- complementation -----------------------------------------------------------


def dpda_complete(m: Dpda) -> Dpda:
    """Total machine: never stuck, same language.

    The bottom stack symbol carries a flag so that popping the last symbol
    lands on an inert empty-stack marker instead of halting; undefined symbol
    moves route to a dead sink that preserves the stack.
    """
    existing = set(m.stack_alphabet)
    suffix = "@btm"
    while any(f"{s}{suffix}" in existing for s in m.stack_alphabet):
        suffix += "'"

    def flag(sym: str) -> str:
        return f"{sym}{suffix}"

    empty_marker = _fresh("<bottomless>", set(existing))
    stack2 = list(m.stack_alphabet) + [flag(s) for s in m.stack_alphabet] + [empty_marker]
    dead = _fresh("dead", set(m.states))
    states2 = list(m.states) + [dead]
    trans: dict[tuple[str, str, str], set[PdaMove]] = {}
    for (src, sym, top), moves in m.transitions.items():
        ((dst, push),) = tuple(moves)
        trans[(src, sym, top)] = {(dst, push)}
        if push:
            flagged_push = push[:-1] + (flag(push[-1]),)
            trans[(src, sym, flag(top))] = {(dst, flagged_push)}
        else:
            trans[(src, sym, flag(top))] = {(dst, (empty_marker,))}
    has_lambda = {(src, top) for (src, sym, top) in trans if sym == EPSILON}
    for state in states2:
        for top in stack2:
            if (state, top) in has_lambda:
                continue
            for sym in m.alphabet:
                trans.setdefault((state, sym, top), {(dead, (top,))})
    return Dpda(
        states2,
        m.alphabet,
        stack2,
        m.start,
        flag(m.initial_stack),
        m.finals,
        trans,
    )


def dpda_complement(m: Dpda) -> Dpda:
    """Machine accepting exactly the words the input rejects.

    The completed machine is wrapped in a three-mode construction: mode 1
    means a final state has been visited since the last symbol was consumed,
    mode 2 means it has not, and a spontaneous escape from mode 2 into the
    accepting mode 3 fires exactly when the spontaneous chain has run dry, so
    acceptance is decided once per consumed prefix.
    """
    completed = dpda_complete(m)

    def name(q: str, mode: int) -> str:
        return f"[{q}|{mode}]"

    def entry_mode(q: str) -> int:
        return 1 if q in completed.finals else 2

    states = [name(q, mode) for q in completed.states for mode in (1, 2, 3)]
    trans: dict[tuple[str, str, str], set[PdaMove]] = {}
    lambda_pairs = {
        (src, top) for (src, sym, top) in completed.transitions if sym == EPSILON
    }
    for (src, sym, top), moves in completed.transitions.items():
        ((dst, push),) = tuple(moves)
        if sym == EPSILON:
            trans[(name(src, 1), sym, top)] = {(name(dst, 1), push)}
            trans[(name(src, 2), sym, top)] = {(name(dst, entry_mode(dst)), push)}
        else:
            for mode in (1, 3):
                trans[(name(src, mode), sym, top)] = {(name(dst, entry_mode(dst)), push)}
    for src in completed.states:
        for top in completed.stack_alphabet:
            if (src, top) not in lambda_pairs:
                trans[(name(src, 2), EPSILON, top)] = {(name(src, 3), (top,))}
    finals = {name(q, 3) for q in completed.states}
    return Dpda(
        states,
        completed.alphabet,
        completed.stack_alphabet,
        name(completed.start, entry_mode(completed.start)),
        completed.initial_stack,
        finals,
        trans,
    )


# -- NFA x NPDA product --------------------------------------------------------


def product_nfa_npda(a: Nfa, m: Npda) -> Npda:
    """Pushdown machine for the intersection of a regular and a pushdown language.

    The finite automaton must be epsilon-free (callers eliminate epsilon
    first); the pushdown's spontaneous moves advance alone.
    """
    if a.has_eps():
        raise ContractError("product_nfa_npda requires an epsilon-free NFA")
    if set(a.alphabet) != set(m.alphabet):
        raise InputError("product requires a common input alphabet")

    def name(p: str, q: str) -> str:
        return f"({p}|{q})"

    states = [name(p, q) for p in a.states for q in m.states]
    trans: dict[tuple[str, str, str], set[PdaMove]] = {}
    for (src, sym, top), moves in m.transitions.items():
        for dst, push in moves:
            if sym == EPSILON:
                for p in a.states:
                    trans.setdefault((name(p, src), EPSILON, top), set()).add(
                        (name(p, dst), push)
                    )
            else:
                for p in a.states:
                    for p2 in a.moves(p, sym):
                        trans.setdefault((name(p, src), sym, top), set()).add(
                            (name(p2, dst), push)
                        )
    finals = {name(p, q) for p in a.finals for q in m.finals}
    return Npda(
        states, m.alphabet, m.stack_alphabet, name(a.start, m.start), m.initial_stack, finals, trans
    )
