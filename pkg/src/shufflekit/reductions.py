"""Executable hardness-reduction generators with a SAT brute-force oracle.

``sat_to_shuffle_noninclusion`` turns a 3-CNF formula into a word pair and an
automaton such that the formula is satisfiable exactly when some interleaving
of the words escapes the automaton's language.  ``dfa_noninclusion_to_inequality``
turns a subset question for a DFA against a word shuffle into an equality
question against a two-block shuffle.  ``verify_reduction`` replays either
biconditional against independent brute force.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import InputError, ResourceLimitError
from .fa import Dfa, Nfa, accepts, complement, determinize, equivalent, intersect, union, word_nfa
from .outcome import DecisionOutcome
from .shuffle import enumerate_shuffle, naive_shuffle_nfa
from .words import EPSILON, Word

Literal = int  # DIMACS style: +i / -i for variable i (1-based)
Clause = tuple[Literal, Literal, Literal]


@dataclass(frozen=True)
class Cnf3:
    """3-CNF with exactly three literals per clause (repetition allowed)."""

    p: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.p < 1:
            raise InputError("at least one variable required")
        for clause in self.clauses:
            if len(clause) != 3:
                raise InputError(f"clause {clause!r} does not have three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.p:
                    raise InputError(f"literal {lit} out of range for p={self.p}")

    @property
    def q(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> Cnf3:
    """DIMACS CNF; clauses with fewer than three distinct literals are padded
    by repetition, longer clauses are rejected."""
    p_declared: int | None = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 4 or parts[1] != "cnf":
                raise InputError(f"bad problem line: {line!r}")
            p_declared = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not pending:
                    continue
                if len(pending) > 3:
                    raise InputError(f"clause {pending} has more than three literals")
                while len(pending) < 3:
                    pending.append(pending[-1])
                clauses.append(tuple(pending))  # type: ignore[arg-type]
                pending = []
            else:
                pending.append(lit)
    if pending:
        raise InputError("unterminated clause (missing trailing 0)")
    if p_declared is None:
        p_declared = max((abs(l) for c in clauses for l in c), default=1)
    return Cnf3(p_declared, tuple(clauses))


def random_cnf3(p: int, q: int, rng: random.Random) -> Cnf3:
    clauses = []
    for _ in range(q):
        clause = tuple(
            rng.randint(1, p) * rng.choice((1, -1)) for _ in range(3)
        )
        clauses.append(clause)
    return Cnf3(p, tuple(clauses))


def sat_brute_force(f: Cnf3, max_vars: int = 24) -> bool:
    """Exhaustive satisfiability over all assignments."""
    if f.p > max_vars:
        raise ResourceLimitError(f"{f.p} variables exceed the brute-force bound {max_vars}")
    for assignment in range(1 << f.p):
        if _satisfies(f, assignment):
            return True
    return False


def _satisfies(f: Cnf3, assignment: int) -> bool:
    for clause in f.clauses:
        ok = False
        for lit in clause:
            value = bool(assignment & (1 << (abs(lit) - 1)))
            if value == (lit > 0):
                ok = True
                break
        if not ok:
            return False
    return True


def sat_dpll(f: Cnf3) -> bool:
    """Unit-propagating backtracking search; the second, independent route."""

    def solve(clauses: list[tuple[int, ...]], assigned: dict[int, bool]) -> bool:
        while True:
            unit = None
            simplified: list[tuple[int, ...]] = []
            for clause in clauses:
                live = []
                satisfied = False
                for lit in clause:
                    var, want = abs(lit), lit > 0
                    if var in assigned:
                        if assigned[var] == want:
                            satisfied = True
                            break
                    else:
                        live.append(lit)
                if satisfied:
                    continue
                if not live:
                    return False
                if len(live) == 1 and unit is None:
                    unit = live[0]
                simplified.append(tuple(live))
            clauses = simplified
            if unit is None:
                break
            assigned = dict(assigned)
            assigned[abs(unit)] = unit > 0
        if not clauses:
            return True
        var = abs(clauses[0][0])
        for value in (True, False):
            nxt = dict(assigned)
            nxt[var] = value
            if solve(clauses, nxt):
                return True
        return False

    return solve([tuple(c) for c in f.clauses], {})


# -- the 3-CNF reduction -------------------------------------------------------


def encode_width(p: int) -> int:
    """ceil(log2 p) + 1: enough bits for any of 1..p, plus one."""
    if p < 1:
        raise InputError("p must be positive")
    return (p - 1).bit_length() + 1


def encode_b(i: int, p: int) -> Word:
    """'1', then the index in binary over the fixed width, then '1' again."""
    if not 1 <= i <= p:
        raise InputError(f"index {i} out of range 1..{p}")
    y = encode_width(p)
    return ("1",) + tuple(format(i, f"0{y}b")) + ("1",)


@dataclass(frozen=True)
class SatShuffleInstance:
    formula: Cnf3
    u: Word
    v: Word
    automaton: Nfa  # accepts the union of the clause chains and the anti-pattern set

    @property
    def manifest(self) -> dict:
        return {
            "p": self.formula.p,
            "q": self.formula.q,
            "y": encode_width(self.formula.p),
            "u_len": len(self.u),
            "v_len": len(self.v),
        }


def pattern_words(p: int) -> list[Word]:
    """All words e_1 b(1) ... e_p b(p) with each e_i in {10, 01}."""
    out: list[Word] = [()]
    for i in range(1, p + 1):
        block = encode_b(i, p)
        out = [w + e + block for w in out for e in (("1", "0"), ("0", "1"))]
    return out


def _pattern_dfa(p: int) -> Dfa:
    """Chain DFA for the pattern set: a 2-way branch then a fixed block, p times."""
    transitions: dict[tuple[str, str], set[str]] = {}
    states: list[str] = []

    def chain(prefix: str, start: str, word: Word, end: str) -> None:
        cur = start
        for idx, sym in enumerate(word):
            nxt = end if idx == len(word) - 1 else f"{prefix}.{idx}"
            if nxt != end:
                states.append(nxt)
            transitions[(cur, sym)] = {nxt}
            cur = nxt

    states.append("b0")
    for i in range(1, p + 1):
        block = encode_b(i, p)
        top, bottom = f"t{i}", f"u{i}"
        states.extend([top, bottom])
        transitions[(f"b{i-1}", "1")] = {top}
        transitions[(f"b{i-1}", "0")] = {bottom}
        merge = f"m{i}"
        states.append(merge)
        transitions[(top, "0")] = {merge}
        transitions[(bottom, "1")] = {merge}
        nxt = f"b{i}"
        states.append(nxt)
        chain(f"blk{i}", merge, block, nxt)
    nfa = Nfa(("0", "1"), states, "b0", {f"b{p}"}, transitions)
    return determinize(nfa)


def _clause_chain_nfa(f: Cnf3, j: int) -> Nfa:
    """Automaton for clause j's forbidden-pattern concatenation."""
    p = f.p
    clause = f.clauses[j]
    positive = {abs(l) for l in clause if l > 0}
    negative = {abs(l) for l in clause if l < 0}
    transitions: dict[tuple[str, str], set[str]] = {}
    states = [f"c{j}.0"]
    cur = f"c{j}.0"
    counter = 0

    def fresh() -> str:
        nonlocal counter
        counter += 1
        name = f"c{j}.{counter}"
        states.append(name)
        return name

    def extend(src: str, word: Word) -> str:
        node = src
        for sym in word:
            nxt = fresh()
            transitions.setdefault((node, sym), set()).add(nxt)
            node = nxt
        return node

    for i in range(1, p + 1):
        block = encode_b(i, p)
        if i in positive and i in negative:
            choices: list[Word] = []  # tautological clause: nothing falsifies it
        elif i in positive:
            choices = [("0", "1") + block]
        elif i in negative:
            choices = [("1", "0") + block]
        else:
            choices = [("1", "0") + block, ("0", "1") + block]
        ends = [extend(cur, w) for w in choices]
        if len(ends) == 1:
            cur = ends[0]
        else:
            joined = fresh()
            for e in ends:
                transitions.setdefault((e, EPSILON), set()).add(joined)
            cur = joined
    return Nfa(("0", "1"), states, f"c{j}.0", {cur}, transitions)


def sat_to_shuffle_noninclusion(f: Cnf3) -> SatShuffleInstance:
    """Words u, v and an automaton with: satisfiable iff some interleaving escapes.

    u chains '1' before each index block, v supplies one '0' per variable, and
    the automaton accepts every word that is NOT a clean truth-assignment
    pattern plus, for each clause, the patterns that falsify it.
    """
    if f.q < 1:
        raise InputError("at least one clause required")
    p = f.p
    u: Word = ()
    for i in range(1, p + 1):
        u = u + ("1",) + encode_b(i, p)
    v: Word = ("0",) * p
    anti_pattern = complement(_pattern_dfa(p))
    machine: Nfa = anti_pattern
    for j in range(f.q):
        machine = union(machine, _clause_chain_nfa(f, j))
    return SatShuffleInstance(f, u, v, machine)


# -- the DFA-to-inequality reduction ------------------------------------------


@dataclass(frozen=True)
class DfaInequalityInstance:
    dfa: Dfa
    u: Word
    v: Word
    machine: Nfa  # equals the two-block shuffle iff L(dfa) is inside u shuffle v
    p: int
    q: int

    @property
    def target(self) -> Nfa:
        return naive_shuffle_nfa(("a",) * self.p, ("b",) * self.q, alphabet=("a", "b"))


def dfa_noninclusion_to_inequality(m: Dfa, u: str | Word, v: str | Word) -> DfaInequalityInstance:
    """Builds the machine whose equality with a^p shuffle b^q mirrors the inclusion.

    p and q count the a's and b's of uv; the machine is the union of the naive
    shuffle of u and v, the two-block words the DFA misses, and the DFA words
    outside the two-block set.
    """
    from .words import as_word

    wu, wv = as_word(u), as_word(v)
    if set(m.alphabet) != {"a", "b"} or (set(wu) | set(wv)) - {"a", "b"}:
        raise InputError("the inequality reduction is stated over the alphabet {a, b}")
    joined = wu + wv
    p = sum(1 for s in joined if s == "a")
    q = sum(1 for s in joined if s == "b")
    naive = naive_shuffle_nfa(wu, wv, alphabet=("a", "b"))
    blocks = determinize(naive_shuffle_nfa(("a",) * p, ("b",) * q, alphabet=("a", "b")))
    part1 = intersect(blocks, complement(m))
    part2 = intersect(m, complement(blocks))
    machine = union(union(part1, naive), part2)
    return DfaInequalityInstance(m, wu, wv, machine, p, q)


# -- verification harness -------------------------------------------------------


def verify_reduction(instance) -> DecisionOutcome:
    """Replays a reduction's biconditional against independent brute force."""
    if isinstance(instance, SatShuffleInstance):
        sat = sat_brute_force(instance.formula)
        escaped = None
        for w in sorted(enumerate_shuffle(instance.u, instance.v, bound=64)):
            if not accepts(instance.automaton, w):
                escaped = w
                break
        agrees = sat == (escaped is not None)
        return DecisionOutcome(
            agrees,
            "verify-sat-reduction (holds=biconditional matches)",
            witness=escaped,
            stats={"satisfiable": int(sat)},
        )
    if isinstance(instance, DfaInequalityInstance):
        words = finite_language(instance.dfa)
        if words is None:
            included = False  # an infinite language cannot sit inside a finite shuffle
        else:
            included = all(_in_shuffle(w, instance.u, instance.v) for w in words)
        equal = equivalent(instance.machine, instance.target).holds
        return DecisionOutcome(
            included == equal,
            "verify-dfa-reduction (holds=biconditional matches)",
            stats={"included": int(included), "equal": int(equal)},
        )
    raise InputError(f"unknown instance type {type(instance).__name__}")


def _in_shuffle(w: Word, u: Word, v: Word) -> bool:
    from .shuffle import word_in_shuffle

    return word_in_shuffle(w, u, v)


def finite_language(m: Nfa) -> set[Word] | None:
    """All accepted words when the trimmed machine is acyclic, else None."""
    from .fa import is_acyclic, trim

    t = trim(m)
    if not is_acyclic(t):
        return None
    out: set[Word] = set()
    stack: list[tuple[str, Word]] = [(t.start, ())]
    while stack:
        state, prefix = stack.pop()
        if state in t.finals:
            out.add(prefix)
        for sym in (EPSILON, *t.alphabet):
            for nxt in t.moves(state, sym):
                stack.append((nxt, prefix if sym == EPSILON else prefix + (sym,)))
    return out
