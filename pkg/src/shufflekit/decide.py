"""Top-level decision procedures, each returning a structured outcome.

Every procedure re-verifies its witness through the membership oracle of the
relevant machine class before emitting it, and documents the polarity of
``holds`` in the outcome's method string (inclusion procedures hold when the
inclusion is true; the finite/NPDA procedure holds when NON-inclusion is
established, mirroring how that question is posed).
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence

import numpy as np

from .counters import (
    Dcm,
    Ncm,
    check_complete_halting,
    cm_accepts,
    cm_complete,
    cm_is_empty,
    cm_pad_alphabet,
    cm_product,
    cm_shuffle,
    dcm_complement,
)
from .errors import ContractError, InputError, ResourceLimitError
from .fa import Nfa, accepts, eliminate_eps, pad_alphabet
from .outcome import DecisionOutcome
from .pushdown import Dpda, Npda, dpda_complement, npda_accepts, npda_is_empty, product_nfa_npda
from .semilinear import (
    SemilinearSet,
    generate_members,
    nfa_parikh_image,
    parikh,
    sl_membership,
    sl_sum,
)
from .shuffle import enumerate_shuffle, naive_shuffle_nfa, shuffle_nfas, word_in_shuffle
from .words import END_MARKER, EPSILON, Word, as_word, merge_alphabets

DEFAULT_PAIR_BUDGET = 4000  # combined word length across pairs, finite/NPDA check
DEFAULT_VECTOR_BOUND = 10  # componentwise bound for semilinear extensional checks
DEFAULT_DIRECT_VERIFY_LIMIT = 4096  # unary lengths verified by direct stepping


def word_shuffle_subset_lang(
    u: str | Iterable[str], v: str | Iterable[str], m: Nfa
) -> DecisionOutcome:
    """Does every interleaving of u and v land in L(M)?

    Decided as emptiness of the intersection of the naive interleaving grid
    with the complement of M, computed on the fly: the grid is walked while M
    is determinised lazily, so a grid-final node whose subset misses every
    final state yields a witness immediately.
    """
    wu, wv = as_word(u), as_word(v)
    alpha = merge_alphabets(m.alphabet, wu, wv)
    m = pad_alphabet(m, alpha)
    start_set = m.eps_closure({m.start})
    step_cache: dict[tuple[frozenset, str], frozenset] = {}

    def step(subset: frozenset, sym: str) -> frozenset:
        key = (subset, sym)
        got = step_cache.get(key)
        if got is None:
            got = m.step(subset, sym)
            step_cache[key] = got
        return got

    start = (0, 0, start_set)
    parents: dict[tuple, tuple[tuple, str] | None] = {start: None}
    queue = deque([start])
    nodes = 0
    bad: tuple | None = None
    while queue and bad is None:
        node = queue.popleft()
        nodes += 1
        i, j, subset = node
        if i == len(wu) and j == len(wv):
            if not subset & m.finals:
                bad = node
            continue
        succ = []
        if i < len(wu):
            succ.append((wu[i], (i + 1, j)))
        if j < len(wv):
            succ.append((wv[j], (i, j + 1)))
        for sym, (i2, j2) in succ:
            nxt = (i2, j2, step(subset, sym))
            if nxt not in parents:
                parents[nxt] = (node, sym)
                queue.append(nxt)
    stats = {"product_nodes": nodes}
    if bad is None:
        return DecisionOutcome(True, "word-shuffle-subset-lang (holds=included)", stats=stats)
    rev: list[str] = []
    cur: tuple | None = bad
    while cur is not None and parents[cur] is not None:
        prev, sym = parents[cur]  # type: ignore[misc]
        rev.append(sym)
        cur = prev
    witness = tuple(reversed(rev))
    assert word_in_shuffle(witness, wu, wv) and not accepts(m, witness)
    return DecisionOutcome(
        False, "word-shuffle-subset-lang (holds=included)", witness=witness, stats=stats
    )


def lang_subset_word_shuffle(
    m: Nfa, u: str | Iterable[str], v: str | Iterable[str]
) -> DecisionOutcome:
    """Does L(M) stay inside the interleavings of u and v?

    Any accepted word longer than |uv|+|Q| implies a shorter accepted word
    outside the shuffle, so only lengths up to that bound are examined: a
    wrong-length accepted word is an immediate witness, and accepted words of
    the exact length are tested one by one against the grid membership test.
    """
    wu, wv = as_word(u), as_word(v)
    target_len = len(wu) + len(wv)
    e = eliminate_eps(pad_alphabet(m, merge_alphabets(m.alphabet, wu, wv)))
    bound = target_len + len(e.states)
    method = "lang-subset-word-shuffle (holds=included)"

    # forward reachability layers: some accepted word of each length
    layer: dict[str, tuple] = {e.start: ()}
    layers: list[dict[str, tuple]] = [layer]
    for _ in range(bound):
        nxt: dict[str, tuple] = {}
        for q, via in layers[-1].items():
            for sym in e.alphabet:
                for q2 in e.moves(q, sym):
                    if q2 not in nxt:
                        nxt[q2] = via + (sym,)
        layers.append(nxt)
    for length, lay in enumerate(layers):
        if length == target_len:
            continue
        hits = [q for q in lay if q in e.finals]
        if hits:
            witness = lay[hits[0]]
            assert accepts(m, witness) and len(witness) != target_len
            return DecisionOutcome(False, method, witness=witness)

    # exact-length accepted words, tested against the grid membership check
    co: list[set[str]] = [set(e.finals)]
    for _ in range(target_len):
        prev = co[-1]
        co.append(
            {
                q
                for q in e.states
                for sym in e.alphabet
                if e.moves(q, sym) & prev
            }
        )
    checked = 0
    stack: list[tuple[frozenset, Word]] = [(frozenset({e.start}), ())]
    while stack:
        subset, prefix = stack.pop()
        remaining = target_len - len(prefix)
        if remaining == 0:
            if subset & e.finals:
                checked += 1
                if not word_in_shuffle(prefix, wu, wv):
                    assert accepts(m, prefix)
                    return DecisionOutcome(
                        False, method, witness=prefix, stats={"exact_words": checked}
                    )
            continue
        for sym in e.alphabet:
            nxt: set[str] = set()
            for q in subset:
                nxt |= e.moves(q, sym)
            nxt &= co[remaining - 1]
            if nxt:
                stack.append((frozenset(nxt), prefix + (sym,)))
    return DecisionOutcome(True, method, stats={"exact_words": checked})


def lang_equals_word_shuffle(
    m: Nfa, u: str | Iterable[str], v: str | Iterable[str]
) -> DecisionOutcome:
    """Language equality against a word shuffle: the conjunction of both inclusions."""
    sub = lang_subset_word_shuffle(m, u, v)
    if not sub.holds:
        return DecisionOutcome(
            False, "lang-equals-word-shuffle (failed: language not included)", witness=sub.witness
        )
    sup = word_shuffle_subset_lang(u, v, m)
    if not sup.holds:
        return DecisionOutcome(
            False, "lang-equals-word-shuffle (failed: shuffle not included)", witness=sup.witness
        )
    return DecisionOutcome(True, "lang-equals-word-shuffle")


def shuffle_inclusion_regular_dpda(m1: Nfa, m2: Nfa, m3: Dpda) -> DecisionOutcome:
    """Is the shuffle of two regular languages inside a deterministic pushdown language?

    Pipeline: shuffle automaton, pushdown complement, product, emptiness.
    """
    alpha = merge_alphabets(m1.alphabet, m2.alphabet, m3.alphabet)
    m3p = Dpda(
        m3.states, alpha, m3.stack_alphabet, m3.start, m3.initial_stack, m3.finals, m3.transitions
    )
    shuffled = eliminate_eps(shuffle_nfas(pad_alphabet(m1, alpha), pad_alphabet(m2, alpha)))
    comp = dpda_complement(m3p)
    product = product_nfa_npda(shuffled, comp)
    emptiness = npda_is_empty(product)
    stats = dict(emptiness.stats)
    stats["product_states"] = len(product.states)
    method = "shuffle-inclusion-regular-dpda (holds=included)"
    if emptiness.holds:
        return DecisionOutcome(True, method, stats=stats)
    witness = emptiness.witness
    assert witness is not None
    assert accepts(shuffled, witness) and not npda_accepts(m3p, witness)
    return DecisionOutcome(False, method, witness=witness, stats=stats)


def shuffle_inclusion_ncm_dcm(
    m1: Ncm, m2: Ncm, m3: Dcm, cap: int | None = None
) -> DecisionOutcome:
    """Is the shuffle of two counter-machine languages inside a deterministic one?

    Pipeline: shuffle machine, complement, product, capped emptiness; the
    bounded flag of the emptiness search propagates to the verdict.
    """
    halting = check_complete_halting(m3)
    if not halting.holds:
        raise ContractError(halting.method)
    alpha = merge_alphabets(m1.alphabet, m2.alphabet, m3.alphabet)
    shuffled = cm_shuffle(cm_pad_alphabet(m1, alpha), cm_pad_alphabet(m2, alpha))
    comp = dcm_complement(cm_pad_alphabet(m3, alpha))
    product = cm_product(shuffled, comp)
    emptiness = cm_is_empty(product, cap)
    stats = dict(emptiness.stats)
    stats["product_states"] = len(product.states)
    method = "shuffle-inclusion-ncm-dcm (holds=included)"
    if emptiness.holds:
        return DecisionOutcome(True, method, bounded=emptiness.bounded, stats=stats)
    witness = emptiness.witness
    assert witness is not None
    assert cm_accepts(shuffled, witness) and not cm_accepts(m3, witness)
    return DecisionOutcome(False, method, witness=witness, stats=stats)


def _unary_matrix(m: Nfa) -> tuple[np.ndarray, int, list[int]]:
    e = eliminate_eps(m)
    if len(e.alphabet) != 1:
        raise InputError("unary procedure requires a single-symbol alphabet")
    sym = e.alphabet[0]
    index = {q: i for i, q in enumerate(e.states)}
    n = len(e.states)
    mat = np.zeros((n, n), dtype=bool)
    for (src, s), dsts in e.transitions.items():
        for d in dsts:
            mat[index[src], index[d]] = True
    return mat, index[e.start], [index[q] for q in e.finals]


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.uint8) @ b.astype(np.uint8)) > 0


def _matrix_power_accepts(
    mat: np.ndarray, start: int, finals: list[int], d: int
) -> tuple[bool, int]:
    """Right-to-left binary exponentiation; returns (accepting, multiplications)."""
    if d == 0:
        return start in finals, 0
    mults = 0
    result: np.ndarray | None = None
    base = mat
    remaining = d
    while remaining:
        if remaining & 1:
            if result is None:
                result = base
            else:
                result = _bool_matmul(result, base)
                mults += 1
        remaining >>= 1
        if remaining:
            base = _bool_matmul(base, base)
            mults += 1
    assert result is not None
    return bool(result[start, finals].any()) if finals else False, mults


def unary_finite_shuffle_inclusion(
    d1: Sequence[int], d2: Sequence[int], m: Nfa
) -> DecisionOutcome:
    """Finite unary languages, lengths given in binary, against a unary NFA.

    For every summed length the reachability matrix is raised by repeated
    squaring and the start-to-final entry is inspected; a failing length is
    returned in binary as the witness.
    """
    if any(x < 0 for x in list(d1) + list(d2)):
        raise InputError("lengths must be non-negative")
    mat, start, finals = _unary_matrix(m)
    sums = sorted({x + y for x in d1 for y in d2})
    total_mults = 0
    per_length: dict[int, int] = {}
    for d in sums:
        ok, mults = _matrix_power_accepts(mat, start, finals, d)
        total_mults += mults
        per_length[d] = mults
        if not ok:
            if d <= DEFAULT_DIRECT_VERIFY_LIMIT:
                assert not _unary_simulation_accepts(mat, start, finals, d)
            witness = tuple(format(d, "b"))
            return DecisionOutcome(
                False,
                "unary-finite-shuffle-inclusion (holds=included; witness=length in binary)",
                witness=witness,
                stats={"failing_length": d, "matrix_multiplications": total_mults},
            )
    return DecisionOutcome(
        True,
        "unary-finite-shuffle-inclusion (holds=included)",
        stats={
            "matrix_multiplications": total_mults,
            "lengths_checked": len(sums),
            "max_mults_single_length": max(per_length.values(), default=0),
        },
    )


def _unary_simulation_accepts(mat: np.ndarray, start: int, finals: list[int], d: int) -> bool:
    reach = np.zeros(mat.shape[0], dtype=bool)
    reach[start] = True
    for _ in range(d):
        reach = (reach.astype(np.uint8) @ mat.astype(np.uint8)) > 0
    return bool(reach[finals].any()) if finals else False


def unary_mults_per_length(d: int) -> int:
    """Multiplication budget for one length: ceil(log2 d) + popcount(d)."""
    if d == 0:
        return 0
    return (d - 1).bit_length() + bin(d).count("1")


def finite_shuffle_npda_noninclusion(
    l1: Iterable[str | Iterable[str]],
    l2: Iterable[str | Iterable[str]],
    m: Npda,
    budget: int = DEFAULT_PAIR_BUDGET,
) -> DecisionOutcome:
    """Is some interleaving of the two finite languages outside the pushdown language?

    Holds means NON-inclusion, witnessed by a concrete interleaving the
    pushdown machine rejects; exhaustive over all pairs, guarded by a budget
    on the combined word lengths.
    """
    words1 = [as_word(w) for w in l1]
    words2 = [as_word(w) for w in l2]
    cost = sum(len(u) + len(v) for u in words1 for v in words2)
    if cost > budget:
        raise ResourceLimitError(f"pair budget exceeded: {cost} > {budget}")
    method = "finite-shuffle-npda-noninclusion (holds=NOT-included)"
    tested = 0
    for u in words1:
        for v in words2:
            for w in sorted(enumerate_shuffle(u, v, bound=max(16, len(u) + len(v)))):
                tested += 1
                if not npda_accepts(m, w):
                    assert word_in_shuffle(w, u, v)
                    return DecisionOutcome(
                        True, method, witness=w, stats={"words_tested": tested}
                    )
    return DecisionOutcome(False, method, stats={"words_tested": tested})


def comm_semilinear_shuffle_superset(
    m: Nfa,
    q1: SemilinearSet,
    q2: SemilinearSet,
    vector_bound: int = DEFAULT_VECTOR_BOUND,
) -> DecisionOutcome:
    """Is L(M) inside the shuffle of two commutative semilinear languages?

    The shuffle of the preimages is the preimage of the sum of the sets, so
    the Parikh image of M is compared against that sum.  Components of the
    image with periods are tested extensionally up to the vector bound and
    flag the verdict as bounded.
    """
    if q1.dim != len(m.alphabet) or q2.dim != len(m.alphabet):
        raise InputError("semilinear dimensions must match the automaton alphabet")
    total = sl_sum(q1, q2)
    image = nfa_parikh_image(m)
    bounded = any(c.periods for c in image.components)
    method = "comm-semilinear-shuffle-superset (holds=included)"
    tested = 0
    for component in image.components:
        vectors = (
            {component.constant}
            if not component.periods
            else generate_members(SemilinearSet(image.dim, (component,)), vector_bound)
        )
        for x in sorted(vectors):
            tested += 1
            if not sl_membership(total, x):
                witness = _word_with_parikh(m, x)
                assert witness is not None and accepts(m, witness)
                assert not sl_membership(total, parikh(witness, m.alphabet))
                return DecisionOutcome(
                    False,
                    method,
                    witness=witness,
                    bounded=bounded,
                    stats={"vectors_tested": tested},
                )
    return DecisionOutcome(True, method, bounded=bounded, stats={"vectors_tested": tested})


def _word_with_parikh(m: Nfa, target: tuple[int, ...]) -> Word | None:
    """Find an accepted word with the given letter counts (BFS over residuals)."""
    e = eliminate_eps(m)
    index = {sym: i for i, sym in enumerate(e.alphabet)}
    start = (e.start, target)
    parents: dict[tuple, tuple[tuple, str] | None] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        q, remaining = node
        if all(c == 0 for c in remaining) and q in e.finals:
            word: list[str] = []
            cur: tuple | None = node
            while cur is not None and parents[cur] is not None:
                prev, sym = parents[cur]  # type: ignore[misc]
                word.append(sym)
                cur = prev
            return tuple(reversed(word))
        for sym in e.alphabet:
            i = index[sym]
            if remaining[i] == 0:
                continue
            rem2 = remaining[:i] + (remaining[i] - 1,) + remaining[i + 1 :]
            for q2 in e.moves(q, sym):
                nxt = (q2, rem2)
                if nxt not in parents:
                    parents[nxt] = (node, sym)
                    queue.append(nxt)
    return None


def nfa_to_ncm(m: Nfa) -> Ncm:
    """Zero-counter machine with the same language (for counter products)."""
    e = eliminate_eps(m)
    transitions: dict = {}
    for (src, sym), dsts in e.transitions.items():
        transitions[(src, sym, ())] = {(d, "R", ()) for d in dsts}
    return Ncm(0, 0, e.alphabet, e.states, e.start, e.finals, transitions)


def disjoint_shuffle_dcm(m1: Dcm, m2: Dcm) -> Dcm:
    """Deterministic machine for the shuffle of two disjoint-alphabet languages.

    Every input symbol belongs to exactly one machine, so routing is forced;
    at the end-marker the first machine's chain runs to completion, then the
    second's, and the exit records whether both passed a final state there.
    """
    if set(m1.alphabet) & set(m2.alphabet):
        raise InputError("alphabets must be disjoint")
    for m in (m1, m2):
        halting = check_complete_halting(m)
        if not halting.holds:
            raise ContractError(halting.method)
    c1, _ = cm_complete(m1)
    c2, _ = cm_complete(m2)
    alpha = merge_alphabets(c1.alphabet, c2.alphabet)
    k1, k2 = c1.k, c2.k
    zeros1, zeros2 = (0,) * k1, (0,) * k2
    guards1 = list(_all_guards(k1))
    guards2 = list(_all_guards(k2))

    def wname(p: str, q: str) -> str:
        return f"({p}|{q})"

    def aname(p: str, q: str, b1: int) -> str:
        return f"(A:{p}|{q}|{b1})"

    def bname(q: str, b1: int, b2: int) -> str:
        return f"(B:{q}|{b1}|{b2})"

    transitions: dict = {}
    states: set[str] = set()
    exits = {(x, y): f"(exit|{x}{y})" for x in (0, 1) for y in (0, 1)}
    done = "(done)"

    for p in c1.states:
        for q in c2.states:
            src = wname(p, q)
            states.add(src)
            for sym in c1.alphabet:
                for g1 in guards1:
                    ((dst, mv, upd),) = c1.moves(p, sym, g1)
                    for g2 in guards2:
                        transitions[(src, sym, g1 + g2)] = {
                            (wname(dst, q), mv, upd + zeros2)
                        }
            for sym in c2.alphabet:
                for g2 in guards2:
                    ((dst, mv, upd),) = c2.moves(q, sym, g2)
                    for g1 in guards1:
                        transitions[(src, sym, g1 + g2)] = {
                            (wname(p, dst), mv, zeros1 + upd)
                        }
            # marker: machine 1 chain first
            for g1 in guards1:
                ((dst, mv, upd),) = c1.moves(p, END_MARKER, g1)
                b1 = 1 if p in c1.finals else 0
                for g2 in guards2:
                    if mv == "S":
                        transitions[(src, END_MARKER, g1 + g2)] = {
                            (aname(dst, q, b1), "S", upd + zeros2)
                        }
                    else:
                        transitions[(src, END_MARKER, g1 + g2)] = {
                            (bname(q, b1, 0), "S", upd + zeros2)
                        }

    # phase A: machine 1 marker chain with its visited bit
    frontier = [
        (p, q, b1)
        for p in c1.states
        for q in c2.states
        for b1 in (0, 1)
    ]
    for p, q, b1 in frontier:
        src = aname(p, q, b1)
        states.add(src)
        for g1 in guards1:
            ((dst, mv, upd),) = c1.moves(p, END_MARKER, g1)
            nb1 = 1 if (b1 or p in c1.finals) else 0
            for g2 in guards2:
                if mv == "S":
                    transitions[(src, END_MARKER, g1 + g2)] = {
                        (aname(dst, q, nb1), "S", upd + zeros2)
                    }
                else:
                    transitions[(src, END_MARKER, g1 + g2)] = {
                        (bname(q, nb1, 0), "S", upd + zeros2)
                    }
    # phase B: machine 2 marker chain
    for q in c2.states:
        for b1 in (0, 1):
            for b2 in (0, 1):
                src = bname(q, b1, b2)
                states.add(src)
                for g2 in guards2:
                    ((dst, mv, upd),) = c2.moves(q, END_MARKER, g2)
                    nb2 = 1 if (b2 or q in c2.finals) else 0
                    for g1 in guards1:
                        if mv == "S":
                            transitions[(src, END_MARKER, g1 + g2)] = {
                                (bname(dst, b1, nb2), "S", zeros1 + upd)
                            }
                        else:
                            transitions[(src, END_MARKER, g1 + g2)] = {
                                (exits[(b1, nb2)], "S", zeros1 + upd)
                            }
    for key, state in exits.items():
        states.add(state)
        for g in _all_guards(k1 + k2):
            transitions[(state, END_MARKER, g)] = {(done, "R", zeros1 + zeros2)}
    states.add(done)
    return Dcm(
        k1 + k2,
        max(c1.r, c2.r),
        alpha,
        sorted(states),
        wname(c1.start, c2.start),
        {exits[(1, 1)]},
        transitions,
    )


def _all_guards(k: int):
    return itertools.product((0, 1), repeat=k)


def disjoint_alphabet_dcm_shuffle_superset(
    m: Nfa, m1: Dcm, m2: Dcm, cap: int | None = None
) -> DecisionOutcome:
    """Is a regular language inside the shuffle of two disjoint-alphabet
    deterministic counter languages?

    The shuffle is deterministic because each symbol belongs to exactly one
    machine; its complement is intersected with the regular language and
    tested for emptiness.
    """
    shuffled = disjoint_shuffle_dcm(m1, m2)
    alpha = merge_alphabets(m.alphabet, shuffled.alphabet)
    comp = dcm_complement(cm_pad_alphabet(shuffled, alpha))
    left = nfa_to_ncm(pad_alphabet(m, alpha))
    product = cm_product(left, comp)
    emptiness = cm_is_empty(product, cap)
    stats = dict(emptiness.stats)
    stats["product_states"] = len(product.states)
    method = "disjoint-alphabet-dcm-shuffle-superset (holds=included)"
    if emptiness.holds:
        return DecisionOutcome(True, method, bounded=emptiness.bounded, stats=stats)
    witness = emptiness.witness
    assert witness is not None
    assert accepts(m, witness) and not cm_accepts(shuffled, witness)
    return DecisionOutcome(False, method, witness=witness, stats=stats)
