"""In-repo fixture machines used by tests, demos, and the shipped corpus.

Each builder constructs a small machine for a concretely defined language,
together with a Python-level reference predicate (``*_member``) so tests can
check exact membership up to a length bound.
"""

from __future__ import annotations

import itertools

from .counters import Dcm, Ncm
from .pushdown import Dpda
from .semilinear import SemilinearSet
from .words import END_MARKER, EPSILON, Word


# -- {a^n b^n | n > 0} as a deterministic one-counter machine ----------------


def anbn_dcm() -> Dcm:
    """Count a's up, b's down; accept at the end-marker when the counter is zero."""
    t = {
        ("q0", "a", (0,)): [("q0", "R", (1,))],
        ("q0", "a", (1,)): [("q0", "R", (1,))],
        ("q0", "b", (1,)): [("q1", "R", (-1,))],
        ("q1", "b", (1,)): [("q1", "R", (-1,))],
        ("q1", END_MARKER, (0,)): [("qf", "S", (0,))],
    }
    return Dcm(1, 1, ["a", "b"], ["q0", "q1", "qf"], "q0", ["qf"], t)


def anbn_member(w: Word) -> bool:
    n = len(w) // 2
    return n > 0 and len(w) == 2 * n and w == ("a",) * n + ("b",) * n


# -- the two one-counter languages with matched exponents (two-letter) -------


def matched_block_l1_dcm() -> Dcm:
    """{a^n b a b^n a | n > 0} with one 1-reversal counter."""
    t = {
        ("s0", "a", (0,)): [("s1", "R", (1,))],
        ("s1", "a", (1,)): [("s1", "R", (1,))],
        ("s1", "b", (1,)): [("s2", "R", (0,))],
        ("s2", "a", (1,)): [("s3", "R", (0,))],
        ("s3", "b", (1,)): [("s3", "R", (-1,))],
        ("s3", "a", (0,)): [("s4", "R", (0,))],
        ("s4", END_MARKER, (0,)): [("s5", "S", (0,))],
    }
    return Dcm(1, 1, ["a", "b"], ["s0", "s1", "s2", "s3", "s4", "s5"], "s0", ["s5"], t)


def matched_block_l1_member(w: Word) -> bool:
    for n in range(1, len(w)):
        if w == ("a",) * n + ("b", "a") + ("b",) * n + ("a",):
            return True
    return False


def matched_block_l2_dcm() -> Dcm:
    """{b^m a^(m+1) | m > 0} with one 1-reversal counter."""
    t = {
        ("t0", "b", (0,)): [("t1", "R", (1,))],
        ("t1", "b", (1,)): [("t1", "R", (1,))],
        ("t1", "a", (1,)): [("t2", "R", (-1,))],
        ("t2", "a", (1,)): [("t2", "R", (-1,))],
        ("t2", "a", (0,)): [("t3", "R", (0,))],
        ("t3", END_MARKER, (0,)): [("t4", "S", (0,))],
    }
    return Dcm(1, 1, ["a", "b"], ["t0", "t1", "t2", "t3", "t4"], "t0", ["t4"], t)


def matched_block_l2_member(w: Word) -> bool:
    for m in range(1, len(w)):
        if w == ("b",) * m + ("a",) * (m + 1):
            return True
    return False


# -- {a^n b^n | n >= 1} as a deterministic pushdown machine ------------------


def anbn_dpda() -> Dpda:
    """First a remembered in state, later a's pushed; the final b sees the bottom."""
    t = {
        ("p0", "a", "Z"): [("p1", ("Z",))],
        ("p1", "a", "Z"): [("p2", ("A", "Z"))],
        ("p2", "a", "A"): [("p2", ("A", "A"))],
        ("p1", "b", "Z"): [("pf", ("Z",))],
        ("p2", "b", "A"): [("p3", ())],
        ("p3", "b", "A"): [("p3", ())],
        ("p3", "b", "Z"): [("pf", ("Z",))],
    }
    return Dpda(
        ["p0", "p1", "p2", "p3", "pf"], ["a", "b"], ["Z", "A"], "p0", "Z", ["pf"], t
    )


# -- staircase block languages over {a, #, $} (stack fixtures) ---------------
#
# Both languages consist of # -separated unary blocks, a $ switching from a
# rising to a falling sequence, and successor constraints linking blocks
# symmetrically around the $; they are recognised with one stack reversal.


def staircase_l1_dpda() -> Dpda:
    """Blocks a^{i_1}# ... #a^{i_{2n-1}} $ a^{i_{2n}}# ... #a^{i_2} with
    i_1 = 1, i_{j+1} = i_j + 1 for odd j, and n >= 3.

    Push every pre-$ block; after $ each block must exceed its stack partner by
    exactly one, the extra letter surfacing the block separator (or, for the
    last block, the stack bottom).
    """
    t = {
        # first block: exactly one a
        ("q0", "a", "Z"): [("q1", ("A", "Z"))],
        ("q1", "#", "A"): [("q2:2", ("M", "A"))],
        # later blocks: at least one a each; the counter tracks >=3 blocks
        ("q2:2", "a", "M"): [("q3:2", ("A", "M"))],
        ("q3:2", "a", "A"): [("q3:2", ("A", "A"))],
        ("q3:2", "#", "A"): [("q2:3", ("M", "A"))],
        ("q2:3", "a", "M"): [("q3:3", ("A", "M"))],
        ("q3:3", "a", "A"): [("q3:3", ("A", "A"))],
        ("q3:3", "#", "A"): [("q2:3", ("M", "A"))],
        ("q3:3", "$", "A"): [("ma", ("A",))],
        # matching: pop one a per a; the extra a lands on M (next block) or Z (done)
        ("ma", "a", "A"): [("ma", ())],
        ("ma", "a", "M"): [("mx", ("M",))],
        ("mx", "#", "M"): [("ma", ())],
        ("ma", "a", "Z"): [("acc", ("Z",))],
    }
    states = ["q0", "q1", "q2:2", "q3:2", "q2:3", "q3:3", "ma", "mx", "acc"]
    return Dpda(states, ["a", "#", "$"], ["Z", "A", "M"], "q0", "Z", ["acc"], t)


def staircase_l1_member(w: Word) -> bool:
    blocks = _split_blocks(w)
    if blocks is None:
        return False
    pre, post = blocks
    n = len(pre)
    if n < 3 or len(post) != n:
        return False
    if pre[0] != 1:
        return False
    if any(b < 1 for b in pre + post):
        return False
    # post is i_{2n}, i_{2n-2}, ..., i_2; pairs (i_{2t-1}, i_{2t}) satisfy +1
    evens = list(reversed(post))  # i_2, i_4, ..., i_{2n}
    return all(evens[t] == pre[t] + 1 for t in range(n))


def staircase_l2_dpda() -> Dpda:
    """Blocks with i_1 = 1, i_{j+1} = i_j + 1 for even j, and n >= 3.

    Paired pre-$ blocks push one letter fewer than their length; after the free
    first post-$ block, each block pops exactly its partner's pushed letters,
    and the stack bottom is drained by the single spontaneous move at the end.
    """
    t = {
        ("q0", "a", "Z"): [("q1", ("Z",))],
        ("q1", "#", "Z"): [("q2:1", ("Z",))],
        # paired pre blocks have length >= 2: skip the first a, push the rest
        ("q2:1", "a", "Z"): [("q3:1", ("Z",))],
        ("q3:1", "a", "Z"): [("q4:1", ("A", "Z"))],
        ("q4:1", "a", "A"): [("q4:1", ("A", "A"))],
        ("q4:1", "#", "A"): [("q2:2", ("M", "A"))],
        ("q2:2", "a", "M"): [("q3:2", ("M",))],
        ("q3:2", "a", "M"): [("q4:2", ("A", "M"))],
        ("q4:2", "a", "A"): [("q4:2", ("A", "A"))],
        ("q4:2", "#", "A"): [("q2:2", ("M", "A"))],
        ("q4:2", "$", "A"): [("pf0", ("M", "A"))],
        # free first post block: at least one a, stack untouched
        ("pf0", "a", "M"): [("pf", ("M",))],
        ("pf", "a", "M"): [("pf", ("M",))],
        ("pf", "#", "M"): [("ma", ())],
        # each matching block pops its partner's letters; separators pop markers
        ("ma", "a", "A"): [("ma", ())],
        ("ma", "#", "M"): [("ma", ())],
        ("ma", EPSILON, "Z"): [("acc", ())],
    }
    states = ["q0", "q1", "q2:1", "q3:1", "q4:1", "q2:2", "q3:2", "q4:2", "pf0", "pf", "ma", "acc"]
    return Dpda(states, ["a", "#", "$"], ["Z", "A", "M"], "q0", "Z", ["acc"], t)


def staircase_l2_member(w: Word) -> bool:
    blocks = _split_blocks(w)
    if blocks is None:
        return False
    pre, post = blocks
    n = len(pre)
    if n < 3 or len(post) != n:
        return False
    if pre[0] != 1:
        return False
    if any(b < 1 for b in pre + post):
        return False
    # post is i_{2n} (free), i_{2n-2}, ..., i_2; pairs (i_{2t}, i_{2t+1}): +1
    evens = list(reversed(post))  # i_2, i_4, ..., i_{2n}
    return all(pre[t + 1] == evens[t] + 1 for t in range(n - 1))


def _split_blocks(w: Word) -> tuple[list[int], list[int]] | None:
    s = "".join(w)
    if any(c not in "a#$" for c in s) or s.count("$") != 1:
        return None
    pre_s, post_s = s.split("$")
    try:
        pre = [_block_len(b) for b in pre_s.split("#")]
        post = [_block_len(b) for b in post_s.split("#")]
    except ValueError:
        return None
    return pre, post


def _block_len(block: str) -> int:
    if not block or block.strip("a"):
        raise ValueError(block)
    return len(block)


# -- ordered-sum machine for two semilinear sets ------------------------------


def ordered_sum_ncm(q1: SemilinearSet, q2: SemilinearSet, alphabet: tuple[str, ...]) -> Ncm:
    """Machine accepting a_1^{k_1}...a_m^{k_m} with (k_i) a sum of members of
    the two sets.

    Reading block i, every letter nondeterministically feeds counter i of the
    first bank or of the second; at the end-marker the machine subtracts one
    chosen component's constant from each bank and then loops subtracting
    period vectors, accepting when both banks are exactly empty.  Each counter
    rises while reading and falls while checking: one reversal.
    """
    m = len(alphabet)
    if q1.dim != m or q2.dim != m:
        raise ValueError("dimension mismatch with alphabet")
    k = 2 * m
    trans: dict = {}
    states: set[str] = set()

    def add(src, sym, guard_constraints, dst, move, upd):
        """Add a move for every guard consistent with the constraint map."""
        states.add(src)
        states.add(dst)
        for guard in itertools.product((0, 1), repeat=k):
            if any(guard[i] != want for i, want in guard_constraints.items()):
                continue
            if any(g == 0 and u < 0 for g, u in zip(guard, upd)):
                continue
            trans.setdefault((src, sym, guard), set()).add((dst, move, tuple(upd)))

    def unit(i, delta):
        u = [0] * k
        u[i] = delta
        return u

    # reading phase: block states r0..r(m-1); letters may start later blocks early
    for i in range(m):
        for j in range(i, m):
            sym = alphabet[j]
            add(f"r{i}", sym, {}, f"r{j}", "R", unit(j, 1))  # bank 1
            add(f"r{i}", sym, {}, f"r{j}", "R", unit(m + j, 1))  # bank 2
    # at the marker: pick a component of each set, then drain
    for c1_idx, comp1 in enumerate(q1.components):
        seq1 = _drain_plan(comp1, 0, m)
        for c2_idx, comp2 in enumerate(q2.components):
            seq2 = _drain_plan(comp2, m, m)
            tag = f"{c1_idx}.{c2_idx}"
            _emit_drain(add, tag, seq1, seq2, m, k)
    for i in range(m):
        states.add(f"r{i}")
    states.add("ok")
    return Ncm(k, 1, alphabet, sorted(states), "r0", ["ok"], trans)


def _drain_plan(comp, offset, m):
    """(constant-vector-as-unit-steps, period list) against counters offset..offset+m-1."""
    const_steps = []
    for i, c in enumerate(comp.constant):
        const_steps.extend([offset + i] * c)
    periods = [tuple(p) for p in comp.periods]
    return const_steps, periods, offset


def _emit_drain(add, tag, plan1, plan2, m, k):
    const1, periods1, off1 = plan1
    const2, periods2, off2 = plan2
    zero = [0] * k

    # subtract bank-1 constant one unit at a time, then bank-2 constant
    chain = [(f"c1:{tag}:{idx}", ctr) for idx, ctr in enumerate(const1)]
    chain += [(f"c2:{tag}:{idx}", ctr) for idx, ctr in enumerate(const2)]
    entry = chain[0][0] if chain else f"loop:{tag}"
    for i in range(m):
        add(f"r{i}", END_MARKER, {}, entry, "S", zero)
    for idx, (name, ctr) in enumerate(chain):
        nxt = chain[idx + 1][0] if idx + 1 < len(chain) else f"loop:{tag}"
        add(name, END_MARKER, {ctr: 1}, nxt, "S", _unit_vec(k, ctr, -1))
    # period loop: subtract any period of either bank, unit by unit
    loop = f"loop:{tag}"
    for bank, (periods, off) in enumerate(((periods1, off1), (periods2, off2))):
        for p_idx, period in enumerate(periods):
            steps = []
            for i, c in enumerate(period):
                steps.extend([off + i] * c)
            if not steps:
                continue
            prev = loop
            for s_idx, ctr in enumerate(steps):
                last = s_idx == len(steps) - 1
                nxt = loop if last else f"p{bank}.{p_idx}:{tag}:{s_idx}"
                add(prev, END_MARKER, {ctr: 1}, nxt, "S", _unit_vec(k, ctr, -1))
                prev = nxt
    # accept when every counter is zero
    add(loop, END_MARKER, {i: 0 for i in range(k)}, "ok", "S", zero)


def _unit_vec(k, i, delta):
    u = [0] * k
    u[i] = delta
    return u
