"""Semilinear sets, Parikh images, and commutative-closure membership.

A linear set is a constant vector plus non-negative integer combinations of
period vectors; a semilinear set is a finite union of linear sets.  The Parikh
image of a regular language is computed by eliminating the automaton to a
regular expression and folding that expression structurally: union maps to
component union, concatenation to a sum of sets, and star to the usual
finite-union construction over nonempty subsets of components.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .errors import InputError, ResourceLimitError
from .fa import Nfa, trim
from .words import EPSILON, Word, as_word

Vector = tuple[int, ...]

DEFAULT_STATE_BOUND = 40
DEFAULT_STAR_COMPONENT_BOUND = 10


def parikh(w: str | Iterable[str], alphabet: Sequence[str]) -> Vector:
    """Letter-count vector of ``w`` aligned to the ordered alphabet."""
    word = as_word(w)
    index = {sym: i for i, sym in enumerate(alphabet)}
    counts = [0] * len(alphabet)
    for sym in word:
        if sym not in index:
            raise InputError(f"symbol {sym!r} not in alphabet {list(alphabet)}")
        counts[index[sym]] += 1
    return tuple(counts)


def _vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a: Vector, b: Vector) -> Vector | None:
    out = tuple(x - y for x, y in zip(a, b))
    return out if all(c >= 0 for c in out) else None


@dataclass(frozen=True)
class LinearSet:
    """constant + non-negative combinations of the period vectors."""

    constant: Vector
    periods: tuple[Vector, ...] = ()

    def __post_init__(self):
        dim = len(self.constant)
        norm = []
        seen = set()
        for p in self.periods:
            if len(p) != dim:
                raise InputError("period dimension mismatch")
            if any(c > 0 for c in p) and p not in seen:
                norm.append(p)
                seen.add(p)
        object.__setattr__(self, "periods", tuple(sorted(norm)))

    @property
    def dim(self) -> int:
        return len(self.constant)

    def contains(self, x: Vector) -> bool:
        target = _vec_sub(x, self.constant)
        if target is None:
            return False
        return _cone_member(target, self.periods)


def _cone_member(target: Vector, periods: tuple[Vector, ...]) -> bool:
    """Is target a non-negative integer combination of the periods?

    Bounded depth-first search: each period can be used at most
    max(target)/max-nonzero-component times, and the remaining target must stay
    non-negative, so the recursion is finite.
    """
    if all(c == 0 for c in target):
        return True
    if not periods:
        return False
    head, rest = periods[0], periods[1:]
    reps = min(
        (t // p for t, p in zip(target, head) if p > 0),
        default=0,
    )
    cur: Vector | None = target
    for _ in range(reps + 1):
        assert cur is not None
        if _cone_member(cur, rest):
            return True
        cur = _vec_sub(cur, head)
        if cur is None:
            return False
    return False


@dataclass(frozen=True)
class SemilinearSet:
    dim: int
    components: tuple[LinearSet, ...] = ()

    def __post_init__(self):
        for c in self.components:
            if c.dim != self.dim:
                raise InputError("component dimension mismatch")

    @staticmethod
    def empty(dim: int) -> "SemilinearSet":
        return SemilinearSet(dim, ())

    @staticmethod
    def of_vector(v: Vector) -> "SemilinearSet":
        return SemilinearSet(len(v), (LinearSet(v),))

    def is_empty(self) -> bool:
        return not self.components


def sl_membership(q: SemilinearSet, x: Vector) -> bool:
    if len(x) != q.dim:
        raise InputError(f"vector dimension {len(x)} != set dimension {q.dim}")
    return any(c.contains(x) for c in q.components)


def sl_sum(q1: SemilinearSet, q2: SemilinearSet) -> SemilinearSet:
    """Pairwise sums: constants add and period lists concatenate."""
    if q1.dim != q2.dim:
        raise InputError("dimension mismatch in semilinear sum")
    comps = tuple(
        LinearSet(_vec_add(a.constant, b.constant), a.periods + b.periods)
        for a in q1.components
        for b in q2.components
    )
    return SemilinearSet(q1.dim, comps)


def sl_union(q1: SemilinearSet, q2: SemilinearSet) -> SemilinearSet:
    if q1.dim != q2.dim:
        raise InputError("dimension mismatch in semilinear union")
    return SemilinearSet(q1.dim, q1.components + q2.components)


def sl_star(q: SemilinearSet, component_bound: int = DEFAULT_STAR_COMPONENT_BOUND) -> SemilinearSet:
    """All finite sums of elements of ``q`` (including the empty sum).

    For each nonempty subset T of components, the sums using every member of T
    at least once form the linear set with constant sum of T's constants and
    periods: T's periods plus T's constants.  Exponential in the component
    count, hence the guard bound.
    """
    n = len(q.components)
    if n > component_bound:
        raise ResourceLimitError(
            f"star of a semilinear set with {n} components exceeds bound {component_bound}"
        )
    zero = tuple([0] * q.dim)
    comps: list[LinearSet] = [LinearSet(zero)]
    for size in range(1, n + 1):
        for subset in itertools.combinations(q.components, size):
            const = zero
            periods: list[Vector] = []
            for c in subset:
                const = _vec_add(const, c.constant)
                periods.extend(c.periods)
                periods.append(c.constant)
            comps.append(LinearSet(const, tuple(periods)))
    return SemilinearSet(q.dim, tuple(comps))


def generate_members(q: SemilinearSet, bound: int) -> set[Vector]:
    """All members with every component <= bound; test oracle for membership."""
    out: set[Vector] = set()
    for c in q.components:
        frontier = {c.constant}
        while frontier:
            nxt: set[Vector] = set()
            for vec in frontier:
                if any(x > bound for x in vec):
                    continue
                if vec not in out:
                    out.add(vec)
                    for p in c.periods:
                        nxt.add(_vec_add(vec, p))
            frontier = nxt
    return {v for v in out if all(x <= bound for x in v)}


# -- regular expressions, used only for Parikh-image extraction -------------


class _Rx:
    pass


@dataclass(frozen=True)
class _REmpty(_Rx):
    pass


@dataclass(frozen=True)
class _REps(_Rx):
    pass


@dataclass(frozen=True)
class _RSym(_Rx):
    sym: str


@dataclass(frozen=True)
class _RUnion(_Rx):
    left: _Rx
    right: _Rx


@dataclass(frozen=True)
class _RConcat(_Rx):
    left: _Rx
    right: _Rx


@dataclass(frozen=True)
class _RStar(_Rx):
    inner: _Rx


def _rx_union(a: _Rx, b: _Rx) -> _Rx:
    if isinstance(a, _REmpty):
        return b
    if isinstance(b, _REmpty):
        return a
    if a == b:
        return a
    return _RUnion(a, b)


def _rx_concat(a: _Rx, b: _Rx) -> _Rx:
    if isinstance(a, _REmpty) or isinstance(b, _REmpty):
        return _REmpty()
    if isinstance(a, _REps):
        return b
    if isinstance(b, _REps):
        return a
    return _RConcat(a, b)


def _rx_star(a: _Rx) -> _Rx:
    if isinstance(a, (_REmpty, _REps)):
        return _REps()
    if isinstance(a, _RStar):
        return a
    return _RStar(a)


def nfa_to_regex(m: Nfa) -> _Rx:
    """State elimination on a trimmed copy of the machine."""
    m = trim(m)
    if not m.finals:
        return _REmpty()
    # generalised automaton with fresh start/accept and regex-labelled edges
    start, accept = "rx:start", "rx:accept"
    edges: dict[tuple[str, str], _Rx] = {}

    def add(src: str, dst: str, rx: _Rx) -> None:
        if isinstance(rx, _REmpty):
            return
        key = (src, dst)
        edges[key] = _rx_union(edges[key], rx) if key in edges else rx

    add(start, m.start, _REps())
    for f in m.finals:
        add(f, accept, _REps())
    for (src, sym), dsts in m.transitions.items():
        rx: _Rx = _REps() if sym == EPSILON else _RSym(sym)
        for d in dsts:
            add(src, d, rx)

    for q in m.states:
        loop = edges.pop((q, q), _REmpty())
        loop_star = _rx_star(loop)
        incoming = [(s, rx) for (s, d), rx in edges.items() if d == q]
        outgoing = [(d, rx) for (s, d), rx in edges.items() if s == q]
        for s, rin in incoming:
            for d, rout in outgoing:
                add(s, d, _rx_concat(rin, _rx_concat(loop_star, rout)))
        edges = {(s, d): rx for (s, d), rx in edges.items() if s != q and d != q}
    return edges.get((start, accept), _REmpty())


def _rx_parikh(rx: _Rx, alphabet: Sequence[str], star_bound: int) -> SemilinearSet:
    dim = len(alphabet)
    if isinstance(rx, _REmpty):
        return SemilinearSet.empty(dim)
    if isinstance(rx, _REps):
        return SemilinearSet.of_vector(tuple([0] * dim))
    if isinstance(rx, _RSym):
        return SemilinearSet.of_vector(parikh([rx.sym], alphabet))
    if isinstance(rx, _RUnion):
        return sl_union(
            _rx_parikh(rx.left, alphabet, star_bound), _rx_parikh(rx.right, alphabet, star_bound)
        )
    if isinstance(rx, _RConcat):
        return sl_sum(
            _rx_parikh(rx.left, alphabet, star_bound), _rx_parikh(rx.right, alphabet, star_bound)
        )
    assert isinstance(rx, _RStar)
    return sl_star(_rx_parikh(rx.inner, alphabet, star_bound), star_bound)


def nfa_parikh_image(
    m: Nfa,
    state_bound: int = DEFAULT_STATE_BOUND,
    star_component_bound: int = DEFAULT_STAR_COMPONENT_BOUND,
) -> SemilinearSet:
    """Semilinear set equal to the Parikh image of the machine's language."""
    m = trim(m)
    if len(m.states) > state_bound:
        raise ResourceLimitError(
            f"{len(m.states)} states exceed the Parikh-image state bound {state_bound}"
        )
    return _rx_parikh(nfa_to_regex(m), m.alphabet, star_component_bound)


def comm_membership(m: Nfa, w: str | Iterable[str], **kwargs) -> bool:
    """Commutative-closure membership: the Parikh vector of ``w`` is realised in L(M)."""
    return sl_membership(nfa_parikh_image(m, **kwargs), parikh(w, m.alphabet))
