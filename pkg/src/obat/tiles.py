"""Tile algebra over a totally ordered finite state set.

States are indices into a :class:`StateUniverse`; the ascending order of the
universe's state list *is* the total order, so plain integer comparison
decides it.  A transition is a triple ``(src, priority, dst)`` with priority
0 (Büchi) or 1, and a tile is a transition set closed upwards for

    (p, c, q)  <=  (p', c', q')   iff   p <= p',  q' <= q,
                                        and c <= c' when (p, q) == (p', q').

Upward-closed tiles compose by relational product taking the minimum of the
two priorities; together with the closure of the identity skeleton as unit
they form a monoid.  Every upward-closed tile has a unique inclusion-minimal
generating set, its skeleton, which is a partial injection on states.
"""

from __future__ import annotations

from dataclasses import dataclass


class UsageError(ValueError):
    """The caller broke an operation's contract (wrong universe, bad letter, ...)."""


class ValidationError(ValueError):
    """A value or input file violates a structural invariant."""


Transition = tuple[int, int, int]  # (src, priority, dst)


@dataclass(frozen=True)
class StateUniverse:
    """Totally ordered state set; ``states[0]`` is the minimum."""

    states: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise ValidationError("state universe must be nonempty")
        if len(set(self.states)) != len(self.states):
            raise ValidationError("state identifiers must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.states)

    def index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise UsageError(f"unknown state {name!r}") from None

    def name(self, i: int) -> str:
        return self.states[i]


def universe_of_ints(n: int) -> StateUniverse:
    """Universe with states named "0".."n-1", natural order."""
    return StateUniverse(tuple(str(i) for i in range(n)))


def trans_leq(d1: Transition, d2: Transition) -> bool:
    """Transition order: source up, destination down, priority up at equal endpoints."""
    p1, c1, q1 = d1
    p2, c2, q2 = d2
    if p1 > p2 or q2 > q1:
        return False
    if (p1, q1) == (p2, q2):
        return c1 <= c2
    return True


def all_transitions(n: int) -> list[Transition]:
    return [(p, c, q) for p in range(n) for c in (0, 1) for q in range(n)]


@dataclass(frozen=True)
class Tile:
    """A set of priority-0/1 transitions over a universe.

    Bounds and priorities are checked here; upward-closedness is the caller's
    obligation for algebra operations and is what :func:`is_upward_closed`
    and ``automata.oba_validate`` report on.  Use :func:`upward_closure` to
    build tiles from arbitrary generator sets.
    """

    universe: StateUniverse
    transitions: frozenset[Transition]

    def __post_init__(self) -> None:
        n = self.universe.size
        for (p, c, q) in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise ValidationError(f"transition {(p, c, q)} out of range for |Q|={n}")
            if c not in (0, 1):
                raise ValidationError(f"tile priority must be 0 or 1, got {c}")

    def is_upward_closed(self) -> bool:
        return self.closure_witness() is None

    def closure_witness(self) -> tuple[Transition, Transition] | None:
        """A pair (member, missing dominating transition), or None if closed."""
        trans = self.transitions
        for d in trans:
            for d2 in all_transitions(self.universe.size):
                if trans_leq(d, d2) and d2 not in trans:
                    return (d, d2)
        return None

    def is_empty(self) -> bool:
        return not self.transitions


@dataclass(frozen=True)
class Skeleton:
    """Inclusion-minimal generator of an upward-closed tile.

    Distinct members have distinct sources and distinct targets.
    """

    universe: StateUniverse
    transitions: frozenset[Transition]

    def __post_init__(self) -> None:
        srcs = [p for (p, _, _) in self.transitions]
        dsts = [q for (_, _, q) in self.transitions]
        if len(set(srcs)) != len(srcs) or len(set(dsts)) != len(dsts):
            raise ValidationError("skeleton endpoints must be injective")


def upward_closure(universe: StateUniverse, generators) -> Tile:
    """Smallest upward-closed tile containing the generators."""
    gen = list(generators)
    closed = frozenset(
        d2 for d2 in all_transitions(universe.size) if any(trans_leq(d, d2) for d in gen)
    )
    return Tile(universe, closed)


def unit_tile(universe: StateUniverse) -> Tile:
    """Closure of the identity skeleton: everything weakly descending, no horizontal Büchi."""
    trans = frozenset(
        (p, c, q)
        for p in range(universe.size)
        for q in range(p + 1)
        for c in (0, 1)
        if not (p == q and c == 0)
    )
    return Tile(universe, trans)


def _same_universe(t1: Tile, t2: Tile) -> None:
    if t1.universe != t2.universe:
        raise UsageError("tiles over different universes")


def product(t1: Tile, t2: Tile) -> Tile:
    """Relational composition taking the minimum priority; closed when inputs are."""
    _same_universe(t1, t2)
    by_src: dict[int, list[tuple[int, int]]] = {}
    for (p, c, q) in t2.transitions:
        by_src.setdefault(p, []).append((c, q))
    out = set()
    for (p, c1, q) in t1.transitions:
        for (c2, r) in by_src.get(q, ()):
            out.add((p, min(c1, c2), r))
    return Tile(t1.universe, frozenset(out))


def skeleton(t: Tile) -> Skeleton:
    """Unique minimal generator: minimal endpoint pairs with their least priority."""
    best: dict[tuple[int, int], int] = {}
    for (p, c, q) in t.transitions:
        prev = best.get((p, q))
        if prev is None or c < prev:
            best[(p, q)] = c
    pairs = list(best)
    minimal = [
        (p, q)
        for (p, q) in pairs
        if not any((p2 <= p and q <= q2 and (p2, q2) != (p, q)) for (p2, q2) in pairs)
    ]
    srcs = {p for (p, _) in minimal}
    dsts = {q for (_, q) in minimal}
    if len(srcs) != len(minimal) or len(dsts) != len(minimal):
        raise AssertionError(f"minimal endpoint pairs not injective: {sorted(minimal)}")
    return Skeleton(t.universe, frozenset((p, best[(p, q)], q) for (p, q) in minimal))


def successors(t: Tile, states) -> frozenset[int]:
    """States reachable from the given set in one step; downward-closed for closed tiles."""
    src = set(states)
    return frozenset(q for (p, _, q) in t.transitions if p in src)


def top_successor(t: Tile, q: int) -> int | None:
    """Greatest successor of q, or None; monotone in q for closed tiles."""
    targets = [r for (p, _, r) in t.transitions if p == q]
    return max(targets) if targets else None


def enumerate_upward_closed_tiles(universe: StateUniverse):
    """All upward-closed tiles over the universe (exponential; |Q| <= 2 intended)."""
    if universe.size > 2:
        raise UsageError("exhaustive tile enumeration is intended for |Q| <= 2")
    trans = all_transitions(universe.size)
    for mask in range(1 << len(trans)):
        subset = frozenset(t for i, t in enumerate(trans) if mask >> i & 1)
        tile = Tile(universe, subset)
        if tile.is_upward_closed():
            yield tile
