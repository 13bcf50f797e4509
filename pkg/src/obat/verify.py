"""Independent oracles and property harnesses.

skeleton_oracle recomputes skeletons by brute-force subset enumeration;
equiv_up compares two membership oracles over every ultimately-periodic word
within bounds; check_local_preference samples the three factor-closure
properties that characterize Eve-positional languages.  All enumeration runs
in a fixed order (prefix length, period length, lexicographic) so reported
counterexamples are reproducible.

The preference properties quantify over arbitrary infinite continuations in
their general form; since ω-regular languages are determined by their
ultimately-periodic words, the harness ranges continuations over UP words
only, which the report states.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .automata import UPWord
from .tiles import Skeleton, Tile, UsageError, upward_closure


def skeleton_oracle(t: Tile) -> Skeleton:
    """First-by-size generator subset whose closure is t; unique at that size.

    Exponential subset search, intended for universes of at most 3 states.
    """
    if t.universe.size > 3:
        raise UsageError("skeleton_oracle enumerates subsets; |Q| <= 3 only")
    trans = sorted(t.transitions)
    for size in range(len(trans) + 1):
        found = [
            subset
            for subset in itertools.combinations(trans, size)
            if upward_closure(t.universe, subset).transitions == t.transitions
        ]
        if found:
            if len(found) != 1:
                raise AssertionError(
                    f"minimal generator not unique at size {size}: {found}"
                )
            return Skeleton(t.universe, frozenset(found[0]))
    raise AssertionError("no generating subset found (tile not upward-closed?)")


MemberFn = Callable[[UPWord], bool]


def words_of_length(alphabet, n: int) -> Iterator[tuple[str, ...]]:
    yield from itertools.product(sorted(alphabet), repeat=n)


def finite_words(alphabet, max_len: int, min_len: int = 0) -> Iterator[tuple[str, ...]]:
    for n in range(min_len, max_len + 1):
        yield from words_of_length(alphabet, n)


def enumerate_up_words(alphabet, max_prefix: int, max_period: int) -> Iterator[UPWord]:
    """All UP words within the bounds: prefix length, then period length, then lex."""
    for u in finite_words(alphabet, max_prefix):
        for v in finite_words(alphabet, max_period, min_len=1):
            yield UPWord(u, v)


def equiv_up(
    m1: MemberFn,
    m2: MemberFn,
    alphabet,
    max_prefix: int,
    max_period: int,
) -> UPWord | None:
    """First UP word within bounds on which the oracles disagree, or None."""
    for w in enumerate_up_words(alphabet, max_prefix, max_period):
        if m1(w) != m2(w):
            return w
    return None


@dataclass
class PreferenceViolation:
    prop: int
    witness: dict[str, object]

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={_fmt(v)}" for k, v in self.witness.items())
        return f"property ({self.prop}) violated: {parts}"


def _fmt(v) -> str:
    if isinstance(v, UPWord):
        return str(v)
    if isinstance(v, tuple):
        return " ".join(v) or "ε"
    return str(v)


@dataclass
class PreferenceReport:
    bounds: dict[str, int]
    violations: list[PreferenceViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        head = (
            "continuations ranged over ultimately-periodic words only "
            f"(bounds {self.bounds})"
        )
        if self.ok:
            return f"no violation found within bounds; {head}"
        return "\n".join([head] + [str(v) for v in self.violations])


def check_local_preference(
    member: MemberFn,
    alphabet,
    max_u: int = 2,
    max_period: int = 2,
    max_w_prefix: int = 2,
) -> PreferenceReport:
    """Sample the three local preference properties of the language.

    (1) uw, u'w' in L imply uw' in L or u'w in L.
    (2) uvw in L implies uv^ω in L or uw in L.
    (3) u(vv')^ω in L implies uv^ω in L or uv'^ω in L.

    A necessary-condition sampler: an empty report means no violation was
    found within the bounds, not a proof of Eve-positionality.
    """
    report = PreferenceReport(
        bounds={"max_u": max_u, "max_period": max_period, "max_w_prefix": max_w_prefix}
    )
    memo: dict[UPWord, bool] = {}

    def m(w: UPWord) -> bool:
        if w not in memo:
            memo[w] = member(w)
        return memo[w]

    us = list(finite_words(alphabet, max_u))
    vs = list(finite_words(alphabet, max_u, min_len=1))
    ws = list(enumerate_up_words(alphabet, max_w_prefix, max_period))

    # (1) holds iff the accepted-continuation sets of the prefixes form a
    # chain; an incomparable pair yields the witnesses directly.
    accepted = {
        u: frozenset(i for i, w in enumerate(ws) if m(UPWord(u + w.prefix, w.period)))
        for u in us
    }
    for u, u2 in itertools.combinations(us, 2):
        only_u = accepted[u] - accepted[u2]
        only_u2 = accepted[u2] - accepted[u]
        if only_u and only_u2:
            report.violations.append(
                PreferenceViolation(
                    1,
                    {"u": u, "u'": u2, "w": ws[min(only_u)], "w'": ws[min(only_u2)]},
                )
            )

    for u in us:
        for v in vs:
            v_power = m(UPWord(u, v))
            for w in ws:
                if m(UPWord(u + v + w.prefix, w.period)):
                    if not v_power and not m(UPWord(u + w.prefix, w.period)):
                        report.violations.append(
                            PreferenceViolation(2, {"u": u, "v": v, "w": w})
                        )

    for u in us:
        for v in vs:
            for v2 in vs:
                if m(UPWord(u, v + v2)):
                    if not m(UPWord(u, v)) and not m(UPWord(u, v2)):
                        report.violations.append(
                            PreferenceViolation(3, {"u": u, "v": v, "v'": v2})
                        )

    return report
