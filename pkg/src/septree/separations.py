"""Oriented separations of a finite ground set and their order functions.

The ground set is {0, .., n-1} and subsets are int bitmasks (bit i set iff
element i is in the subset).  An oriented separation is an ordered pair
``(left, right)`` of masks covering the ground set; ``(B, A)`` is the reverse
orientation of ``(A, B)``.  The partial order is

    (A, B) <= (C, D)   iff   A is a subset of C and B is a superset of D,

inversion is order reversing, and the lattice operations are

    (A, B) v (C, D) = (A | C, B & D),    (A, B) ^ (C, D) = (A & C, B | D).

A rank function r on subsets that is non-negative, non-decreasing and
submodular induces the order

    |A, B| = r(A) + r(B) - r(V),

which is symmetric, non-negative and submodular.  For the cardinality rank
on a graph's vertex set this is just |A & B|.

A *star* is a multiset of separations pointing pairwise away from each
other: (A, B) <= (D, C) for every 2-element sub-multiset.  Stars are
represented as sorted tuples of separations, so equal multisets compare
equal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

Sep = tuple[int, int]


# ---------------------------------------------------------------------------
# separation algebra

def invert(s: Sep) -> Sep:
    """Reverse orientation: (A, B) -> (B, A)."""
    return (s[1], s[0])


def leq(s1: Sep, s2: Sep) -> bool:
    """(A, B) <= (C, D) iff A subset of C and B superset of D."""
    return s1[0] & ~s2[0] == 0 and s2[1] & ~s1[1] == 0


def join(s1: Sep, s2: Sep) -> Sep:
    """Supremum (A | C, B & D)."""
    return (s1[0] | s2[0], s1[1] & s2[1])


def meet(s1: Sep, s2: Sep) -> Sep:
    """Infimum (A & C, B | D)."""
    return (s1[0] & s2[0], s1[1] | s2[1])


def is_nested(s1: Sep, s2: Sep) -> bool:
    """True iff the two separations have <=-comparable orientations."""
    a, b = s1
    c, d = s2
    # s1 <= s2, s2 <= s1, s1 <= s2*, s2* <= s1
    return (
        (a & ~c == 0 and d & ~b == 0)
        or (c & ~a == 0 and b & ~d == 0)
        or (a & ~d == 0 and c & ~b == 0)
        or (d & ~a == 0 and b & ~c == 0)
    )


def subsets_of(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


# ---------------------------------------------------------------------------
# rank oracles

class RankOracle:
    """Memoized set function on bitmasks.

    Subclasses implement ``_rank``.  Instances are intended to be
    non-negative, non-decreasing and submodular; ``check_rank_oracle``
    verifies this exhaustively for small ground sets.  The memo dict is
    only ever grown, so sharing an oracle between threads is safe under
    the usual atomic-dict-access guarantees.
    """

    kind = "abstract"

    def __init__(self, size: int):
        self.size = size
        self.full = (1 << size) - 1
        self._memo: dict[int, int] = {}

    def __call__(self, mask: int) -> int:
        v = self._memo.get(mask)
        if v is None:
            v = self._rank(mask & self.full)
            self._memo[mask] = v
        return v

    def _rank(self, mask: int) -> int:
        raise NotImplementedError


class CardinalityRank(RankOracle):
    """r(X) = |X|, the rank used for graph separations."""

    kind = "cardinality"

    def __call__(self, mask: int) -> int:
        return (mask & self.full).bit_count()

    def _rank(self, mask: int) -> int:
        return mask.bit_count()


class TableRank(RankOracle):
    """Rank read off an explicit table of 2^n values (user supplied)."""

    kind = "user-table"

    def __init__(self, values):
        size = (len(values) - 1).bit_length()
        if len(values) != 1 << size:
            raise ValueError("table length must be a power of two")
        super().__init__(size)
        self.values = list(values)

    def _rank(self, mask: int) -> int:
        return self.values[mask]


def order(s: Sep, rank: RankOracle) -> int:
    """|A, B| = r(A) + r(B) - r(V)."""
    return rank(s[0]) + rank(s[1]) - rank(rank.full)


# ---------------------------------------------------------------------------
# stars

def star_key(seps: Iterable[Sep]) -> tuple[Sep, ...]:
    """Canonical multiset form: sorted tuple."""
    return tuple(sorted(seps))


def is_star(seps: Iterable[Sep]) -> bool:
    """Pairwise (A, B) <= (D, C) over all 2-element sub-multisets.

    A separation listed twice is compared against its own inverse, so e.g.
    {(A, B), (A, B)} is a star only if (A, B) <= (B, A).
    """
    ss = list(seps)
    for i in range(len(ss)):
        si = ss[i]
        for j in range(i + 1, len(ss)):
            if not leq(si, invert(ss[j])):
                return False
    return True


def star_size(seps: Iterable[Sep], rank: RankOracle) -> int:
    """Sum of r(B_i) minus (|star| - 1) * r(V); r(V) for the empty star.

    Equals |intersection of the B_i| under the cardinality rank.
    """
    ss = list(seps)
    total = sum(rank(b) for _, b in ss)
    return total - (len(ss) - 1) * rank(rank.full)


def star_interior(seps: Iterable[Sep], full: int) -> int:
    """Intersection of the right-hand sides (the full set for no members)."""
    m = full
    for _, b in seps:
        m &= b
    return m


# ---------------------------------------------------------------------------
# rank oracle validation

@dataclass
class Report:
    """Outcome of a verification pass: property name, verdict, witness."""

    prop: str
    passed: bool
    witness: dict | None = None
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"property": self.prop, "pass": self.passed, "counts": self.counts}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


def _mask_to_list(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def check_rank_oracle(rank: RankOracle, max_exhaustive: int = 16,
                      samples: int | None = None, seed: int = 0) -> Report:
    """Verify non-negativity, monotonicity and submodularity.

    Exhaustive up to ``max_exhaustive`` elements: non-negativity over all
    subsets, monotonicity over all single-element extensions, and
    submodularity over all pairs (all single-element increments for ground
    sets above 9 elements; the two forms are equivalent).  Larger ground
    sets require ``samples`` random pairs instead.
    """
    n = rank.size
    full = rank.full
    counts = {"size": n, "checked": 0}
    if n > max_exhaustive:
        if samples is None:
            raise ValueError(
                f"ground set of size {n} exceeds exhaustive cap "
                f"{max_exhaustive}; pass samples= to spot-check")
        rng = random.Random(seed)
        for _ in range(samples):
            x = rng.randrange(full + 1)
            y = rng.randrange(full + 1)
            counts["checked"] += 1
            if rank(x) < 0:
                return Report("rank-oracle", False,
                              {"kind": "negative", "X": _mask_to_list(x)}, counts)
            if x & ~y == 0 and rank(x) > rank(y):
                return Report("rank-oracle", False,
                              {"kind": "monotonicity", "X": _mask_to_list(x),
                               "Y": _mask_to_list(y)}, counts)
            if rank(x) + rank(y) < rank(x | y) + rank(x & y):
                return Report("rank-oracle", False,
                              {"kind": "submodularity", "X": _mask_to_list(x),
                               "Y": _mask_to_list(y)}, counts)
        counts["method"] = "sampled"
        return Report("rank-oracle", True, None, counts)

    for x in range(full + 1):
        if rank(x) < 0:
            return Report("rank-oracle", False,
                          {"kind": "negative", "X": _mask_to_list(x)}, counts)
        rest = full ^ x
        r = rest
        while r:
            b = r & -r
            r ^= b
            counts["checked"] += 1
            if rank(x | b) < rank(x):
                return Report("rank-oracle", False,
                              {"kind": "monotonicity", "X": _mask_to_list(x),
                               "Y": _mask_to_list(x | b)}, counts)
    if n <= 9:
        counts["method"] = "pairwise"
        for x in range(full + 1):
            rx = rank(x)
            for y in range(x, full + 1):
                counts["checked"] += 1
                if rx + rank(y) < rank(x | y) + rank(x & y):
                    return Report("rank-oracle", False,
                                  {"kind": "submodularity", "X": _mask_to_list(x),
                                   "Y": _mask_to_list(y)}, counts)
    else:
        # diminishing returns: r(X+i) + r(X+j) >= r(X+i+j) + r(X)
        counts["method"] = "local"
        for x in range(full + 1):
            rest = _mask_to_list(full ^ x)
            for ii in range(len(rest)):
                bi = 1 << rest[ii]
                for jj in range(ii + 1, len(rest)):
                    bj = 1 << rest[jj]
                    counts["checked"] += 1
                    if rank(x | bi) + rank(x | bj) < rank(x | bi | bj) + rank(x):
                        return Report(
                            "rank-oracle", False,
                            {"kind": "submodularity", "X": _mask_to_list(x | bi),
                             "Y": _mask_to_list(x | bj)}, counts)
    return Report("rank-oracle", True, None, counts)


# ---------------------------------------------------------------------------
# groundedness

def is_grounded_sample(rank: RankOracle, pairs: Iterable[tuple[Sep, Sep]]) -> bool:
    """Check |A | C, B & D| <= |C, D| on the given pairs.

    Every pair must satisfy (B, A) <= (C, D).  Always true when the order
    comes from a non-decreasing submodular rank, and on bipartition
    universes for any symmetric submodular order; a corrupted (e.g.
    non-monotone) table oracle can fail it.
    """
    for s1, s2 in pairs:
        if not leq(invert(s1), s2):
            raise ValueError(f"pair violates precondition: {s1} {s2}")
        if order(join(s1, s2), rank) > order(s2, rank):
            return False
    return True


# ---------------------------------------------------------------------------
# interval connectivity

def lambda_interval(universe, lo: Sep, hi: Sep) -> tuple[int, Sep]:
    """Minimum order over separations s with lo <= s <= hi, with a witness.

    The universe enumerates the interval; the witness is the minimizer with
    the smallest (left, right) encoding.  Results are memoized on the
    universe.  Raises ValueError unless lo <= hi.
    """
    memo = universe._lambda_memo
    key = (lo, hi)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if not leq(lo, hi):
        raise ValueError(f"interval is empty: {lo} !<= {hi}")
    best = None
    bw = None
    uorder = universe.order
    for s in universe.interval_separations(lo, hi):
        v = uorder(s)
        if best is None or v < best or (v == best and s < bw):
            best, bw = v, s
    res = (best, bw)
    memo[key] = res
    return res


def interval_minimizers(universe, lo: Sep, hi: Sep) -> list[Sep]:
    """All minimum-order separations in the interval, sorted canonically."""
    value, _ = lambda_interval(universe, lo, hi)
    uorder = universe.order
    out = [s for s in universe.interval_separations(lo, hi) if uorder(s) == value]
    out.sort()
    return out
