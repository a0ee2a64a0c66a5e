"""Partitions, Frobenius coordinates and profile data.

Self-conjugate partitions are in bijection with sets of distinct odd hook
lengths ``2m + 1``; the Frobenius arms ``m`` carry all the information.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class Partition:
    """A weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def part(self, i: int) -> int:
        """1-based part lookup, zero past the end."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0


@dataclass(frozen=True)
class FrobeniusCoords:
    """Frobenius coordinates ``(m_1 > ... > m_r | n_1 > ... > n_r)``."""

    arms: tuple[int, ...]
    legs: tuple[int, ...]

    def __post_init__(self) -> None:
        arms = tuple(int(a) for a in self.arms)
        legs = tuple(int(b) for b in self.legs)
        if len(arms) != len(legs):
            raise ValueError("arms and legs must have equal length")
        for seq in (arms, legs):
            if any(x < 0 for x in seq):
                raise ValueError("Frobenius coordinates must be non-negative")
            if any(a <= b for a, b in zip(seq, seq[1:])):
                raise ValueError("Frobenius coordinates must be strictly decreasing")
        object.__setattr__(self, "arms", arms)
        object.__setattr__(self, "legs", legs)

    @property
    def rank(self) -> int:
        return len(self.arms)

    @property
    def size(self) -> int:
        return sum(self.arms) + sum(self.legs) + self.rank

    @property
    def is_self_conjugate(self) -> bool:
        return self.arms == self.legs


def conjugate(p: Partition) -> Partition:
    """Transpose the Young diagram."""
    if not p.parts:
        return Partition(())
    return Partition(tuple(sum(1 for x in p.parts if x >= j) for j in range(1, p.parts[0] + 1)))


def is_self_conjugate(p: Partition) -> bool:
    return conjugate(p) == p


def frobenius(p: Partition) -> FrobeniusCoords:
    conj = conjugate(p)
    r = sum(1 for i, x in enumerate(p.parts, start=1) if x >= i)
    arms = tuple(p.parts[i] - (i + 1) for i in range(r))
    legs = tuple(conj.parts[i] - (i + 1) for i in range(r))
    return FrobeniusCoords(arms, legs)


def from_frobenius(c: FrobeniusCoords) -> Partition:
    r = c.rank
    if r == 0:
        return Partition(())
    rows = [c.arms[i] + i + 1 for i in range(r)]
    # rows below the diagonal: column j (1-based) has height legs[j-1] + j
    heights = [c.legs[j] + j + 1 for j in range(r)]
    i = r + 1
    while True:
        width = sum(1 for h in heights if h >= i)
        if width == 0:
            break
        rows.append(width)
        i += 1
    return Partition(tuple(rows))


def frobenius_length(p: Partition) -> int:
    """Side of the Durfee square, i.e. the Frobenius rank."""
    return sum(1 for i, x in enumerate(p.parts, start=1) if x >= i)


def self_conjugate_from_arms(arms: tuple[int, ...]) -> Partition:
    arms = tuple(sorted(arms, reverse=True))
    return from_frobenius(FrobeniusCoords(arms, arms))


def _odd_hook_sets(max_size: int, smallest: int) -> Iterator[tuple[int, ...]]:
    # sets of distinct odd hooks >= smallest, in increasing order, sum <= max_size
    yield ()
    h = smallest
    while h <= max_size:
        for rest in _odd_hook_sets(max_size - h, h + 2):
            yield (h,) + rest
        h += 2


def enumerate_self_conjugate(max_size: int) -> Iterator[FrobeniusCoords]:
    """Every self-conjugate partition of size at most ``max_size``, once each.

    Output is ordered by size, then lexicographically by arms.
    """
    if max_size < 0:
        return iter(())
    found = []
    for hooks in _odd_hook_sets(max_size, 1):
        arms = tuple(sorted(((h - 1) // 2 for h in hooks), reverse=True))
        found.append((sum(hooks), arms))
    found.sort()
    return iter(FrobeniusCoords(arms, arms) for _, arms in found)


def count_self_conjugate(max_size: int) -> list[int]:
    """Counts by size 0..max_size, read off from prod (1 + q^(2i-1))."""
    coeffs = [0] * (max_size + 1)
    coeffs[0] = 1
    for h in range(1, max_size + 1, 2):
        for s in range(max_size, h - 1, -1):
            coeffs[s] += coeffs[s - h]
    return coeffs


def all_partitions(n: int) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order (used by oracles)."""

    def rec(rem: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        for k in range(min(rem, cap), 0, -1):
            for rest in rec(rem - k, k):
                yield (k,) + rest

    for parts in rec(n, n):
        yield Partition(parts)


@dataclass(frozen=True)
class Profile:
    """Step-function data attached to a partition.

    ``f`` and ``g`` are the downward profiles on x > 0; ``fbar`` and ``gbar``
    are their rotated versions on X >= 0.
    """

    partition: Partition
    mult: dict[int, int] = field(compare=False)
    alpha: dict[int, int] = field(compare=False)
    _conj: tuple[int, ...] = field(compare=False, repr=False)
    _arms_desc: tuple[int, ...] = field(compare=False, repr=False)
    _arms_asc: tuple[int, ...] = field(compare=False, repr=False)

    def f(self, x: float) -> int:
        """-#{i : lambda_i >= ceil(x)} for x > 0."""
        if x <= 0:
            raise ValueError("profile is defined for x > 0")
        # parts are decreasing; count those >= x (same as >= ceil(x) for integers)
        neg = [-p for p in self.partition.parts]
        return -bisect_right(neg, -x)

    def g(self, x: float) -> int:
        """-#{i : m_i >= ceil(x)} for x > 0."""
        if x <= 0:
            raise ValueError("profile is defined for x > 0")
        return -(len(self._arms_asc) - bisect_left(self._arms_asc, x))

    def fbar(self, X: float) -> int:
        """lambda_{floor(X)+1}."""
        if X < 0:
            raise ValueError("rotated profile is defined for X >= 0")
        return self.partition.part(int(X // 1) + 1)

    def gbar(self, X: float) -> int:
        """m_{floor(X)+1}, zero past the Frobenius rank."""
        if X < 0:
            raise ValueError("rotated profile is defined for X >= 0")
        i = int(X // 1)
        return self._arms_desc[i] if i < len(self._arms_desc) else 0


def profile(p: Partition) -> Profile:
    mult: dict[int, int] = {}
    for x in p.parts:
        mult[x] = mult.get(x, 0) + 1
    arms = frobenius(p).arms
    alpha = {k: 1 for k in arms}
    return Profile(
        partition=p,
        mult=mult,
        alpha=alpha,
        _conj=conjugate(p).parts,
        _arms_desc=arms,
        _arms_asc=tuple(sorted(arms)),
    )
