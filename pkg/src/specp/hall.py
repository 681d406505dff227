"""Basic commutators and Witt's count.

Weight-1 basic commutators are the letters ``x_1 < ... < x_d``.  A commutator
``[c_i, c_j]`` of weight ``n >= 2`` is basic when ``c_i, c_j`` are basic of
smaller weight, ``c_i > c_j``, and, if ``c_i = [c_s, c_t]``, also
``c_j >= c_t``.  Basic commutators are ordered by weight and, within a
weight, lexicographically by the positions of ``(c_i, c_j)``.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_WEIGHT = 4


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    if n > 1:
        result = -result
    return result


def witt_chi(n: int, d: int) -> int:
    """Number of basic commutators of weight ``n`` on ``d`` letters."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    total = sum(mobius(m) * d ** (n // m) for m in range(1, n + 1) if n % m == 0)
    q, rem = divmod(total, n)
    assert rem == 0
    return q


@dataclass(frozen=True)
class BasicCommutator:
    """A basic commutator; ``left``/``right`` are positions in the enumeration."""

    position: int
    weight: int
    letter: int | None = None
    left: int | None = None
    right: int | None = None

    def render(self, table: list["BasicCommutator"]) -> str:
        if self.letter is not None:
            return f"x{self.letter}"
        return f"[{table[self.left].render(table)}, {table[self.right].render(table)}]"


def enumerate_basic(d: int, max_weight: int) -> list[BasicCommutator]:
    if max_weight > MAX_WEIGHT:
        raise ValueError(f"max_weight is capped at {MAX_WEIGHT}")
    if d < 0 or max_weight < 1:
        raise ValueError("need d >= 0 and max_weight >= 1")
    out = [BasicCommutator(k, 1, letter=k + 1) for k in range(d)]
    for w in range(2, max_weight + 1):
        new = []
        for ci in out:
            for cj in out:
                if ci.weight + cj.weight != w or ci.position <= cj.position:
                    continue
                if ci.letter is None and cj.position < ci.right:
                    continue
                new.append((ci.position, cj.position))
        new.sort()
        base = len(out)
        out += [BasicCommutator(base + k, w, left=a, right=b) for k, (a, b) in enumerate(new)]
    return out


def weight_counts(d: int, max_weight: int) -> dict[int, int]:
    counts = {w: 0 for w in range(1, max_weight + 1)}
    for c in enumerate_basic(d, max_weight):
        counts[c.weight] += 1
    return counts


@dataclass(frozen=True)
class RankCrosscheck:
    d: int
    chi2: int
    chi3: int
    derived_rank: int
    multiplier_rank: int
    consistent: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def rank_crosscheck(d: int) -> RankCrosscheck:
    """Compare Witt counts with the ranks of ``G'`` and ``M(G)`` of the free special group."""
    if d < 2:
        raise ValueError("need d >= 2")
    chi2, chi3 = witt_chi(2, d), witt_chi(3, d)
    derived = d * (d - 1) // 2
    mult = d * (d - 1) * (d + 1) // 3
    return RankCrosscheck(d, chi2, chi3, derived, mult, chi2 == derived and chi3 == mult)
