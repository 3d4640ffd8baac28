"""Closed-form trace moments for the classical compact groups.

The central object is ``moment_usp(n, a)``, the exact value of
``int_{USp(2n)} prod_j tr(U^j)^{a_j} dU`` for partitions with
``size(a) <= 4n+1``:

    moment_usp(n, a) = (-1)^len(a) * sum_{b <= a} C(a,b) g(b) phi(n, a-b)

where ``g`` is the moment of the shifted-Gaussian model (``gaussian_moment``
here) and ``phi`` is the finite-n correction (``nongaussian_correction``).
Everything in this module is exact integer arithmetic; the only rounding
anywhere lives in the numerical oracles of :mod:`symp.haar`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterator, NamedTuple

from .errors import OutOfRange
from .partitions import Partition, sub_partitions


def double_factorial(k: int) -> int:
    """(k)!! with the convention 0!! = (-1)!! = 1."""
    if k <= 0:
        return 1
    result = 1
    while k > 1:
        result *= k
        k -= 2
    return result


def even_indicator(j: int) -> int:
    """1 if j is even, else 0."""
    return 1 - (j & 1)


def gaussian_moment_single(j: int, a: int) -> int:
    """Moment E[(sqrt(j) X + eta_j)^a] for a standard real Gaussian X.

    Vanishes when j*a is odd; equals j^(a/2) (a-1)!! for odd j and even a;
    for even j it is sum_l C(a, 2l) j^l (2l-1)!!.
    """
    if (j * a) % 2 == 1:
        return 0
    if j % 2 == 1:
        return j ** (a // 2) * double_factorial(a - 1)
    return sum(comb(a, 2 * l) * j**l * double_factorial(2 * l - 1) for l in range(a // 2 + 1))


def gaussian_moment(b: Partition) -> int:
    """Product of gaussian_moment_single over the support of b (1 on empty)."""
    result = 1
    for j, m in b.items:
        result *= gaussian_moment_single(j, m)
        if result == 0:
            return 0
    return result


def nongaussian_correction(n: int, c: Partition) -> int:
    """Correction factor phi(n, c).

    1 when c is empty, 0 when size(c) is odd, and otherwise
    ``-sum_{d <= c, size(d) <= size(c)/2 - n - 1} (-1)^len(d) C(c, d)``
    (0 when the constraint set is empty).
    """
    total_size = c.size
    if total_size == 0:
        return 1
    if total_size % 2 == 1:
        return 0
    bound = total_size // 2 - n - 1
    if bound < 0:
        return 0
    acc = 0
    for d in sub_partitions(c):
        if d.size <= bound:
            acc += (-1) ** d.length * c.binomial(d)
    return -acc


def moment_usp(n: int, a: Partition) -> int:
    """Exact Haar moment of prod_j tr(U^j)^{a_j} over USp(2n).

    Valid (and asserted) only for size(a) <= 4n+1; raises OutOfRange beyond,
    where no formula is claimed.
    """
    if a.size > 4 * n + 1:
        raise OutOfRange(f"partition size {a.size} exceeds 4n+1 = {4 * n + 1}")
    total = 0
    for b in sub_partitions(a):
        gb = gaussian_moment(b)
        if gb == 0:
            continue
        total += a.binomial(b) * gb * nongaussian_correction(n, a - b)
    return (-1) ** a.length * total


class FlaggedMoment(NamedTuple):
    """Moment value from a Gaussian model plus an in-model-range flag."""

    value: int
    valid: bool


def moment_usp_gaussian(n: int, a: Partition) -> FlaggedMoment:
    """Gaussian-model USp moment (-1)^len(a) g(a); exact iff size(a) <= 2n+1."""
    return FlaggedMoment((-1) ** a.length * gaussian_moment(a), a.size <= 2 * n + 1)


def moment_so_gaussian(n: int, a: Partition) -> FlaggedMoment:
    """Gaussian-model SO(n) moment g(a); exact iff size(a) <= n-1."""
    return FlaggedMoment(gaussian_moment(a), a.size <= n - 1)


def moment_u_gaussian(n: int, a: Partition, b: Partition) -> FlaggedMoment:
    """Gaussian-model U(n) moment prod_j delta_{a_j b_j} j^{a_j} a_j!.

    Exact iff size(a) + size(b) <= 2n.  ``a`` carries the tr(U^j) exponents
    and ``b`` the tr(U^-j) exponents.
    """
    valid = a.size + b.size <= 2 * n
    if a != b:
        return FlaggedMoment(0, valid)
    value = 1
    for j, m in a.items:
        value *= j**m * _factorial(m)
    return FlaggedMoment(value, valid)


def _factorial(m: int) -> int:
    result = 1
    for i in range(2, m + 1):
        result *= i
    return result


@dataclass(frozen=True)
class Pairing:
    """Partial pairing of the parts of a partition.

    For each part size j the indices {1..b_j} split into disjoint unordered
    pairs plus fixed points, with no fixed point allowed at odd j.
    """

    base: Partition
    pairs: tuple[tuple[int, tuple[tuple[int, int], ...]], ...]
    fixed: tuple[tuple[int, tuple[int, ...]], ...]

    def pair_count(self, j: int) -> int:
        for part, ps in self.pairs:
            if part == j:
                return len(ps)
        return 0

    def weight(self) -> int:
        """prod_j j^(number of pairs at j)."""
        result = 1
        for j, ps in self.pairs:
            result *= j ** len(ps)
        return result


def _involutions(m: int, allow_fixed: bool) -> Iterator[tuple[tuple[tuple[int, int], ...], tuple[int, ...]]]:
    """Partial pairings of {1..m}: (pairs, fixed); fixed empty unless allowed."""

    def rec(rest: tuple[int, ...]) -> Iterator[tuple[tuple[tuple[int, int], ...], tuple[int, ...]]]:
        if not rest:
            yield ((), ())
            return
        first, others = rest[0], rest[1:]
        if allow_fixed:
            for pairs, fixed in rec(others):
                yield pairs, (first,) + fixed
        for idx in range(len(others)):
            partner = others[idx]
            remaining = others[:idx] + others[idx + 1 :]
            for pairs, fixed in rec(remaining):
                yield ((first, partner),) + pairs, fixed

    yield from rec(tuple(range(1, m + 1)))


def enumerate_pairings(b: Partition) -> Iterator[Pairing]:
    """All pairings of b, each exactly once, in deterministic order.

    Enumerates involutions independently per part size (pairings preserve the
    part size) and takes the cartesian product across the support.
    """
    per_size = []
    for j, m in b.items:
        options = list(_involutions(m, allow_fixed=j % 2 == 0))
        per_size.append((j, options))
    for combo in itertools.product(*(opts for _, opts in per_size)):
        pairs = tuple((j, combo[i][0]) for i, (j, _) in enumerate(per_size))
        fixed = tuple((j, combo[i][1]) for i, (j, _) in enumerate(per_size))
        yield Pairing(b, pairs, fixed)


def pairing_weight_sum(b: Partition) -> int:
    """Sum of pairing weights prod_j j^(pairs at j); equals gaussian_moment(b)."""
    return sum(p.weight() for p in enumerate_pairings(b))
