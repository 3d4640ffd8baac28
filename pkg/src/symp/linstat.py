"""Narrow-bandwidth linear statistics of USp(2n) eigenangles.

The statistic sum_k f(theta_k) e(nu theta_k) over all 2n eigenangles (f even,
real, given by a finite Fourier table) has moments expressible exactly through
trace moments:

    E[W^m] = sum_{j_1..j_m} fhat(j_1-nu) ... fhat(j_m-nu) E[prod tr(U^{j_i})]

with tr(U^0) = 2n and tr(U^-j) = tr(U^j) folded in.  When the Fourier table
is rational the expansion is evaluated in exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import OutOfRange, ParseError, PreconditionViolated
from .haar import EigenAngles, MCConfig, run_mc
from .moments import double_factorial, even_indicator, moment_usp
from .partitions import Partition


@dataclass(frozen=True)
class FourierTestFn:
    """Finitely supported even real Fourier table fhat(j) = fhat(-j).

    ``coefficients`` maps j >= 0 to fhat(j); evenness is implicit.  Values may
    be int/Fraction (exact paths) or float.
    """

    coefficients: tuple[tuple[int, object], ...]

    @classmethod
    def from_dict(cls, table: dict) -> "FourierTestFn":
        items = []
        for j in sorted(table):
            if j < 0:
                raise ValueError("supply only j >= 0; evenness fills in the rest")
            if table[j] != 0:
                items.append((int(j), table[j]))
        return cls(tuple(items))

    @classmethod
    def parse(cls, text: str) -> "FourierTestFn":
        """Parse 'j:value' pairs, e.g. '0:1 1:0.5' -> fhat(0)=1, fhat(+-1)=1/2."""
        table: dict[int, object] = {}
        for token in text.split():
            try:
                j_text, value_text = token.split(":")
                j = int(j_text)
                value = Fraction(value_text)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad Fourier term {token!r}") from exc
            if j in table:
                raise ParseError(f"repeated Fourier index in {token!r}")
            table[j] = value
        return cls.from_dict(table)

    def value(self, j: int) -> object:
        j = abs(j)
        for idx, v in self.coefficients:
            if idx == j:
                return v
        return 0

    @property
    def max_index(self) -> int:
        return max((j for j, _ in self.coefficients), default=0)

    def is_exact(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for _, v in self.coefficients)

    def norm_sq(self):
        """Parseval: integral of f^2 = sum over signed j of fhat(j)^2 (exact type)."""
        total = 0
        for j, v in self.coefficients:
            total += v * v if j == 0 else 2 * v * v
        return total

    def evaluate(self, theta: float) -> float:
        acc = 0.0
        for j, v in self.coefficients:
            term = float(v)
            acc += term if j == 0 else 2.0 * term * math.cos(2.0 * math.pi * j * theta)
        return acc


def l2_norm(f: FourierTestFn) -> float:
    return math.sqrt(float(f.norm_sq()))


def linear_statistic(f: FourierTestFn, nu: int, e: EigenAngles) -> float:
    """sum over all 2n eigenangles +-theta_k of f(theta) e(nu theta).

    Real because f is even and the angles come in conjugate pairs; computed
    in the folded form sum_k 2 f(theta_k) cos(2 pi nu theta_k).
    """
    return math.fsum(
        2.0 * f.evaluate(t) * math.cos(2.0 * math.pi * nu * t) for t in e.theta
    )


def _multinomial(m: int, counts: list[int]) -> int:
    result = 1
    remaining = m
    for c in counts:
        result *= comb(remaining, c)
        remaining -= c
    return result


def statistic_moment_exact(n: int, nu: int, m: int, f: FourierTestFn):
    """E[W^m] via the trace-moment expansion; Fraction/int when f is rational.

    Every multi-index within the Fourier support must induce a partition of
    size <= 4n+1; otherwise OutOfRange reports the offending multi-index.
    """
    signed_support = sorted(
        {j for j, _ in f.coefficients} | {-j for j, _ in f.coefficients}
    )
    trace_indices = [nu + s for s in signed_support]
    exact = f.is_exact()
    terms = []
    total = Fraction(0) if exact else 0.0
    for multiset in itertools.combinations_with_replacement(trace_indices, m):
        counts: dict[int, int] = {}
        for idx in multiset:
            counts[idx] = counts.get(idx, 0) + 1
        fprod = 1
        for idx, c in counts.items():
            fprod *= f.value(idx - nu) ** c
        if fprod == 0:
            continue
        zeros = counts.get(0, 0)
        parts: dict[int, int] = {}
        for idx, c in counts.items():
            if idx != 0:
                parts[abs(idx)] = parts.get(abs(idx), 0) + c
        a = Partition(parts)
        if a.size > 4 * n + 1:
            raise OutOfRange(
                f"multi-index {multiset} needs partition {a} of size {a.size} > 4n+1 = {4 * n + 1}"
            )
        coeff = _multinomial(m, list(counts.values()))
        term = coeff * fprod * (2 * n) ** zeros * moment_usp(n, a)
        if exact:
            total += term
        else:
            terms.append(float(term))
    if not exact:
        return math.fsum(terms)
    return int(total) if total.denominator == 1 else total


def statistic_moment_gaussian(n: int, nu: int, m: int, f: FourierTestFn) -> float:
    """Gaussian main term: eta_m (m-1)!! ||f||^m nu^(m/2)."""
    if even_indicator(m) == 0:
        return 0.0
    return double_factorial(m - 1) * float(f.norm_sq()) ** (m // 2) * float(nu) ** (m / 2)


def moment_main_term(n: int, nu: int, a: Partition) -> int:
    """Leading term of moment_usp(n, a) for partitions concentrated near nu:
    (prod_j eta_{a_j} (a_j - 1)!!) * nu^(len(a)/2).

    Requires size(a) <= 4n+1 and support within |j - nu| <= sqrt(n).
    """
    if a.size > 4 * n + 1:
        raise PreconditionViolated(f"size {a.size} > 4n+1 = {4 * n + 1}")
    root = math.sqrt(n)
    for j in a.support:
        if abs(j - nu) > root:
            raise PreconditionViolated(f"part {j} outside |j - {nu}| <= sqrt({n})")
    factor = 1
    for _, mult in a.items:
        if mult % 2 == 1:
            return 0
        factor *= double_factorial(mult - 1)
    return factor * nu ** (a.length // 2)


def _w_power_stat(theta: np.ndarray, nu: int, coeff_items: tuple, ms: tuple[int, ...]) -> np.ndarray:
    fvals = np.zeros_like(theta)
    for j, v in coeff_items:
        if j == 0:
            fvals += v
        else:
            fvals += 2.0 * v * np.cos(2.0 * math.pi * j * theta)
    w = (2.0 * fvals * np.cos(2.0 * math.pi * nu * theta)).sum(axis=1)
    return np.stack([w**m for m in ms], axis=1)


def statistic_moments_mc(
    n: int,
    nu: int,
    ms: tuple[int, ...],
    f: FourierTestFn,
    cfg: MCConfig,
    threads: int = 1,
) -> list[tuple[float, float]]:
    """Monte Carlo (estimate, stderr) of E[W^m] for each m, from one shared
    sample stream (identical to separate equal-seed runs, just cheaper)."""
    coeff_items = tuple((j, float(v)) for j, v in f.coefficients)
    return run_mc(n, cfg, _w_power_stat, (nu, coeff_items, tuple(ms)), len(ms), threads)


def statistic_moment_mc(
    n: int, nu: int, m: int, f: FourierTestFn, cfg: MCConfig, threads: int = 1
) -> tuple[float, float]:
    """Sample mean and standard error of W^m over Haar USp(2n)."""
    return statistic_moments_mc(n, nu, (m,), f, cfg, threads)[0]
