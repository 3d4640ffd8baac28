"""F_q[x] arithmetic and the character sums behind the finite-field checks.

Everything runs over a prime field F_q (q an odd prime).  Polynomials are
coefficient tuples, low degree first, trailing zeros stripped; the zero
polynomial is ().  Hot loops operate on numpy matrices of monic-polynomial
coefficient rows and per-prime quadratic-character lookup tables, so that a
full sweep over all monic h of degree 2n+1 stays vectorized; reductions use
exact integer accumulators and are therefore independent of scheduling.

The main consumers:

* ``l_polynomial`` -- the numerator polynomial of the zeta function of
  y^2 = h(x), with exact integer coefficients c_i = sum_{deg F = i} (h/F).
* ``frobenius_power_sums`` -- power sums of its inverse roots via Newton's
  identities, to compare exactly against -sum_{deg Q = j} Lambda(Q) (h/Q).
* ``empirical_moment`` -- averages of unitarized Frobenius trace products
  over the hyperelliptic family, converging to Haar moments as q grows.
* ``char_sum_distinct_primes`` / ``square_contribution`` -- the exact
  distinct-prime and square-product tuple sums.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterator, Literal, Sequence

import numpy as np

from .errors import BudgetExceeded, NotSquarefree, ParseError
from .partitions import Partition

Poly = tuple[int, ...]

DEFAULT_BUDGET = 10**8

Mode = Literal["all_prime_powers", "prime_or_prime2"]


def _is_prime_int(m: int) -> bool:
    if m < 2:
        return False
    p = 2
    while p * p <= m:
        if m % p == 0:
            return False
        p += 1
    return True


class PrimeField:
    """F_q for an odd prime q, with cached prime tables and character tables."""

    def __init__(self, q: int):
        if q < 3 or q % 2 == 0 or not _is_prime_int(q):
            raise ValueError(f"q must be an odd prime, got {q}")
        self.q = q
        squares = {(v * v) % q for v in range(1, q)}
        self._chi = np.full(q, -1, dtype=np.int8)
        for v in squares:
            self._chi[v] = 1
        self._chi[0] = 0
        self._primes: dict[int, list[Poly]] = {}
        self._char_tables: dict[Poly, np.ndarray] = {}
        self._factorizations: dict[int, list[tuple[Poly, tuple[tuple[Poly, int], ...]]]] = {}

    def chi(self, v: int) -> int:
        """Quadratic character of F_q (0 at 0)."""
        return int(self._chi[v % self.q])

    def __repr__(self) -> str:
        return f"PrimeField({self.q})"


# ---------------------------------------------------------------------------
# polynomial arithmetic on coefficient tuples


def poly_trim(c: Sequence[int]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(f: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def poly_is_monic(f: Poly) -> bool:
    return bool(f) and f[-1] == 1


def poly_add(field: PrimeField, f: Poly, g: Poly) -> Poly:
    q = field.q
    n = max(len(f), len(g))
    return poly_trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % q for i in range(n)])


def poly_sub(field: PrimeField, f: Poly, g: Poly) -> Poly:
    q = field.q
    n = max(len(f), len(g))
    return poly_trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % q for i in range(n)])


def poly_mul(field: PrimeField, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    q = field.q
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for k, gk in enumerate(g):
                out[i + k] = (out[i + k] + fi * gk) % q
    return poly_trim(out)


def poly_divmod(field: PrimeField, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = field.q
    rem = list(f)
    dg = poly_degree(g)
    inv_lead = pow(g[-1], q - 2, q)
    quot = [0] * max(len(f) - dg, 0)
    for i in range(len(rem) - 1, dg - 1, -1):
        coef = rem[i] % q
        if coef:
            factor = (coef * inv_lead) % q
            quot[i - dg] = factor
            for k, gk in enumerate(g):
                rem[i - dg + k] = (rem[i - dg + k] - factor * gk) % q
    return poly_trim(quot), poly_trim(rem[:dg])


def poly_mod(field: PrimeField, f: Poly, g: Poly) -> Poly:
    return poly_divmod(field, f, g)[1]


def poly_gcd(field: PrimeField, f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, poly_mod(field, f, g)
    if f:
        inv_lead = pow(f[-1], field.q - 2, field.q)
        f = poly_trim([(c * inv_lead) % field.q for c in f])
    return f


def poly_deriv(field: PrimeField, f: Poly) -> Poly:
    return poly_trim([(i * f[i]) % field.q for i in range(1, len(f))])


def poly_eval(field: PrimeField, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % field.q
    return acc


def poly_pow_mod(field: PrimeField, base: Poly, exponent: int, modulus: Poly) -> Poly:
    result: Poly = (1,)
    base = poly_mod(field, base, modulus)
    while exponent:
        if exponent & 1:
            result = poly_mod(field, poly_mul(field, result, base), modulus)
        base = poly_mod(field, poly_mul(field, base, base), modulus)
        exponent >>= 1
    return result


def is_squarefree(field: PrimeField, f: Poly) -> bool:
    return poly_degree(poly_gcd(field, f, poly_deriv(field, f))) == 0


def is_irreducible(field: PrimeField, f: Poly) -> bool:
    """Frobenius-based test: x^(q^d) = x mod f and no proper-subfield fixes."""
    d = poly_degree(f)
    if d < 1:
        return False
    q = field.q
    x: Poly = (0, 1)
    frob = x
    powers = {}
    for step in range(1, d + 1):
        frob = poly_pow_mod(field, frob, q, f)
        powers[step] = frob
    if poly_sub(field, powers[d], x):
        return False
    for p in range(2, d + 1):
        if d % p == 0 and _is_prime_int(p):
            g = poly_gcd(field, poly_sub(field, powers[d // p], x), f)
            if poly_degree(g) > 0:
                return False
    return True


def monic_polys(field: PrimeField, degree: int) -> Iterator[Poly]:
    """All monic polynomials of the given degree, lexicographic in low coeffs."""
    for low in itertools.product(range(field.q), repeat=degree):
        yield low + (1,)


def primes_of_degree(field: PrimeField, degree: int, budget: int = DEFAULT_BUDGET) -> list[Poly]:
    """Monic irreducibles of the given degree (cached)."""
    if degree not in field._primes:
        if field.q**degree > budget:
            raise BudgetExceeded(f"q^{degree} = {field.q**degree} exceeds budget {budget}")
        if degree == 1:
            found = [(c, 1) for c in range(field.q)]
        else:
            found = [f for f in monic_polys(field, degree) if is_irreducible(field, f)]
        field._primes[degree] = found
    return field._primes[degree]


def factorize(field: PrimeField, f: Poly) -> tuple[tuple[Poly, int], ...]:
    """Factorization of a monic polynomial into (prime, exponent) pairs."""
    if not poly_is_monic(f):
        raise ValueError("factorize expects a monic polynomial")
    factors: dict[Poly, int] = {}
    rest = f
    while poly_degree(rest) > 0:
        deg = poly_degree(rest)
        hit = None
        for d in range(1, deg // 2 + 1):
            for p in primes_of_degree(field, d):
                quot, rem = poly_divmod(field, rest, p)
                if not rem:
                    hit = (p, quot)
                    break
            if hit:
                break
        if hit is None:
            factors[rest] = factors.get(rest, 0) + 1
            break
        p, rest = hit
        factors[p] = factors.get(p, 0) + 1
    return tuple(sorted(factors.items()))


def von_mangoldt(field: PrimeField, f: Poly) -> int:
    """deg P if f = P^e for a prime P, else 0."""
    if poly_degree(f) < 1:
        return 0
    factors = factorize(field, f)
    if len(factors) == 1:
        return poly_degree(factors[0][0])
    return 0


def legendre_symbol(field: PrimeField, h: Poly, p: Poly) -> int:
    """Quadratic-residue symbol of h modulo a prime p, by Euler's criterion."""
    d = poly_degree(p)
    r = poly_mod(field, h, p)
    if not r:
        return 0
    if d == 1:
        return field.chi(r[0])
    t = poly_pow_mod(field, r, (field.q**d - 1) // 2, p)
    return 1 if t == (1,) else -1


def jacobi_symbol(field: PrimeField, h: Poly, f: Poly) -> int:
    """Jacobi symbol (h/f): product of prime symbols over the factorization."""
    if not poly_is_monic(f):
        raise ValueError("jacobi_symbol expects a monic denominator")
    result = 1
    for p, e in factorize(field, f):
        s = legendre_symbol(field, h, p)
        if s == 0:
            return 0
        if e % 2 == 1:
            result *= s
    return result


def squarefree_monics(field: PrimeField, degree: int, budget: int = DEFAULT_BUDGET) -> list[Poly]:
    """All squarefree monic polynomials of the given degree."""
    if field.q**degree > budget:
        raise BudgetExceeded(f"q^{degree} = {field.q**degree} exceeds budget {budget}")
    return [f for f in monic_polys(field, degree) if is_squarefree(field, f)]


# ---------------------------------------------------------------------------
# vectorized character-sum layer


def monic_coeff_matrix(field: PrimeField, degree: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """(q^degree, degree+1) int64 rows [c_0 .. c_{degree-1}, 1]."""
    q = field.q
    count = q**degree
    if count > budget:
        raise BudgetExceeded(f"q^{degree} = {count} exceeds budget {budget}")
    rows = np.empty((count, degree + 1), dtype=np.int64)
    idx = np.arange(count)
    for i in range(degree):
        rows[:, i] = (idx // q**i) % q
    rows[:, degree] = 1
    return rows


def rows_to_polys(rows: np.ndarray) -> list[Poly]:
    return [poly_trim(tuple(int(v) for v in row)) for row in rows]


def squarefree_mask(field: PrimeField, rows: np.ndarray) -> np.ndarray:
    return np.array([is_squarefree(field, poly_trim(tuple(int(v) for v in r))) for r in rows])


def char_table(field: PrimeField, p: Poly) -> np.ndarray:
    """Quadratic-character table of F_q[x]/(p) indexed by base-q residue code.

    Built by squaring every residue at once (marking the square classes),
    which avoids per-pair Euler exponentiation in the hot loops.
    """
    if p in field._char_tables:
        return field._char_tables[p]
    q = field.q
    d = poly_degree(p)
    if d == 1:
        table = field._chi.copy()
    else:
        count = q**d
        digits = np.empty((count, d), dtype=np.int64)
        idx = np.arange(count)
        for i in range(d):
            digits[:, i] = (idx // q**i) % q
        conv = np.zeros((count, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            for k in range(d):
                conv[:, i + k] += digits[:, i] * digits[:, k]
        conv %= q
        res = conv[:, :d].copy()
        xpow: Poly = poly_mod(field, (0,) * d + (1,), p)
        for t in range(d, 2 * d - 1):
            vec = np.array([xpow[i] if i < len(xpow) else 0 for i in range(d)], dtype=np.int64)
            res = (res + conv[:, t, None] * vec[None, :]) % q
            xpow = poly_mod(field, poly_mul(field, xpow, (0, 1)), p)
        codes = res @ (q ** np.arange(d, dtype=np.int64))
        table = np.full(count, -1, dtype=np.int8)
        table[codes] = 1
        table[0] = 0
    field._char_tables[p] = table
    return table


def _reduction_matrix(field: PrimeField, p: Poly, deg_in: int) -> np.ndarray:
    """Rows x^t mod p for t = 0..deg_in, as a (deg_in+1, deg p) matrix."""
    d = poly_degree(p)
    mat = np.zeros((deg_in + 1, d), dtype=np.int64)
    cur: Poly = (1,)
    for t in range(deg_in + 1):
        for i, c in enumerate(cur):
            mat[t, i] = c
        cur = poly_mod(field, poly_mul(field, cur, (0, 1)), p)
    return mat


def symbols_batch(field: PrimeField, rows: np.ndarray, p: Poly) -> np.ndarray:
    """(h/p) for every coefficient row h, via residue codes and the char table."""
    q = field.q
    d = poly_degree(p)
    red = _reduction_matrix(field, p, rows.shape[1] - 1)
    residues = (rows @ red) % q
    codes = residues @ (q ** np.arange(d, dtype=np.int64))
    return char_table(field, p)[codes]


def prime_power_terms(field: PrimeField, j: int, mode: Mode) -> list[tuple[Poly, int, int]]:
    """(P, e, Lambda) for every prime power Q = P^e of degree j kept by `mode`."""
    terms = []
    for e in range(1, j + 1):
        if j % e:
            continue
        if mode == "prime_or_prime2" and e > 2:
            continue
        d = j // e
        for p in primes_of_degree(field, d):
            terms.append((p, e, d))
    return terms


def weighted_char_sums(field: PrimeField, rows: np.ndarray, j: int, mode: Mode) -> np.ndarray:
    """sum_{deg Q = j} Lambda(Q) (h/Q) for every row h, as exact int64."""
    acc = np.zeros(rows.shape[0], dtype=np.int64)
    for p, e, lam in prime_power_terms(field, j, mode):
        sym = symbols_batch(field, rows, p).astype(np.int64)
        acc += lam * (sym if e % 2 else sym * sym)
    return acc


# ---------------------------------------------------------------------------
# L-polynomials


@dataclass(frozen=True)
class LPolynomial:
    """Integer coefficients c_0..c_{2n} of the zeta numerator of y^2 = h(x)."""

    q: int
    n: int
    c: tuple[int, ...]

    def functional_equation_ok(self) -> bool:
        """c_{2n-i} = q^{n-i} c_i for all i (may need exact rational checks)."""
        for i in range(2 * self.n + 1):
            if self.c[2 * self.n - i] * self.q**i != self.q**self.n * self.c[i]:
                return False
        return True

    def inverse_roots(self) -> np.ndarray:
        """Inverse roots alpha_i (so L(z) = prod (1 - alpha_i z)), numerically."""
        if self.n == 0:
            return np.array([], dtype=complex)
        return 1.0 / np.roots(np.array(self.c[::-1], dtype=float))


def _factorization_list(field: PrimeField, degree: int):
    if degree not in field._factorizations:
        entries = []
        if degree == 0:
            entries.append(((1,), ()))
        else:
            for f in monic_polys(field, degree):
                entries.append((f, factorize(field, f)))
        field._factorizations[degree] = entries
    return field._factorizations[degree]


def l_polynomials_batch(field: PrimeField, n: int, rows: np.ndarray) -> np.ndarray:
    """c_0..c_{2n} for every (squarefree monic, degree 2n+1) coefficient row."""
    count = rows.shape[0]
    coeffs = np.zeros((count, 2 * n + 1), dtype=np.int64)
    coeffs[:, 0] = 1
    for i in range(1, 2 * n + 1):
        acc = np.zeros(count, dtype=np.int64)
        for _, factors in _factorization_list(field, i):
            sym = np.ones(count, dtype=np.int64)
            for p, e in factors:
                v = symbols_batch(field, rows, p).astype(np.int64)
                sym *= v if e % 2 else v * v
            acc += sym
        coeffs[:, i] = acc
    return coeffs


def l_polynomial(field: PrimeField, h: Poly) -> LPolynomial:
    """L-polynomial of the hyperelliptic curve y^2 = h(x), exact coefficients."""
    degree = poly_degree(h)
    if degree < 1 or degree % 2 == 0 or not poly_is_monic(h):
        raise ValueError("h must be monic of odd degree >= 1")
    if not is_squarefree(field, h):
        raise NotSquarefree(f"h = {h} is not squarefree")
    n = (degree - 1) // 2
    row = np.array([[h[i] if i < len(h) else 0 for i in range(degree + 1)]], dtype=np.int64)
    coeffs = l_polynomials_batch(field, n, row)[0]
    return LPolynomial(field.q, n, tuple(int(v) for v in coeffs))


def frobenius_power_sums(lpoly: LPolynomial, j_max: int) -> list[int]:
    """Power sums s_j = sum_i alpha_i^j, exactly, via Newton's identities."""
    elem = [0] * (j_max + 1)
    for i in range(min(j_max, 2 * lpoly.n) + 1):
        elem[i] = (-1) ** i * lpoly.c[i]
    sums = [0] * (j_max + 1)
    for k in range(1, j_max + 1):
        acc = (-1) ** (k - 1) * k * elem[k] if k <= 2 * lpoly.n else 0
        for i in range(1, k):
            if i <= 2 * lpoly.n:
                acc += (-1) ** (i - 1) * elem[i] * sums[k - i]
        sums[k] = acc
    return sums[1:]


# ---------------------------------------------------------------------------
# family averages and tuple sums


def hyperelliptic_rows(field: PrimeField, n: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Coefficient rows of the family {h monic squarefree, deg h = 2n+1}."""
    rows = monic_coeff_matrix(field, 2 * n + 1, budget)
    return rows[squarefree_mask(field, rows)]


def empirical_moment(
    field: PrimeField,
    n: int,
    a: Partition,
    mode: Mode = "all_prime_powers",
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Family average of prod_j tr(Theta_h^j)^{a_j}; -> moment_usp(n, a) as q grows.

    Per curve, q^{j/2} tr(Theta_h^j) = -sum_{deg Q = j} Lambda(Q) (h/Q); the
    product over j is accumulated as an exact integer before the single final
    division, so the average is independent of chunking.
    """
    rows = hyperelliptic_rows(field, n, budget)
    count = rows.shape[0]
    sums = {j: weighted_char_sums(field, rows, j, mode) for j in a.support}
    # per-curve products stay exact: int64 while provably within range,
    # python ints otherwise
    bound = prod(max(1, int(np.abs(sums[j]).max())) ** m for j, m in a.items)
    if bound < 2**62:
        product = np.ones(count, dtype=np.int64)
        for j, m in a.items:
            product = product * sums[j] ** m
        total = sum(int(v) for v in product)
    else:
        total = 0
        lists = {j: t.tolist() for j, t in sums.items()}
        for i in range(count):
            term = 1
            for j, m in a.items:
                term *= lists[j][i] ** m
            total += term
    sign = (-1) ** a.length
    return sign * total / (count * field.q ** (a.size / 2))


def _elementary_from_power_sums(power: list[int], r: int) -> int:
    """e_r from p_1..p_r by Newton's identities (exact integers)."""
    elem = [1] + [0] * r
    for k in range(1, r + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * power[i - 1]
        elem[k] = acc // k
    return elem[r]


def _distinct_prime_sums(field: PrimeField, n: int, a: Partition, weighted: bool, budget: int) -> int:
    rows = monic_coeff_matrix(field, 2 * n + 1, budget)
    per_degree = []
    for j, m in a.items:
        primes = primes_of_degree(field, j, budget)
        sym = np.stack([symbols_batch(field, rows, p) for p in primes], axis=1).astype(np.int64)
        p_odd = sym.sum(axis=1)
        p_even = (sym != 0).sum(axis=1)
        per_degree.append((j, m, p_odd, p_even))
    total = 0
    fact = [1]
    for i in range(1, 9):
        fact.append(fact[-1] * i)
    for row_idx in range(rows.shape[0]):
        term = 1
        for j, m, p_odd, p_even in per_degree:
            scale = j if weighted else 1
            power = [
                (scale**k) * (int(p_odd[row_idx]) if k % 2 else int(p_even[row_idx]))
                for k in range(1, m + 1)
            ]
            term *= fact[m] * _elementary_from_power_sums(power, m)
            if term == 0:
                break
        total += term
    return total


def char_sum_distinct_primes(field: PrimeField, n: int, a: Partition, budget: int = DEFAULT_BUDGET) -> int:
    """Exact sum over monic h (deg 2n+1) and tuples of distinct primes P_ji
    (deg P_ji = j, a_j picks per degree) of prod (h/P_ji)."""
    return _distinct_prime_sums(field, n, a, weighted=False, budget=budget)


def char_sum_distinct_primes_weighted(field: PrimeField, n: int, a: Partition, budget: int = DEFAULT_BUDGET) -> int:
    """Same sum with each factor weighted by Lambda(P_ji) = j."""
    return _distinct_prime_sums(field, n, a, weighted=True, budget=budget)


def square_contribution(field: PrimeField, b: Partition, budget: int = DEFAULT_BUDGET) -> float:
    """q^(-size(b)/2) * sum over prime-or-prime^2 tuples (Q_ji, deg Q_ji = j)
    whose product is a perfect square, of prod Lambda(Q_ji).

    Tracked by a parity bitmask over the underlying primes (a product is a
    square iff every prime's total exponent is even); exact integer weights.
    """
    prime_ids: dict[Poly, int] = {}

    def pid(p: Poly) -> int:
        if p not in prime_ids:
            prime_ids[p] = len(prime_ids)
        return prime_ids[p]

    slot_candidates = []
    for j, m in b.items:
        cands = []
        for p, e, lam in prime_power_terms(field, j, "prime_or_prime2"):
            bit = (1 << pid(p)) if e % 2 else 0
            cands.append((bit, lam))
        if len(cands) ** m > budget:
            raise BudgetExceeded(f"{len(cands)}^{m} tuples at degree {j} exceed budget")
        for _ in range(m):
            slot_candidates.append(cands)

    states: dict[int, int] = {0: 1}
    for cands in slot_candidates:
        nxt: dict[int, int] = {}
        for state, weight in states.items():
            for bit, lam in cands:
                key = state ^ bit
                nxt[key] = nxt.get(key, 0) + weight * lam
        states = nxt
    total = states.get(0, 0)
    return total / field.q ** (b.size / 2)


# ---------------------------------------------------------------------------
# text format


def parse_poly_spec(text: str) -> tuple[PrimeField, Poly]:
    """Parse 'q=3; h=0,-1,0,1' (coefficients low to high) into (field, poly)."""
    try:
        q_part, h_part = (chunk.strip() for chunk in text.split(";"))
        q = int(q_part.split("=")[1])
        coeffs = [int(v) for v in h_part.split("=")[1].split(",")]
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad polynomial spec {text!r}") from exc
    field = PrimeField(q)
    return field, poly_trim([c % q for c in coeffs])


def format_poly(field: PrimeField, f: Poly) -> str:
    return ",".join(str(c) for c in f) if f else "0"
