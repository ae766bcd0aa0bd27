"""Exact integer arithmetic substrate.

p-adic valuations, prime-to-m parts, square parts, Jacobi symbols, certified
factorization with an explicit effort bound, and k-powerfree decompositions.
Everything is pure, deterministic and exact; zero is rejected wherever the
quantity is undefined.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt, prod

from .errors import DomainError, NotPowerfreeError, UnfactoredCofactorError

Sign = int  # always +1 or -1

# Iteration budget for the rho stage.  Ample for any |n| <= 10**12 (finds the
# <= 10**6 prime factors such n must have in well under a second).
DEFAULT_FACTOR_EFFORT = 2_000_000

_TRIAL_BOUND = 1000

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _sieve(bound: int) -> list[int]:
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, isqrt(bound) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return [i for i in range(bound + 1) if flags[i]]


_SMALL_PRIMES = _sieve(_TRIAL_BOUND)
_SMALL_PRIME_SET = set(_SMALL_PRIMES)


def sgn(n: int) -> Sign:
    if n == 0:
        raise DomainError("sign of 0 is undefined")
    return -1 if n < 0 else 1


@lru_cache(maxsize=1 << 16)
def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin with a fixed witness set,
    unconditionally correct below 3.3e24 which covers every integer this
    package can produce under its default effort bound)."""
    if n < 2:
        return False
    if n <= _TRIAL_BOUND:
        return n in _SMALL_PRIME_SET
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def valuation(n: int, p: int) -> tuple[int, int]:
    """Return (v, unit) with n = p**v * unit and p not dividing unit.

    The unit keeps n's sign.  p must be prime.

    >>> valuation(48, 2)
    (4, 3)
    >>> valuation(-91, 7)
    (1, -13)
    """
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return _valuation_unchecked(n, p)


def _valuation_unchecked(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def prime_to_part(n: int, m: int) -> int:
    """|n| with every prime dividing m removed to full multiplicity.

    The result is positive and coprime to m.

    >>> prime_to_part(720, 6)
    5
    """
    if n == 0 or m == 0:
        raise DomainError("prime-to-part of 0 is undefined")
    n, m = abs(n), abs(m)
    g = gcd(n, m)
    while g > 1:
        while n % g == 0:
            n //= g
        g = gcd(n, g)
    return n


def square_part(n: int, effort: int = DEFAULT_FACTOR_EFFORT) -> int:
    """Product, one copy each, of the primes dividing n to even positive
    multiplicity (exponent-1 convention).

    >>> square_part(12)     # 12 = 2**2 * 3
    2
    """
    f = factor(n, effort)
    return prod(p for p, e in f.factors if e % 2 == 0)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1.

    Zero exactly when gcd(a, n) > 1; (a/1) = +1 for every a (empty product).
    """
    if n <= 0 or n % 2 == 0:
        raise DomainError("Jacobi symbol needs an odd positive denominator")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class Factored:
    """A certified prime factorization: sign * prod(p**e), primes strictly
    increasing, every prime vouched for by the primality test."""

    sign: Sign
    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        return self.sign * prod(p ** e for p, e in self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def __str__(self) -> str:
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors) or "1"
        return ("-" if self.sign < 0 else "") + body


def _brent_rho(n: int, budget: list[int]) -> int:
    """Find a nontrivial factor of composite odd n, spending from budget[0].

    Raises UnfactoredCofactorError when the budget runs out.
    """
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                steps = min(m, r - k)
                if budget[0] < steps:
                    raise UnfactoredCofactorError(n)
                budget[0] -= steps
                for _ in range(steps):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1  # cycle degenerated; retry with the next polynomial


def _split(n: int, acc: dict[int, int], budget: list[int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        acc[n] = acc.get(n, 0) + 1
        return
    d = _brent_rho(n, budget)
    _split(d, acc, budget)
    _split(n // d, acc, budget)


def factor(n: int, effort: int = DEFAULT_FACTOR_EFFORT) -> Factored:
    """Certified prime factorization of n != 0.

    Trial division by small primes, then Brent's rho for larger cofactors,
    with deterministic primality certification of every reported prime.
    Raises UnfactoredCofactorError instead of ever returning a wrong answer
    when the effort budget is exhausted.

    >>> str(factor(-6))
    '-2 * 3'
    """
    if n == 0:
        raise DomainError("cannot factor 0")
    sign = -1 if n < 0 else 1
    n = abs(n)
    acc: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            acc[p] = acc.get(p, 0) + 1
    if n > 1:
        if n <= _TRIAL_BOUND * _TRIAL_BOUND or is_prime(n):
            acc[n] = acc.get(n, 0) + 1
        else:
            _split(n, acc, [effort])
    factors = tuple(sorted(acc.items()))
    for p, _ in factors:
        if not is_prime(p):  # pragma: no cover - construction guarantees this
            raise UnfactoredCofactorError(p, f"uncertified factor {p}")
    return Factored(sign, factors)


@dataclass(frozen=True)
class PowerfreeDecomposition:
    """t = sign * 2**two_exp * 3**three_exp * prod(parts[i-1]**i), with the
    parts squarefree, pairwise coprime and coprime to 6.

    parts has length k-1; parts[i-1] collects the primes >= 5 dividing t with
    exponent exactly i.
    """

    k: int
    sign: Sign
    two_exp: int
    three_exp: int
    parts: tuple[int, ...]

    @property
    def value(self) -> int:
        body = prod(t ** (i + 1) for i, t in enumerate(self.parts))
        return self.sign * 2 ** self.two_exp * 3 ** self.three_exp * body

    @property
    def odd_part(self) -> int:
        """Product of the prime-to-6 primes of odd exponent."""
        return prod(t for i, t in enumerate(self.parts) if i % 2 == 0)

    @property
    def even_part(self) -> int:
        """Product of the prime-to-6 primes of even exponent (the prime-to-6
        square part of t)."""
        return prod(t for i, t in enumerate(self.parts) if i % 2 == 1)

    @property
    def prime_to_six(self) -> int:
        """|t| with all twos and threes stripped."""
        return prod(t ** (i + 1) for i, t in enumerate(self.parts))


def powerfree_decompose(t: int, k: int, effort: int = DEFAULT_FACTOR_EFFORT) -> PowerfreeDecomposition:
    """Split a k-powerfree t (k in {2, 4, 6}) by prime exponent.

    Rejects t divisible by any p**k; callers must strip k-th powers first.
    """
    if k not in (2, 4, 6):
        raise DomainError(f"k must be 2, 4 or 6, got {k}")
    if t == 0:
        raise DomainError("0 is not k-powerfree")
    f = factor(t, effort)
    parts = [1] * (k - 1)
    two_exp = three_exp = 0
    for p, e in f.factors:
        if e >= k:
            raise NotPowerfreeError(f"{p}^{k} divides {t}")
        if p == 2:
            two_exp = e
        elif p == 3:
            three_exp = e
        else:
            parts[e - 1] *= p
    return PowerfreeDecomposition(k, f.sign, two_exp, three_exp, tuple(parts))


def kth_powerfree_part(fac: Factored, k: int) -> tuple[Sign, tuple[tuple[int, int], ...], bool]:
    """Reduce every exponent mod k (k even, so the sign survives).

    Returns (sign, reduced factors, whether anything was dropped).
    """
    reduced = []
    changed = False
    for p, e in fac.factors:
        r = e % k
        if r != e:
            changed = True
        if r:
            reduced.append((p, r))
    return fac.sign, tuple(reduced), changed


def merge_factors(a: Factored, b: Factored) -> Factored:
    """Factorization of a.value * b.value by merging sorted factor lists."""
    acc: dict[int, int] = dict(a.factors)
    for p, e in b.factors:
        acc[p] = acc.get(p, 0) + e
    return Factored(a.sign * b.sign, tuple(sorted(acc.items())))


def factored_range(bound: int) -> list[tuple[tuple[int, int], ...]]:
    """Factorizations of 1..bound via a smallest-prime-factor sieve.

    Index n holds the factor tuple of n (index 0 is a placeholder).  Meant for
    scan loops; one sieve pass amortizes the per-value cost to O(log n).
    """
    spf = list(range(bound + 1))
    for i in range(2, isqrt(bound) + 1):
        if spf[i] == i:
            for j in range(i * i, bound + 1, i):
                if spf[j] == j:
                    spf[j] = i
    out: list[tuple[tuple[int, int], ...]] = [()] * (bound + 1)
    for n in range(2, bound + 1):
        m = n
        fac = []
        while m > 1:
            p = spf[m]
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            fac.append((p, e))
        out[n] = tuple(fac)
    return out
