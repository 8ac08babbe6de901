"""Primality, factorization and residue helpers at 64-bit scale."""

from __future__ import annotations

import math
import random
from functools import lru_cache

from .errors import InvalidArgumentError

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MAX_PRIME = 2**64


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2^64 (the first 12 prime bases suffice)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    if n >= MAX_PRIME:
        raise InvalidArgumentError(f"primality test limited to 64-bit inputs, got {n}")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidArgumentError(f"{p!r} is not a prime")
    return p


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        y = x = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {prime: exponent}; trial division then Pollard rho."""
    if n < 1:
        raise InvalidArgumentError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q, step = 7, 4
    while q * q <= n and q < 10_000:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += step
        step = 6 - step
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    divs = [1]
    for q, k in factorize(n).items():
        divs = [d * q**j for d in divs for j in range(k + 1)]
    return tuple(sorted(divs))


def primes_between(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi, ascending."""
    lo = max(lo, 2)
    if hi < lo:
        return []
    if hi <= 20_000_000:
        sieve = bytearray([1]) * (hi + 1)
        sieve[0:2] = b"\x00\x00"
        for q in range(2, math.isqrt(hi) + 1):
            if sieve[q]:
                sieve[q * q :: q] = bytes(len(range(q * q, hi + 1, q)))
        return [n for n in range(lo, hi + 1) if sieve[n]]
    return [n for n in range(lo, hi + 1) if is_prime(n)]


def first_primes(count: int) -> list[int]:
    if count <= 0:
        return []
    # p_n < n (ln n + ln ln n) for n >= 6
    bound = 15 if count < 6 else int(count * (math.log(count) + math.log(math.log(count)))) + 1
    return primes_between(2, bound)[:count]


def is_qr(a: int, p: int) -> bool:
    """Euler's criterion: a is a nonzero square mod the odd prime p."""
    a %= p
    return a != 0 and pow(a, (p - 1) // 2, p) == 1


def sqrt_mod_prime(a: int, p: int) -> int:
    """Some square root of a mod the odd prime p (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if not is_qr(a, p):
        raise InvalidArgumentError(f"{a} is not a square mod {p}")
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        return pow(a, (p + 1) // 4, p)
    z = 2
    while is_qr(z, p):
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def valuation_int(n: int, p: int) -> float | int:
    """nu_p(n) for an integer; math.inf for 0."""
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
