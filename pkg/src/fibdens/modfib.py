"""Fibonacci and Lucas numbers modulo arbitrary m, periods mod p, Burr's test."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InternalInconsistencyError, InvalidArgumentError
from .primes import divisors, require_prime


@dataclass(frozen=True)
class FibPair:
    """(F(n) mod m, F(n+1) mod m)."""

    n: int
    m: int
    f_n: int
    f_n1: int

    def advance(self) -> FibPair:
        return FibPair(self.n + 1, self.m, self.f_n1, (self.f_n + self.f_n1) % self.m)


@dataclass(frozen=True)
class PeriodInfo:
    p: int
    epsilon: int
    alpha: int
    pi: int
    ratio_class: int


def _check_modulus(m: int) -> None:
    if not isinstance(m, int) or m < 2:
        raise InvalidArgumentError(f"modulus must be an integer >= 2, got {m!r}")


def fib_pair_mod(n: int, m: int) -> FibPair:
    """F(n), F(n+1) mod m by fast doubling: O(log n) multiplications."""
    _check_modulus(m)
    if n < 0:
        raise InvalidArgumentError(f"index must be non-negative, got {n}")
    a, b = 0, 1
    for bit in bin(n)[2:]:
        # F(2k) = F(k)(2F(k+1) - F(k)),  F(2k+1) = F(k)^2 + F(k+1)^2
        a, b = a * (2 * b - a) % m, (a * a + b * b) % m
        if bit == "1":
            a, b = b, (a + b) % m
    return FibPair(n, m, a, b)


def fib_mod(n: int, m: int) -> int:
    return fib_pair_mod(n, m).f_n


def lucas_mod(n: int, m: int) -> int:
    """L(n) mod m, using L(n) = 2F(n+1) - F(n)."""
    pair = fib_pair_mod(n, m)
    return (2 * pair.f_n1 - pair.f_n) % m


def epsilon(p: int) -> int:
    """The Legendre symbol (p/5)."""
    require_prime(p)
    r = p % 5
    if r == 0:
        return 0
    return 1 if r in (1, 4) else -1


def _alpha_linear(p: int) -> int:
    a, b, i = 1, 1, 1
    while a != 0:
        a, b = b, (a + b) % p
        i += 1
    return i


@lru_cache(maxsize=None)
def _period_info(p: int, method: str) -> PeriodInfo:
    eps = epsilon(p)
    if p == 2:
        return PeriodInfo(2, eps, 3, 3, 1)
    if p == 5:
        alpha = 5
    elif method == "linear":
        alpha = _alpha_linear(p)
    else:
        alpha = next(d for d in divisors(p - eps) if fib_mod(d, p) == 0)
    if alpha % 2:
        ratio = 4
    elif alpha % 4 == 2:
        ratio = 1
    else:
        ratio = 2
    pi = ratio * alpha
    check = fib_pair_mod(pi, p)
    if (check.f_n, check.f_n1) != (0, 1):
        raise InternalInconsistencyError(
            f"derived period {pi} for p = {p} fails F(pi) = 0, F(pi+1) = 1 mod p"
        )
    return PeriodInfo(p, eps, alpha, pi, ratio)


def period_info(p: int, method: str = "divisors") -> PeriodInfo:
    """Restricted period alpha(p) and period pi(p).

    alpha(p) is the least divisor d of p - epsilon with F(d) = 0 mod p
    (``method="linear"`` scans indices one by one instead). pi(p) then
    follows from the parity of alpha and is re-verified before returning.
    """
    if method not in ("divisors", "linear"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    require_prime(p)
    return _period_info(p, method)


def attains_all_residues(m: int) -> bool:
    """Burr: every residue mod m is a Fibonacci number iff m = 5^k m' with
    m' in {1, 2, 4, 6, 7, 14} or a power of 3."""
    _check_modulus(m)
    while m % 5 == 0:
        m //= 5
    if m in (1, 2, 4, 6, 7, 14):
        return True
    while m % 3 == 0:
        m //= 3
    return m == 1


def residues_attained_brute(m: int) -> set[int]:
    """All F(n) mod m, by walking one full period of the pair sequence."""
    _check_modulus(m)
    seen = {0}
    a, b = 1, 1
    while (a, b) != (0, 1):
        seen.add(a)
        a, b = b, (a + b) % m
    return seen
