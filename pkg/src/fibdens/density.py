"""Lucas zeros, the Wall exponent, and the limiting density dens(p)."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExponentCapError, InternalInconsistencyError, InvalidArgumentError
from .modfib import epsilon, fib_mod, lucas_mod, period_info
from .padic import wall_valuation
from .primes import require_prime, valuation_int

DEFAULT_MAX_E = 8
FULL_SCAN_LIMIT = 10**5


@dataclass(frozen=True)
class LucasZeroSet:
    p: int
    zeros: tuple[int, ...]

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def __contains__(self, i):
        return i in self.zeros


@dataclass(frozen=True)
class WallExponentRecord:
    p: int
    e: int
    via_fib: int
    via_lucas: int | None
    via_padic: int | None
    wall_sun_sun: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "via_fib": self.via_fib,
            "via_lucas": self.via_lucas,
            "via_padic": self.via_padic,
            "wall_sun_sun": self.wall_sun_sun,
        }


@dataclass(frozen=True)
class DensityReport:
    p: int
    epsilon: int
    alpha: int
    pi: int
    e: int
    lucas_zeros: LucasZeroSet
    N: int
    Z: int
    dens: Fraction
    special_case: str | None = None
    wall: WallExponentRecord | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "pi": self.pi,
            "e": self.e,
            "lucas_zeros": list(self.lucas_zeros.zeros),
            "N": self.N,
            "Z": self.Z,
            "dens": {"num": str(self.dens.numerator), "den": str(self.dens.denominator)},
            "special_case": self.special_case,
            "cross_checks": self.wall.to_dict() if self.wall else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _lucas_zeros_unchecked(p: int) -> tuple[int, ...]:
    alpha = period_info(p).alpha
    if alpha % 2:
        return ()
    if alpha % 4 == 2:
        return (alpha // 2,)
    return (alpha // 2, 3 * alpha // 2)


def lucas_zeros(p: int) -> LucasZeroSet:
    """Indices i < pi(p) with L(i) = 0 mod p, read off from alpha(p) and verified."""
    require_prime(p)
    if p == 2:
        raise InvalidArgumentError("lucas_zeros is defined for odd p (p = 2 has the zero i = 0)")
    info = period_info(p)
    zeros = _lucas_zeros_unchecked(p)
    for i in zeros:
        if lucas_mod(i, p) != 0:
            raise InternalInconsistencyError(f"claimed Lucas zero {i} for p = {p} has L(i) != 0")
    if p < FULL_SCAN_LIMIT:
        a, b = 2, 1
        found = []
        for i in range(info.pi):
            if a == 0:
                found.append(i)
            a, b = b, (a + b) % p
        if tuple(found) != zeros:
            raise InternalInconsistencyError(
                f"Lucas zeros for p = {p}: scan found {found}, trichotomy gave {list(zeros)}"
            )
    else:
        rng = random.Random(p)
        for i in rng.sample(range(info.pi), min(256, info.pi)):
            if (lucas_mod(i, p) == 0) != (i in zeros):
                raise InternalInconsistencyError(f"sampled Lucas index {i} disagrees for p = {p}")
    if len(zeros) == 2 and fib_mod(zeros[0], p) == fib_mod(zeros[1], p):
        raise InternalInconsistencyError(f"F at the two Lucas zeros coincide mod {p}")
    return LucasZeroSet(p, zeros)


def fib_wall_exponent(p: int, max_e: int = DEFAULT_MAX_E) -> int:
    """nu_p(F(p - eps)), raising ExponentCapError above max_e."""
    value = fib_mod(p - epsilon(p), p ** (max_e + 1))
    v = valuation_int(value, p)
    if v > max_e:
        raise ExponentCapError(p, max_e)
    return v


def wall_exponent(p: int, max_e: int = DEFAULT_MAX_E, padic: bool = True) -> WallExponentRecord:
    """The Wall exponent e with its Lucas and p-adic cross-checks.

    ``padic=False`` skips the Teichmuller channel (it costs O(prec log p^2)
    multiplications; scans of large ranges disable it).
    """
    require_prime(p)
    if p == 5:
        raise InvalidArgumentError("the Wall exponent characterizations exclude p = 5")
    if max_e < 2:
        raise InvalidArgumentError("max_e must be at least 2")
    e = fib_wall_exponent(p, max_e)
    mod = p ** (max_e + 1)
    via_lucas = None
    if p not in (2, 3):
        vals = {valuation_int(lucas_mod(i, mod), p) for i in _lucas_zeros_unchecked(p)}
        if len(vals) > 1:
            raise InternalInconsistencyError(f"Lucas zeros disagree on the Wall exponent for p = {p}")
        if vals:
            via_lucas = vals.pop()
            if via_lucas > max_e:
                raise ExponentCapError(p, max_e)
    via_padic = None
    if padic and p != 2:
        via_padic = wall_valuation(p, max_e + 1)
        if via_padic > max_e:
            raise ExponentCapError(p, max_e)
    for name, value in (("Lucas", via_lucas), ("p-adic", via_padic)):
        if value is not None and value != e:
            raise InternalInconsistencyError(
                f"Wall exponent channels disagree for p = {p}: Fibonacci {e}, {name} {value}"
            )
    return WallExponentRecord(p, e, e, via_lucas, via_padic, e >= 2)


def count_N_Z(p: int, e: int, zeros: LucasZeroSet | tuple[int, ...]) -> tuple[int, int]:
    """N = #{F(i) mod p^e : i a Lucas non-zero}; Z = zeros whose residue avoids that set."""
    zero_set = set(zeros)
    m = p**e
    pi = period_info(p).pi
    nonzero_res = set()
    zero_res = []
    a, b = 0, 1
    for i in range(pi):
        if i in zero_set:
            zero_res.append(a)
        else:
            nonzero_res.add(a)
        a, b = b, a + b
        if b >= m:
            b -= m
    return len(nonzero_res), sum(1 for r in zero_res if r not in nonzero_res)


def density_formula(p: int, e: int, N: int, Z: int) -> Fraction:
    return Fraction(N, p**e) + Fraction(Z, 2 * p ** (2 * e - 1) * (p + 1))


def dens(p: int, max_e: int = DEFAULT_MAX_E, cross_check: bool = True) -> DensityReport:
    """Limiting density of {F(n) mod p^k} as k grows, as an exact fraction."""
    require_prime(p)
    info = period_info(p)
    if p == 2:
        # the Lucas zero for p = 2 is i = 0; the generic formula does not apply
        e = fib_wall_exponent(2, max_e)
        zeros = LucasZeroSet(2, (0,))
        N, Z = count_N_Z(2, e, zeros)
        wall = wall_exponent(2, max_e) if cross_check else None
        return DensityReport(
            2, info.epsilon, info.alpha, info.pi, e, zeros, N, Z, Fraction(21, 32), "p=2", wall
        )
    zeros = lucas_zeros(p)
    if p == 5:
        e = valuation_int(fib_mod(5, 5**3), 5)  # F(5) = 5 exactly; not a Wall exponent
        wall = None
    else:
        wall = wall_exponent(p, max_e, padic=cross_check) if cross_check else None
        e = wall.e if wall else fib_wall_exponent(p, max_e)
    N, Z = count_N_Z(p, e, zeros)
    value = density_formula(p, e, N, Z)
    special = None
    if p in (3, 5):
        special = f"p={p}"
        if value != 1:
            raise InternalInconsistencyError(f"formula gives {value} for p = {p}, Burr gives 1")
        value = Fraction(1)
    if not 0 < value <= 1 or Z > len(zeros):
        raise InternalInconsistencyError(f"density {value} out of range for p = {p}")
    return DensityReport(p, info.epsilon, info.alpha, info.pi, e, zeros, N, Z, value, special, wall)


def square_density(p: int) -> Fraction:
    """Measure of the squares in Z_p for odd p: p / (2(p + 1))."""
    require_prime(p)
    if p == 2:
        raise InvalidArgumentError("square_density is stated for odd primes")
    return Fraction(p, 2 * (p + 1))
