"""Fixed-precision arithmetic in Z_p and in O_K = Z_p[sqrt 5] (or Z_2[phi]).

An element is a pair of residues mod p^prec in one of three bases:

* RATIONAL  -- plain Z_p; used when 5 is a square mod p, sqrt 5 being a
  Hensel-lifted integer.
* SQRT5     -- a + b*sqrt(5), for odd p = 2, 3 mod 5 (inert, f = 2).
* PHI       -- a + b*phi with phi^2 = phi + 1, for p = 2.

p = 5 (ramified) is not supported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .errors import (
    DomainError,
    InternalInconsistencyError,
    InvalidArgumentError,
    NoConvergenceError,
    PrecisionError,
    UnsupportedError,
)
from .primes import require_prime, sqrt_mod_prime

INF = math.inf


class Basis(enum.Enum):
    RATIONAL = "rational"
    SQRT5 = "sqrt5"
    PHI = "phi"


def basis_for(p: int) -> Basis:
    if p == 5:
        raise UnsupportedError("p = 5 is ramified in Q(sqrt 5) and not supported")
    if p == 2:
        return Basis.PHI
    return Basis.RATIONAL if p % 5 in (1, 4) else Basis.SQRT5


def residue_degree(p: int) -> int:
    """f, where p^f is the size of the residue field of O_K."""
    return 1 if basis_for(p) is Basis.RATIONAL else 2


def _val(n: int, p: int, cap: int) -> float | int:
    if n == 0:
        return INF
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PAdicElement:
    p: int
    basis: Basis
    a: int
    b: int
    prec: int

    def __post_init__(self):
        if self.prec < 0:
            raise PrecisionError(f"negative precision {self.prec}")
        mod = self.p**self.prec
        object.__setattr__(self, "a", self.a % mod)
        object.__setattr__(self, "b", self.b % mod if self.basis is not Basis.RATIONAL else 0)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    # -- construction helpers -------------------------------------------

    def _like(self, a: int, b: int, prec: int, basis: Basis | None = None) -> PAdicElement:
        return PAdicElement(self.p, basis or self.basis, a, b, prec)

    def _coerce(self, other) -> PAdicElement:
        if isinstance(other, PAdicElement):
            if other.p != self.p:
                raise InvalidArgumentError(f"mixing {self.p}-adic and {other.p}-adic elements")
            return other
        if isinstance(other, int):
            return PAdicElement(self.p, Basis.RATIONAL, other, 0, self.prec)
        return NotImplemented

    def _align(self, other) -> tuple[PAdicElement, PAdicElement]:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        x, y = self, other
        if x.basis is not y.basis:
            if x.basis is Basis.RATIONAL:
                x = PAdicElement(x.p, y.basis, x.a, 0, x.prec)
            elif y.basis is Basis.RATIONAL:
                y = PAdicElement(y.p, x.basis, y.a, 0, y.prec)
            else:
                raise InvalidArgumentError(f"incompatible bases {x.basis} and {y.basis}")
        return x, y

    def with_prec(self, prec: int) -> PAdicElement:
        """Reduce to fewer digits, or pad with zero digits (a chosen lift)."""
        return self._like(self.a, self.b, prec)

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return x._like(x.a + y.a, x.b + y.b, min(x.prec, y.prec))

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.a, -self.b, self.prec)

    def __sub__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        return x._like(x.a - y.a, x.b - y.b, min(x.prec, y.prec))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        prec = min(x.prec, y.prec)
        a, b, c, d = x.a, x.b, y.a, y.b
        if x.basis is Basis.RATIONAL:
            return x._like(a * c, 0, prec)
        if x.basis is Basis.SQRT5:
            return x._like(a * c + 5 * b * d, a * d + b * c, prec)
        bd = b * d
        return x._like(a * c + bd, a * d + b * c + bd, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self._like(1, 0, self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> PAdicElement:
        """Galois conjugate (sqrt 5 -> -sqrt 5); only meaningful in an extension."""
        if self.basis is Basis.SQRT5:
            return self._like(self.a, -self.b, self.prec)
        if self.basis is Basis.PHI:
            # phi -> phibar = 1 - phi
            return self._like(self.a + self.b, -self.b, self.prec)
        raise UnsupportedError("conjugation is not an automorphism of Z_p")

    def norm(self) -> int:
        """x * conj(x) as a residue mod p^prec (RATIONAL: x^2 is not a norm; returns a)."""
        a, b = self.a, self.b
        if self.basis is Basis.SQRT5:
            return (a * a - 5 * b * b) % self.modulus
        if self.basis is Basis.PHI:
            return (a * a + a * b - b * b) % self.modulus
        return a

    def inverse(self) -> PAdicElement:
        if self.valuation() != 0:
            raise InvalidArgumentError("only units are invertible in O_K")
        mod = self.modulus
        if mod == 1:
            return self
        if self.basis is Basis.RATIONAL:
            return self._like(pow(self.a, -1, mod), 0, self.prec)
        ninv = pow(self.norm(), -1, mod)
        c = self.conj()
        return self._like(c.a * ninv, c.b * ninv, self.prec)

    def __truediv__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        v = y.valuation()
        if v == 0:
            return x * y.inverse()
        if v is INF:
            raise ZeroDivisionError("divisor is zero to working precision")
        if x.valuation() < v:
            raise DomainError("quotient leaves the ring of integers")
        pv = x.p**v
        xs = x._like(x.a // pv, x.b // pv, x.prec - v)
        ys = y._like(y.a // pv, y.b // pv, y.prec - v)
        return xs * ys.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other.with_prec(self.prec) / self

    def __eq__(self, other):
        pair = self._align(other)
        if pair is NotImplemented:
            return NotImplemented
        x, y = pair
        prec = min(x.prec, y.prec)
        mod = x.p**prec
        return (x.a - y.a) % mod == 0 and (x.b - y.b) % mod == 0

    # equality means agreement to the common precision, which is not transitive
    __hash__ = None

    # -- inspection -----------------------------------------------------

    def valuation(self) -> float | int:
        """Index of the first nonzero digit; math.inf if every digit vanishes."""
        return min(_val(self.a, self.p, self.prec), _val(self.b, self.p, self.prec))

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def is_zero(self) -> bool:
        return self.valuation() is INF

    def in_zp(self) -> bool:
        return self.b == 0

    def to_zp(self) -> PAdicElement:
        """Drop to the RATIONAL basis; the other coordinate must vanish."""
        if self.b != 0:
            raise PrecisionError(
                f"element is not in Z_p to {self.prec} digits (second coordinate {self.b})"
            )
        return PAdicElement(self.p, Basis.RATIONAL, self.a, 0, self.prec)

    def digits(self, n: int | None = None) -> list[int] | tuple[list[int], list[int]]:
        """Base-p digits, least significant first.

        For extension elements returns (digits of a, digits of b).
        """
        n = self.prec if n is None else n
        if n > self.prec:
            raise PrecisionError(f"asked for {n} digits of an element known to {self.prec}")
        if self.basis is Basis.RATIONAL:
            return int_digits(self.a, self.p, n)
        return int_digits(self.a, self.p, n), int_digits(self.b, self.p, n)

    def __repr__(self):
        if self.basis is Basis.RATIONAL:
            body = str(self.a)
        else:
            sym = "sqrt5" if self.basis is Basis.SQRT5 else "phi"
            body = f"{self.a} + {self.b}*{sym}"
        return f"PAdicElement({body} + O({self.p}^{self.prec}))"


Scalar = Union[int, PAdicElement]


def int_digits(n: int, p: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        n, d = divmod(n, p)
        out.append(d)
    return out


def valuation(x: PAdicElement) -> float | int:
    return x.valuation()


def zp(p: int, value: int, prec: int) -> PAdicElement:
    return PAdicElement(p, Basis.RATIONAL, value, 0, prec)


def element(p: int, a: int, b: int, prec: int) -> PAdicElement:
    """a + b*s in the natural basis for p (s = sqrt 5, or phi when p = 2)."""
    basis = basis_for(p)
    if basis is Basis.RATIONAL and b:
        raise InvalidArgumentError(f"Z_{p} has no second coordinate")
    return PAdicElement(p, basis, a, b, prec)


# -- Hensel ---------------------------------------------------------------


def _horner(coeffs: Sequence[Scalar], y: PAdicElement) -> PAdicElement:
    acc = y._like(0, 0, y.prec)
    for c in reversed(coeffs):
        acc = acc * y + c
    return acc


def _derivative(coeffs: Sequence[Scalar]) -> list[Scalar]:
    return [k * c for k, c in enumerate(coeffs)][1:] or [0]


def hensel_root(coeffs: Sequence[Scalar], y0: PAdicElement, prec: int) -> PAdicElement:
    """Newton-lift y0 to the root y of f with |y - y0| < |f'(y0)|.

    ``coeffs`` lists f's coefficients from the constant term up; ints are
    exact, PAdicElements carry their own precision. Requires
    |f(y0)| < |f'(y0)|^2.
    """
    p = y0.p
    coeff_prec = min(
        (c.prec for c in coeffs if isinstance(c, PAdicElement)), default=None
    )
    deriv = _derivative(coeffs)
    probe = prec + 2 * prec + 4 if coeff_prec is None else coeff_prec
    y = y0.with_prec(probe)
    k = _horner(deriv, y).valuation()
    t = _horner(coeffs, y).valuation()
    if k is INF or not t > 2 * k:
        raise NoConvergenceError(t, k, p)
    work = prec + k
    if coeff_prec is not None and coeff_prec < work:
        raise PrecisionError(
            f"coefficients known to {coeff_prec} digits; root to {prec} digits needs {work}"
        )
    y = y0.with_prec(work)
    excess = t - 2 * k
    for _ in range(work.bit_length() + 4):
        fy = _horner(coeffs, y)
        if fy.is_zero():
            return y.with_prec(prec)
        dfy = _horner(deriv, y)
        if dfy.valuation() != k:
            raise InternalInconsistencyError("derivative valuation drifted during Newton lift")
        excess = fy.valuation() - 2 * k
        step = (fy / dfy).with_prec(work)
        y = y - step
        after = _horner(coeffs, y).valuation()
        if after < min(2 * excess + 2 * k, work):
            raise InternalInconsistencyError("Newton step failed to converge quadratically")
    raise InternalInconsistencyError("Newton lift did not terminate")


def sqrt5(p: int, prec: int, canonical: bool = True) -> PAdicElement:
    """The square root of 5 in Z_p whose residue lies in 1..(p-1)/2.

    ``canonical=False`` returns the other root.
    """
    require_prime(p)
    if p % 5 not in (1, 4):
        raise InvalidArgumentError(f"5 is not a square in Z_{p}")
    r = sqrt_mod_prime(5, p)
    r = min(r, p - r)
    if not canonical:
        r = p - r
    return hensel_root([-5, 0, 1], zp(p, r, prec), prec)


# -- Teichmuller, log, exp -------------------------------------------------


def teichmuller(x: PAdicElement, prec: int | None = None) -> PAdicElement:
    """omega(x): the (p^f - 1)th root of unity congruent to the unit x mod p."""
    if x.p == 5:
        raise UnsupportedError("Teichmuller lift for p = 5 is not supported")
    if not x.is_unit():
        raise InvalidArgumentError("Teichmuller lift needs a unit")
    prec = x.prec if prec is None else prec
    q = x.p ** residue_degree(x.p)
    # only the residue of x mod p matters; pad so the target precision is reachable
    y = x.with_prec(1).with_prec(prec)
    for _ in range(prec + 2):
        nxt = y**q
        if nxt.a == y.a and nxt.b == y.b:
            return nxt
        y = nxt
    raise InternalInconsistencyError("Teichmuller iteration exceeded its bound")


def _ndigits(m: int, p: int) -> int:
    n = 0
    while m:
        m //= p
        n += 1
    return n


def _log_terms(v: int, target: int, p: int) -> int:
    """Largest m with m*v - floor(log_p m) < target; later terms vanish mod p^target.

    m*v - floor(log_p m) is non-decreasing in m when v >= 1.
    """
    m = 1
    while m * v - (_ndigits(m, p) - 1) < target:
        m += 1
    return m - 1


def _vint(m: int, p: int) -> int:
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


def plog(x: PAdicElement, prec: int | None = None) -> PAdicElement:
    """log_p(x) for |x - 1|_p < 1, via the series sum (-1)^(m+1) u^m / m."""
    p = x.p
    target = x.prec if prec is None else min(prec, x.prec)
    u = (x - 1).with_prec(target)
    v = u.valuation()
    if v == 0:
        raise DomainError("log_p needs |x - 1|_p < 1")
    if v is INF:
        return u._like(0, 0, target)
    last = _log_terms(v, target, p)
    guard = max((_vint(m, p) for m in range(1, last + 1)), default=0)
    work = target + guard
    uw = u.with_prec(work)
    acc = uw._like(0, 0, work)
    power = uw._like(1, 0, work)
    for m in range(1, last + 1):
        power = power * uw
        k = _vint(m, p)
        pk = p**k
        term = power._like(power.a // pk, power.b // pk, work - k)
        term = term * pow(m // pk, -1, p**work)
        acc = acc + term.with_prec(work) * (1 if m % 2 else -1)
    return acc.with_prec(target)


def _digit_sum(m: int, p: int) -> int:
    s = 0
    while m:
        m, d = divmod(m, p)
        s += d
    return s


def pexp(x: PAdicElement, prec: int | None = None) -> PAdicElement:
    """exp_p(x) for |x|_p < p^(-1/(p-1)), via sum x^m / m!."""
    p = x.p
    target = x.prec if prec is None else min(prec, x.prec)
    xx = x.with_prec(target)
    v = xx.valuation()
    if v is INF:
        return xx._like(1, 0, target)
    if Fraction(v) <= Fraction(1, p - 1):
        raise DomainError(f"exp_p diverges at valuation {v} (needs > 1/(p-1))")
    # nu(x^m/m!) >= m*v - (m-1)/(p-1) = m*slope + 1/(p-1)
    slope = Fraction(v) - Fraction(1, p - 1)
    last = 0
    while (last + 1) * slope + Fraction(1, p - 1) < target:
        last += 1
    guard = (last - _digit_sum(last, p)) // (p - 1)
    work = target + guard
    xw = xx.with_prec(work)
    acc = xw._like(1, 0, work)
    power = xw._like(1, 0, work)
    fact = 1
    for m in range(1, last + 1):
        power = power * xw
        fact *= m
        k = (m - _digit_sum(m, p)) // (p - 1)
        pk = p**k
        term = power._like(power.a // pk, power.b // pk, work - k)
        term = term * pow(fact // pk, -1, p**work)
        acc = acc + term.with_prec(work)
    return acc.with_prec(target)


# -- golden ratio data -------------------------------------------------------


def root5(p: int, prec: int, canonical: bool = True) -> PAdicElement:
    """sqrt 5 as an element of O_K in the natural basis for p."""
    basis = basis_for(p)
    if basis is Basis.RATIONAL:
        return sqrt5(p, prec, canonical)
    sign = 1 if canonical else -1
    if basis is Basis.SQRT5:
        return element(p, 0, sign, prec)
    return element(p, -sign, 2 * sign, prec)  # 2*phi - 1


def golden_ratio(p: int, prec: int, canonical: bool = True) -> PAdicElement:
    """phi = (1 + sqrt 5)/2 in O_K."""
    if p == 2:
        base = element(2, 0, 1, prec)
        return base if canonical else base.conj()
    return (1 + root5(p, prec, canonical)) / 2


@dataclass(frozen=True)
class GoldenData:
    p: int
    prec: int
    sqrt5: PAdicElement
    phi: PAdicElement
    phibar: PAdicElement
    omega_phi: PAdicElement
    omega_phibar: PAdicElement
    log_ratio: PAdicElement  # log_p(phi/omega(phi)); for p = 2 log_2((phi/omega(phi))^2)


@lru_cache(maxsize=256)
def golden_data(p: int, prec: int, canonical: bool = True) -> GoldenData:
    s5 = root5(p, prec, canonical)
    phi = golden_ratio(p, prec, canonical)
    phibar = 1 - phi
    w = teichmuller(phi, prec)
    wbar = teichmuller(phibar, prec)
    ratio = phi / w
    if p == 2:
        ratio = ratio * ratio
    return GoldenData(p, prec, s5, phi, phibar, w, wbar, plog(ratio, prec))


def wall_valuation(p: int, prec: int) -> float | int:
    """nu_p(phi/omega(phi) - 1); math.inf if it exceeds prec - 1 digits."""
    phi = golden_ratio(p, prec)
    return (phi / teichmuller(phi, prec) - 1).valuation()


# -- piecewise interpolation ---------------------------------------------


def interp_F(i: int, x: PAdicElement | int, prec: int, canonical: bool = True) -> PAdicElement:
    """F_i(x) = (w^i exp(x L) - wbar^i exp(-x L)) / sqrt 5, L = log(phi/omega(phi)).

    F(n) = F_{n mod pi(p)}(n) for every n >= 0.
    """
    from .modfib import period_info

    if isinstance(x, int):
        raise InvalidArgumentError("pass x as a PAdicElement (use zp(p, n, prec))")
    p = x.p
    if p in (2, 5):
        raise UnsupportedError(f"interp_F is defined for p not in {{2, 5}}, got {p}")
    if not x.in_zp():
        raise InvalidArgumentError("interp_F takes x in Z_p")
    if prec > x.prec:
        raise PrecisionError(f"x known to {x.prec} digits, {prec} requested")
    i %= period_info(p).pi
    g = golden_data(p, prec, canonical)
    arg = x.with_prec(prec) * g.log_ratio
    val = (g.omega_phi**i * pexp(arg) - g.omega_phibar**i * pexp(-arg)) / g.sqrt5
    return val.to_zp()


def interp_F2(i: int, r: int, x: PAdicElement, prec: int) -> PAdicElement:
    """F_{i,r}(r + 2x) for p = 2; agrees with F on n = i mod 3, n = r mod 2."""
    if x.p != 2:
        raise UnsupportedError("interp_F2 is the p = 2 interpolation")
    if i not in (0, 1, 2) or r not in (0, 1):
        raise InvalidArgumentError(f"need i in 0..2 and r in 0..1, got ({i}, {r})")
    if not x.in_zp():
        raise InvalidArgumentError("interp_F2 takes x in Z_2")
    if prec > x.prec:
        raise PrecisionError(f"x known to {x.prec} digits, {prec} requested")
    g = golden_data(2, prec)
    k = (i - r) % 3
    y0 = g.omega_phi**k * g.phi**r
    y0bar = g.omega_phibar**k * g.phibar**r
    arg = x.with_prec(prec) * g.log_ratio
    val = (y0 * pexp(arg) - y0bar * pexp(-arg)) / g.sqrt5
    return val.to_zp()


def fib_2adic(n: int, prec: int) -> PAdicElement:
    """F(n) through the six-function interpolation."""
    r = n % 2
    return interp_F2(n % 3, r, zp(2, (n - r) // 2, prec), prec)


def render_digits(x: PAdicElement, n: int | None = None) -> str:
    """Digits least significant first, separated by spaces (extension: two lines)."""
    d = x.digits(n)
    if x.basis is Basis.RATIONAL:
        return " ".join(map(str, d))
    sym = "sqrt5" if x.basis is Basis.SQRT5 else "phi"
    return "1:     " + " ".join(map(str, d[0])) + f"\n{sym}: " + " ".join(map(str, d[1]))
