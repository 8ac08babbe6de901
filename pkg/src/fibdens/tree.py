"""Residues attained by F(n) mod p^lambda.

Two constructions:

* ``brute_attained`` walks one full period of F mod p^lambda. This is the
  oracle.
* ``fast_attained`` builds the set from data mod p^e alone. Lucas
  non-zeros give full cylinders F(i) + p^e Z_p. Each surviving Lucas zero
  contributes a path along the digits of c_i = omega(phi)^i * 2/sqrt 5,
  plus full subtrees c_i + j p^k (mod p^(k+1)) at even k >= 2e wherever
  zeta*sqrt(5)*j is a quadratic residue mod p.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .density import fib_wall_exponent, lucas_zeros
from .errors import (
    InternalInconsistencyError,
    InvalidArgumentError,
    ResourceError,
    UnsupportedError,
)
from .modfib import fib_pair_mod, period_info
from .padic import golden_data, int_digits
from .primes import is_qr, require_prime

DEFAULT_BUDGET = 10**8
MAX_EXPLICIT_NODES = 10**5

EXPLICIT = "explicit"
COMPRESSED = "compressed"


@dataclass(frozen=True)
class ZeroBranch:
    """Compressed image of one Lucas zero: path digits and full-subtree offsets."""

    i: int
    path: tuple[int, ...]
    subtrees: tuple[tuple[int, int], ...]  # (level k, offset digit j)


@dataclass(frozen=True)
class AttainedSet:
    p: int
    lam: int
    form: str
    residues: tuple[int, ...] = ()
    e: int = 0
    cylinders: tuple[int, ...] = ()
    zeros: tuple[ZeroBranch, ...] = field(default=())

    def expand(self) -> list[int]:
        """Sorted residues mod p^lam."""
        if self.form == EXPLICIT:
            return list(self.residues)
        return sorted(_expand_compressed(self))

    def count(self) -> int:
        if self.form == EXPLICIT:
            return len(self.residues)
        if self.lam < self.e:
            return len(_expand_compressed(self))
        p, lam = self.p, self.lam
        total = len(self.cylinders) * p ** (lam - self.e)
        for z in self.zeros:
            total += branch_count(p, lam, z.subtrees)
        return total

    def density(self) -> Fraction:
        return Fraction(self.count(), self.p**self.lam)


@dataclass(frozen=True)
class BranchRule:
    p: int
    i: int
    zeta_sqrt5_mod_p: int
    c_digits: tuple[int, ...]
    qr_set: frozenset[int]

    @property
    def c(self) -> int:
        return digits_to_int(self.c_digits, self.p)

    def allowed_offsets(self) -> list[int]:
        return [j for j in range(1, self.p) if self.zeta_sqrt5_mod_p * j % self.p in self.qr_set]


def digits_to_int(digits, p: int) -> int:
    n = 0
    for d in reversed(digits):
        n = n * p + d
    return n


# -- brute force ----------------------------------------------------------


def _walk(start: int, stop: int, m: int) -> bytes:
    pair = fib_pair_mod(start, m)
    a, b = pair.f_n, pair.f_n1
    seen = bytearray(m)
    for _ in range(stop - start):
        seen[a] = 1
        a, b = b, a + b
        if b >= m:
            b -= m
    return bytes(seen)


def _period_mod_power(p: int, lam: int, budget: int) -> int:
    m = p**lam
    period = p ** (lam - 1) * period_info(p).pi
    if period > budget:
        raise ResourceError(
            f"enumerating F mod {p}^{lam} needs {period} steps (budget {budget})", period
        )
    check = fib_pair_mod(period, m)
    if (check.f_n, check.f_n1) == (0, 1):
        return period
    a, b, n = 1, 1, 1
    while (a, b) != (0, 1):
        a, b = b, (a + b) % m
        n += 1
        if n > budget:
            raise ResourceError(f"period search for {p}^{lam} exceeded budget {budget}", n)
    return n


def brute_attained(p: int, lam: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> AttainedSet:
    """Every F(n) mod p^lam, from one full period of the sequence."""
    require_prime(p)
    if lam < 0:
        raise InvalidArgumentError("level must be non-negative")
    if lam == 0:
        return AttainedSet(p, 0, EXPLICIT, (0,))
    m = p**lam
    period = _period_mod_power(p, lam, budget)
    if workers <= 1 or period < 200_000:
        seen = _walk(0, period, m)
    else:
        bounds = [period * k // workers for k in range(workers + 1)]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_walk, bounds[:-1], bounds[1:], [m] * workers)
            acc = 0
            for part in parts:
                acc |= int.from_bytes(part, "little")
        seen = acc.to_bytes(m, "little")
    return AttainedSet(p, lam, EXPLICIT, tuple(r for r in range(m) if seen[r]))


def level_density(p: int, lam: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    if lam == 0:
        return Fraction(1)
    return Fraction(brute_attained(p, lam, budget).count(), p**lam)


# -- fast construction ----------------------------------------------------


def quadratic_residues(p: int) -> frozenset[int]:
    return frozenset(j for j in range(1, p) if is_qr(j, p))


def branch_rule(p: int, i: int, depth: int, canonical: bool = True) -> BranchRule:
    """Digits of c_i = omega(phi)^i * 2/sqrt 5 and the unit zeta*sqrt 5 mod p."""
    require_prime(p)
    if p in (2, 5):
        raise UnsupportedError("branch rules need p not in {2, 5}")
    if i not in lucas_zeros(p):
        raise InvalidArgumentError(f"{i} is not a Lucas zero for p = {p}")
    g = golden_data(p, depth + 2, canonical)
    zeta = g.omega_phi**i
    c = (2 * zeta / g.sqrt5).to_zp()
    zs5 = (zeta * g.sqrt5).to_zp().a % p
    if zs5 == 0:
        raise InternalInconsistencyError("zeta*sqrt 5 is not a unit")
    return BranchRule(p, i, zs5, tuple(int_digits(c.a, p, depth)), quadratic_residues(p))


def branch_subtrees(p: int, lam: int, unit: int, start: int) -> tuple[tuple[int, int], ...]:
    """(k, j) for even k in [start, lam) and j with unit*j a nonzero square mod p."""
    offsets = [j for j in range(1, p) if is_qr(unit * j, p)]
    first = start + (start % 2)
    return tuple((k, j) for k in range(first, lam, 2) for j in offsets)


def branch_count(p: int, lam: int, subtrees) -> int:
    """Residues mod p^lam in a path plus its full subtrees."""
    return 1 + sum(p ** (lam - k - 1) for k, _ in subtrees)


def _expand_branch(p: int, lam: int, path, subtrees, out: set) -> None:
    m = p**lam
    c = digits_to_int(path[:lam], p) % m
    out.add(c)
    for k, j in subtrees:
        pk = p**k
        root = c % pk + ((path[k] + j) % p) * pk
        out.update(range(root, m, pk * p))


def _expand_compressed(aset: AttainedSet) -> set[int]:
    p, lam, e = aset.p, aset.lam, aset.e
    m = p**lam
    out: set[int] = set()
    if lam >= e:
        for r in aset.cylinders:
            out.update(range(r, m, p**e))
    else:
        out.update(r % m for r in aset.cylinders)
    for z in aset.zeros:
        _expand_branch(p, lam, z.path, z.subtrees, out)
    return out


def fast_attained(p: int, lam: int, canonical: bool = True) -> AttainedSet:
    """Compressed attained set mod p^lam, without walking the period mod p^lam."""
    require_prime(p)
    if p in (2, 5):
        raise UnsupportedError("fast_attained handles p not in {2, 5}; use brute_attained")
    if lam < 0:
        raise InvalidArgumentError("level must be non-negative")
    e = fib_wall_exponent(p)
    zeros = lucas_zeros(p)
    m = p**e
    nonzero_res, zero_res = set(), {}
    a, b = 0, 1
    for i in range(period_info(p).pi):
        if i in zeros:
            zero_res[i] = a
        else:
            nonzero_res.add(a)
        a, b = b, (a + b) % m
    branches = []
    for i in zeros:
        if zero_res[i] in nonzero_res:
            continue  # swallowed by a cylinder
        rule = branch_rule(p, i, max(lam, e), canonical)
        if rule.c % m != zero_res[i]:
            raise InternalInconsistencyError(f"c_{i} != F({i}) mod {p}^{e}")
        path = rule.c_digits[:lam]
        branches.append(ZeroBranch(i, path, branch_subtrees(p, lam, rule.zeta_sqrt5_mod_p, 2 * e)))
    return AttainedSet(p, lam, COMPRESSED, e=e, cylinders=tuple(sorted(nonzero_res)), zeros=tuple(branches))


# -- squares (calibration) ------------------------------------------------


def squares_brute(p: int, lam: int) -> set[int]:
    m = p**lam
    return {x * x % m for x in range(m)}


def squares_compressed(p: int, lam: int) -> set[int]:
    """Squares mod p^lam via the same path/subtree rule (centre 0, unit 1)."""
    out: set[int] = set()
    _expand_branch(p, lam, (0,) * lam, branch_subtrees(p, lam, 1, 0), out)
    return out


def squares_partial_sum(p: int, lam: int) -> Fraction:
    """Density of squares mod p^lam in closed form: path node plus QR subtrees."""
    total = Fraction(1, p**lam)
    for k in range(0, lam, 2):
        total += Fraction(p - 1, 2 * p ** (k + 1))
    return total


# -- export ---------------------------------------------------------------


def _node_id(r: int, level: int, p: int) -> str:
    if level == 0:
        return "*"
    digits = int_digits(r, p, level)[::-1]
    return ("" if p <= 10 else ".").join(map(str, digits))


def _tree_levels(aset: AttainedSet) -> tuple[list[set[int]], set[tuple[int, int]]]:
    """Visible nodes per level and the set of (level, residue) full-subtree roots."""
    p, lam = aset.p, aset.lam
    levels: list[set[int]] = [set() for _ in range(lam + 1)]
    full: set[tuple[int, int]] = set()

    def add_with_ancestors(r: int, level: int) -> None:
        for ell in range(level + 1):
            levels[ell].add(r % p**ell)

    if aset.form == EXPLICIT:
        for r in aset.residues:
            add_with_ancestors(r, lam)
        return levels, full
    for r in aset.cylinders:
        level = min(aset.e, lam)
        add_with_ancestors(r, level)
        if aset.e <= lam:
            full.add((aset.e, r % p**aset.e))
    for z in aset.zeros:
        c = digits_to_int(z.path, p)
        add_with_ancestors(c, lam)
        for k, j in z.subtrees:
            root = c % p**k + ((z.path[k] + j) % p) * p**k
            add_with_ancestors(root, k + 1)
            full.add((k + 1, root))
    return levels, full


def export_tree(aset: AttainedSet, fmt: str = "dot") -> bytes:
    fmt = fmt.lower()
    if fmt == "json":
        return (json.dumps(tree_to_dict(aset), sort_keys=True) + "\n").encode()
    if fmt != "dot":
        raise InvalidArgumentError(f"unknown export format {fmt!r}")
    if aset.form == EXPLICIT and aset.residues:
        size = sum(len({r % aset.p**ell for r in aset.residues}) for ell in range(aset.lam + 1))
        if size > MAX_EXPLICIT_NODES:
            raise ResourceError(
                f"explicit tree has {size} nodes (limit {MAX_EXPLICIT_NODES}); use the compressed form",
                size,
            )
    p = aset.p
    lines = ["digraph attained {"]
    if aset.residues or aset.cylinders or aset.zeros:
        lines.append(f'  label="Fibonacci residues mod {p}^{aset.lam} ({aset.form})";')
        lines.append("  node [shape=box];")
        levels, full = _tree_levels(aset)
        for ell, nodes in enumerate(levels):
            for r in sorted(nodes):
                nid = _node_id(r, ell, p)
                label = "" if ell == 0 else nid
                lines.append(f'  "{nid}" [label="{label}"];')
        for ell in range(1, aset.lam + 1):
            for r in sorted(levels[ell]):
                parent = _node_id(r % p ** (ell - 1), ell - 1, p)
                digit = r // p ** (ell - 1)
                lines.append(f'  "{parent}" -> "{_node_id(r, ell, p)}" [label="{digit}"];')
        for ell, r in sorted(full):
            nid = _node_id(r, ell, p)
            lines.append(f'  "{nid}..." [label="...", shape=plaintext];')
            lines.append(f'  "{nid}" -> "{nid}..." [style=dotted];')
    lines.append("}")
    return ("\n".join(lines) + "\n").encode()


def tree_to_dict(aset: AttainedSet) -> dict:
    if aset.form == EXPLICIT:
        return {
            "form": EXPLICIT,
            "p": aset.p,
            "lambda": aset.lam,
            "residues": [str(r) for r in aset.residues],
        }
    return {
        "form": COMPRESSED,
        "p": aset.p,
        "lambda": aset.lam,
        "e": aset.e,
        "cylinders": [str(r) for r in aset.cylinders],
        "zeros": [
            {
                "i": z.i,
                "path": list(z.path),
                "subtrees": [{"level": k, "offset_digit": j} for k, j in z.subtrees],
            }
            for z in aset.zeros
        ],
    }


def import_tree(data: bytes | str | dict) -> AttainedSet:
    if not isinstance(data, dict):
        data = json.loads(data)
    p, lam = int(data["p"]), int(data["lambda"])
    if data.get("form", COMPRESSED) == EXPLICIT:
        return AttainedSet(p, lam, EXPLICIT, tuple(int(r) for r in data["residues"]))
    zeros = tuple(
        ZeroBranch(
            int(z["i"]),
            tuple(int(d) for d in z["path"]),
            tuple((int(s["level"]), int(s["offset_digit"])) for s in z["subtrees"]),
        )
        for z in data["zeros"]
    )
    return AttainedSet(
        p,
        lam,
        COMPRESSED,
        e=int(data["e"]),
        cylinders=tuple(int(r) for r in data["cylinders"]),
        zeros=zeros,
    )
