"""The twelve acceptance criteria, each timed and reported in the summary."""

import json
import time
from fractions import Fraction as Q

import oracles
from acceptance_log import criterion

from fibdens import cli
from fibdens.density import dens, square_density, wall_exponent
from fibdens.modfib import attains_all_residues
from fibdens.padic import (
    Basis,
    PAdicElement,
    basis_for,
    fib_2adic,
    interp_F,
    plog,
    pexp,
    residue_degree,
    teichmuller,
    zp,
)
from fibdens.primes import primes_between
from fibdens.tree import (
    branch_rule,
    brute_attained,
    fast_attained,
    level_density,
    squares_partial_sum,
)

TABLE_43 = {
    2: Q(21, 32), 3: Q(1), 5: Q(1), 7: Q(41, 56), 11: Q(145, 264), 13: Q(9, 13),
    17: Q(13, 17), 19: Q(441, 760), 23: Q(409, 552), 29: Q(541, 1740), 31: Q(19, 31),
    37: Q(29, 37), 41: Q(715, 1722), 43: Q(33, 43),
}


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_c01_density_table(capsys):
    with criterion(1, "table --upto 43 reproduces the 14 densities", limit=1.0):
        code, out = run_cli(capsys, "table", "--upto", "43", "--json")
        assert code == 0
        rows = json.loads(out)["rows"]
        got = {r["p"]: Q(int(r["dens"]["num"]), int(r["dens"]["den"])) for r in rows}
        assert got == TABLE_43


def test_c02_worked_examples():
    with criterion(2, "dens(7), dens(13), dens(19), dens(31) with N, Z, zeros"):
        r13 = dens(13)
        assert (r13.dens, r13.N, len(r13.lucas_zeros)) == (Q(9, 13), 9, 0)
        r19 = dens(19)
        assert (r19.dens, r19.N, r19.Z) == (Q(441, 760), 11, 1)
        r31 = dens(31)
        assert r31.dens == Q(19, 31) and r31.Z == 0 and len(r31.lucas_zeros) > 0
        r7 = dens(7)
        assert (r7.dens, r7.N, r7.Z) == (Q(41, 56), 5, 2)


def test_c03_large_primes():
    with criterion(3, "dens(9349) and dens(514229), each < 10 s"):
        for p, want in ((9349, Q(504901, 174826300)), (514229, Q(53, 514229))):
            start = time.perf_counter()
            assert dens(p).dens == want
            assert time.perf_counter() - start < 10.0, p


def test_c04_p_equals_2():
    residues_32 = {0, 1, 2, 3, 5, 7, 8, 9, 11, 13, 15, 16, 17, 19, 21, 23, 24, 25, 27, 29, 31}
    with criterion(4, "p = 2 residue set, dens(2), image supersets", limit=1.0):
        assert set(brute_attained(2, 5).expand()) == residues_32
        assert dens(2).dens == Q(21, 32)
        period = oracles.pisano(64)
        assert period == 96
        claims = {
            (1, 0): range(3, 64, 4),
            (1, 1): range(1, 64, 4),
            (2, 0): range(1, 64, 4),
            (2, 1): range(1, 64, 4),
            (0, 0): range(0, 64, 8),
            (0, 1): (2, 34),
        }
        for (i, r), targets in claims.items():
            hit = {oracles.fib(n) % 64 for n in range(period) if n % 3 == i and n % 2 == r}
            missing = set(targets) - hit
            assert not missing, f"F_{{{i},{r}}} misses {sorted(missing)} mod 64"


def test_c05_level_densities():
    want = [Q(1), Q(12, 19), Q(210, 361), Q(3981, 6859), Q(75621, 130321)]
    with criterion(5, "level_density(19, 0..4)", limit=5.0):
        assert [level_density(19, lam) for lam in range(5)] == want


def test_c06_oracle_equivalence():
    with criterion(6, "fast_attained == brute_attained up to p^lam <= 10^6", limit=60.0):
        for p in (3, 7, 11, 13, 19, 23, 31):
            lam = 0
            while p**lam <= 10**6:
                fast = fast_attained(p, lam).expand()
                brute = brute_attained(p, lam).expand()
                assert fast == brute, f"p={p} lam={lam}"
                lam += 1


def test_c07_interpolation():
    with criterion(7, "F_{n mod pi}(n) = F(n) mod p^6; p = 2 mod 2^8"):
        for p in (7, 11, 13, 19):
            m = p**6
            for n in range(61):
                got = interp_F(n, zp(p, n, 6), 6)
                assert got.a == oracles.fib(n) % m, f"p={p} n={n}"
        for n in range(61):
            assert fib_2adic(n, 8).a == oracles.fib(n) % 256, f"p=2 n={n}"


def test_c08_wall_exponent_channels():
    with criterion(8, "Wall exponent: Fibonacci, p-adic, Lucas channels agree", limit=60.0):
        for p in primes_between(7, 1999):
            rec = wall_exponent(p)
            assert rec.via_fib == rec.via_padic == oracles.wall_exponent(p), p
            if oracles.alpha(p) % 2 == 0:
                assert rec.via_lucas == rec.via_fib, p
            else:
                assert rec.via_lucas is None
        # p = 3: the Lucas valuation overshoots the Wall exponent
        assert oracles.nu(oracles.lucas(6), 3) == 2
        assert oracles.wall_exponent(3) == 1
        rec3 = wall_exponent(3)
        assert rec3.e == 1 and rec3.via_lucas is None


def test_c09_digit_expansions(capsys):
    with criterion(9, "p = 7 expansions of 2 omega(phi)^i / sqrt 5"):
        assert branch_rule(7, 4, 8).c_digits == (3, 0, 3, 4, 3, 6, 4, 1)
        assert branch_rule(7, 12, 8).c_digits == (4, 6, 3, 2, 3, 0, 2, 5)
        assert run_cli(capsys, "digits", "7", "4", "--depth", "8") == (0, "3 0 3 4 3 6 4 1\n")
        assert run_cli(capsys, "digits", "7", "12", "--depth", "8") == (0, "4 6 3 2 3 0 2 5\n")


# -- criterion 10: property suites -------------------------------------------

CASES = 1000
PROP_PRIMES = [q for q in primes_between(2, 60) if q != 5]


def random_element(rng, p, prec, unit=False):
    m = p**prec
    while True:
        a = rng.randrange(m)
        b = rng.randrange(m) if basis_for(p) is not Basis.RATIONAL else 0
        x = PAdicElement(p, basis_for(p), a, b, prec)
        if not unit or x.is_unit():
            return x


def test_c10_teichmuller(rng):
    with criterion(10, "seeded property suites"):
        for _ in range(CASES):
            p = rng.choice(PROP_PRIMES)
            prec = rng.randint(2, 7)
            x = random_element(rng, p, prec, unit=True)
            w = teichmuller(x)
            q = p ** residue_degree(p)
            assert w ** (q - 1) == 1
            assert (w - x).valuation() >= 1
            assert teichmuller(w) == w


def test_c10_fermat_quotient(rng):
    with criterion(10, "seeded property suites"):
        for _ in range(CASES):
            p = rng.choice(PROP_PRIMES)
            prec = rng.randint(3, 8)
            x = random_element(rng, p, prec, unit=True)
            if rng.random() < 0.6:
                # push x close to its Teichmuller representative
                j = rng.randint(1, prec)
                x = teichmuller(x) * (1 + p**j * random_element(rng, p, prec))
            q = p ** residue_degree(p)
            lhs = min((x**q - x).valuation(), prec)
            rhs = min((x - teichmuller(x)).valuation(), prec)
            assert lhs == rhs, (p, x)


def test_c10_exp_log_round_trip(rng):
    with criterion(10, "seeded property suites"):
        for _ in range(CASES):
            p = rng.choice(PROP_PRIMES)
            e = rng.randint(0, 3)
            vmin = e + (2 if p == 2 else 1)  # |x| < p^(-e - 1/(p-1))
            prec = vmin + rng.randint(2, 6)
            v = rng.randint(vmin, prec - 1)
            x = p**v * random_element(rng, p, prec, unit=True)
            ex = pexp(x)
            assert (ex - 1).valuation() == v
            assert plog(ex) == x
            y = 1 + x
            ly = plog(y)
            assert ly.valuation() >= vmin
            assert pexp(ly) == y


def test_c10_pure_sqrt5(rng):
    inert = [q for q in PROP_PRIMES if q % 5 in (2, 3)]
    with criterion(10, "seeded property suites"):
        for _ in range(CASES):
            p = rng.choice(inert)
            prec = rng.randint(3, 8)
            shift = 2 if p == 2 else 1
            y = 1 + p**shift * random_element(rng, p, prec)
            x = y / y.conj()
            assert x * x.conj() == 1
            lx = plog(x)
            if p == 2:
                # phi basis: c*sqrt5 = -c + 2c*phi
                assert lx.b == (-2 * lx.a) % 2**prec and lx.a % 2 == 0
            else:
                assert lx.a == 0 and lx.b % p == 0


def test_c10_level_density_monotone(rng):
    odd = [q for q in primes_between(3, 3000) if q != 5]
    with criterion(10, "seeded property suites"):
        for _ in range(CASES):
            p = rng.choice(odd)
            lam = rng.randint(0, 5)
            assert fast_attained(p, lam + 1).density() <= fast_attained(p, lam).density()
        for p in primes_between(2, 150):
            lam = 0
            prev = Q(1)
            while p ** (lam + 1) <= 20000:
                cur = Q(len(oracles.residues(p ** (lam + 1))), p ** (lam + 1))
                assert cur <= prev, (p, lam)
                prev = cur
                lam += 1


def test_c10_burr_predicate(rng):
    with criterion(10, "seeded property suites"):
        for m in range(2, 201):
            assert attains_all_residues(m) == (len(oracles.residues(m)) == m), m
        for _ in range(CASES):
            m = rng.randint(2, 1000)
            assert attains_all_residues(m) == (len(oracles.residues(m)) == m), m


def test_c11_squares_calibration():
    with criterion(11, "squares mod p^lam vs the geometric series"):
        for p in (3, 7):
            limit = square_density(p)
            assert limit == Q(p, 2 * (p + 1))
            prev = None
            for lam in range(5):
                got = Q(len(oracles.squares(p**lam)), p**lam)
                series = Q(1, p**lam) + sum(
                    (Q(p - 1, 2 * p ** (k + 1)) for k in range(0, lam, 2)), Q(0)
                )
                assert got == series == squares_partial_sum(p, lam)
                assert got >= limit
                assert prev is None or got <= prev
                prev = got


def test_c12_wss_sweep():
    from fibdens.scan import wss_sweep

    with criterion(12, "wss_sweep(3, 10^4) is empty", limit=30.0):
        assert wss_sweep(3, 10**4) == []
