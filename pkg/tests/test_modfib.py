import oracles
import pytest

from fibdens.errors import InvalidArgumentError
from fibdens.modfib import (
    FibPair,
    attains_all_residues,
    epsilon,
    fib_mod,
    fib_pair_mod,
    lucas_mod,
    period_info,
    residues_attained_brute,
)

PRIMES = oracles.primes_upto(1500)


def test_fib_and_lucas_against_big_integers(rng):
    for _ in range(2000):
        n = rng.randrange(0, 3000)
        m = rng.randrange(2, 10**9)
        pair = fib_pair_mod(n, m)
        assert (pair.f_n, pair.f_n1) == (oracles.fib(n) % m, oracles.fib(n + 1) % m)
        assert lucas_mod(n, m) == oracles.lucas(n) % m


def test_fib_pair_advance():
    pair = fib_pair_mod(0, 10)
    for n in range(50):
        assert pair == fib_pair_mod(n, 10)
        pair = pair.advance()
    assert isinstance(pair, FibPair)


def test_small_values():
    assert (fib_pair_mod(8, 7).f_n, fib_pair_mod(8, 7).f_n1) == (0, 6)
    assert lucas_mod(4, 7) == 0 and lucas_mod(12, 7) == 0
    assert fib_mod(10**18, 2) == (0 if 10**18 % 3 == 0 else 1)


@pytest.mark.parametrize("n,m", [(-1, 5), (3, 1), (3, 0), (3, 2.5)])
def test_rejects_bad_arguments(n, m):
    with pytest.raises(InvalidArgumentError):
        fib_pair_mod(n, m)


def test_epsilon():
    assert [epsilon(p) for p in (2, 3, 5, 7, 11, 19, 29)] == [-1, -1, 0, -1, 1, 1, 1]
    with pytest.raises(InvalidArgumentError):
        epsilon(9)


def test_periods_against_naive_search():
    for p in PRIMES:
        info = period_info(p)
        assert info.pi == oracles.pisano(p), p
        assert info.alpha == oracles.alpha(p), p
        assert info.pi % info.alpha == 0
        assert info.pi // info.alpha == info.ratio_class
        assert period_info(p, method="linear") == info


def test_ratio_follows_alpha_parity():
    # odd primes only: for p = 2, alpha = pi = 3
    assert oracles.alpha(2) == oracles.pisano(2) == 3
    for p in PRIMES[1:]:
        info = period_info(p)
        if info.alpha % 2:
            assert info.ratio_class == 4
        elif info.alpha % 4 == 2:
            assert info.ratio_class == 1
        else:
            assert info.ratio_class == 2


def test_alpha_divides_p_minus_eps():
    for p in PRIMES:
        if p not in (2, 5):
            assert (p - epsilon(p)) % period_info(p).alpha == 0


def test_period_examples():
    assert (period_info(7).alpha, period_info(7).pi) == (8, 16)
    assert (period_info(13).alpha, period_info(13).pi) == (7, 28)
    assert (period_info(19).alpha, period_info(19).pi) == (18, 18)
    assert (period_info(2).alpha, period_info(2).pi) == (3, 3)
    assert (period_info(5).alpha, period_info(5).pi) == (5, 20)


def test_unknown_period_method():
    with pytest.raises(InvalidArgumentError):
        period_info(7, method="guess")


def test_residues_attained_brute():
    for m in range(2, 300):
        assert residues_attained_brute(m) == set(oracles.residues(m))


def test_burr_predicate_small():
    full = [m for m in range(2, 200) if attains_all_residues(m)]
    assert full == [m for m in range(2, 200) if len(oracles.residues(m)) == m]
    assert {5, 25, 3, 9, 27, 81, 6, 7, 14, 35, 70} <= set(full)
    assert 11 not in full
