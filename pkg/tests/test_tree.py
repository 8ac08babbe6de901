import json

import oracles
import pytest

from fibdens.errors import InvalidArgumentError, ResourceError, UnsupportedError
from fibdens.tree import (
    EXPLICIT,
    AttainedSet,
    branch_rule,
    brute_attained,
    export_tree,
    fast_attained,
    import_tree,
    level_density,
    squares_brute,
    squares_compressed,
    squares_partial_sum,
)


def test_brute_against_naive_walk():
    for p in oracles.primes_upto(40):
        lam = 0
        while p**lam <= 20000:
            want = sorted(oracles.residues(p**lam)) if lam else [0]
            assert brute_attained(p, lam).expand() == want, (p, lam)
            lam += 1


def test_fast_against_brute_more_primes():
    for p in (17, 29, 37, 41, 43, 47, 53, 59, 61, 89, 101):
        lam = 0
        while p**lam <= 200000:
            assert fast_attained(p, lam).expand() == brute_attained(p, lam).expand(), (p, lam)
            lam += 1


def test_closed_form_count():
    for p in (7, 11, 19, 29):
        for lam in range(6):
            aset = fast_attained(p, lam)
            assert aset.count() == len(aset.expand())


def test_root_choice_does_not_matter():
    for p in (7, 11, 19, 29, 31, 41):
        for lam in range(5):
            assert fast_attained(p, lam).expand() == fast_attained(p, lam, canonical=False).expand()


def test_level_density_examples():
    assert level_density(13, 2) * 13 == 9
    assert level_density(2, 0) == 1


def test_unsupported_primes_and_arguments():
    with pytest.raises(UnsupportedError):
        fast_attained(2, 3)
    with pytest.raises(UnsupportedError):
        fast_attained(5, 3)
    with pytest.raises(InvalidArgumentError):
        fast_attained(7, -1)
    with pytest.raises(InvalidArgumentError):
        branch_rule(7, 3, 4)


def test_brute_budget():
    with pytest.raises(ResourceError):
        brute_attained(7, 9, budget=10**5)


def test_parallel_brute_matches_serial():
    assert brute_attained(13, 4, workers=3).expand() == brute_attained(13, 4).expand()


def test_branch_rule_p7():
    rule = branch_rule(7, 4, 8)
    assert rule.zeta_sqrt5_mod_p == 4
    assert rule.qr_set == frozenset({1, 2, 4})
    assert rule.allowed_offsets() == [1, 2, 4]
    assert rule.c % 7 == oracles.fib(4) % 7


def test_squares_compressed_rule():
    for p in (3, 7, 11, 13):
        lam = 0
        while p**lam <= 20000:
            assert squares_compressed(p, lam) == squares_brute(p, lam) == oracles.squares(p**lam)
            assert squares_partial_sum(p, lam) * p**lam == len(oracles.squares(p**lam))
            lam += 1


def test_json_round_trip():
    for aset in (fast_attained(7, 4), fast_attained(19, 3), brute_attained(2, 5), brute_attained(5, 2)):
        back = import_tree(export_tree(aset, "json"))
        assert back == aset
        assert back.expand() == aset.expand()


def test_empty_set_gives_empty_digraph():
    assert export_tree(AttainedSet(7, 3, EXPLICIT, ())) == b"digraph attained {\n}\n"


def test_dot_export_p7():
    dot = export_tree(fast_attained(7, 3)).decode()
    assert dot.startswith("digraph attained {")
    # cylinders at level 1 end in dotted edges
    for r in (0, 1, 2, 5, 6):
        assert f'"{r}" -> "{r}..." [style=dotted];' in dot
    # the two Lucas-zero paths
    assert '"03" -> "303"' in dot and '"64" -> "364"' in dot
    assert '"3" -> "03"' in dot


def test_explicit_export_limit():
    aset = AttainedSet(3, 12, EXPLICIT, tuple(range(3**11)))
    with pytest.raises(ResourceError):
        export_tree(aset, "dot")


def test_unknown_export_format():
    with pytest.raises(InvalidArgumentError):
        export_tree(fast_attained(7, 2), "svg")


def test_json_fields():
    d = json.loads(export_tree(fast_attained(7, 3), "json"))
    assert d["form"] == "compressed" and d["e"] == 1
    assert [z["path"] for z in d["zeros"]] == [[3, 0, 3], [4, 6, 3]]


def test_swallowed_lucas_zero_p31():
    assert len(oracles.lucas_zero_indices(31)) > 0
    for lam in range(4):
        assert fast_attained(31, lam).zeros == ()
