import pytest
from sympy import factorint
from sympy.functions.combinatorial.numbers import mobius as sympy_mobius

from specp.hall import (
    MAX_WEIGHT,
    enumerate_basic,
    mobius,
    rank_crosscheck,
    weight_counts,
    witt_chi,
)


def test_mobius_table():
    for n in range(1, 101):
        assert mobius(n) == int(sympy_mobius(n)), n
    assert mobius(1) == 1 and mobius(12) == 0 and mobius(30) == -1
    with pytest.raises(ValueError):
        mobius(0)


def test_mobius_squarefree_sign():
    for n in range(2, 101):
        f = factorint(n)
        want = 0 if any(e > 1 for e in f.values()) else (-1) ** len(f)
        assert mobius(n) == want


def test_witt_examples():
    assert witt_chi(3, 3) == 8
    assert witt_chi(2, 3) == 3
    for d in range(0, 8):
        assert witt_chi(1, d) == d
    assert witt_chi(3, 4) == 20
    with pytest.raises(ValueError):
        witt_chi(0, 3)


@pytest.mark.parametrize("d", range(1, 7))
def test_enumeration_counts_match_witt(d):
    counts = weight_counts(d, MAX_WEIGHT)
    for n in range(1, MAX_WEIGHT + 1):
        assert counts[n] == witt_chi(n, d), (d, n)


def test_enumeration_examples():
    basis = enumerate_basic(3, 3)
    assert len(basis) == 14
    assert [b.render(basis) for b in basis[:6]] == ["x1", "x2", "x3", "[x2, x1]", "[x3, x1]", "[x3, x2]"]
    assert len(enumerate_basic(1, 4)) == 1
    assert sum(1 for b in enumerate_basic(4, 3) if b.weight == 3) == 20


def test_basic_commutator_rules():
    basis = enumerate_basic(4, 4)
    for c in basis:
        assert c.position == basis.index(c)
        if c.letter is not None:
            continue
        left, right = basis[c.left], basis[c.right]
        assert c.weight == left.weight + right.weight
        assert left.position > right.position
        if left.letter is None:
            assert right.position >= left.right
    # weights never decrease along the order and ties are lexicographic in (left, right)
    for a, b in zip(basis, basis[1:]):
        assert a.weight <= b.weight
        if a.weight == b.weight and a.letter is None:
            assert (a.left, a.right) < (b.left, b.right)


def test_weight_cap():
    with pytest.raises(ValueError):
        enumerate_basic(3, MAX_WEIGHT + 1)


@pytest.mark.parametrize("d, chi3, chi2", [(2, 2, 1), (3, 8, 3), (4, 20, 6)])
def test_rank_crosscheck(d, chi3, chi2):
    rc = rank_crosscheck(d)
    assert (rc.chi3, rc.chi2) == (chi3, chi2) and rc.consistent
    assert rc.to_json()["multiplier_rank"] == chi3


def test_rank_crosscheck_needs_two_letters():
    with pytest.raises(ValueError):
        rank_crosscheck(1)
