import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from specp import fp
from specp.abelian import (
    AbelianStructure,
    PresentedAbelianGroup,
    RelationLattice,
    dump_rows,
    gamma_functor,
    invariant_factors,
    load_rows,
    multiplier_abelian,
    smith_normal_form,
    structure_of_subquotient,
)

small_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-12, 12), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_snf_identity_is_trivial():
    assert smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).structure.is_trivial()


def test_snf_two_by_two_example():
    # Z^2 / <(2,4), (6,8)> has order |det| = 8 and is not cyclic (all entries even)
    res = smith_normal_form([[2, 4], [6, 8]])
    assert res.structure.invariants == (2, 4)


def test_snf_two_by_two_example_by_enumeration():
    # enumerate Z^2 mod 8 and count classes modulo the row lattice
    lat = RelationLattice(2)
    for r in ([2, 4], [6, 8]):
        lat.add(r)
    reps = {tuple(v) for v in itertools.product(range(8), repeat=2) if lat.contains(list(v))}
    assert 64 // len(reps) == 8
    # the lattice is <(2,4), (0,4)>, so (0, 1) has order 4 and (1, 0) order 2
    assert not lat.contains([0, 2]) and lat.contains([0, 4])
    assert lat.contains([2, 0]) and not lat.contains([1, 0])


def test_snf_zero_matrix_is_free():
    res = smith_normal_form([[0, 0]])
    assert res.structure.free_rank == 2 and res.structure.invariants == ()


def test_snf_empty_matrix():
    assert smith_normal_form([], ncols=3).structure.free_rank == 3


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_sympy(M):
    ours = sorted(x for x in smith_normal_form(M).diagonal if x)
    S = sympy_snf(Matrix(M), domain=ZZ)
    theirs = sorted(abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0)
    assert ours == theirs


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_snf_transforms_and_divisibility(M):
    res = smith_normal_form(M, transforms=True)
    assert res.verify(M)
    diag = [x for x in res.diagonal if x]
    assert all(b % a == 0 for a, b in zip(diag, diag[1:]))


@settings(max_examples=60, deadline=None)
@given(small_matrices, st.randoms(use_true_random=False))
def test_cokernel_invariant_under_unimodular_shuffles(M, rnd):
    n = len(M[0])
    before = invariant_factors(M, n)
    rows = [list(r) for r in M]
    rnd.shuffle(rows)
    # random column operations col_i += c col_j keep the cokernel
    for _ in range(4):
        i, j = rnd.randrange(n), rnd.randrange(n)
        if i != j:
            c = rnd.randint(-3, 3)
            for r in rows:
                r[i] += c * r[j]
    assert invariant_factors(rows, n) == before


@settings(max_examples=80, deadline=None)
@given(small_matrices)
def test_relation_lattice_index_matches_snf(M):
    n = len(M[0])
    lat = RelationLattice(n)
    for r in M:
        lat.add(r)
    A = invariant_factors(M, n)
    if A.free_rank:
        assert lat.index() is None
    else:
        assert lat.index() == A.order


def test_presented_group_after_modular_reduction():
    # once the lattice is full rank its rows are stored mod the index;
    # the structure must still be computed with the implied relations
    G = PresentedAbelianGroup(3, [[1, 1, 0], [0, 3, 2], [0, 0, 1], [0, 0, 3], [0, 3, 0]])
    assert G.structure().invariants == (3,)
    G2 = PresentedAbelianGroup(3, G.lattice.generators())
    assert G2.structure() == G.structure()


def test_subgroup_of_multiples():
    # p G inside G = Z_{p^2}^k is Z_p^k
    p, k = 3, 3
    G = PresentedAbelianGroup(k, [[p * p if i == j else 0 for j in range(k)] for i in range(k)])
    gens = [[p if i == j else 0 for j in range(k)] for i in range(k)]
    assert structure_of_subquotient(G, gens) == AbelianStructure((p,) * k)


def test_subgroup_full_generating_set():
    G = PresentedAbelianGroup(2, [[9, 0], [0, 3]])
    assert structure_of_subquotient(G, [[1, 0], [0, 1]]) == G.structure()


def test_subgroup_structure_mixed():
    # Z_9 + Z_3, subgroup generated by (3, 1) is cyclic of order 3; by (1, 1) order 9
    G = PresentedAbelianGroup(2, [[9, 0], [0, 3]])
    assert G.subgroup_structure([[3, 1]]) == AbelianStructure((3,))
    assert G.subgroup_structure([[1, 1]]) == AbelianStructure((9,))
    assert G.element_order([1, 1]) == 9


def test_coordinates_detect_zero():
    G = PresentedAbelianGroup(2, [[2, 4], [6, 8]])
    assert G.is_zero([2, 4]) and G.is_zero([8, 12])
    assert not G.is_zero([1, 0])


def test_multiplier_abelian_examples():
    assert multiplier_abelian((1, 1, 1), 3) == AbelianStructure((3, 3, 3))
    assert multiplier_abelian((2,), 3).is_trivial()
    assert multiplier_abelian((2, 1), 3) == AbelianStructure((3,))
    assert multiplier_abelian((), 5).is_trivial()


@pytest.mark.parametrize("d", range(1, 7))
def test_multiplier_of_elementary_has_binomial_rank(d):
    M = multiplier_abelian((1,) * d, 3)
    assert M.rank == d * (d - 1) // 2 and M.is_elementary(3)


def test_multiplier_abelian_rejects_unsorted():
    with pytest.raises(ValueError):
        multiplier_abelian((1, 2), 3)


def test_gamma_functor():
    # odd order: Gamma(Z_n) = Z_n, and Gamma(A + B) = Gamma(A) + Gamma(B) + A (x) B
    assert gamma_functor(AbelianStructure((3,))) == AbelianStructure((3,))
    assert gamma_functor(AbelianStructure((3, 3, 3))).log_order(3) == 6
    assert gamma_functor(AbelianStructure((3, 9))) == AbelianStructure((3, 3, 9))


def test_structure_basics():
    A = AbelianStructure.from_cyclic_orders([9, 3, 3])
    assert A.invariants == (3, 3, 9) and A.order == 81 and A.exponent == 9
    assert str(A) == "Z3^2 x Z9"
    assert AbelianStructure.from_json(A.to_json()) == A
    assert str(AbelianStructure(())) == "1"
    with pytest.raises(ValueError):
        AbelianStructure((3, 4))


def test_rows_text_round_trip():
    rows = [[1, -2, 0], [0, 0, 7]]
    assert load_rows(dump_rows(rows)) == rows


def test_fp_helpers():
    p = 5
    assert fp.fp_span_dim([], p) == 0
    assert fp.fp_span_dim([[1, 0, 0], [0, 1, 0], [0, 0, 1]], p) == 3
    rows = [[1, 2, 3], [2, 4, 6]]
    assert fp.rank(rows, p) == 1
    for v in fp.nullspace(rows, p, 3):
        assert all(sum(a * b for a, b in zip(r, v)) % p == 0 for r in rows)
    assert len(fp.nullspace(rows, p, 3)) == 2
    assert fp.intersection_dim([[1, 0, 0], [0, 1, 0]], [[0, 1, 0], [0, 0, 1]], p) == 1
    assert [n for n in range(20) if fp.is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_left_nullspace_random():
    rnd = random.Random(1)
    p = 3
    for _ in range(20):
        M = [[rnd.randrange(p) for _ in range(4)] for _ in range(6)]
        for v in fp.left_nullspace(M, p):
            assert all(sum(v[i] * M[i][j] for i in range(6)) % p == 0 for j in range(4))
        assert len(fp.left_nullspace(M, p)) == 6 - fp.rank(M, p)
