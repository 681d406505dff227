import itertools
import random

import pytest

from specp import fp
from specp.families import (
    abelian,
    build_family,
    exp_p2_family,
    extraspecial,
    free_special,
    non_capable_witness,
    rank_deficient,
)
from specp.multiplier import (
    FORMULA_LABELS,
    HypothesisError,
    formula_suite,
    ker_beta,
    multiplier_fragment,
    multiplier_log_order,
    multiplier_order,
    power_tensor_subgroup,
    psi2,
    psi2_image,
    rank_kind_of,
)
from specp.pcgroup import PcPresentation, center, quotient_by_central, structure_report
from specp.wedge import order_p_central_subgroups


def test_psi2_free_special_expansion():
    # -u1 (x) x3 + u2 (x) x2 - u3 (x) x1 with tensor index a*d + k
    assert psi2(free_special(3, 3), 1, 2, 3) == [0, 0, 2, 0, 1, 0, 2, 0, 0]


def test_psi2_rank_deficient_nonzero():
    assert any(psi2(rank_deficient(3, 3, (1, 2), alpha=(1, 1)), 1, 2, 3))


@pytest.mark.parametrize("d", [3, 4, 5])
def test_psi2_vanishes_on_repeated_arguments(d):
    for P in (free_special(d, 3), rank_deficient(d, 3), exp_p2_family(d, 3, t=2)):
        for i, j, k in itertools.product(range(1, d + 1), repeat=3):
            if len({i, j, k}) < 3:
                assert not any(psi2(P, i, j, k)), (i, j, k)


def test_psi2_alternating_under_swaps():
    P = free_special(4, 5)
    for i, j, k in itertools.permutations(range(1, 5), 3):
        a, b = psi2(P, i, j, k), psi2(P, j, i, k)
        assert all((x + y) % 5 == 0 for x, y in zip(a, b))


def test_psi2_image_dimensions():
    assert len(psi2_image(free_special(3, 3))) == 1
    assert len(psi2_image(rank_deficient(4, 3))) == 4
    assert len(psi2_image(abelian(3, [1, 1, 1]))) == 0


def test_power_tensor_dimensions():
    assert power_tensor_subgroup(free_special(3, 3)) == []
    assert len(power_tensor_subgroup(non_capable_witness(3, 3))) == 3
    assert len(power_tensor_subgroup(exp_p2_family(3, 3, t=3))) == 6


@pytest.mark.parametrize("P", [
    non_capable_witness(3, 3),
    exp_p2_family(3, 3, t=2),
    exp_p2_family(3, 3, t=3),
    rank_deficient(3, 3, pi={1: (1, 0), 3: (1, 1)}),
])
def test_power_tensor_methods_agree(P):
    # coset representatives and the symmetric generators against the full group
    full = power_tensor_subgroup(P, "elements")
    assert power_tensor_subgroup(P, "cosets") == full
    assert power_tensor_subgroup(P, "generators") == full


def test_power_tensor_unknown_method():
    with pytest.raises(ValueError):
        power_tensor_subgroup(free_special(3, 3), "nope")


def test_ker_beta_examples():
    K = ker_beta(free_special(3, 3))
    assert K.dim_ker_beta == 1 and K.m_prime == 0
    K = ker_beta(non_capable_witness(3, 3))
    assert K.dim_ker_beta == 4 and K.dim_intersection == 0
    K = ker_beta(rank_deficient(3, 3))
    assert K.dim_ker_beta == 1 and K.m == 0


def test_multiplier_orders():
    assert multiplier_order(free_special(3, 3)) == 3**8
    assert multiplier_order(rank_deficient(3, 3)) == 3**6
    assert multiplier_order(non_capable_witness(3, 3)) == 3**5
    assert multiplier_log_order(free_special(4, 3)) == 20
    assert multiplier_log_order(abelian(3, [2, 1])) == 1
    assert multiplier_log_order(abelian(3, [1, 1, 1])) == 3


def test_hypotheses_are_enforced():
    # x1^p = u2 lies outside G' = <u1>
    big = PcPresentation(3, 2, 2, {(2, 1): (1, 0)}, [(0, 1), (0, 0)])
    with pytest.raises(HypothesisError):
        multiplier_log_order(big)
    # E x Z_p with exponent p^2 still has G^p inside G'
    assert multiplier_log_order(extraspecial(3, 9, 81)) == 2
    Q = PcPresentation(2, 2, 1, {(2, 1): (1,)})
    with pytest.raises(HypothesisError):
        ker_beta(Q)


def test_formula_suite_examples():
    get = lambda preds, q: next(x.value for x in preds if x.quantity == q)
    assert get(formula_suite(4, 3, 0, "rank-full"), "M") == 20
    assert get(formula_suite(3, 3, 1, "rank-full"), "M") == 5
    assert get(formula_suite(3, 3, 0, "rank-deficient"), "M") == 6
    for d, t, kind in itertools.product([3, 4, 5], range(4), ["rank-full", "rank-deficient"]):
        for pred in formula_suite(d, 3, t, kind):
            assert pred.label in FORMULA_LABELS
    with pytest.raises(ValueError):
        formula_suite(2, 3, 0)
    with pytest.raises(ValueError):
        formula_suite(3, 3, 4)


@pytest.mark.parametrize("kind", ["rank-full", "rank-deficient"])
@pytest.mark.parametrize("d", [3, 4])
@pytest.mark.parametrize("p", [3, 5])
def test_power_tensor_dimension_formula(kind, d, p):
    r = d * (d - 1) // 2 - (kind == "rank-deficient")
    for t in range(min(d, r) + 1):
        P = build_family(kind, d, p, t)
        assert len(power_tensor_subgroup(P)) == t * (2 * d - t + 1) // 2


def test_power_tensor_formula_random_tables():
    rnd = random.Random(7)
    for _ in range(150):
        d = rnd.choice([3, 4])
        r = d * (d - 1) // 2
        pi = [[rnd.randrange(3) for _ in range(r)] for _ in range(d)]
        P = exp_p2_family(d, 3, pi)
        t = P.t
        assert len(power_tensor_subgroup(P)) == t * (2 * d - t + 1) // 2


@pytest.mark.parametrize("kind", ["rank-full", "rank-deficient"])
@pytest.mark.parametrize("d", [3, 4, 5])
def test_psi2_meets_power_tensors_trivially_below_t3(kind, d):
    for t in range(min(d, 2) + 1):
        assert ker_beta(build_family(kind, d, 3, t)).dim_intersection == 0


@pytest.mark.parametrize("d", [3, 4, 5])
def test_psi2_meets_canonical_power_tensors_at_t3(d):
    # with x_i^p = u_i for i <= 3 the triple (1, 2, 3) lands inside the power tensors
    P = exp_p2_family(d, 3, t=3)
    K = ker_beta(P)
    assert K.dim_intersection == 1
    assert fp.in_span(psi2(P, 1, 2, 3), K.power_tensors, fp.rref(K.power_tensors, 3, P.r * P.d)[1], 3)


def test_generic_tables_meet_trivially():
    rnd = random.Random(11)
    hits = 0
    for _ in range(100):
        pi = [[rnd.randrange(3) for _ in range(6)] for _ in range(4)]
        hits += ker_beta(exp_p2_family(4, 3, pi)).dim_intersection
    assert hits == 0


def test_multiplier_rank_matches_formula_away_from_intersection():
    for d, t in [(3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2), (5, 0)]:
        P = exp_p2_family(d, 3, t=t)
        pred = next(x.value for x in formula_suite(d, 3, t) if x.quantity == "M")
        assert multiplier_log_order(P) == pred


def test_multiplier_drops_by_intersection_at_canonical_t3():
    P = exp_p2_family(3, 3, t=3)
    pred = next(x.value for x in formula_suite(3, 3, 3) if x.quantity == "M")
    assert multiplier_log_order(P) == pred + 1 == 3


def test_central_quotients_change_t_by_at_most_one():
    for P in (free_special(3, 3), non_capable_witness(3, 3), exp_p2_family(3, 3, t=2)):
        t = P.t
        for row in order_p_central_subgroups(P):
            Q = quotient_by_central(P, [row])
            assert Q.t in (t, t - 1)


def test_fragment_shape():
    frag = multiplier_fragment(non_capable_witness(3, 3))
    assert set(frag) >= {"dims", "m", "m_prime", "multiplier_order", "formula_predictions", "flags"}
    assert frag["dims"] == {"tensor_space": 9, "psi2_image": 1, "P": 3, "ker_beta": 4, "intersection": 0}
    assert frag["multiplier_order"] == "3^5"
    frag = multiplier_fragment(exp_p2_family(3, 3, t=3))
    assert "psi2-image meets power tensors" in frag["flags"]


def test_rank_kind():
    assert rank_kind_of(free_special(3, 3)) == "rank-full"
    assert rank_kind_of(rank_deficient(3, 3)) == "rank-deficient"
    assert rank_kind_of(abelian(3, [1, 1, 1])) is None
    assert center(free_special(3, 3)).order == 27
    assert structure_report(rank_deficient(3, 3)).is_special
