"""Schur multiplier orders from the kernel of the commutator map on the tensor space."""

from pathlib import Path

from specp import exp_p2_family, free_special, ker_beta, multiplier_order, psi2, rank_deficient
from specp.multiplier import formula_suite, multiplier_log_order
from specp.presentation_io import load_presentation

DATA = Path(__file__).parent / "data"

G = free_special(3, 3)
print("psi2(1,2,3) on the free special group:", psi2(G, 1, 2, 3))
print("kernel dims:", ker_beta(G).dims(), "|M| =", multiplier_order(G))

# the closed form subtracts dim ker beta from rd + d(d-1)/2 - r
for t in range(4):
    P = exp_p2_family(3, 3, t=t)
    want = next(x.value for x in formula_suite(3, 3, t) if x.label == "multiplier.rank-full")
    print(f"rank-full t={t}: log|M| = {multiplier_log_order(P)}, closed form {want}")

P = rank_deficient(3, 3)
print("rank-deficient d=3:", ker_beta(P).dims(), "log|M| =", multiplier_log_order(P))

# with x_i^p = u_i for every i, psi2(1,2,3) lands in the power tensors and
# the closed form undercounts |M| by one factor of p; a generic table does not
for name in ("rank_full_t3_canonical.pg", "rank_full_t3_generic.pg"):
    P = load_presentation(DATA / name)
    kb = ker_beta(P)
    print(f"{name}: intersection dim {kb.dim_intersection}, log|M| = {multiplier_log_order(P)}")
