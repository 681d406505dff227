"""Exterior and tensor squares by symbolic expansion, checked against the table oracle."""

from specp import extraspecial, free_special, j2_and_nabla, non_capable_witness, oracle_square, rank_deficient, square

for P in (free_special(3, 3), rank_deficient(3, 3), non_capable_witness(3, 3)):
    W, T = square(P, "wedge"), square(P, "tensor")
    jn = j2_and_nabla(T)
    print(P.label)
    print("  exterior", W.structure, "certified" if W.certified else "UNCERTIFIED", "M =", W.kernel_structure())
    print("  tensor  ", T.structure, "J2 =", jn.j2, "nabla =", jn.nabla)

# the oracle builds both squares from the full multiplication table
E = extraspecial(3, 9)
for mode in ("wedge", "tensor"):
    S, O = square(E, mode), oracle_square(E, mode)
    print(f"extraspecial 27 exp 9 {mode}: symbolic {S.structure}, oracle {O.structure}")
