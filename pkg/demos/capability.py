"""Capability through the exterior center, with the closed-form predictions alongside."""

from specp import capability_report, exp_p2_family, exterior_center, non_capable_witness, power

P = non_capable_witness(3, 3)
Z = exterior_center(P)
print("non-capable witness: exterior center of order", Z.order, "contains x1^3:", Z.contains(power(P.x(1), 3)))

for t in range(4):
    rep = capability_report(exp_p2_family(3, 3, t=t))
    checks = ", ".join(f"{c['name']}={'ok' if c['consistent'] else 'FAIL'}" for c in rep.cross_checks if c["applies"])
    print(f"t={t}: capable={rep.capable}  [{checks}]")
