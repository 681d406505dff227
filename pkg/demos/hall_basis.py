"""Basic commutators and the Witt count of weight-3 ones, which equals the multiplier rank."""

from specp import enumerate_basic, rank_crosscheck, witt_chi

basis = enumerate_basic(3, 3)
for b in basis:
    print(b.weight, b.render(basis))

for d in range(2, 7):
    print(f"d={d}: chi3 = {witt_chi(3, d)}", rank_crosscheck(d).to_json() if d <= 4 else "")
