"""Build, multiply and serialize class-2 pc presentations."""

from pathlib import Path

from specp import commutator, emit_presentation, free_special, multiply, parse_presentation, power, structure_report
from specp.presentation_io import load_presentation

DATA = Path(__file__).parent / "data"

G = free_special(3, 3)
x1, x2, x3 = G.x(1), G.x(2), G.x(3)
print("group of order", G.order, "with", G.d, "generators and", G.r, "central letters")

# [g,h] = g h g^-1 h^-1, so [x2,x1] is the first central letter
print("[x2,x1] =", commutator(x2, x1))
print("x2*x1   =", multiply(x2, x1))
print("(x1 x2)^3 =", power(multiply(x1, x2), 3))

text = emit_presentation(G)
print(text)
assert emit_presentation(parse_presentation(text)) == text

for name in ("non_capable_3_3.pg", "rank_full_t3_generic.pg"):
    P = load_presentation(DATA / name)
    print(name, structure_report(P).to_json())
