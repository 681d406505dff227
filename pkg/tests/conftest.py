import functools

from specp import families
from specp.oracle import oracle_square
from specp.wedge import square

# groups of order <= 3^4 used for the oracle comparison, by name
ORACLE_GROUPS = {
    "trivial": lambda: families.trivial(3),
    "Z3": lambda: families.abelian(3, [1]),
    "Z3^2": lambda: families.abelian(3, [1, 1]),
    "Z9+Z3": lambda: families.abelian(3, [2, 1]),
    "E27-exp3": lambda: families.extraspecial(3),
    "E27-exp9": lambda: families.extraspecial(3, 9),
    "E81-exp3": lambda: families.extraspecial(3, 3, 81),
    "E81-exp9": lambda: families.extraspecial(3, 9, 81),
}


@functools.lru_cache(maxsize=None)
def oracle_pair(name: str, mode: str):
    """(symbolic, oracle) squares of a named small group, computed once per session."""
    P = ORACLE_GROUPS[name]()
    return square(P, mode), oracle_square(P, mode)


@functools.lru_cache(maxsize=None)
def cached_square(family: str, d: int, p: int, t: int, mode: str):
    return square(families.build_family(family, d, p, t), mode)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
