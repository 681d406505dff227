"""Class-2 power-commutator presentations with elementary abelian central part.

A presentation has main generators ``x_1..x_d`` and central generators
``u_1..u_r`` of order p.  Every element has the unique normal form
``x_1^a_1 ... x_d^a_d u_1^b_1 ... u_r^b_r`` with exponents in ``[0, p)``.

Conventions used everywhere in the package::

    [g, h] = g h g^-1 h^-1        ^g h = g h g^-1

``comm[(i, j)]`` (1-based, ``i > j``) is the u-vector of ``[x_i, x_j]`` and
``pow[i-1]`` the u-vector of ``x_i^p``.  Internally elements are plain tuples
``(a_1..a_d, b_1..b_r)``; :class:`GroupElement` wraps them for the public API.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from . import fp

Key = tuple[int, ...]


class PresentationError(ValueError):
    """Invalid presentation data."""


class PresentationMismatch(ValueError):
    """Elements from different presentations were combined."""


def pair_list(d: int) -> list[tuple[int, int]]:
    """All pairs ``(i, j)`` with ``d >= i > j >= 1`` in lexicographic order."""
    return [(i, j) for i in range(2, d + 1) for j in range(1, i)]


class PcPresentation:
    """Immutable class-<=2 pc presentation.

    Parameters
    ----------
    p, d, r:
        prime, number of main generators, number of central generators.
    comm:
        mapping ``(i, j) -> vector in F_p^r`` for ``i > j``; missing pairs are
        trivial commutators.
    pow:
        sequence of ``d`` vectors, ``x_i^p``; ``None`` means all trivial.
    allow_unreduced:
        accept central generators outside ``span(comm, pow)``.  Such a ``u``
        is a direct cyclic factor of the group.
    """

    def __init__(
        self,
        p: int,
        d: int,
        r: int,
        comm: Mapping[tuple[int, int], Sequence[int]] | None = None,
        pow: Sequence[Sequence[int]] | None = None,
        *,
        label: str = "",
        family: str | None = None,
        params: Mapping | None = None,
        allow_unreduced: bool = False,
    ):
        if not fp.is_prime(p):
            raise PresentationError(f"p={p} is not prime")
        if d < 0 or r < 0:
            raise PresentationError("generator counts must be non-negative")
        self.p, self.d, self.r = p, d, r
        comm = dict(comm or {})
        full: dict[tuple[int, int], tuple[int, ...]] = {}
        for (i, j), v in comm.items():
            if not (d >= i > j >= 1):
                raise PresentationError(f"commutator index ({i},{j}) must satisfy d >= i > j >= 1")
            if len(v) != r:
                raise PresentationError(f"commutator ({i},{j}) has length {len(v)}, expected {r}")
        for key in pair_list(d):
            full[key] = tuple(x % p for x in comm.get(key, (0,) * r))
        self.comm = full
        if pow is None:
            pow = [(0,) * r] * d
        if len(pow) != d:
            raise PresentationError(f"need {d} power vectors, got {len(pow)}")
        for i, v in enumerate(pow):
            if len(v) != r:
                raise PresentationError(f"power vector {i + 1} has length {len(v)}, expected {r}")
        self.pow = tuple(tuple(x % p for x in v) for v in pow)
        self.label = label
        self.family = family
        self.params = dict(params or {})
        span = fp.fp_span_dim(list(self.comm.values()) + list(self.pow), p) if r else 0
        self.reduced = span == r
        if not self.reduced and not allow_unreduced:
            raise PresentationError(
                f"central generators span a space of dimension {span} < r={r}; "
                "pass allow_unreduced=True to keep the extra direct factors"
            )
        # dense antisymmetric table, 0-based: C[i][j] = u-vector of [x_i, x_j]
        zero = (0,) * r
        C = [[zero] * d for _ in range(d)]
        for (i, j), v in self.comm.items():
            C[i - 1][j - 1] = v
            C[j - 1][i - 1] = tuple((-x) % p for x in v)
        self._C = C
        self._pairs = [(i - 1, j - 1, v) for (i, j), v in self.comm.items() if any(v)]

    # -- identity / comparison -------------------------------------------
    def _data(self):
        return (self.p, self.d, self.r, tuple(sorted(self.comm.items())), self.pow)

    def __eq__(self, other):
        return isinstance(other, PcPresentation) and self._data() == other._data()

    def __hash__(self):
        return hash(self._data())

    def __repr__(self):
        name = self.label or "PcPresentation"
        return f"<{name}: p={self.p} d={self.d} r={self.r}>"

    @property
    def n(self) -> int:
        return self.d + self.r

    @property
    def order(self) -> int:
        return self.p ** (self.d + self.r)

    @property
    def log_order(self) -> int:
        return self.d + self.r

    # -- raw tuple arithmetic -------------------------------------------
    def comm_vec(self, a: Sequence[int], c: Sequence[int]) -> list[int]:
        """u-vector of ``[x^a, x^c]`` (main parts only matter in class 2)."""
        p, r = self.p, self.r
        out = [0] * r
        for i, j, v in self._pairs:
            coef = a[i] * c[j] - c[i] * a[j]
            if coef % p:
                for k in range(r):
                    if v[k]:
                        out[k] += coef * v[k]
        return [x % p for x in out]

    def mul(self, x: Key, y: Key) -> Key:
        p, d, r = self.p, self.d, self.r
        b = [x[d + k] + y[d + k] for k in range(r)]
        a = []
        for i in range(d):
            s = x[i] + y[i]
            if s >= p:
                s -= p
                pi = self.pow[i]
                for k in range(r):
                    b[k] += pi[k]
            a.append(s)
        # moving x_i^{y_i} left past x_j^{x_j} (j > i) leaves [x_j, x_i]^{x_j y_i}
        for i, j, v in self._pairs:  # i > j
            coef = x[i] * y[j]
            if coef:
                for k in range(r):
                    if v[k]:
                        b[k] += coef * v[k]
        return tuple(a) + tuple(z % p for z in b)

    def conj(self, g: Key, h: Key) -> Key:
        """``g h g^-1 = [g, h] h``."""
        d = self.d
        c = self.comm_vec(g[:d], h[:d])
        if not any(c):
            return h
        p = self.p
        return h[:d] + tuple((h[d + k] + c[k]) % p for k in range(self.r))

    def power_key(self, x: Key, n: int) -> Key:
        if n < 0:
            x = self.inverse_key(x)
            n = -n
        result = self.identity_key
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inverse_key(self, x: Key) -> Key:
        # exponent divides p^2
        return self.power_key(x, self.p * self.p - 1)

    def commutator_key(self, g: Key, h: Key) -> Key:
        ghg = self.mul(self.mul(g, h), self.inverse_key(g))
        return self.mul(ghg, self.inverse_key(h))

    @property
    def identity_key(self) -> Key:
        return (0,) * self.n

    def gen_key(self, k: int) -> Key:
        """0-based pc generator ``k`` (``x``'s first, then ``u``'s)."""
        e = [0] * self.n
        e[k] = 1
        return tuple(e)

    def keys(self) -> Iterator[Key]:
        """All normal forms, lexicographically."""
        return itertools.product(range(self.p), repeat=self.n)

    def main_keys(self) -> Iterator[Key]:
        """Coset representatives of the central part (central exponents 0)."""
        zero = (0,) * self.r
        for a in itertools.product(range(self.p), repeat=self.d):
            yield a + zero

    # -- public element API ----------------------------------------------
    def element(self, a: Sequence[int] = (), b: Sequence[int] = ()) -> "GroupElement":
        a = tuple(a) + (0,) * (self.d - len(a))
        b = tuple(b) + (0,) * (self.r - len(b))
        if len(a) != self.d or len(b) != self.r:
            raise PresentationError("exponent vectors too long")
        return GroupElement(self, tuple(x % self.p for x in a + b))

    def from_key(self, key: Key) -> "GroupElement":
        return GroupElement(self, tuple(key))

    @property
    def identity(self) -> "GroupElement":
        return GroupElement(self, self.identity_key)

    def x(self, i: int) -> "GroupElement":
        """Main generator ``x_i`` (1-based)."""
        if not 1 <= i <= self.d:
            raise IndexError(i)
        return GroupElement(self, self.gen_key(i - 1))

    def u(self, a: int) -> "GroupElement":
        """Central generator ``u_a`` (1-based)."""
        if not 1 <= a <= self.r:
            raise IndexError(a)
        return GroupElement(self, self.gen_key(self.d + a - 1))

    def elements(self) -> Iterator["GroupElement"]:
        for k in self.keys():
            yield GroupElement(self, k)

    # -- linear data ------------------------------------------------------
    def derived_rows(self) -> list[tuple[int, ...]]:
        return [v for v in self.comm.values() if any(v)]

    def power_rows(self) -> list[tuple[int, ...]]:
        return [v for v in self.pow if any(v)]

    @property
    def derived_rank(self) -> int:
        return fp.fp_span_dim(self.derived_rows(), self.p) if self.r else 0

    @property
    def t(self) -> int:
        """log_p |G^p|."""
        return fp.fp_span_dim(self.power_rows(), self.p) if self.r else 0

    def center_main_kernel(self) -> list[list[int]]:
        """Basis of ``{a in F_p^d : [x^a, x_k] = 1 for all k}``."""
        d, r, p = self.d, self.r, self.p
        if d == 0:
            return []
        if r == 0:
            return [[int(i == j) for j in range(d)] for i in range(d)]
        # equations: for each k and u-coordinate c, sum_i a_i C[i][k][c] = 0
        rows = []
        for k in range(d):
            for c in range(r):
                rows.append([self._C[i][k][c] for i in range(d)])
        return fp.nullspace(rows, p, d)

    @property
    def is_abelian(self) -> bool:
        return not self._pairs


@dataclass(frozen=True)
class GroupElement:
    presentation: PcPresentation = field(compare=False, repr=False)
    key: Key

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.key == other.key and self.presentation == other.presentation

    def __hash__(self):
        return hash(self.key)

    @property
    def a(self) -> Key:
        return self.key[: self.presentation.d]

    @property
    def b(self) -> Key:
        return self.key[self.presentation.d :]

    def _check(self, other: "GroupElement"):
        if other.presentation is not self.presentation and other.presentation != self.presentation:
            raise PresentationMismatch("elements belong to different presentations")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __pow__(self, n: int) -> "GroupElement":
        return power(self, n)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def is_identity(self) -> bool:
        return not any(self.key)

    def is_central(self) -> bool:
        return not any(self.a) or not any(
            any(self.presentation.comm_vec(self.a, self.presentation.gen_key(k)[: self.presentation.d]))
            for k in range(self.presentation.d)
        )

    def __repr__(self):
        P = self.presentation
        parts = [f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(self.a) if e]
        parts += [f"u{i + 1}^{e}" if e > 1 else f"u{i + 1}" for i, e in enumerate(self.b) if e]
        return "*".join(parts) if parts else "1"


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """Normal form of ``g h``."""
    g._check(h)
    return GroupElement(g.presentation, g.presentation.mul(g.key, h.key))


def power(g: GroupElement, n: int) -> GroupElement:
    return GroupElement(g.presentation, g.presentation.power_key(g.key, n))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.presentation, g.presentation.inverse_key(g.key))


def commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    """``[g, h] = g h g^-1 h^-1``."""
    g._check(h)
    return GroupElement(g.presentation, g.presentation.commutator_key(g.key, h.key))


def conjugate(g: GroupElement, h: GroupElement) -> GroupElement:
    """``^g h = g h g^-1``."""
    g._check(h)
    return GroupElement(g.presentation, g.presentation.conj(g.key, h.key))


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupDescription:
    """A subgroup given by generators, with F_p row data where it applies.

    ``central_rows`` is a row-reduced basis of the subgroup inside the central
    part ``F_p^r`` when the subgroup lies there, else None.  ``main_rows`` is a
    row-reduced basis of its image in ``F_p^d`` (the main exponents).
    """

    kind: str
    presentation: PcPresentation = field(repr=False, compare=False)
    generators: tuple[GroupElement, ...]
    order: int
    central_rows: tuple[tuple[int, ...], ...] | None = None
    main_rows: tuple[tuple[int, ...], ...] = ()

    @property
    def dimension(self) -> int:
        p, n, e = self.presentation.p, self.order, 0
        while n % p == 0:
            n //= p
            e += 1
        return e

    @property
    def is_central_part(self) -> bool:
        return self.central_rows is not None

    def contains(self, g: GroupElement) -> bool:
        P = self.presentation
        if self.central_rows is None:
            # general subgroup: main exponents must lie in the image, then close up
            if self.main_rows and not fp.in_span(g.a, [list(r) for r in self.main_rows],
                                                 [next(i for i, x in enumerate(r) if x) for r in self.main_rows], P.p):
                return False
            return g.key in self._members()
        if any(g.a):
            return False
        basis = [list(r) for r in self.central_rows]
        pivots = [next(i for i, x in enumerate(r) if x) for r in basis]
        return fp.in_span(g.b, basis, pivots, P.p)


    def _members(self) -> frozenset:
        P = self.presentation
        seen = {P.identity_key}
        frontier = list(seen)
        gens = [h.key for h in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for h in gens:
                    y = P.mul(x, h)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)


def central_subgroup(P: PcPresentation, rows: Sequence[Sequence[int]], kind: str = "central") -> SubgroupDescription:
    basis, _ = fp.rref(rows, P.p, P.r) if P.r else ([], [])
    gens = tuple(P.element((), b) for b in basis)
    return SubgroupDescription(kind, P, gens, P.p ** len(basis), tuple(tuple(b) for b in basis))


def derived_subgroup(P: PcPresentation) -> SubgroupDescription:
    return central_subgroup(P, P.derived_rows(), "derived")


def power_subgroup(P: PcPresentation) -> SubgroupDescription:
    """``G^p``; for odd p and class 2 it is ``{x^a}^p = sum a_i pi_i``."""
    return central_subgroup(P, P.power_rows(), "verbal-p")


def frattini_subgroup(P: PcPresentation) -> SubgroupDescription:
    return central_subgroup(P, P.derived_rows() + P.power_rows(), "frattini")


def center(P: PcPresentation) -> SubgroupDescription:
    ker = P.center_main_kernel()
    gens = tuple(P.element(a) for a in ker) + tuple(P.u(k) for k in range(1, P.r + 1))
    order = P.p ** (len(ker) + P.r)
    ident = [[int(i == j) for j in range(P.r)] for i in range(P.r)]
    central = tuple(tuple(r) for r in ident) if not ker else None
    main = tuple(tuple(r) for r in fp.rref(ker, P.p, P.d)[0]) if ker else ()
    return SubgroupDescription("center", P, gens, order, central, main)


# -- structure --------------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    order: int
    log_order: int
    is_special: bool
    exponent: int
    t: int
    d_derived: int
    center_log_order: int
    abelian: bool
    out_of_scope: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "log_order": self.log_order,
            "is_special": self.is_special,
            "exponent": self.exponent,
            "t": self.t,
            "d_derived": self.d_derived,
            "center_log_order": self.center_log_order,
            "abelian": self.abelian,
            "out_of_scope": list(self.out_of_scope),
        }


def group_exponent(P: PcPresentation) -> int:
    if P.n == 0:
        return 1
    if P.p != 2:
        # g^p = x^(sum a_i pi_i) for odd p in class 2
        return P.p if not P.power_rows() else P.p**2
    best = 1
    for k in P.keys():
        o, x = 1, k
        while any(x):
            x = P.mul(x, k)
            o += 1
        best = max(best, o)
    return best


def scope_notes(P: PcPresentation) -> tuple[str, ...]:
    notes = []
    if P.p == 2:
        notes.append("p = 2")
    if P.d < 3:
        notes.append("d < 3")
    if P.is_abelian:
        notes.append("abelian")
    return tuple(notes)


def structure_report(P: PcPresentation) -> StructureReport:
    dG = P.derived_rank
    if 2 * dG > P.d * (P.d - 1):
        raise AssertionError("d(G') exceeds d(d-1)/2")
    ker = P.center_main_kernel()
    special = (
        P.n > 0 and not ker and dG == P.r and dG > 0 and P.reduced
    )
    notes = scope_notes(P)
    if not special:
        notes += ("not special",)
    return StructureReport(
        order=P.order,
        log_order=P.log_order,
        is_special=special,
        exponent=group_exponent(P),
        t=P.t,
        d_derived=dG,
        center_log_order=len(ker) + P.r,
        abelian=P.is_abelian,
        out_of_scope=notes,
    )


def quotient_by_central(P: PcPresentation, S: SubgroupDescription | Sequence[Sequence[int]]) -> PcPresentation:
    """Presentation of ``G/S`` for a subgroup ``S`` of the central part."""
    if isinstance(S, SubgroupDescription):
        if S.central_rows is None:
            raise PresentationError("quotient needs a subgroup of the central part")
        rows = [list(r) for r in S.central_rows]
    else:
        rows = [list(r) for r in S]
    p, r = P.p, P.r
    basis, pivots = fp.rref(rows, p, r) if rows and r else ([], [])
    keep = [c for c in range(r) if c not in set(pivots)]

    def project(v):
        w = fp.reduce_mod_span(v, basis, pivots, p)
        return tuple(w[c] for c in keep)

    comm = {k: project(v) for k, v in P.comm.items()}
    pw = [project(v) for v in P.pow]
    label = f"{P.label}/K" if P.label else ""
    return PcPresentation(p, P.d, len(keep), comm, pw, label=label, family=None,
                          params={"parent": P.label, "kernel_dim": len(basis)})
