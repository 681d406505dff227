"""Nonabelian exterior and tensor squares of class-2 groups.

``G (x) G`` is presented on symbols ``y_i . y_j`` for every ordered pair of pc
generators.  :func:`expand` rewrites ``g . h`` for arbitrary elements into
these symbols using the two defining relations

    g g' . h = (^g g' . ^g h)(g . h)        g . h h' = (g . h)(^h g . ^h h')

with the first letter of the normal form split off at each step.  The
relation lattice is then saturated with instances of the defining relations
until the order of the presented abelian group drops to an independently
known target (``|M(G)| |G'|`` for the exterior square, times ``|Gamma(G^ab)|``
for the tensor square).  Every instance is a consequence of the defining
relations, so the presented group always maps onto the true square and an
order match certifies the isomorphism.
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import fp
from .abelian import (
    AbelianStructure,
    PresentedAbelianGroup,
    RelationLattice,
    gamma_functor,
)
from .multiplier import abelian_invariants, multiplier_log_order
from .pcgroup import (
    GroupElement,
    Key,
    PcPresentation,
    SubgroupDescription,
    center,
    quotient_by_central,
    structure_report,
)

MODES = ("wedge", "tensor")


class SoundnessError(AssertionError):
    """The presented square became smaller than its target order."""


class UncertifiedError(RuntimeError):
    """An operation needed a certified square."""


class FormalSum(dict):
    """Integer combination of symbols, ``{symbol index: coefficient}``."""

    def add(self, other: dict, scale: int = 1) -> "FormalSum":
        out = FormalSum(self)
        for k, v in other.items():
            c = out.get(k, 0) + scale * v
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return out

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.add(other, -1)

    def __neg__(self):
        return FormalSum({k: -v for k, v in self.items()})

    def scaled(self, c: int) -> "FormalSum":
        return FormalSum({k: c * v for k, v in self.items()}) if c else FormalSum()

    def vector(self, size: int) -> list[int]:
        v = [0] * size
        for k, c in self.items():
            v[k] = c
        return v

    def render(self, labels: Sequence[str]) -> str:
        if not self:
            return "0"
        parts = []
        for k in sorted(self):
            c = self[k]
            parts.append(labels[k] if c == 1 else f"{c}*{labels[k]}")
        return " + ".join(parts)


def _merge(acc: dict, part: dict, scale: int = 1):
    for k, v in part.items():
        c = acc.get(k, 0) + scale * v
        if c:
            acc[k] = c
        else:
            del acc[k]


class SquareEngine:
    """Symbol bookkeeping and the memoized expansion for one presentation."""

    def __init__(self, P: PcPresentation, mode: str = "wedge"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        self.P, self.mode = P, mode
        self.n = P.n
        self.N = self.n * self.n
        self._memo: dict[tuple[Key, Key], dict] = {}
        self._gens = [P.gen_key(k) for k in range(self.n)]
        names = [f"x{i + 1}" for i in range(P.d)] + [f"u{a + 1}" for a in range(P.r)]
        sep = "^" if mode == "wedge" else "(x)"
        self.labels = [f"{names[i]}{sep}{names[j]}" for i in range(self.n) for j in range(self.n)]

    def sym(self, i: int, j: int) -> int:
        return i * self.n + j

    def expand_key(self, g: Key, h: Key) -> dict:
        key = (g, h)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        P = self.P
        if not any(g) or not any(h):
            out: dict = {}
        else:
            i = next(k for k, x in enumerate(g) if x)
            if g[i] == 1 and not any(g[i + 1 :]):
                j = next(k for k, x in enumerate(h) if x)
                if h[j] == 1 and not any(h[j + 1 :]):
                    out = {self.sym(i, j): 1}
                else:
                    # g . y_j h'  =  (g . y_j)(^y_j g . ^y_j h')
                    rest = h[:j] + (h[j] - 1,) + h[j + 1 :]
                    yj = self._gens[j]
                    out = dict(self.expand_key(P.conj(yj, g), P.conj(yj, rest)))
                    _merge(out, {self.sym(i, j): 1})
            else:
                # y_i g' . h  =  (^y_i g' . ^y_i h)(y_i . h)
                rest = g[:i] + (g[i] - 1,) + g[i + 1 :]
                yi = self._gens[i]
                out = dict(self.expand_key(P.conj(yi, rest), P.conj(yi, h)))
                _merge(out, self.expand_key(yi, h))
        self._memo[key] = out
        return out

    def expand(self, g: GroupElement | Key, h: GroupElement | Key) -> FormalSum:
        gk = g.key if isinstance(g, GroupElement) else tuple(g)
        hk = h.key if isinstance(h, GroupElement) else tuple(h)
        limit = sys.getrecursionlimit()
        if limit < 20000:
            sys.setrecursionlimit(20000)
        return FormalSum(self.expand_key(gk, hk))

    # -- relation instances ---------------------------------------------
    def rel_left(self, g: Key, g2: Key, h: Key) -> dict:
        """``g g' . h - ^g g' . ^g h - g . h``."""
        P = self.P
        out = dict(self.expand_key(P.mul(g, g2), h))
        _merge(out, self.expand_key(P.conj(g, g2), P.conj(g, h)), -1)
        _merge(out, self.expand_key(g, h), -1)
        return out

    def rel_right(self, g: Key, h: Key, h2: Key) -> dict:
        """``g . h h' - g . h - ^h g . ^h h'``."""
        P = self.P
        out = dict(self.expand_key(g, P.mul(h, h2)))
        _merge(out, self.expand_key(g, h), -1)
        _merge(out, self.expand_key(P.conj(h, g), P.conj(h, h2)), -1)
        return out

    def rel_diag(self, g: Key) -> dict:
        return dict(self.expand_key(g, g))

    def lclass_instance(self, x: Key, y: Key, z: Key) -> dict:
        """``[x,y].z + [z,x].y + x.[z,y]``, zero in the exterior square of a class-2 group.

        The variant with ``[z,y].x`` in the middle would cancel against the
        last term and force ``[x,y].z = 0``, which is false.
        """
        P = self.P
        out = dict(self.expand_key(P.commutator_key(x, y), z))
        _merge(out, self.expand_key(P.commutator_key(z, x), y))
        _merge(out, self.expand_key(x, P.commutator_key(z, y)))
        return out

    # -- tiers ----------------------------------------------------------
    def tier1(self) -> Iterable[dict]:
        P, G = self.P, self._gens
        for a, b, c in itertools.product(G, repeat=3):
            yield self.rel_left(a, b, c)
            yield self.rel_right(a, b, c)
        for a in G:
            for k in range(1, P.p):
                ak = P.power_key(a, k)
                for c in G:
                    yield self.rel_left(ak, a, c)
                    yield self.rel_right(c, ak, a)
        if self.mode == "wedge":
            for a in G:
                yield self.rel_diag(a)
            for a, b in itertools.combinations(G, 2):
                yield self.rel_diag(P.mul(a, b))

    def tier2(self) -> Iterable[dict]:
        if self.mode != "wedge":
            return
        for x, y, z in itertools.product(self._gens, repeat=3):
            yield self.lclass_instance(x, y, z)

    def graded_keys(self) -> list[Key]:
        """All normal forms ordered by exponent sum, then lexicographically."""
        return sorted(self.P.keys(), key=lambda k: (sum(k), k))

    def tier3(self) -> Iterable[dict]:
        keys = self.graded_keys()
        for m, g in enumerate(keys):
            for h in keys[: m + 1]:
                pairs = ((g, h),) if g == h else ((g, h), (h, g))
                for a, b in pairs:
                    for y in self._gens:
                        yield self.rel_left(a, y, b)
                        yield self.rel_right(a, b, y)
                if self.mode == "wedge" and g == h:
                    yield self.rel_diag(g)

    # -- commutator map -------------------------------------------------
    def kappa_matrix(self) -> list[list[int]]:
        """Row ``y_i . y_j`` -> u-vector of ``[y_i, y_j]``."""
        P = self.P
        rows = []
        for i in range(self.n):
            for j in range(self.n):
                c = P.commutator_key(self._gens[i], self._gens[j])
                rows.append(list(c[P.d :]))
        return rows


@dataclass
class SquareResult:
    presentation: PcPresentation = field(repr=False)
    mode: str
    structure: AbelianStructure
    certified: bool
    target_log_order: int | None
    relations_used: int
    tiers_used: tuple[str, ...]
    group: PresentedAbelianGroup = field(repr=False)
    engine: SquareEngine | None = field(default=None, repr=False)
    kappa: list = field(default_factory=list, repr=False)
    diagnostics: str = ""
    _kernel: AbelianStructure | None = field(default=None, repr=False)

    @property
    def log_order(self) -> int | None:
        if not self.structure.is_finite:
            return None
        return self.structure.log_order(self.presentation.p)

    def expand(self, g, h) -> FormalSum:
        return self.engine.expand(g, h)

    def kernel_generators(self) -> list[list[int]]:
        """Symbol-space vectors generating ``ker kappa`` (modulo the relations)."""
        p, N = self.presentation.p, len(self.kappa)
        gens = [list(v) for v in fp.left_nullspace(self.kappa, p)] if self.presentation.r else []
        if not self.presentation.r:
            gens = [[int(i == j) for j in range(N)] for i in range(N)]
        gens += [[p * int(i == j) for j in range(N)] for i in range(N)]
        return gens

    def kernel_structure(self) -> AbelianStructure:
        """``M(G)`` for the exterior square, ``J_2(G)`` for the tensor square."""
        if self._kernel is None:
            self._kernel = self.group.subgroup_structure(self.kernel_generators())
        return self._kernel

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "structure": self.structure.to_json(),
            "certified": self.certified,
            "target_order": None if self.target_log_order is None else f"{self.presentation.p}^{self.target_log_order}",
            "relations_used": self.relations_used,
        }
        if self.certified:
            key = "M_structure" if self.mode == "wedge" else "J2_structure"
            out[key] = self.kernel_structure().to_json()
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def target_log_order(P: PcPresentation, mode: str) -> int:
    """``log_p`` of the order the square must have."""
    log = multiplier_log_order(P) + P.derived_rank
    if mode == "tensor":
        log += gamma_functor(abelian_invariants(P)).log_order(P.p)
    return log


DEFAULT_BUDGET = 200_000
TIERS = ("T1", "T2", "T3")


def square(
    P: PcPresentation,
    mode: str = "wedge",
    *,
    budget: int = DEFAULT_BUDGET,
    target: int | None = None,
    tiers: Sequence[str] = TIERS,
) -> SquareResult:
    """Exterior (``mode="wedge"``) or tensor square of ``P``.

    ``target`` overrides the ``log_p`` target order; ``budget`` caps the number
    of enumerated relation instances in tier T3.
    """
    eng = SquareEngine(P, mode)
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    goal = target_log_order(P, mode) if target is None else target
    goal_index = P.p**goal
    lat = RelationLattice(eng.N)
    kappa = eng.kappa_matrix()
    p = P.p
    used = 0
    done: list[str] = []

    def check_sound(row: dict):
        for c in range(P.r):
            s = sum(v * kappa[k][c] for k, v in row.items())
            if s % p:
                raise SoundnessError("a relation instance does not vanish under the commutator map")

    def reached() -> bool:
        idx = lat.index()
        if idx is None:
            return False
        if idx < goal_index:
            raise SoundnessError(f"presented order {idx} fell below target {goal_index}")
        return idx == goal_index

    certified = goal_index == 1 and eng.N == 0
    sources: dict[str, Callable[[], Iterable[dict]]] = {"T1": eng.tier1, "T2": eng.tier2, "T3": eng.tier3}
    for name in tiers:
        if name not in sources:
            raise ValueError(f"unknown tier {name!r}; choose from {TIERS}")
        if certified:
            break
        done.append(name)
        count = 0
        for row in sources[name]():
            if name == "T3":
                count += 1
                if count > budget:
                    break
            if not row:
                continue
            used += 1
            check_sound(row)
            if lat.add(FormalSum(row).vector(eng.N)) and lat.full_rank and used % 16 == 0:
                if reached():
                    certified = True
                    break
        if not certified:
            certified = reached()
    rows = lat.generators()
    G = PresentedAbelianGroup(eng.N, rows, labels=eng.labels)
    struct = G.structure()
    diag = ""
    if not certified:
        diag = f"order {struct} after tiers {done}; target {p}^{goal}"
    return SquareResult(P, mode, struct, certified, goal, used, tuple(done), G, eng, kappa, diag)


def require_certified(R: SquareResult, mode: str):
    if R.mode != mode:
        raise ValueError(f"need a {mode} square, got {R.mode}")
    if not R.certified:
        raise UncertifiedError("square is not certified")


def nabla_generators(R: SquareResult, exhaustive: bool = False) -> list[list[int]]:
    """Vectors of ``g (x) g`` spanning ``nabla(G)``.

    ``g`` runs over coset representatives of the central part, the pc
    generators and products of two pc generators (or all of G).
    """
    eng, P = R.engine, R.presentation
    if exhaustive:
        elems = list(P.keys())
    else:
        gens = [P.gen_key(k) for k in range(P.n)]
        elems = list(P.main_keys()) + gens + [P.mul(a, b) for a, b in itertools.combinations(gens, 2)]
    seen, out = set(), []
    for g in elems:
        if g in seen:
            continue
        seen.add(g)
        v = eng.expand(g, g)
        if v:
            out.append(v.vector(eng.N))
    return out


@dataclass(frozen=True)
class J2Nabla:
    j2: AbelianStructure
    nabla: AbelianStructure
    j2_contains_nabla: bool


def j2_and_nabla(R: SquareResult, exhaustive: bool = False) -> J2Nabla:
    require_certified(R, "tensor")
    P = R.presentation
    nab_rows = nabla_generators(R, exhaustive)
    nab = R.group.subgroup_structure(nab_rows) if nab_rows else AbelianStructure(())
    j2 = R.kernel_structure()
    kap = R.kappa
    inside = all(
        not any(sum(v[k] * kap[k][c] for k in range(len(v))) % P.p for c in range(P.r))
        for v in nab_rows
    )
    gamma_log = gamma_functor(abelian_invariants(P)).log_order(P.p)
    if nab.log_order(P.p) != gamma_log:
        raise AssertionError(f"|nabla| = p^{nab.log_order(P.p)}, expected p^{gamma_log}")
    if j2.log_order(P.p) != R.log_order - P.derived_rank:
        raise AssertionError("|J2| differs from |G (x) G| / |G'|")
    if not inside:
        raise AssertionError("nabla is not inside J2")
    return J2Nabla(j2, nab, inside)


# -- exterior center and capability ------------------------------------------


def _is_zero_all(R: SquareResult, g: Key, targets: Iterable[Key]) -> bool:
    G, eng = R.group, R.engine
    return all(G.is_zero(eng.expand(g, h).vector(eng.N)) for h in targets)


def exterior_center(P: PcPresentation, R: SquareResult | None = None, exhaustive: bool = False) -> SubgroupDescription:
    """``Z^(G) = {g : g ^ h = 1 for all h}``; trivial exactly when G is capable.

    Only central elements can qualify and for those ``g ^ -`` is additive, so
    testing against the main generators suffices.  ``exhaustive=True``
    checks every ``g`` against every ``h`` instead (small groups).
    """
    if R is None:
        R = square(P, "wedge")
    require_certified(R, "wedge")
    gens_main = [P.gen_key(k) for k in range(P.d)]
    if exhaustive:
        allk = list(P.keys())
        members = [g for g in allk if _is_zero_all(R, g, allk)]
        return _subgroup_from_members(P, members, "exterior-center")
    Z = center(P)
    zgens = [g.key for g in Z.generators]
    if structure_report(P).exponent == P.p or all(not any(P.power_key(z, P.p)) for z in zgens):
        # Z(G) elementary: solve over F_p in the p-torsion of the square
        kernel = _fp_kernel_of_wedge_map(R, zgens, gens_main)
        members = []
        for coeffs in kernel:
            g = P.identity_key
            for c, z in zip(coeffs, zgens):
                g = P.mul(g, P.power_key(z, c))
            members.append(g)
        return _subgroup_from_generators(P, members, "exterior-center")
    members = [g for g in _span_keys(P, zgens) if _is_zero_all(R, g, gens_main)]
    return _subgroup_from_members(P, members, "exterior-center")


def _fp_kernel_of_wedge_map(R: SquareResult, zgens: list[Key], targets: list[Key]) -> list[list[int]]:
    P, G, eng = R.presentation, R.group, R.engine
    p = P.p
    T, moduli, _ = G._normal_form()
    cols = []
    for z in zgens:
        col = []
        for h in targets:
            coords = G.coordinates(eng.expand(z, h).vector(eng.N))
            for c, m in zip(coords, moduli):
                # p-torsion coordinate c lies in (m/p) Z_m
                q = m // p
                if c % q:
                    raise AssertionError("z ^ x has order bigger than p")
                col.append((c // q) % p)
        cols.append(col)
    if not cols:
        return []
    rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]
    if not rows:
        return [[int(i == j) for j in range(len(zgens))] for i in range(len(zgens))]
    return fp.nullspace(rows, p, len(zgens))


def _span_keys(P: PcPresentation, gens: list[Key]) -> list[Key]:
    seen = {P.identity_key}
    frontier = [P.identity_key]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = P.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _subgroup_from_generators(P: PcPresentation, gens: list[Key], kind: str) -> SubgroupDescription:
    return _subgroup_from_members(P, _span_keys(P, gens), kind)


def _subgroup_from_members(P: PcPresentation, members: list[Key], kind: str) -> SubgroupDescription:
    members = sorted(set(members))
    # small generating set: greedily add members not yet generated
    gens: list[Key] = []
    span = {P.identity_key}
    for g in members:
        if g not in span:
            gens.append(g)
            span = set(_span_keys(P, gens))
    central = None
    if all(not any(g[: P.d]) for g in members):
        central = tuple(tuple(r) for r in fp.rref([g[P.d :] for g in gens], P.p, P.r)[0]) if gens else ()
    main = tuple(tuple(r) for r in fp.rref([g[: P.d] for g in gens], P.p, P.d)[0]) if gens and P.d else ()
    return SubgroupDescription(kind, P, tuple(P.from_key(g) for g in gens), len(members), central, main)


@dataclass
class CapabilityReport:
    capable: bool
    witness: GroupElement | None
    exterior_center_order: int
    cross_checks: list[dict]

    @property
    def consistent(self) -> bool:
        return all(c["consistent"] for c in self.cross_checks)

    def to_json(self) -> dict:
        return {
            "capable": self.capable,
            "witness": None if self.witness is None else list(self.witness.key),
            "exterior_center_order": self.exterior_center_order,
            "cross_checks": self.cross_checks,
        }


def order_p_central_subgroups(P: PcPresentation) -> list[list[int]]:
    """One spanning vector per order-p subgroup of the central part."""
    p, r = P.p, P.r
    lines = []
    for v in itertools.product(range(p), repeat=r):
        if any(v) and v[next(i for i, x in enumerate(v) if x)] == 1:
            lines.append(list(v))
    return lines


def capability_report(P: PcPresentation, R: SquareResult | None = None) -> CapabilityReport:
    if R is None:
        R = square(P, "wedge")
    Zx = exterior_center(P, R)
    capable = Zx.order == 1
    witness = next((g for g in Zx.generators if not g.is_identity()), None)
    rep = structure_report(P)
    checks = []
    # (a) |M(G)| > |M(G/K)| for every order-p central K forces capability
    if rep.is_special:
        mG = multiplier_log_order(P)
        drops = []
        for v in order_p_central_subgroups(P):
            Q = quotient_by_central(P, [v])
            drops.append(multiplier_log_order(Q) < mG)
        applies = all(drops)
        checks.append({
            "name": "multiplier-drop",
            "applies": applies,
            "predicted": True if applies else None,
            "consistent": (not applies) or capable,
        })
    # (b) exponent p^2 with elementary exterior square forces non-capability
    applies = rep.exponent == P.p**2 and R.structure.is_elementary(P.p)
    checks.append({
        "name": "elementary-exterior",
        "applies": applies,
        "predicted": False if applies else None,
        "consistent": (not applies) or not capable,
    })
    # (c) rank-full special groups: capable iff t != 1
    if rep.is_special and rep.d_derived == P.d * (P.d - 1) // 2 and P.d >= 3:
        pred = rep.t != 1
        checks.append({
            "name": "rank-full-power-rank",
            "applies": True,
            "predicted": pred,
            "consistent": pred == capable,
        })
    return CapabilityReport(capable, witness, Zx.order, checks)
