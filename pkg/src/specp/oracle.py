"""Ground-truth squares from the full multiplication-table presentation.

Generators are ``z(g, h)`` for all ``g, h`` in G and the relations are every
instance of

    z(g g', h) = z(^g g', ^g h) + z(g, h)      z(g, h h') = z(g, h) + z(^h g, ^h h')

(plus ``z(g, g) = 0`` for the exterior square).  To keep the lattice small,
each ``z(g, h)`` is first rewritten through relation instances into the
pc-generator pair symbols (peeling the *last* normal-form letter, unlike the
symbolic engine), then all ``2 |G|^3`` relations are imposed in that basis.
Nothing is sampled, so the result is the square by definition.
"""

from __future__ import annotations

import sys

import numpy as np

from .abelian import PresentedAbelianGroup
from .pcgroup import PcPresentation
from .wedge import MODES, FormalSum, SquareResult

MAX_ORDER_EXP = 4


class OracleLimitError(ValueError):
    """The group is too large for the multiplication-table oracle."""


class TableGroup:
    """Integer-indexed multiplication, conjugation and inverse tables."""

    def __init__(self, P: PcPresentation):
        self.P = P
        keys = list(P.keys())
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)}
        m = len(keys)
        self.order = m
        mul = np.empty((m, m), dtype=np.int64)
        for a, ka in enumerate(keys):
            for b, kb in enumerate(keys):
                mul[a, b] = self.index[P.mul(ka, kb)]
        self.mul = mul
        inv = np.empty(m, dtype=np.int64)
        for a in range(m):
            inv[a] = int(np.nonzero(mul[a] == 0)[0][0])
        self.inv = inv
        # conj[a, b] = a b a^-1
        self.conj = np.empty((m, m), dtype=np.int64)
        for a in range(m):
            self.conj[a] = mul[mul[a], inv[a]]
        self.gens = [self.index[P.gen_key(k)] for k in range(P.n)]

    def last_letter(self, a: int) -> int | None:
        k = self.keys[a]
        for pos in range(len(k) - 1, -1, -1):
            if k[pos]:
                return pos
        return None


class TableEngine:
    """Expresses every ``z(g, h)`` in the pc-pair symbols by recursion on tables."""

    def __init__(self, T: TableGroup):
        self.T = T
        n = T.P.n
        self.n, self.N = n, n * n
        self._memo: dict[tuple[int, int], dict] = {}
        self.labels = [f"y{i + 1}.y{j + 1}" for i in range(n) for j in range(n)]

    def _z(self, a: int, b: int) -> dict:
        hit = self._memo.get((a, b))
        if hit is not None:
            return hit
        T = self.T
        out: dict = {}
        if a and b:
            la = T.last_letter(a)
            ya = T.gens[la]
            if a != ya:
                # a = a' y  :  z(a' y, b) = z(^a' y, ^a' b) + z(a', b)
                a1 = int(T.mul[a, T.inv[ya]])
                _add(out, self._z(int(T.conj[a1, ya]), int(T.conj[a1, b])))
                _add(out, self._z(a1, b))
            else:
                lb = T.last_letter(b)
                yb = T.gens[lb]
                if b == yb:
                    out = {la * self.n + lb: 1}
                else:
                    # b = b' y  :  z(a, b' y) = z(a, b') + z(^b' a, ^b' y)
                    b1 = int(T.mul[b, T.inv[yb]])
                    _add(out, self._z(a, b1))
                    _add(out, self._z(int(T.conj[b1, a]), int(T.conj[b1, yb])))
        self._memo[(a, b)] = out
        return out

    def table(self) -> np.ndarray:
        m = self.T.order
        E = np.zeros((m * m, self.N), dtype=np.int64)
        for a in range(m):
            for b in range(m):
                for k, c in self._z(a, b).items():
                    E[a * m + b, k] = c
        return E

    def expand(self, g, h) -> FormalSum:
        gk = g.key if hasattr(g, "key") else tuple(g)
        hk = h.key if hasattr(h, "key") else tuple(h)
        return FormalSum(self._z(self.T.index[gk], self.T.index[hk]))


def _add(acc: dict, part: dict):
    for k, v in part.items():
        c = acc.get(k, 0) + v
        if c:
            acc[k] = c
        else:
            del acc[k]


def oracle_relations(T: TableGroup, E: np.ndarray, mode: str) -> np.ndarray:
    """All relation rows, deduplicated."""
    m = T.order
    ar = np.arange(m)
    chunks = []
    for g in range(m):
        # left: z(g g', h) - z(^g g', ^g h) - z(g, h), over all (g', h)
        lhs = E[(T.mul[g][:, None] * m + ar[None, :]).ravel()]
        mid = E[(T.conj[g][:, None] * m + T.conj[g][None, :]).ravel()]
        last = E[np.tile(g * m + ar, m)]
        chunks.append(np.unique(lhs - mid - last, axis=0))
        # right: z(g, h h') - z(g, h) - z(^h g, ^h h'), over all (h, h')
        lhs = E[g * m + T.mul.ravel()]
        first = E[np.repeat(g * m + ar, m)]
        conj_g = T.conj[:, g]  # ^h g for each h
        mid = E[(conj_g[:, None] * m + T.conj).ravel()]
        chunks.append(np.unique(lhs - first - mid, axis=0))
    if mode == "wedge":
        chunks.append(E[ar * m + ar])
    rows = np.unique(np.concatenate(chunks), axis=0)
    return rows[np.any(rows != 0, axis=1)]


def oracle_kappa(T: TableGroup) -> list[list[int]]:
    """u-vector of ``[y_i, y_j]`` from the tables, for each pair symbol."""
    P = T.P
    rows = []
    for a in T.gens:
        for b in T.gens:
            c = int(T.mul[T.mul[T.mul[a, b], T.inv[a]], T.inv[b]])
            rows.append(list(T.keys[c][P.d :]))
    return rows


def oracle_square(P: PcPresentation, mode: str = "wedge", max_order_exp: int = MAX_ORDER_EXP) -> SquareResult:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if P.log_order > max_order_exp:
        raise OracleLimitError(f"|G| = {P.p}^{P.log_order} exceeds the oracle cap {P.p}^{max_order_exp}")
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    T = TableGroup(P)
    eng = TableEngine(T)
    E = eng.table()
    rows = oracle_relations(T, E, mode)
    G = PresentedAbelianGroup(eng.N, rows.tolist(), labels=eng.labels)
    kappa = oracle_kappa(T)
    if P.r and len(rows) and np.any((rows @ np.array(kappa, dtype=np.int64)) % P.p):
        raise AssertionError("oracle relation does not vanish under the commutator map")
    struct = G.structure()
    return SquareResult(P, mode, struct, True, None, int(len(rows)), ("table",), G, eng, kappa)


def lattices_equal(a: PresentedAbelianGroup, b: PresentedAbelianGroup) -> bool:
    """Same relation lattice on the same symbols."""
    return all(b.is_zero(r) for r in a.lattice.generators()) and all(
        a.is_zero(r) for r in b.lattice.generators()
    )

