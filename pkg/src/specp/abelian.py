"""Finitely presented abelian groups over the integers.

The central object is :class:`PresentedAbelianGroup`, the cokernel of an
integer relation matrix (rows are relations, columns are generators).  Its
relation lattice is kept in an incrementally maintained echelon form so that
the group order can be read off after every added relation; the full Smith
normal form is computed lazily when coordinates or structure are requested.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .fp import is_prime

Row = Sequence[int]


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    k = 2
    while k * k <= n:
        while n % k == 0:
            out[k] = out.get(k, 0) + 1
            n //= k
        k += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant-factor decomposition ``Z_{d1} + ... + Z_{dk} + Z^free``.

    ``invariants`` satisfy ``d1 | d2 | ... | dk`` with every ``di > 1``.
    """

    invariants: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        inv = tuple(int(x) for x in self.invariants)
        if any(x <= 1 for x in inv):
            raise ValueError(f"invariant factors must exceed 1, got {inv}")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"divisibility chain broken: {inv}")
        object.__setattr__(self, "invariants", inv)

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> "AbelianStructure":
        """Normalise an arbitrary list of cyclic orders into invariant factors."""
        divisors: dict[int, list[int]] = {}
        for m in orders:
            m = int(m)
            if m < 1:
                raise ValueError("cyclic orders must be positive")
            for q, e in _prime_factors(m).items():
                divisors.setdefault(q, []).append(e)
        return cls.from_elementary_divisors(divisors, free_rank)

    @classmethod
    def from_elementary_divisors(cls, divisors: Mapping[int, Iterable[int]], free_rank: int = 0) -> "AbelianStructure":
        per_prime = {q: sorted((e for e in es if e > 0), reverse=True) for q, es in divisors.items()}
        k = max((len(v) for v in per_prime.values()), default=0)
        inv = [1] * k
        for q, es in per_prime.items():
            for i, e in enumerate(es):
                inv[k - 1 - i] *= q**e
        return cls(tuple(inv), free_rank)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("infinite group has no order")
        return math.prod(self.invariants)

    @property
    def rank(self) -> int:
        """Number of cyclic factors (minimal number of generators)."""
        return len(self.invariants) + self.free_rank

    @property
    def exponent(self) -> int:
        if self.free_rank:
            return 0
        return self.invariants[-1] if self.invariants else 1

    def is_trivial(self) -> bool:
        return not self.invariants and not self.free_rank

    def is_elementary(self, p: int) -> bool:
        return self.free_rank == 0 and all(x == p for x in self.invariants)

    def log_order(self, p: int) -> int:
        """log_p of the order; raises if the order is not a power of ``p``."""
        n = self.order
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError(f"order {self.order} is not a power of {p}")
        return e

    def p_exponents(self, p: int) -> dict[int, int]:
        """Multiplicity of each ``Z_{p^e}`` factor, for a p-group."""
        out: Counter = Counter()
        for x in self.invariants:
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            if x != 1:
                raise ValueError("not a p-group")
            out[e] += 1
        return dict(sorted(out.items()))

    def __add__(self, other: "AbelianStructure") -> "AbelianStructure":
        return AbelianStructure.from_cyclic_orders(
            self.invariants + other.invariants, self.free_rank + other.free_rank
        )

    def __str__(self) -> str:
        if self.is_trivial():
            return "1"
        parts = []
        for m, c in sorted(Counter(self.invariants).items()):
            parts.append(f"Z{m}" + (f"^{c}" if c > 1 else ""))
        if self.free_rank:
            parts.append("Z" + (f"^{self.free_rank}" if self.free_rank > 1 else ""))
        return " x ".join(parts)

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants), "free_rank": self.free_rank}

    @classmethod
    def from_json(cls, data: Mapping) -> "AbelianStructure":
        return cls(tuple(data["invariants"]), data.get("free_rank", 0))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass
class SmithResult:
    diagonal: list[int]
    nrows: int
    ncols: int
    U: list[list[int]] | None = None
    V: list[list[int]] | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def structure(self) -> AbelianStructure:
        """Cokernel ``Z^ncols / rowspace``."""
        return AbelianStructure(tuple(d for d in self.diagonal if d > 1), self.ncols - self.rank)

    def verify(self, matrix: Sequence[Row]) -> bool:
        """Check ``U @ M @ V`` equals the diagonal matrix."""
        if self.U is None or self.V is None:
            raise ValueError("transforms were not requested")
        um = _matmul(self.U, [list(r) for r in matrix], self.ncols)
        d = _matmul(um, self.V, self.ncols)
        for i, row in enumerate(d):
            for j, x in enumerate(row):
                want = self.diagonal[i] if i == j and i < self.rank else 0
                if x != want:
                    return False
        return True


def _matmul(a: Sequence[Row], b: Sequence[Row], bcols: int) -> list[list[int]]:
    out = []
    for row in a:
        acc = [0] * bcols
        for k, x in enumerate(row):
            if x:
                bk = b[k]
                for j in range(bcols):
                    if bk[j]:
                        acc[j] += x * bk[j]
        out.append(acc)
    return out


def smith_normal_form(matrix: Sequence[Row], ncols: int | None = None, transforms: bool = False) -> SmithResult:
    """Smith normal form of an integer matrix.

    The pivot is always an entry of smallest absolute value.  With ``transforms=True``
    unimodular ``U``, ``V`` with ``U M V = D`` are returned as well.
    """
    A = [list(map(int, r)) for r in matrix]
    m = len(A)
    if ncols is None:
        ncols = len(A[0]) if A else 0
    n = ncols
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transforms else None
    V = [[int(i == j) for j in range(n)] for i in range(n)] if transforms else None

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            if U is not None:
                U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in A:
                r[i], r[j] = r[j], r[i]
            if V is not None:
                for r in V:
                    r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        ra, rs = A[dst], A[src]
        for k in range(n):
            if rs[k]:
                ra[k] += q * rs[k]
        if U is not None:
            ua, us = U[dst], U[src]
            for k in range(m):
                if us[k]:
                    ua[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in A:
            if r[src]:
                r[dst] += q * r[src]
        if V is not None:
            for r in V:
                if r[src]:
                    r[dst] += q * r[src]

    diag: list[int] = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    key = abs(x)
                    if best is None or key < best[0]:
                        best = (key, i, j)
                        if key == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    add_row(i, t, -(x // piv))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    add_col(j, t, -(x // piv))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest leftover in row/column t to the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(A[i][j] % piv for j in range(t + 1, n) if A[i][j])),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        diag.append(A[t][t])
        t += 1
    return SmithResult(diag, m, n, U, V)


def invariant_factors(matrix: Sequence[Row], ncols: int | None = None) -> AbelianStructure:
    return smith_normal_form(matrix, ncols).structure


class RelationLattice:
    """Incremental echelon basis of an integer row lattice in ``Z^n``.

    Rows are merged with extended-gcd steps so the basis stays triangular.
    Once the lattice has full rank its index ``D`` is known, ``D Z^n`` lies in
    the lattice, and all non-pivot entries are reduced mod ``D``; this keeps
    coefficients bounded no matter how many relations arrive.
    """

    def __init__(self, n: int):
        self.n = n
        self.rows: dict[int, list[int]] = {}
        self.modulus: int | None = None
        self.added = 0

    def __len__(self):
        return len(self.rows)

    def _refresh_modulus(self):
        if len(self.rows) == self.n:
            d = math.prod(r[c] for c, r in self.rows.items())
            if self.modulus != d:
                self.modulus = d
                for c, r in self.rows.items():
                    for j in range(c + 1, self.n):
                        if r[j]:
                            r[j] %= d

    def add(self, v: Row) -> bool:
        """Add a relation; return True if the lattice grew."""
        self.added += 1
        n = self.n
        D = self.modulus
        v = [x % D for x in v] if D else list(v)
        changed = False
        col = 0
        while True:
            while col < n and not v[col]:
                col += 1
            if col == n:
                break
            P = self.rows.get(col)
            if P is None:
                if v[col] < 0:
                    v = [-x for x in v]
                self.rows[col] = v
                self._refresh_modulus()
                return True
            a, b = P[col], v[col]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, P)] if q else v
            else:
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                newP = [s * x + t * y for x, y in zip(P, v)]
                v = [ag * y - bg * x for x, y in zip(P, v)]
                if D:
                    newP = newP[: col + 1] + [x % D for x in newP[col + 1 :]]
                self.rows[col] = newP
                changed = True
            if D:
                v = [x % D for x in v]
            col += 1
        if changed:
            self._refresh_modulus()
        return changed

    def contains(self, v: Row) -> bool:
        D = self.modulus
        v = [x % D for x in v] if D else list(v)
        for col in range(self.n):
            if not v[col]:
                continue
            P = self.rows.get(col)
            if P is None or v[col] % P[col]:
                return False
            q = v[col] // P[col]
            v = [x - q * y for x, y in zip(v, P)]
            if D:
                v = [x % D for x in v]
        return True

    @property
    def full_rank(self) -> bool:
        return len(self.rows) == self.n

    def index(self) -> int | None:
        """``|Z^n / L|`` or None when infinite."""
        if not self.full_rank:
            return None
        return math.prod(r[c] for c, r in self.rows.items())

    def basis(self) -> list[list[int]]:
        """Echelon rows; once full rank they only generate together with ``D Z^n``."""
        return [self.rows[c] for c in sorted(self.rows)]

    def generators(self) -> list[list[int]]:
        """A generating set of the lattice itself."""
        rows = self.basis()
        if self.modulus:
            D = self.modulus
            rows = rows + [[D if i == j else 0 for j in range(self.n)] for i in range(self.n)]
        return rows


class PresentedAbelianGroup:
    """Abelian group ``Z^n / <relations>``.

    Elements are integer vectors over the generators.  ``coordinates`` maps a
    vector to its image in the Smith decomposition ``Z_{d1} + ... + Z^free``,
    which makes equality tests and subgroup computations cheap.
    """

    def __init__(self, ngens: int, relations: Iterable[Row | Mapping[int, int]] = (), labels: Sequence[str] | None = None):
        self.n = ngens
        self.labels = list(labels) if labels is not None else None
        self.lattice = RelationLattice(ngens)
        self._snf = None
        self.add_relations(relations)

    def _dense(self, v: Row | Mapping[int, int]) -> list[int]:
        if isinstance(v, Mapping):
            out = [0] * self.n
            for k, c in v.items():
                out[k] += c
            return out
        if len(v) != self.n:
            raise ValueError(f"relation of length {len(v)} for {self.n} generators")
        return list(v)

    def add_relation(self, v: Row | Mapping[int, int]) -> bool:
        grew = self.lattice.add(self._dense(v))
        if grew:
            self._snf = None
        return grew

    def add_relations(self, rows: Iterable[Row | Mapping[int, int]]) -> int:
        return sum(self.add_relation(r) for r in rows)

    def order(self) -> int | None:
        return self.lattice.index()

    def _normal_form(self):
        if self._snf is not None:
            return self._snf
        n = self.n
        basis = self.lattice.rows
        D = self.lattice.modulus
        unit = sorted((c for c, r in basis.items() if r[c] == 1), reverse=True)
        unit_set = set(unit)
        free = [c for c in range(n) if c not in unit_set]
        fidx = {c: i for i, c in enumerate(free)}
        k = len(free)
        expr: dict[int, list[int]] = {}

        def as_free(row: Row, start: int) -> list[int]:
            out = [0] * k
            for j in range(start, n):
                x = row[j]
                if not x:
                    continue
                if j in fidx:
                    out[fidx[j]] += x
                else:
                    e = expr[j]
                    for i in range(k):
                        if e[i]:
                            out[i] += x * e[i]
            if D:
                out = [x % D for x in out]
            return out

        for c in unit:  # decreasing pivot column: later symbols already expressed
            e = as_free(basis[c], c + 1)
            expr[c] = [-x for x in e]
        hard = [as_free(basis[c], c) for c in sorted(basis) if c not in unit_set]
        if D:  # entries were reduced mod D, which is only sound with D Z^n present
            hard += [[D if i == j else 0 for j in range(k)] for i in range(k)]
        snf = smith_normal_form(hard, k, transforms=True)
        V = snf.V
        diag = snf.diagonal + [0] * (k - snf.rank)
        keep = [i for i in range(k) if diag[i] != 1]
        # T = E V restricted to kept columns; E row j is e_j or expr_j
        T = []
        for j in range(n):
            src = [0] * k
            if j in fidx:
                src[fidx[j]] = 1
            else:
                src = expr[j]
            row = []
            for i in keep:
                s = sum(src[a] * V[a][i] for a in range(k) if src[a])
                row.append(s % diag[i] if diag[i] else s)
            T.append(row)
        moduli = [diag[i] for i in keep]
        structure = AbelianStructure(tuple(m for m in moduli if m), sum(1 for m in moduli if not m))
        self._snf = (T, moduli, structure)
        return self._snf

    def structure(self) -> AbelianStructure:
        return self._normal_form()[2]

    @property
    def moduli(self) -> list[int]:
        return self._normal_form()[1]

    def coordinates(self, v: Row | Mapping[int, int]) -> tuple[int, ...]:
        T, moduli, _ = self._normal_form()
        v = self._dense(v)
        out = []
        for i, m in enumerate(moduli):
            s = sum(x * T[j][i] for j, x in enumerate(v) if x)
            out.append(s % m if m else s)
        return tuple(out)

    def is_zero(self, v: Row | Mapping[int, int]) -> bool:
        return not any(self.coordinates(v))

    def element_order(self, v: Row | Mapping[int, int]) -> int:
        coords = self.coordinates(v)
        o = 1
        for c, m in zip(coords, self.moduli):
            if c:
                if not m:
                    return 0
                o = math.lcm(o, m // math.gcd(c, m))
        return o

    def _quotient_order(self, gens: Sequence[Row | Mapping[int, int]], scale: int = 1) -> int:
        moduli = self.moduli
        if any(m == 0 for m in moduli):
            raise ValueError("subgroup orders need a finite ambient group")
        k = len(moduli)
        rows = [[m if i == j else 0 for j in range(k)] for i, m in enumerate(moduli)]
        rows += [[scale * c for c in self.coordinates(g)] for g in gens]
        lat = RelationLattice(k)
        for r in rows:
            lat.add(r)
        return lat.index()

    def subgroup_order(self, gens: Sequence[Row | Mapping[int, int]]) -> int:
        A = self.structure().order
        return A // self._quotient_order(gens)

    def subgroup_structure(self, gens: Sequence[Row | Mapping[int, int]]) -> AbelianStructure:
        """Structure of the subgroup generated by ``gens``.

        For each prime q, the number of cyclic q-factors of order at least
        ``q^(k+1)`` equals ``log_q |q^k S| / |q^(k+1) S|``.
        """
        A = self.structure()
        total = A.order
        gens = list(gens)
        divisors: dict[int, list[int]] = {}
        for q in _prime_factors(total):
            sizes = []
            k = 0
            while True:
                s = total // self._quotient_order(gens, q**k)
                sizes.append(s)
                if k and sizes[-1] == sizes[-2]:
                    break
                k += 1
            counts = []
            for k in range(len(sizes) - 1):
                ratio = sizes[k] // sizes[k + 1]
                e = 0
                while ratio % q == 0:
                    ratio //= q
                    e += 1
                counts.append(e)
            exps = []
            for k, c in enumerate(counts):
                nxt = counts[k + 1] if k + 1 < len(counts) else 0
                exps += [k + 1] * (c - nxt)
            divisors[q] = exps
        return AbelianStructure.from_elementary_divisors(divisors)


def structure_of_subquotient(group: PresentedAbelianGroup, gens: Sequence[Row | Mapping[int, int]]) -> AbelianStructure:
    """Structure of the subgroup of ``group`` generated by ``gens``."""
    return group.subgroup_structure(gens)


def multiplier_abelian(exponents: Sequence[int], p: int) -> AbelianStructure:
    """Schur multiplier of ``Z_{p^m1} + ... + Z_{p^mk}`` with ``m1 >= ... >= mk``.

    The i-th summand (1-based, i >= 2) contributes ``i - 1`` copies of
    ``Z_{p^mi}``.
    """
    m = list(exponents)
    if any(b > a for a, b in zip(m, m[1:])):
        raise ValueError(f"exponents must be non-increasing, got {m}")
    if any(x < 1 for x in m):
        raise ValueError("exponents must be at least 1")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    orders = []
    for i, mi in enumerate(m, start=1):
        orders += [p**mi] * (i - 1)
    return AbelianStructure.from_cyclic_orders(orders)


def multiplier_of_structure(A: AbelianStructure) -> AbelianStructure:
    """Schur multiplier of a finite abelian group, prime by prime."""
    if A.free_rank:
        raise ValueError("finite groups only")
    out = AbelianStructure()
    for q in _prime_factors(A.order):
        exps = []
        for x in A.invariants:
            e = 0
            while x % q == 0:
                x //= q
                e += 1
            if e:
                exps.append(e)
        out = out + multiplier_abelian(sorted(exps, reverse=True), q)
    return out


def gamma_functor(A: AbelianStructure) -> AbelianStructure:
    """Whitehead's quadratic functor of a finite abelian group.

    ``Gamma(Z_m) = Z_m`` for odd m and ``Z_2m`` for even m, and
    ``Gamma(B + C) = Gamma(B) + Gamma(C) + B (x) C``.
    """
    if A.free_rank:
        raise ValueError("finite groups only")
    inv = A.invariants
    orders = [m if m % 2 else 2 * m for m in inv]
    for i in range(len(inv)):
        for j in range(i + 1, len(inv)):
            orders.append(math.gcd(inv[i], inv[j]))
    return AbelianStructure.from_cyclic_orders(orders)


def dump_rows(rows: Iterable[Row]) -> str:
    """Row-list text format: one relation per line, space separated."""
    return "".join(" ".join(str(x) for x in r) + "\n" for r in rows)


def load_rows(text: str) -> list[list[int]]:
    return [[int(x) for x in line.split()] for line in text.splitlines() if line.strip() and not line.startswith("#")]
