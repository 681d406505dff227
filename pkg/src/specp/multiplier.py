"""Schur multiplier order from the Blackburn-Evens exact sequence.

For a class-2 group with ``G'`` and ``G/G'`` elementary abelian,

    |M(G)| = |G' (x) G/G'| |M(G/G')| / (|G'| |ker beta|)

and ``ker beta`` is spanned by the Jacobi-type tensors ``Psi_2`` and the
power tensors ``w^p (x) wG'``.  Everything here is F_p linear algebra inside
``G' (x) G/G' = F_p^{r d}``; the basis vector ``u_a (x) x_k`` sits at
index ``a * d + k`` (0-based).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import fp
from .abelian import AbelianStructure, PresentedAbelianGroup, multiplier_of_structure
from .pcgroup import PcPresentation, structure_report


class HypothesisError(ValueError):
    """The group is outside the class handled by the exact sequence."""


@dataclass(frozen=True)
class TensorSpace:
    r: int
    d: int

    @property
    def dim(self) -> int:
        return self.r * self.d

    def index(self, a: int, k: int) -> int:
        return a * self.d + k

    def label(self, idx: int) -> str:
        a, k = divmod(idx, self.d)
        return f"u{a + 1}(x)x{k + 1}"

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(self.dim)]

    def tensor(self, u_vec, a_vec, p: int) -> list[int]:
        """``u (x) x^a`` for a u-vector and a main exponent vector."""
        out = [0] * self.dim
        for a, ua in enumerate(u_vec):
            if ua:
                for k, ak in enumerate(a_vec):
                    if ak:
                        out[a * self.d + k] = (out[a * self.d + k] + ua * ak) % p
        return out


def tensor_space(P: PcPresentation) -> TensorSpace:
    return TensorSpace(P.r, P.d)


def _comm(P: PcPresentation, i: int, j: int):
    return P._C[i][j]


def psi2(P: PcPresentation, i: int, j: int, k: int) -> list[int]:
    """``[x_i,x_j] (x) x_k + [x_k,x_i] (x) x_j + [x_j,x_k] (x) x_i`` (1-based)."""
    for v in (i, j, k):
        if not 1 <= v <= P.d:
            raise IndexError(v)
    i, j, k = i - 1, j - 1, k - 1
    T = tensor_space(P)
    out = [0] * T.dim
    terms = ((_comm(P, i, j), k), (_comm(P, k, i), j), (_comm(P, j, k), i))
    for vec, m in terms:
        for a, x in enumerate(vec):
            if x:
                idx = T.index(a, m)
                out[idx] = (out[idx] + x) % P.p
    return out


def psi2_image(P: PcPresentation) -> list[list[int]]:
    """Row-reduced basis of the span of ``psi2`` over ``i < j < k``."""
    rows = [psi2(P, i, j, k) for i, j, k in itertools.combinations(range(1, P.d + 1), 3)]
    return fp.rref(rows, P.p, P.r * P.d)[0]


def power_tensor_generators(P: PcPresentation) -> list[list[int]]:
    """``pi_i (x) x_i`` and ``pi_i (x) x_k + pi_k (x) x_i``; spans the power tensors."""
    T, p = tensor_space(P), P.p
    rows = []
    unit = [[int(a == b) for b in range(P.d)] for a in range(P.d)]
    for i in range(P.d):
        rows.append(T.tensor(P.pow[i], unit[i], p))
        for k in range(i + 1, P.d):
            a = T.tensor(P.pow[i], unit[k], p)
            b = T.tensor(P.pow[k], unit[i], p)
            rows.append([(x + y) % p for x, y in zip(a, b)])
    return rows


def power_tensor_subgroup(P: PcPresentation, method: str = "generators") -> list[list[int]]:
    """Row-reduced basis of ``<w^p (x) wG' : w in G>``.

    ``method="generators"`` uses the symmetric spanning set, ``"cosets"``
    loops over the ``p^d`` coset representatives and ``"elements"`` over the
    whole group (small groups only).
    """
    T, p = tensor_space(P), P.p
    if method == "generators":
        rows = power_tensor_generators(P)
    elif method == "cosets":
        rows = []
        for a in itertools.product(range(p), repeat=P.d):
            w = [0] * P.r
            for i, ai in enumerate(a):
                if ai:
                    w = [(x + ai * y) % p for x, y in zip(w, P.pow[i])]
            rows.append(T.tensor(w, a, p))
    elif method == "elements":
        rows = []
        for key in P.keys():
            wp = P.power_key(key, p)
            if any(wp[: P.d]):
                raise HypothesisError("p-th power left the central part")
            rows.append(T.tensor(wp[P.d :], key[: P.d], p))
    else:
        raise ValueError(f"unknown method {method!r}")
    return fp.rref(rows, p, T.dim)[0]


@dataclass(frozen=True)
class KerBetaData:
    psi2_image: list = field(repr=False)
    power_tensors: list = field(repr=False)
    ker_beta: list = field(repr=False)
    dim_tensor_space: int
    dim_psi2_image: int
    dim_power_tensors: int
    dim_intersection: int
    dim_ker_beta: int

    @property
    def m(self) -> int:
        """``log_p |P| / |Im Psi_2 cap P|`` (named m or m' depending on the rank)."""
        return self.dim_power_tensors - self.dim_intersection

    @property
    def m_prime(self) -> int:
        return self.m

    def dims(self) -> dict:
        return {
            "tensor_space": self.dim_tensor_space,
            "psi2_image": self.dim_psi2_image,
            "P": self.dim_power_tensors,
            "ker_beta": self.dim_ker_beta,
            "intersection": self.dim_intersection,
        }


def check_hypotheses(P: PcPresentation):
    """Raise unless ``G'`` is the whole central part and ``G/G'`` is elementary."""
    if P.p == 2:
        raise HypothesisError("p = 2: w -> w^p is not linear")
    if P.derived_rank != P.r:
        raise HypothesisError(
            f"derived subgroup has rank {P.derived_rank} < r={P.r}: "
            "G^p is not inside G' or the presentation is unreduced"
        )


def ker_beta(P: PcPresentation) -> KerBetaData:
    check_hypotheses(P)
    p, n = P.p, P.r * P.d
    A = psi2_image(P)
    B = power_tensor_subgroup(P)
    S = fp.rref(A + B, p, n)[0]
    inter = len(A) + len(B) - len(S)
    return KerBetaData(A, B, S, n, len(A), len(B), inter, len(S))


def multiplier_log_order(P: PcPresentation) -> int:
    """``log_p |M(G)|``."""
    if P.is_abelian:
        return multiplier_of_structure(abelian_invariants(P)).log_order(P.p)
    check_hypotheses(P)
    K = ker_beta(P)
    d, r = P.d, P.r
    log = r * d + d * (d - 1) // 2 - r - K.dim_ker_beta
    if log < 0:
        raise AssertionError("negative multiplier order")
    return log


def multiplier_order(P: PcPresentation) -> int:
    return P.p ** multiplier_log_order(P)


def abelian_invariants(P: PcPresentation) -> AbelianStructure:
    """Structure of ``G/G'`` (of ``G`` itself when abelian)."""
    n, p, d = P.n, P.p, P.d
    G = PresentedAbelianGroup(n)
    for i in range(d):
        row = [0] * n
        row[i] = p
        for a, x in enumerate(P.pow[i]):
            row[d + a] -= x
        G.add_relation(row)
    for a in range(P.r):
        row = [0] * n
        row[d + a] = p
        G.add_relation(row)
    for v in P.comm.values():
        if any(v):
            G.add_relation([0] * d + list(v))
    return G.structure()


# -- closed forms -----------------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    """A closed-form value.

    ``form`` says how to compare it: ``elementary`` (group is ``Z_p^value``),
    ``order`` (``log_p`` of the order only), ``structure`` (``Z_{p^2}^a +
    Z_p^b`` with ``value = (a, b)``), ``dimension`` (an F_p dimension) or
    ``verdict`` (a boolean).
    """

    label: str
    quantity: str
    form: str
    value: object
    statement: str

    @property
    def log_order(self) -> int | None:
        if self.form in ("elementary", "order", "dimension"):
            return self.value
        if self.form == "structure":
            a, b = self.value
            return 2 * a + b
        return None

    def to_json(self) -> dict:
        v = list(self.value) if isinstance(self.value, tuple) else self.value
        return {"label": self.label, "quantity": self.quantity, "form": self.form,
                "value": v, "statement": self.statement}


RANK_KINDS = ("rank-full", "rank-deficient")

# every label formula_suite can emit
FORMULA_LABELS = (
    "psi2-image", "power-tensors", "ker-beta", "nabla",
    "multiplier.rank-full", "exterior.rank-full", "tensor.rank-full", "j2.rank-full.printed",
    "exterior.structure.rank-full", "tensor.structure.rank-full", "capable.rank-full",
    "multiplier.rank-deficient", "exterior.rank-deficient", "tensor.rank-deficient.printed",
    "j2.rank-deficient.printed", "exterior.rank-deficient.exp-p.printed",
    "tensor.rank-deficient.exp-p.printed", "j2.rank-deficient.exp-p.printed",
    "exterior.identity", "tensor.identity", "j2.identity",
)


def formula_suite(d: int, p: int, t: int, rank_kind: str = "rank-full") -> list[Prediction]:
    """Every closed form that applies to a ``d``-generator special group with ``|G^p| = p^t``."""
    if d < 3 or p == 2 or not fp.is_prime(p):
        raise ValueError("need d >= 3 and an odd prime p")
    if not 0 <= t <= d:
        raise ValueError(f"t={t} outside 0..{d}")
    if rank_kind not in RANK_KINDS:
        raise ValueError(f"rank kind must be one of {RANK_KINDS}")
    s = t * (2 * d - t + 1) // 2
    nabla = d * (d + 1) // 2
    psi = d * (d - 1) * (d - 2) // 6
    out = [
        Prediction("psi2-image", "psi2_image", "dimension", psi, "d(d-1)(d-2)/6"),
        Prediction("power-tensors", "power_tensors", "dimension", s, "t(2d-t+1)/2"),
        Prediction("ker-beta", "ker_beta", "dimension", psi + s, "d(d-1)(d-2)/6 + t(2d-t+1)/2"),
        Prediction("nabla", "nabla", "elementary", nabla, "d(d+1)/2"),
    ]
    add = out.append
    if rank_kind == "rank-full":
        M = d * (d - 1) * (d + 1) // 3 - s
        add(Prediction("multiplier.rank-full", "M", "elementary", M, "d(d-1)(d+1)/3 - t(2d-t+1)/2"))
        ext = d * (d - 1) * (2 * d + 5) // 6 - s
        add(Prediction("exterior.rank-full", "exterior", "elementary" if t == 0 else "order", ext,
                       "d(d-1)(2d+5)/6 - t(2d-t+1)/2"))
        ten = d * (d * d + 3 * d - 1) // 3 - s
        add(Prediction("tensor.rank-full", "tensor", "elementary" if t == 0 else "order", ten,
                       "d(d^2+3d-1)/3 - t(2d-t+1)/2"))
        add(Prediction("j2.rank-full.printed", "J2", "elementary",
                       d * (d + 1) * (2 * d - 1) // 6 - s, "d(d+1)(2d-1)/6 - t(2d-t+1)/2"))
        a = t * (t - 1) // 2
        b = (d - 1) * d * (d + 1) // 3 + (d - 1) * d // 2 - t * d - a
        add(Prediction("exterior.structure.rank-full", "exterior", "structure", (a, b),
                       "Z_{p^2}^{t(t-1)/2} + Z_p^{(d-1)d(d+1)/3 + (d-1)d/2 - td - t(t-1)/2}"))
        b2 = (d - 1) * d * (d + 1) // 3 + d * d - t * d - a
        add(Prediction("tensor.structure.rank-full", "tensor", "structure", (a, b2),
                       "Z_{p^2}^{t(t-1)/2} + Z_p^{(d-1)d(d+1)/3 + d^2 - td - t(t-1)/2}"))
        add(Prediction("capable.rank-full", "capable", "verdict", t != 1, "capable iff t != 1"))
    else:
        M = d * (d - 1) * (d + 1) // 3 - d + 1 - s
        add(Prediction("multiplier.rank-deficient", "M", "elementary", M,
                       "d(d-1)(d+1)/3 - d + 1 - t(2d-t+1)/2"))
        ext = (d - 1) * (2 * d * d + 5 * d - 6) // 6 - s - 1
        add(Prediction("exterior.rank-deficient", "exterior", "order", ext,
                       "(d-1)(2d^2+5d-6)/6 - t(2d-t+1)/2 - 1"))
        add(Prediction("tensor.rank-deficient.printed", "tensor", "order",
                       d * (d * d + 3 * d - 4) // 3 - s + 1, "d(d^2+3d-4)/3 - t(2d-t+1)/2 + 1"))
        add(Prediction("j2.rank-deficient.printed", "J2", "elementary",
                       (d + 1) * (2 * d - 3) * (d + 2) // 3 - s + 2, "(d+1)(2d-3)(d+2)/3 - t(2d-t+1)/2 + 2"))
        if t == 0:
            add(Prediction("exterior.rank-deficient.exp-p.printed", "exterior", "elementary",
                           (d - 1) * (2 * d * d + 5 * d - 6) // 6 + 1, "(d-1)(2d^2+5d-6)/6 + 1"))
            add(Prediction("tensor.rank-deficient.exp-p.printed", "tensor", "elementary",
                           d * (d * d + 3 * d - 4) // 3 + 1, "d(d^2+3d-4)/3 + 1"))
            add(Prediction("j2.rank-deficient.exp-p.printed", "J2", "elementary",
                           (d + 1) * (2 * d - 3) * (d + 2) // 3 + 2, "(d+1)(2d-3)(d+2)/3 + 2"))
        ext_id = M + d * (d - 1) // 2 - 1
        add(Prediction("exterior.identity", "exterior", "order", ext_id, "log|M| + log|G'|"))
    add(Prediction("tensor.identity", "tensor", "order",
                   (M + d * (d - 1) // 2 - (rank_kind == "rank-deficient")) + nabla,
                   "log|exterior| + d(d+1)/2"))
    add(Prediction("j2.identity", "J2", "order", M + nabla, "log|M| + d(d+1)/2"))
    return out


def multiplier_fragment(P: PcPresentation) -> dict:
    """JSON-ready summary of the exact-sequence computation."""
    K = ker_beta(P)
    rep = structure_report(P)
    frag = {
        "dims": K.dims(),
        "m": K.m,
        "m_prime": K.m_prime,
        "multiplier_order": f"{P.p}^{multiplier_log_order(P)}",
        "multiplier_log_order": multiplier_log_order(P),
        "formula_predictions": {},
        "flags": [],
    }
    kind = rank_kind_of(P)
    if rep.is_special and kind and P.d >= 3 and P.p != 2:
        preds = formula_suite(P.d, P.p, rep.t, kind)
        frag["formula_predictions"] = {q.label: q.to_json() for q in preds if q.quantity in
                                       ("M", "psi2_image", "power_tensors", "ker_beta")}
    if K.dim_intersection:
        frag["flags"].append("psi2-image meets power tensors")
    return frag


def rank_kind_of(P: PcPresentation) -> str | None:
    full = P.d * (P.d - 1) // 2
    dG = P.derived_rank
    if dG == full:
        return "rank-full"
    if dG == full - 1:
        return "rank-deficient"
    return None
