"""Constructors for the group families used throughout the package.

Central generators of the rank-full families are indexed by pairs ``(i, j)``,
``i > j``, in the order of :func:`specp.pcgroup.pair_list`:
``(2,1), (3,1), (3,2), (4,1), ...``.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from . import fp
from .pcgroup import PcPresentation, PresentationError, pair_list


def _check_paper_range(d: int, p: int):
    if p == 2 or not fp.is_prime(p):
        raise PresentationError(f"p must be an odd prime (got {p})")
    if d < 3:
        raise PresentationError(f"special families need d >= 3 (got d={d})")


def _unit(r: int, k: int) -> tuple[int, ...]:
    v = [0] * r
    v[k] = 1
    return tuple(v)


def free_special(d: int, p: int) -> PcPresentation:
    """Relatively free class-2 exponent-p group on d generators."""
    _check_paper_range(d, p)
    pairs = pair_list(d)
    r = len(pairs)
    comm = {pr: _unit(r, k) for k, pr in enumerate(pairs)}
    return PcPresentation(p, d, r, comm, label=f"free-special(d={d},p={p})",
                          family="free-special", params={"d": d, "p": p})


def _pow_vectors(d: int, r: int, pi, p: int) -> list[tuple[int, ...]]:
    if pi is None:
        return [(0,) * r] * d
    if isinstance(pi, Mapping):
        out = [(0,) * r] * d
        for i, v in pi.items():
            if not 1 <= i <= d:
                raise PresentationError(f"power index {i} out of range")
            out[i - 1] = tuple(x % p for x in v)
        return out
    out = [tuple(x % p for x in v) for v in pi]
    if len(out) != d:
        raise PresentationError(f"need {d} power vectors, got {len(out)}")
    return out


def standard_power_table(d: int, t: int, r: int | None = None) -> list[tuple[int, ...]]:
    """``x_i^p = u_i`` for ``i <= t`` and ``x_i^p = 1`` otherwise."""
    r = d * (d - 1) // 2 if r is None else r
    if not 0 <= t <= min(d, r):
        raise PresentationError(f"t={t} out of range for d={d}")
    return [_unit(r, i) if i < t else (0,) * r for i in range(d)]


def exp_p2_family(d: int, p: int, pi=None, *, t: int | None = None) -> PcPresentation:
    """Rank-full special group with power table ``pi``.

    ``pi`` is a list of d vectors in ``F_p^r`` or a dict ``{i: vector}``.
    With ``t`` instead, the canonical table of :func:`standard_power_table`.
    """
    base = free_special(d, p)
    if pi is None and t is not None:
        pi = standard_power_table(d, t, base.r)
    pw = _pow_vectors(d, base.r, pi, p)
    tt = fp.fp_span_dim(pw, p)
    return PcPresentation(p, d, base.r, base.comm, pw, label=f"rank-full(d={d},p={p},t={tt})",
                          family="rank-full", params={"d": d, "p": p, "t": tt})


def rank_deficient(
    d: int,
    p: int,
    pair: tuple[int, int] = (1, 2),
    alpha: Sequence[int] | Mapping[tuple[int, int], int] | None = None,
    pi=None,
) -> PcPresentation:
    """Special group of rank ``d(d-1)/2 - 1``.

    The commutator of the chosen pair ``(i, j)`` (``i < j``) is the product of
    the remaining basic commutators ``[x_n1, x_n2]^alpha_{n1 n2}``.  ``alpha``
    is indexed by the remaining pairs ``n1 < n2`` in lexicographic order (or
    given as a dict); all ones by default.
    """
    _check_paper_range(d, p)
    i, j = pair
    if not 1 <= i < j <= d:
        raise PresentationError(f"pair {pair} must satisfy 1 <= i < j <= d")
    rest = [(a, b) for a in range(1, d + 1) for b in range(a + 1, d + 1) if (a, b) != (i, j)]
    if alpha is None:
        coeffs = {q: 1 for q in rest}
    elif isinstance(alpha, Mapping):
        coeffs = {q: alpha.get(q, 0) for q in rest}
        extra = set(alpha) - set(rest)
        if extra:
            raise PresentationError(f"alpha has unknown pairs {sorted(extra)}")
    else:
        if len(alpha) != len(rest):
            raise PresentationError(f"alpha needs {len(rest)} entries, got {len(alpha)}")
        coeffs = dict(zip(rest, alpha))
    # central basis: [x_b, x_a] for the remaining pairs, in pair_list order
    basis = [(b, a) for (b, a) in pair_list(d) if (a, b) != (i, j)]
    r = len(basis)
    index = {q: k for k, q in enumerate(basis)}
    comm = {q: _unit(r, k) for q, k in index.items()}
    # [x_i, x_j] = prod [x_n1, x_n2]^alpha  means  [x_j, x_i] = prod [x_n2, x_n1]^alpha
    v = [0] * r
    for (a, b), c in coeffs.items():
        v[index[(b, a)]] += c
    comm[(j, i)] = tuple(x % p for x in v)
    pw = _pow_vectors(d, r, pi, p)
    tt = fp.fp_span_dim(pw, p)
    P = PcPresentation(p, d, r, comm, pw, label=f"rank-deficient(d={d},p={p},t={tt})",
                       family="rank-deficient",
                       params={"d": d, "p": p, "t": tt, "pair": [i, j], "alpha": [coeffs[q] % p for q in rest]})
    if P.derived_rank != r:
        raise PresentationError("alpha makes the derived subgroup too small")
    return P


def non_capable_witness(d: int, p: int) -> PcPresentation:
    """Rank-full group with ``x_1^p = [x_1, x_2]`` and all other powers trivial."""
    base = free_special(d, p)
    r = base.r
    # [x_1, x_2] = [x_2, x_1]^-1
    pi1 = tuple((-x) % p for x in base.comm[(2, 1)])
    pw = [pi1] + [(0,) * r] * (d - 1)
    return PcPresentation(p, d, r, base.comm, pw, label=f"non-capable-witness(d={d},p={p})",
                          family="non-capable-witness", params={"d": d, "p": p, "t": 1})


def extraspecial(p: int, exponent: int | None = None, order: int | None = None) -> PcPresentation:
    """Extraspecial group of order p^3, or its direct product with ``Z_p`` (order p^4).

    ``exponent`` is ``p`` (Heisenberg group) or ``p**2``.
    """
    if not fp.is_prime(p):
        raise PresentationError(f"p={p} is not prime")
    exponent = p if exponent is None else exponent
    order = p**3 if order is None else order
    if exponent not in (p, p * p):
        raise PresentationError("exponent must be p or p^2")
    if order not in (p**3, p**4):
        raise PresentationError("order must be p^3 or p^4")
    d = 2 if order == p**3 else 3
    pw = [(1,) if exponent != p else (0,)] + [(0,)] * (d - 1)
    tag = "p" if exponent == p else "p2"
    return PcPresentation(p, d, 1, {(2, 1): (1,)}, pw, label=f"extraspecial(p={p},exp={tag},order={order})",
                          family="extraspecial", params={"p": p, "exponent": exponent, "order": order})


def abelian(p: int, exponents: Sequence[int]) -> PcPresentation:
    """Direct sum of cyclic groups ``Z_{p^e}``, each ``e`` in {1, 2}."""
    if not fp.is_prime(p):
        raise PresentationError(f"p={p} is not prime")
    if any(e not in (1, 2) for e in exponents):
        raise PresentationError("cyclic factors must have order p or p^2")
    d = len(exponents)
    r = sum(1 for e in exponents if e == 2)
    pw, k = [], 0
    for e in exponents:
        if e == 2:
            pw.append(_unit(r, k))
            k += 1
        else:
            pw.append((0,) * r)
    name = " + ".join(f"Z{p**e}" for e in exponents) or "1"
    return PcPresentation(p, d, r, {}, pw, label=f"abelian({name})", family="abelian",
                          params={"p": p, "exponents": list(exponents)})


def trivial(p: int) -> PcPresentation:
    return PcPresentation(p, 0, 0, label="trivial", family="abelian", params={"p": p, "exponents": []})


FAMILIES = {
    "free-special": free_special,
    "rank-full": exp_p2_family,
    "rank-deficient": rank_deficient,
    "non-capable-witness": non_capable_witness,
}


def build_family(name: str, d: int, p: int, t: int = 0) -> PcPresentation:
    """Family by CLI name; ``t`` selects the canonical power table."""
    if name == "free-special":
        if t:
            return exp_p2_family(d, p, t=t)
        return free_special(d, p)
    if name == "rank-full":
        return exp_p2_family(d, p, t=t)
    if name == "rank-deficient":
        r = d * (d - 1) // 2 - 1
        return rank_deficient(d, p, pi=standard_power_table(d, t, r) if t else None)
    if name == "non-capable-witness":
        return non_capable_witness(d, p)
    raise PresentationError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
