"""Line-based text format for presentations.

Example::

    # free class-2 exponent-3 group on 3 generators
    p 3
    gens 3
    comm 2 1 = u 1
    comm 3 1 = u 2
    comm 3 2 = u 3
    pow 1 = u 1 u 3^2

``central r`` fixes the number of central generators; without it r is the
largest ``u`` index mentioned.  Missing ``comm``/``pow`` lines mean trivial
relations.  :func:`emit_presentation` writes the canonical form, which
:func:`parse_presentation` reads back to an equal presentation.
"""

from __future__ import annotations

import re

from .pcgroup import PcPresentation, PresentationError


class PresentationParseError(PresentationError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_FACTOR = re.compile(r"^(\d+)(?:\^(-?\d+))?$")


def _parse_word(tokens: list[str], lineno: int) -> dict[int, int]:
    """``u 1 u 3^2`` -> {1: 1, 3: 2}; ``1`` alone is the identity."""
    if tokens == ["1"] or not tokens:
        return {}
    out: dict[int, int] = {}
    k = 0
    while k < len(tokens):
        if tokens[k] != "u" or k + 1 >= len(tokens):
            raise PresentationParseError(lineno, f"expected 'u <index>[^exp]', got {' '.join(tokens[k:])!r}")
        m = _FACTOR.match(tokens[k + 1])
        if not m:
            raise PresentationParseError(lineno, f"bad factor {tokens[k + 1]!r}")
        idx = int(m.group(1))
        if idx < 1:
            raise PresentationParseError(lineno, "u indices start at 1")
        out[idx] = out.get(idx, 0) + int(m.group(2) or 1)
        k += 2
    return out


def parse_presentation(text: str, *, allow_unreduced: bool = False, label: str = "") -> PcPresentation:
    p = d = r = None
    comm: dict[tuple[int, int], dict[int, int]] = {}
    pw: dict[int, dict[int, int]] = {}
    lines: dict[object, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        try:
            if head in ("p", "gens", "central"):
                if len(tok) != 2:
                    raise PresentationParseError(lineno, f"'{head}' takes one integer")
                val = int(tok[1])
                if head == "p":
                    p = val
                elif head == "gens":
                    d = val
                else:
                    r = val
            elif head == "comm":
                if len(tok) < 5 or tok[3] != "=":
                    raise PresentationParseError(lineno, "expected 'comm i j = <word>'")
                i, j = int(tok[1]), int(tok[2])
                if (i, j) in comm:
                    raise PresentationParseError(lineno, f"duplicate comm {i} {j}")
                if i <= j:
                    raise PresentationParseError(lineno, f"comm needs i > j, got {i} {j}")
                comm[(i, j)] = _parse_word(tok[4:], lineno)
                lines[(i, j)] = lineno
            elif head == "pow":
                if len(tok) < 4 or tok[2] != "=":
                    raise PresentationParseError(lineno, "expected 'pow i = <word>'")
                i = int(tok[1])
                if i in pw:
                    raise PresentationParseError(lineno, f"duplicate pow {i}")
                pw[i] = _parse_word(tok[3:], lineno)
                lines[i] = lineno
            else:
                raise PresentationParseError(lineno, f"unknown keyword {head!r}")
        except ValueError as exc:
            if isinstance(exc, PresentationParseError):
                raise
            raise PresentationParseError(lineno, f"not an integer in {line!r}") from None
    if p is None:
        raise PresentationParseError(0, "missing 'p' line")
    if d is None:
        raise PresentationParseError(0, "missing 'gens' line")
    used = [k for w in list(comm.values()) + list(pw.values()) for k in w]
    if r is None:
        r = max(used, default=0)
    elif used and max(used) > r:
        raise PresentationParseError(0, f"u index {max(used)} exceeds central {r}")
    for (i, j), ln in ((k, v) for k, v in lines.items() if isinstance(k, tuple)):
        if i > d:
            raise PresentationParseError(ln, f"generator {i} exceeds gens {d}")
    for i in pw:
        if not 1 <= i <= d:
            raise PresentationParseError(lines[i], f"generator {i} out of range 1..{d}")

    def vec(w):
        v = [0] * r
        for k, e in w.items():
            v[k - 1] += e
        return tuple(x % p for x in v)

    return PcPresentation(
        p, d, r,
        {k: vec(w) for k, w in comm.items()},
        [vec(pw.get(i, {})) for i in range(1, d + 1)],
        label=label,
        allow_unreduced=allow_unreduced,
    )


def _word(v) -> str:
    parts = [f"u {k + 1}" if e == 1 else f"u {k + 1}^{e}" for k, e in enumerate(v) if e]
    return " ".join(parts)


def emit_presentation(P: PcPresentation) -> str:
    out = [f"p {P.p}", f"gens {P.d}", f"central {P.r}"]
    for (i, j), v in sorted(P.comm.items()):
        if any(v):
            out.append(f"comm {i} {j} = {_word(v)}")
    for i, v in enumerate(P.pow, 1):
        if any(v):
            out.append(f"pow {i} = {_word(v)}")
    return "\n".join(out) + "\n"


def load_presentation(path, **kw) -> PcPresentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read(), **kw)
