"""Line-oriented session files.

    prime 32003            # optional
    vars x y
    quotient               # optional, followed by indented generators
      x^3
    matrix 2 3
    x y 0
    0 x y
    module L free 1        # or: module L coker <r> <m>, then r rows of m entries
    option nu_max 4

Matrix entries are separated by whitespace.  Spaces around binary operators
are tolerated ("x + y" is one entry), but "x -y" is read as two entries.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .arith import PrimeField, Ring, render_poly
from .brcomplex import InputDatum
from .errors import BrimkitError, InputError, RankMismatch
from .modpres import PresentedModule, free_module

log = logging.getLogger(__name__)

DEFAULT_PRIME = 32003


@dataclass
class Session:
    ring: Ring
    phi: list
    L: PresentedModule
    L_kind: str = "free"
    L_matrix: list = field(default_factory=list)
    options: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    _datum: InputDatum | None = field(default=None, repr=False)

    @property
    def g(self) -> int:
        return len(self.phi)

    @property
    def f(self) -> int:
        return len(self.phi[0])

    @property
    def datum(self) -> InputDatum:
        if self._datum is None:
            self._datum = InputDatum(self.ring, self.phi, self.L)
        return self._datum

    @property
    def certified(self) -> bool:
        return self.datum.certified

    def same_as(self, other: "Session") -> bool:
        """Semantic equality: same ring, same entries, same L presentation."""
        return (self.ring == other.ring and self.phi == other.phi
                and self.L_kind == other.L_kind and self.L.rank == other.L.rank
                and self.L_matrix == other.L_matrix and self.options == other.options)


_BINARY_END = tuple("+-*^(")
_BINARY_START = tuple("+*^)")


def split_entries(line: str) -> list[str]:
    """Whitespace split that glues pieces joined by a dangling operator."""
    out: list[str] = []
    glue = False
    for tok in line.split():
        if out and (glue or tok.startswith(_BINARY_START) or tok == "-"):
            out[-1] += tok
        else:
            out.append(tok)
        glue = tok.endswith(_BINARY_END)
    return out


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def _err(lineno: int, msg: str, **info) -> InputError:
    return InputError(f"line {lineno}: {msg}", line=lineno, **info)


def parse_session(text: str) -> Session:
    lines = [(n + 1, _strip(raw)) for n, raw in enumerate(text.splitlines())]
    lines = [(n, s) for n, s in lines if s.strip()]
    prime = DEFAULT_PRIME
    variables = None
    quotient: list[tuple[int, str]] = []
    matrix_rows: list[tuple[int, list[str]]] | None = None
    g = f = None
    L_decl = None
    L_rows: list[tuple[int, list[str]]] = []
    options: dict = {}
    k = 0

    def take_rows(count: int, what: str):
        nonlocal k
        rows = []
        for _ in range(count):
            if k >= len(lines):
                raise _err(lines[-1][0], f"expected {count} rows for {what}, file ended")
            rows.append((lines[k][0], split_entries(lines[k][1])))
            k += 1
        return rows

    def ints(n, words, count, usage):
        if len(words) != count or not all(re.fullmatch(r"\d+", w) for w in words):
            raise _err(n, f"usage: {usage}")
        return [int(w) for w in words]

    while k < len(lines):
        n, line = lines[k]
        k += 1
        words = line.split()
        head = words[0]
        if head == "prime":
            (prime,) = ints(n, words[1:], 1, "prime <int>")
        elif head == "vars":
            if len(words) < 2:
                raise _err(n, "usage: vars <name>+")
            variables = tuple(words[1:])
        elif head == "quotient":
            if len(words) != 1:
                raise _err(n, "quotient takes no arguments, list generators on indented lines")
            while k < len(lines) and lines[k][1][:1].isspace():
                quotient.append((lines[k][0], lines[k][1].strip()))
                k += 1
        elif head == "matrix":
            g, f = ints(n, words[1:], 2, "matrix <g> <f>")
            if f < g:
                raise RankMismatch(f"line {n}: f >= g required", line=n)
            if g == 0:
                raise _err(n, "matrix needs at least one row")
            matrix_rows = take_rows(g, "matrix")
            for rn, row in matrix_rows:
                if len(row) != f:
                    raise _err(rn, f"expected {f} entries, got {len(row)}")
        elif head == "module":
            if len(words) < 3 or words[1] != "L":
                raise _err(n, "usage: module L free <r> | module L coker <r> <m>")
            if words[2] == "free":
                (r,) = ints(n, words[3:], 1, "module L free <r>")
                L_decl = ("free", r, 0)
            elif words[2] == "coker":
                r, m = ints(n, words[3:], 2, "module L coker <r> <m>")
                L_decl = ("coker", r, m)
                L_rows = take_rows(r, "module L") if m > 0 else []
                for rn, row in L_rows:
                    if len(row) != m:
                        raise _err(rn, f"expected {m} entries, got {len(row)}")
            else:
                raise _err(n, f"unknown module kind {words[2]!r}")
        elif head == "option":
            if len(words) < 3:
                raise _err(n, "usage: option <key> <value>")
            options[words[1]] = " ".join(words[2:])
        else:
            raise _err(n, f"unknown directive {head!r}")

    if variables is None:
        raise InputError("missing 'vars' line")
    if matrix_rows is None:
        raise InputError("missing 'matrix' block")
    try:
        base = Ring(variables, PrimeField(prime))
    except BrimkitError as e:
        raise InputError(f"bad ring declaration: {e}") from e
    ring = base.with_quotient([_parse(base, n, s) for n, s in quotient]) if quotient else base
    phi = [[_parse(ring, rn, s) for s in row] for rn, row in matrix_rows]
    if L_decl is None:
        L_decl = ("free", 1, 0)
    kind, r, m = L_decl
    L_matrix = [[_parse(ring, rn, s) for s in row] for rn, row in L_rows]
    if kind == "free":
        L = free_module(ring, r)
    else:
        cols = [{(i, e): c for i in range(r) for e, c in L_matrix[i][j].terms.items()} for j in range(m)]
        L = PresentedModule(ring, r, cols)
    if r == 0:
        raise InputError("module L must have positive rank")
    session = Session(ring, phi, L, kind, L_matrix, options)
    if not session.certified:
        msg = "certificate_missing: M (x) L is not supported at the origin only"
        session.warnings.append(msg)
        log.warning(msg)
    return session


def _parse(ring: Ring, lineno: int, text: str):
    try:
        return ring.parse(text)
    except InputError as e:
        raise InputError(f"line {lineno}: {e}", line=lineno, **e.info) from e


def render_session(s: Session) -> str:
    out = []
    if s.ring.p != DEFAULT_PRIME:
        out.append(f"prime {s.ring.p}")
    out.append("vars " + " ".join(s.ring.variables))
    if s.ring.quotient:
        out.append("quotient")
        out.extend("  " + render_poly(q) for q in s.ring.quotient_polys())
    out.append(f"matrix {s.g} {s.f}")
    out.extend(" ".join(render_poly(x).replace(" ", "") for x in row) for row in s.phi)
    if s.L_kind == "free":
        out.append(f"module L free {s.L.rank}")
    else:
        m = len(s.L_matrix[0]) if s.L_matrix else 0
        out.append(f"module L coker {s.L.rank} {m}")
        out.extend(" ".join(render_poly(x).replace(" ", "") for x in row) for row in s.L_matrix)
    for key, value in s.options.items():
        out.append(f"option {key} {value}")
    return "\n".join(out) + "\n"


def load_session(path) -> Session:
    with open(path, encoding="utf-8") as fh:
        return parse_session(fh.read())
