"""Truncated linear algebra over F_p, independent of the Groebner machinery.

The local length of F/U at the origin equals dim F/(U + m^(B+1) F) as soon as
m^(B+1) F lies in U locally.  If the truncated dimension does not change
between B and B+1, then m^(B+1) F is inside U + m^(B+2) F and Nakayama gives
exactly that, so the truncation degree is increased until two consecutive
values agree.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

from .arith import Polynomial, Ring
from .errors import InfiniteLength

MAX_TRUNCATION = 80


def monomials_upto(n: int, B: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(B + 1):
        for c in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


def rank_mod_p(rows, p: int) -> int:
    """Rank of a sparse matrix (rows are {column: value}) over F_p."""
    pivots: dict = {}
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {k: v * inv % p for k, v in row.items()}
                break
            f = row[c]
            for k, v in piv.items():
                nv = (row.get(k, 0) - f * v) % p
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def truncated_colength(ring: Ring, rank: int, relations, B: int) -> int:
    """dim_k of F / (U + J F + m^(B+1) F) with F = R^rank, by row elimination."""
    n = ring.nvars
    monos = monomials_upto(n, B)
    col = {}
    # high degree columns first keeps fill-in low
    for pos in range(rank):
        for m in monos:
            col[(pos, m)] = None
    order = sorted(col, key=lambda t: (-sum(t[1]), t[0], t[1]))
    col = {t: k for k, t in enumerate(order)}
    rels = [_as_components(r, rank) for r in relations]
    for q in ring.quotient_polys():
        for pos in range(rank):
            comps = [None] * rank
            comps[pos] = q.terms
            rels.append(comps)
    rows = []
    for comps in rels:
        low = min((sum(e) for c in comps if c for e in c), default=None)
        if low is None:
            continue
        for mu in monos:
            if sum(mu) + low > B:
                continue
            row = {}
            for pos, c in enumerate(comps):
                if not c:
                    continue
                for e, v in c.items():
                    t = tuple(a + b for a, b in zip(e, mu))
                    if sum(t) <= B:
                        k = col[(pos, t)]
                        row[k] = row.get(k, 0) + v
            if row:
                rows.append(row)
    return len(col) - rank_mod_p(rows, ring.p)


def _as_components(rel, rank: int):
    comps = [dict() for _ in range(rank)]
    if isinstance(rel, Polynomial):
        comps[0] = dict(rel.terms)
        return comps
    if hasattr(rel, "components"):
        for i, f in enumerate(rel.components):
            comps[i] = dict(f.terms)
        return comps
    for (pos, e), c in rel.items():
        comps[pos][e] = c
    return comps


def local_length(ring: Ring, rank: int, relations, start: int = 0, cap: int = MAX_TRUNCATION) -> int:
    """Length of R^rank/U localized at the origin, via stabilizing truncations."""
    if rank == 0:
        return 0
    B = start
    prev = truncated_colength(ring, rank, relations, B)
    while B < cap:
        B += 1
        cur = truncated_colength(ring, rank, relations, B)
        if cur == prev:
            return cur
        prev = cur
    raise InfiniteLength(f"truncated colength still growing at degree {cap}")


def module_length_oracle(module) -> int:
    return local_length(module.ring, module.rank, module.raw_relations)


def br_function_oracle(ring: Ring, phi, L_rank: int, L_relations, nu: int) -> int:
    """P_phi(nu, L) built from scratch: products of the gamma_j expanded in
    F_p[x, T] by plain polynomial arithmetic, then a truncated rank count."""
    g = len(phi)
    f = len(phi[0])
    tnames = tuple(f"_T{i}" for i in range(g))
    big = Ring(ring.variables + tnames, ring.field)
    n = ring.nvars

    def lift(poly: Polynomial) -> Polynomial:
        return Polynomial(big, {e + (0,) * g: c for e, c in ring(poly).terms.items()})

    gammas = []
    for j in range(f):
        acc = big.zero()
        for i in range(g):
            acc = acc + lift(phi[i][j]) * big.var(n + i)
        gammas.append(acc)
    tmonos = []
    for c in combinations_with_replacement(range(g), nu):
        e = [0] * g
        for i in c:
            e[i] += 1
        tmonos.append(tuple(e))
    tindex = {m: k for k, m in enumerate(tmonos)}
    rank = len(tmonos) * L_rank
    rels = []
    for c in combinations_with_replacement(range(f), nu):
        prod = big.one()
        for j in c:
            prod = prod * gammas[j]
        for l in range(L_rank):
            rel = {}
            for e, v in prod.terms.items():
                rel[(tindex[e[n:]] * L_rank + l, e[:n])] = v
            rels.append(rel)
    for t in range(len(tmonos)):
        for lrel in L_relations:
            comps = _as_components(lrel, L_rank)
            rel = {}
            for l, comp in enumerate(comps):
                for e, v in comp.items():
                    rel[(t * L_rank + l, e)] = v
            rels.append(rel)
    return local_length(ring, rank, rels)
