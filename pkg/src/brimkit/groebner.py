"""Buchberger Groebner bases for submodules of free modules over F_p[x]/J.

Module elements are handled internally as raw dicts ``{(pos, exps): coeff}``.
The module order is position-over-term with e_0 > e_1 > ... and the ring's
monomial order inside each position.  Computations over a quotient ring are
realised by adjoining ``J * e_i`` for every position.
"""

from __future__ import annotations

import heapq
from collections import deque
from functools import lru_cache
from operator import le

from .arith import EXP_BASE, Polynomial, Ring, mul_terms
from .errors import InfiniteLength, RankMismatch

INFINITE = float("inf")


class FreeVector:
    """Element of the free module R^r, stored as a tuple of polynomials."""

    __slots__ = ("ring", "components")

    def __init__(self, ring: Ring, components):
        comps = tuple(ring(c) for c in components)
        self.ring = ring
        self.components = comps

    @classmethod
    def from_raw(cls, ring: Ring, rank: int, raw: dict) -> "FreeVector":
        comps = [dict() for _ in range(rank)]
        for (pos, e), c in raw.items():
            comps[pos][e] = c
        out = cls.__new__(cls)
        out.ring = ring
        out.components = tuple(Polynomial(ring, d) for d in comps)
        return out

    @classmethod
    def unit(cls, ring: Ring, rank: int, i: int) -> "FreeVector":
        return cls(ring, [1 if k == i else 0 for k in range(rank)])

    @classmethod
    def zero(cls, ring: Ring, rank: int) -> "FreeVector":
        return cls(ring, [0] * rank)

    def to_raw(self) -> dict:
        return {(i, e): c for i, f in enumerate(self.components) for e, c in f.terms.items()}

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other):
        _check_rank(self, other)
        return FreeVector(self.ring, [a + b for a, b in zip(self, other)])

    def __sub__(self, other):
        _check_rank(self, other)
        return FreeVector(self.ring, [a - b for a, b in zip(self, other)])

    def __neg__(self):
        return FreeVector(self.ring, [-a for a in self])

    def scale(self, f) -> "FreeVector":
        f = self.ring(f)
        return FreeVector(self.ring, [f * a for a in self])

    def __eq__(self, other):
        return isinstance(other, FreeVector) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def _check_rank(a, b):
    if len(a) != len(b):
        raise RankMismatch(f"rank {len(a)} vs {len(b)}")


def vec(ring: Ring, *components) -> FreeVector:
    return FreeVector(ring, components)


def matrix_columns(ring: Ring, rows) -> list[FreeVector]:
    """Columns of a matrix given as a list of rows (strings, ints or polynomials)."""
    rows = [[ring(x) for x in row] for row in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise RankMismatch("ragged matrix")
    return [FreeVector(ring, [r[j] for r in rows]) for j in range(ncols)]


# ---------------------------------------------------------------- term order

class _TermOrder:
    """Integer keys for module terms; larger key means larger term."""

    def __init__(self, ring: Ring):
        self.mono_key = ring.order.key
        self.shift = EXP_BASE ** (ring.nvars + len(ring.order.blocks) + 1)
        self.key = lru_cache(maxsize=1 << 20)(self._key)

    def _key(self, term) -> int:
        return self.mono_key(term[1]) - term[0] * self.shift


_ORDERS: dict = {}


def _term_order(ring: Ring) -> _TermOrder:
    k = (ring.order_kind, ring.nvars, ring.order.blocks)
    o = _ORDERS.get(k)
    if o is None:
        o = _ORDERS[k] = _TermOrder(ring)
    return o


# ------------------------------------------------------------ raw helpers

def _lead(raw: dict, key):
    return max(raw, key=key)


def _monic(raw: dict, key, p: int) -> dict:
    lt = _lead(raw, key)
    c = raw[lt]
    if c == 1:
        return raw
    inv = pow(c, -1, p)
    return {t: a * inv % p for t, a in raw.items()}


def _divides(a, b) -> bool:
    return all(map(le, a, b))


class _Element:
    __slots__ = ("raw", "lt", "pos", "exps", "tail", "length")

    def __init__(self, raw: dict, key):
        self.raw = raw
        self.lt = _lead(raw, key)
        self.pos, self.exps = self.lt
        self.tail = [(t, c) for t, c in raw.items() if t != self.lt]
        self.length = len(raw)


class _Reducer:
    """Basis elements indexed by leading position for divisor lookup."""

    def __init__(self):
        self.by_pos: dict[int, list[_Element]] = {}

    def add(self, el: _Element):
        lst = self.by_pos.setdefault(el.pos, [])
        lst.append(el)
        lst.sort(key=lambda x: x.length)

    def find(self, term):
        for el in self.by_pos.get(term[0], ()):
            if _divides(el.exps, term[1]):
                return el
        return None


def _reduce(raw: dict, red: _Reducer, key, p: int, full: bool = True) -> dict:
    """Normal form of ``raw`` against monic elements held in ``red``.

    With ``full=False`` only the leading term is reduced (stops at the first
    irreducible leading term and returns the remaining polynomial as is).
    """
    f = dict(raw)
    heap = [(-key(t), t) for t in f]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, t = heapq.heappop(heap)
        c = f.get(t)
        if c is None:
            continue
        el = red.find(t)
        if el is None:
            if not full:
                rem.update(f)
                return rem
            rem[t] = f.pop(t)
            continue
        del f[t]
        mult = tuple(a - b for a, b in zip(t[1], el.exps))
        q = p - c
        for (pos2, e2), c2 in el.tail:
            t2 = (pos2, tuple(a + b for a, b in zip(e2, mult)))
            old = f.get(t2)
            if old is None:
                f[t2] = q * c2 % p
                heapq.heappush(heap, (-key(t2), t2))
            else:
                v = (old + q * c2) % p
                if v:
                    f[t2] = v
                else:
                    del f[t2]
    return rem


def _quotient_ideal_gb(ring: Ring) -> list[dict]:
    """Reduced GB (raw rank-1 dicts keyed by exps) of J, cached per ring."""
    if not ring.quotient:
        return []
    cache_key = (ring.variables, ring.p, ring.order_kind, ring.quotient)
    hit = _J_CACHE.get(cache_key)
    if hit is None:
        gens = [{(0, e): c for e, c in t} for t in ring.quotient]
        hit = [{e: c for (_, e), c in g.items()} for g in _buchberger_raw(gens, ring, 1)]
        _J_CACHE[cache_key] = hit
    return hit


_J_CACHE: dict = {}


def _quotient_vectors(ring: Ring, positions) -> list[dict]:
    jgb = _quotient_ideal_gb(ring)
    return [{(i, e): c for e, c in g.items()} for i in positions for g in jgb]


def _lcm(a, b):
    return tuple(map(max, a, b))


def _buchberger_raw(gens: list[dict], ring: Ring, rank: int) -> list[dict]:
    """Reduced, monic Groebner basis of the raw generators (J not adjoined)."""
    order = _term_order(ring)
    key = order.key
    p = ring.p
    red = _Reducer()
    basis: list[_Element] = []
    pairs: list = []
    pending: set = set()
    counter = 0
    use_product = rank == 1

    def insert(raw):
        nonlocal counter
        el = _Element(_monic(raw, key, p), key)
        k = len(basis)
        for i, other in enumerate(basis):
            if other.pos != el.pos:
                continue
            lcm = _lcm(other.exps, el.exps)
            if use_product and all(a == 0 or b == 0 for a, b in zip(other.exps, el.exps)):
                continue
            heapq.heappush(pairs, (key((el.pos, lcm)), counter, i, k, lcm))
            pending.add((i, k))
            counter += 1
        basis.append(el)
        red.add(el)

    for g in gens:
        if not g:
            continue
        h = _reduce(g, red, key, p, full=False)
        if h:
            insert(h)

    while pairs:
        _, _, i, j, lcm = heapq.heappop(pairs)
        pending.discard((i, j))
        gi, gj = basis[i], basis[j]
        pos = gi.pos
        # Buchberger's chain criterion
        skip = False
        for l, gl in enumerate(basis):
            if l in (i, j) or gl.pos != pos or not _divides(gl.exps, lcm):
                continue
            if (min(i, l), max(i, l)) not in pending and (min(j, l), max(j, l)) not in pending:
                skip = True
                break
        if skip:
            continue
        mi = tuple(a - b for a, b in zip(lcm, gi.exps))
        mj = tuple(a - b for a, b in zip(lcm, gj.exps))
        s = {}
        for (ps, e), c in gi.tail:
            s[(ps, tuple(a + b for a, b in zip(e, mi)))] = c
        for (ps, e), c in gj.tail:
            t = (ps, tuple(a + b for a, b in zip(e, mj)))
            v = (s.get(t, 0) - c) % p
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        if not s:
            continue
        h = _reduce(s, red, key, p, full=False)
        if h:
            insert(h)

    return _interreduce([el.raw for el in basis], ring)


def _interreduce(raws: list[dict], ring: Ring) -> list[dict]:
    key = _term_order(ring).key
    p = ring.p
    els = [_Element(r, key) for r in raws if r]
    # drop elements whose leading term is divisible by another's
    els.sort(key=lambda e: key(e.lt))
    minimal: list[_Element] = []
    for el in els:
        if any(m.pos == el.pos and _divides(m.exps, el.exps) for m in minimal):
            continue
        minimal.append(el)
    out = []
    for idx, el in enumerate(minimal):
        red = _Reducer()
        for other in minimal:
            if other is not el:
                red.add(other)
        tail = {t: c for t, c in el.raw.items() if t != el.lt}
        tail = _reduce(tail, red, key, p, full=True)
        tail[el.lt] = 1
        out.append(tail)
    out.sort(key=lambda r: key(_lead(r, key)), reverse=True)
    return out


# -------------------------------------------------------------- public API

class GroebnerBasis:
    """Reduced Groebner basis of a submodule of (F_p[x]/J)^rank.

    ``elements`` are raw monic dicts; J * e_i is already folded in.
    """

    def __init__(self, ring: Ring, rank: int, elements: list[dict]):
        self.ring = ring
        self.rank = rank
        self.elements = elements
        key = _term_order(ring).key
        self._key = key
        self._red = _Reducer()
        self._els = [_Element(r, key) for r in elements]
        for el in self._els:
            self._red.add(el)

    @property
    def generators(self) -> list[FreeVector]:
        return [FreeVector.from_raw(self.ring, self.rank, r) for r in self.elements]

    @property
    def order(self):
        return self.ring.order

    def leading_terms(self) -> list[tuple[int, tuple[int, ...]]]:
        return [el.lt for el in self._els]

    def leading_monomials_by_pos(self) -> dict[int, list[tuple[int, ...]]]:
        out: dict[int, list] = {i: [] for i in range(self.rank)}
        for el in self._els:
            out[el.pos].append(el.exps)
        return out

    def reduce_raw(self, raw: dict) -> dict:
        return _reduce(raw, self._red, self._key, self.ring.p, full=True)

    def normal_form(self, v: FreeVector) -> FreeVector:
        if len(v) != self.rank:
            raise RankMismatch(f"vector of rank {len(v)} against basis of rank {self.rank}")
        return FreeVector.from_raw(self.ring, self.rank, self.reduce_raw(v.to_raw()))

    def contains(self, v) -> bool:
        raw = v.to_raw() if isinstance(v, FreeVector) else v
        return not self.reduce_raw(raw)

    def is_unit(self) -> bool:
        """True when the submodule is the whole free module."""
        zero = (0,) * self.ring.nvars
        return {el.lt for el in self._els if el.exps == zero} >= {(i, zero) for i in range(self.rank)}

    def verify(self) -> bool:
        """Re-check Buchberger's criterion: every S-pair reduces to zero."""
        p = self.ring.p
        els = self._els
        for a in range(len(els)):
            for b in range(a + 1, len(els)):
                gi, gj = els[a], els[b]
                if gi.pos != gj.pos:
                    continue
                lcm = _lcm(gi.exps, gj.exps)
                mi = tuple(x - y for x, y in zip(lcm, gi.exps))
                mj = tuple(x - y for x, y in zip(lcm, gj.exps))
                s = {}
                for (ps, e), c in gi.raw.items():
                    s[(ps, tuple(x + y for x, y in zip(e, mi)))] = c
                for (ps, e), c in gj.raw.items():
                    t = (ps, tuple(x + y for x, y in zip(e, mj)))
                    v = (s.get(t, 0) - c) % p
                    if v:
                        s[t] = v
                    else:
                        s.pop(t, None)
                if self.reduce_raw(s):
                    return False
        return True

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"GroebnerBasis(rank={self.rank}, {self.generators})"


def _raw_inputs(gens, rank: int) -> list[dict]:
    out = []
    for g in gens:
        if isinstance(g, FreeVector):
            if len(g) != rank:
                raise RankMismatch(f"generator of rank {len(g)} in a rank-{rank} computation")
            out.append(g.to_raw())
        elif isinstance(g, Polynomial):
            if rank != 1:
                raise RankMismatch("bare polynomial in a module computation")
            out.append({(0, e): c for e, c in g.terms.items()})
        else:
            out.append(dict(g))
    return out


def buchberger(gens, ring: Ring, rank: int | None = None, quotient: bool = True) -> GroebnerBasis:
    """Groebner basis of the submodule of R^rank spanned by ``gens``.

    ``gens`` may be FreeVectors, polynomials (rank 1) or raw dicts.  With
    ``quotient`` the ring's ideal J is adjoined in every position.
    """
    gens = list(gens)
    if rank is None:
        if not gens:
            raise RankMismatch("rank required for an empty generator list")
        first = gens[0]
        rank = len(first) if isinstance(first, FreeVector) else 1
    raws = _raw_inputs(gens, rank)
    if quotient:
        raws = _quotient_vectors(ring, range(rank)) + raws
    return GroebnerBasis(ring, rank, _buchberger_raw(raws, ring, rank))


def ideal_gb(polys, ring: Ring) -> GroebnerBasis:
    return buchberger([ring(f) for f in polys], ring, 1)


def normal_form(v: FreeVector, gb: GroebnerBasis) -> FreeVector:
    return gb.normal_form(v)


# ------------------------------------------------------- syzygies / kernels

def _augmented_kernel(images: list[dict], rank: int, relations: list[dict], ring: Ring,
                      ncols: int) -> list[dict]:
    """GB elements of {a in R^ncols : sum a_k images_k in <relations> + J R^rank}.

    Builds (images_k | e_k) in R^(rank+ncols) with the image block ranked
    higher, so basis elements led in the tag block have a zero image block.
    Returned dicts are re-indexed to positions 0..ncols-1 and form a GB of
    the kernel plus J R^ncols.
    """
    gens = []
    for k, img in enumerate(images):
        g = dict(img)
        g[(rank + k, (0,) * ring.nvars)] = 1
        gens.append(g)
    gens.extend(dict(r) for r in relations)
    gens = _quotient_vectors(ring, range(rank + ncols)) + gens
    gb = _buchberger_raw(gens, ring, rank + ncols)
    out = []
    for g in gb:
        lt = _lead(g, _term_order(ring).key)
        if lt[0] >= rank:
            out.append({(pos - rank, e): c for (pos, e), c in g.items()})
    return out


def _drop_quotient_multiples(raws: list[dict], ring: Ring) -> list[dict]:
    if not ring.quotient:
        return raws
    jgb = GroebnerBasis(ring, 1, [{(0, e): c for e, c in g.items()} for g in _quotient_ideal_gb(ring)])
    out = []
    for r in raws:
        comps: dict[int, dict] = {}
        for (pos, e), c in r.items():
            comps.setdefault(pos, {})[(0, e)] = c
        if any(jgb.reduce_raw(c) for c in comps.values()):
            out.append(r)
    return out


def syzygy_basis(gens: list[FreeVector], ring: Ring | None = None) -> list[FreeVector]:
    """Generators of the kernel of R^m -> R^r, e_k -> gens[k] (over R = F_p[x]/J)."""
    if not gens:
        raise RankMismatch("syzygy_basis needs at least one generator")
    ring = ring or gens[0].ring
    r = len(gens[0])
    for g in gens:
        if len(g) != r:
            raise RankMismatch("generators of different ranks")
    m = len(gens)
    raws = _augmented_kernel([g.to_raw() for g in gens], r, [], ring, m)
    raws = _drop_quotient_multiples(raws, ring)
    return [FreeVector.from_raw(ring, m, x) for x in raws]


# ----------------------------------------------------- counting / dimension

def count_between(upper: dict, lower: dict, nvars: int, limit: int = 10 ** 7):
    """Number of terms in in(K) \\ in(B) given minimal-ish leading monomials.

    ``upper[pos]`` lists generators of in(K) at position ``pos`` and
    ``lower[pos]`` those of in(B), with in(B) inside in(K).  Returns INFINITE
    when the difference is unbounded.  Every element of the difference is
    reachable from a generator of in(K) by variable multiplications staying
    inside the difference, so a breadth-first walk enumerates it; an infinite
    difference always contains a full ray x_i^k * m, detected directly.
    """
    total = 0
    for pos, ups in upper.items():
        lows = lower.get(pos, [])

        def in_lower(m):
            return any(_divides(b, m) for b in lows)

        seen = set()
        queue = deque()
        for u in sorted(set(ups), key=sum):
            if not in_lower(u) and u not in seen:
                seen.add(u)
                queue.append(u)
        while queue:
            m = queue.popleft()
            for i in range(nvars):
                if not any(all(b[j] <= m[j] for j in range(nvars) if j != i) for b in lows):
                    return INFINITE
                nxt = m[:i] + (m[i] + 1,) + m[i + 1:]
                if nxt not in seen and not in_lower(nxt):
                    seen.add(nxt)
                    queue.append(nxt)
            if len(seen) > limit:
                return INFINITE
        total += len(seen)
    return total


def quotient_kdim(gb: GroebnerBasis):
    """k-dimension of R^rank / (submodule), INFINITE when unbounded."""
    one = (0,) * gb.ring.nvars
    upper = {i: [one] for i in range(gb.rank)}
    return count_between(upper, gb.leading_monomials_by_pos(), gb.ring.nvars)


def standard_monomials(gb: GroebnerBasis) -> list[tuple[int, tuple[int, ...]]]:
    if quotient_kdim(gb) == INFINITE:
        raise InfiniteLength("infinitely many standard monomials")
    lows = gb.leading_monomials_by_pos()
    n = gb.ring.nvars
    out = []
    for pos in range(gb.rank):
        seen = set()
        queue = deque([(0,) * n])
        while queue:
            m = queue.popleft()
            if m in seen or any(_divides(b, m) for b in lows[pos]):
                continue
            seen.add(m)
            for i in range(n):
                queue.append(m[:i] + (m[i] + 1,) + m[i + 1:])
        out.extend((pos, m) for m in seen)
    key = _term_order(gb.ring).key
    return sorted(out, key=key)


def krull_dim(gb: GroebnerBasis) -> int:
    """Dimension of R/I from the initial ideal; -1 for the unit ideal."""
    if gb.rank != 1:
        raise RankMismatch("krull_dim needs an ideal")
    n = gb.ring.nvars
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in gb.leading_monomials_by_pos()[0]]
    if any(not s for s in supports):
        return -1
    from itertools import combinations
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return -1


def origin_supported(gb: GroebnerBasis) -> bool:
    """True iff R/I is finite dimensional and every variable is nilpotent in it."""
    if gb.rank != 1:
        raise RankMismatch("origin_supported needs an ideal")
    D = quotient_kdim(gb)
    if D == INFINITE:
        raise InfiniteLength("quotient is not finite dimensional")
    if D == 0:
        return True
    n = gb.ring.nvars
    for i in range(n):
        e = tuple(D if j == i else 0 for j in range(n))
        if gb.reduce_raw({(0, e): 1}):
            return False
    return True


def multiply_raw(poly_terms: dict, raw: dict, p: int) -> dict:
    """Polynomial (exps dict) times raw module vector."""
    out: dict = {}
    for e1, c1 in poly_terms.items():
        for (pos, e2), c2 in raw.items():
            t = (pos, tuple(a + b for a, b in zip(e1, e2)))
            out[t] = (out.get(t, 0) + c1 * c2) % p
    return {t: c for t, c in out.items() if c}


__all__ = [
    "INFINITE", "FreeVector", "GroebnerBasis", "buchberger", "ideal_gb", "normal_form",
    "syzygy_basis", "quotient_kdim", "krull_dim", "origin_supported", "count_between",
    "standard_monomials", "matrix_columns", "vec", "mul_terms", "multiply_raw",
]
