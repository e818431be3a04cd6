"""Finitely presented modules over F_p[x]/J and their homological algebra.

A module is ``coker(R^m -> R^r)``: a free rank and a list of relation vectors.
Vectors are kept as raw ``{(pos, exps): coeff}`` dicts for speed; the public
accessors hand out :class:`FreeVector` values.
"""

from __future__ import annotations

from math import comb
from itertools import combinations_with_replacement

from .arith import Polynomial, Ring
from .errors import (GradeBoundExceeded, IllDefinedMap, LiftFailure, NotAComplex,
                     RankMismatch)
from .groebner import (INFINITE, FreeVector, GroebnerBasis, _augmented_kernel,
                       _drop_quotient_multiples, buchberger, count_between, quotient_kdim)


def _to_raw(v, rank: int) -> dict:
    if isinstance(v, FreeVector):
        if len(v) != rank:
            raise RankMismatch(f"vector of rank {len(v)} in a module of rank {rank}")
        return v.to_raw()
    if isinstance(v, Polynomial):
        if rank != 1:
            raise RankMismatch("bare polynomial relation for a module of rank != 1")
        return {(0, e): c for e, c in v.terms.items()}
    return {t: c for t, c in v.items() if c}


class PresentedModule:
    """coker(R^m -> R^rank) over ``ring`` (J is always implied)."""

    def __init__(self, ring: Ring, rank: int, relations=(), gb: GroebnerBasis | None = None,
                 labels=None):
        self.ring = ring
        self.rank = rank
        self.raw_relations = [r for r in (_to_raw(v, rank) for v in relations) if r]
        for r in self.raw_relations:
            for pos, _ in r:
                if not 0 <= pos < rank:
                    raise RankMismatch(f"relation touches position {pos} of a rank-{rank} module")
        self._gb = gb
        self.labels = labels

    @property
    def free_rank(self) -> int:
        return self.rank

    @property
    def relations(self) -> list[FreeVector]:
        return [FreeVector.from_raw(self.ring, self.rank, r) for r in self.raw_relations]

    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = buchberger(self.raw_relations, self.ring, self.rank)
        return self._gb

    def is_free(self) -> bool:
        return not self.raw_relations

    def __repr__(self):
        return f"PresentedModule(rank={self.rank}, {len(self.raw_relations)} relations)"


def presented_module(ring: Ring, rank: int, relations=()) -> PresentedModule:
    mod = PresentedModule(ring, rank, relations)
    mod.gb  # noqa: B018 - cache the relation GB eagerly
    return mod


def zero_module(ring: Ring) -> PresentedModule:
    return PresentedModule(ring, 0, [])


def free_module(ring: Ring, rank: int) -> PresentedModule:
    return PresentedModule(ring, rank, [])


def cyclic_module(ring: Ring, ideal) -> PresentedModule:
    """R/I for a list of ideal generators."""
    return PresentedModule(ring, 1, [ring(f) for f in ideal])


def module_length(P: PresentedModule):
    if P.rank == 0:
        return 0
    return quotient_kdim(P.gb)


def module_is_zero(P: PresentedModule) -> bool:
    return P.rank == 0 or P.gb.is_unit()


def direct_sum_power(L: PresentedModule, n: int) -> PresentedModule:
    """L^n, generators ordered block by block."""
    r = L.rank
    rels = []
    for b in range(n):
        for rel in L.raw_relations:
            rels.append({(b * r + pos, e): c for (pos, e), c in rel.items()})
    return PresentedModule(L.ring, n * r, rels)


# ------------------------------------------------------------------- maps

def apply_columns(columns: list[dict], raw: dict, p: int) -> dict:
    """Image of a raw source vector under the map whose k-th column is columns[k]."""
    out: dict = {}
    for (pos, e), c in raw.items():
        for (tpos, te), tc in columns[pos].items():
            t = (tpos, tuple(a + b for a, b in zip(e, te)))
            out[t] = (out.get(t, 0) + c * tc) % p
    return {t: c for t, c in out.items() if c}


class ModuleMap:
    """Map source -> target given by the images of the source generators."""

    def __init__(self, source: PresentedModule, target: PresentedModule, columns, check: bool = True):
        self.source = source
        self.target = target
        if len(columns) != source.rank:
            raise RankMismatch(f"{len(columns)} columns for a source of rank {source.rank}")
        self.columns = [_to_raw(c, target.rank) for c in columns]
        if check:
            self.validate()

    @classmethod
    def from_matrix(cls, source, target, matrix, check: bool = True) -> "ModuleMap":
        """``matrix`` has target.rank rows and source.rank columns."""
        ring = source.ring
        if len(matrix) != target.rank or any(len(row) != source.rank for row in matrix):
            raise RankMismatch("matrix shape does not match the modules")
        cols = []
        for k in range(source.rank):
            col = {}
            for i in range(target.rank):
                for e, c in ring(matrix[i][k]).terms.items():
                    col[(i, e)] = c
            cols.append(col)
        return cls(source, target, cols, check=check)

    @property
    def matrix(self) -> list[list[Polynomial]]:
        ring = self.source.ring
        rows = [[dict() for _ in range(self.source.rank)] for _ in range(self.target.rank)]
        for k, col in enumerate(self.columns):
            for (i, e), c in col.items():
                rows[i][k][e] = c
        return [[Polynomial(ring, d) for d in row] for row in rows]

    def apply_raw(self, raw: dict) -> dict:
        return apply_columns(self.columns, raw, self.source.ring.p)

    def __call__(self, v: FreeVector) -> FreeVector:
        return FreeVector.from_raw(self.source.ring, self.target.rank, self.apply_raw(v.to_raw()))

    def validate(self):
        if self.target.rank == 0:
            return
        gb = self.target.gb
        for rel in self.source.raw_relations:
            if gb.reduce_raw(self.apply_raw(rel)):
                raise IllDefinedMap("a source relation does not map into the target relations")

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self o inner."""
        cols = [self.apply_raw(c) for c in inner.columns]
        return ModuleMap(inner.source, self.target, cols, check=False)

    def is_zero(self) -> bool:
        if self.target.rank == 0:
            return True
        gb = self.target.gb
        return all(not gb.reduce_raw(c) for c in self.columns)


def zero_map(source: PresentedModule, target: PresentedModule) -> ModuleMap:
    return ModuleMap(source, target, [{} for _ in range(source.rank)], check=False)


# ------------------------------------------------------------- kernels

def _kernel_raw(f: ModuleMap) -> list[dict]:
    src = f.source
    if src.rank == 0:
        return []
    ring = src.ring
    if f.target.rank == 0:
        return [{(k, (0,) * ring.nvars): 1} for k in range(src.rank)]
    return _augmented_kernel(f.columns, f.target.rank, f.target.raw_relations, ring, src.rank)


def map_kernel(f: ModuleMap) -> list[FreeVector]:
    """Generators (source coordinates) of {v : f(v) lies in the target relations}."""
    ring = f.source.ring
    raws = _drop_quotient_multiples(_kernel_raw(f), ring)
    return [FreeVector.from_raw(ring, f.source.rank, r) for r in raws]


def _kernel_gb(f: ModuleMap) -> GroebnerBasis:
    raws = _kernel_raw(f)
    if f.target.rank == 0:
        return buchberger(raws, f.source.ring, f.source.rank)
    return GroebnerBasis(f.source.ring, f.source.rank, raws)


def homology(d_out: ModuleMap | None, d_in: ModuleMap | None, middle: PresentedModule) -> PresentedModule:
    """ker(d_out) / (im(d_in) + relations of ``middle``), as a presented module.

    Generators are the kernel generators; relations are all coefficient
    vectors a with sum a_j k_j in im(d_in) + relations, which covers both the
    image lifts and the syzygies among the kernel generators.
    """
    ring = middle.ring
    if middle.rank == 0:
        return zero_module(ring)
    if d_out is None:
        d_out = zero_map(middle, zero_module(ring))
    kgb = _kernel_gb(d_out)
    kernel = _drop_quotient_multiples(kgb.elements, ring)
    image = [] if d_in is None else [c for c in d_in.columns if c]
    for c in image:
        if kgb.reduce_raw(c):
            raise LiftFailure("an image generator is not in the kernel (d o d != 0)")
    if not kernel:
        return zero_module(ring)
    boundaries = image + middle.raw_relations
    rel_gb = _augmented_kernel(kernel, middle.rank, boundaries, ring, len(kernel))
    gb = GroebnerBasis(ring, len(kernel), rel_gb)
    return PresentedModule(ring, len(kernel), rel_gb, gb=gb)


def homology_length(d_out: ModuleMap | None, d_in: ModuleMap | None, middle: PresentedModule):
    """Length of ker(d_out)/(im(d_in)+relations) without presenting it.

    Counts terms of in(K) outside in(B) for the kernel K and boundaries B.
    """
    ring = middle.ring
    if middle.rank == 0:
        return 0
    if d_out is None or d_out.target.rank == 0:
        kmonos = {i: [(0,) * ring.nvars] for i in range(middle.rank)}
    else:
        kmonos = _kernel_gb(d_out).leading_monomials_by_pos()
    image = [] if d_in is None else [c for c in d_in.columns if c]
    bgb = buchberger(image + middle.raw_relations, ring, middle.rank)
    return count_between(kmonos, bgb.leading_monomials_by_pos(), ring.nvars)


# ------------------------------------------------------------- complexes

class ChainComplex:
    """Modules C_start..C_end with differentials d_i: C_i -> C_{i-1}.

    ``maps[i]`` is d_i for start < i <= end.  ``start`` records the homological
    position of the first module.
    """

    def __init__(self, modules: list[PresentedModule], maps: dict[int, ModuleMap], start: int = 0,
                 validate: bool = True):
        self.modules = list(modules)
        self.start = start
        self.maps = dict(maps)
        for i in range(start + 1, self.end + 1):
            if i not in self.maps:
                raise NotAComplex(f"missing differential d_{i}")
        if validate:
            self.validate()

    @property
    def end(self) -> int:
        return self.start + len(self.modules) - 1

    @property
    def positions(self) -> range:
        return range(self.start, self.end + 1)

    def module(self, i: int) -> PresentedModule | None:
        if self.start <= i <= self.end:
            return self.modules[i - self.start]
        return None

    def d(self, i: int) -> ModuleMap | None:
        return self.maps.get(i)

    def ranks(self) -> list[int]:
        return [m.rank for m in self.modules]

    def validate(self):
        for i in range(self.start + 2, self.end + 1):
            if not self.maps[i - 1].compose(self.maps[i]).is_zero():
                raise NotAComplex(f"d_{i - 1} o d_{i} != 0")

    def homology_at(self, i: int) -> PresentedModule:
        mid = self.module(i)
        if mid is None:
            raise IndexError(f"position {i} outside {self.start}..{self.end}")
        return homology(self.d(i), self.d(i + 1), mid)

    def homology_length(self, i: int):
        mid = self.module(i)
        if mid is None:
            return 0
        return homology_length(self.d(i), self.d(i + 1), mid)

    def __repr__(self):
        return f"ChainComplex(start={self.start}, ranks={self.ranks()})"


def homology_at(C: ChainComplex, i: int) -> PresentedModule:
    return C.homology_at(i)


def koszul_complex(ring: Ring, elements) -> ChainComplex:
    """Classical Koszul complex K(a_1..a_f; R) with R^{C(f,p)} at position p."""
    from itertools import combinations
    a = [ring(x) for x in elements]
    f = len(a)
    bases = [list(combinations(range(f), p)) for p in range(f + 1)]
    mods = [free_module(ring, len(b)) for b in bases]
    maps = {}
    for p in range(1, f + 1):
        index = {s: k for k, s in enumerate(bases[p - 1])}
        cols = []
        for s in bases[p]:
            col: dict = {}
            for t, j in enumerate(s):
                sign = 1 if t % 2 == 0 else -1
                row = index[s[:t] + s[t + 1:]]
                for e, c in a[j].scale(sign).terms.items():
                    col[(row, e)] = c
            cols.append(col)
        maps[p] = ModuleMap(mods[p], mods[p - 1], cols, check=False)
    return ChainComplex(mods, maps)


# --------------------------------------------------- symmetric powers

def sym_power(ring: Ring, phi, k: int) -> PresentedModule:
    """Sym^k(coker phi) for a g x f matrix ``phi`` (list of rows)."""
    if k < 0:
        raise ValueError("negative symmetric power")
    rows = [[ring(x) for x in row] for row in phi]
    g = len(rows)
    f = len(rows[0]) if rows else 0
    if k == 0:
        return PresentedModule(ring, 1, [])
    basis = [tuple(sum(1 for i in c if i == t) for t in range(g))
             for c in combinations_with_replacement(range(g), k)]
    index = {b: n for n, b in enumerate(basis)}
    lower = [tuple(sum(1 for i in c if i == t) for t in range(g))
             for c in combinations_with_replacement(range(g), k - 1)]
    rels = []
    for j in range(f):
        for beta in lower:
            rel: dict = {}
            for i in range(g):
                mono = tuple(b + (1 if t == i else 0) for t, b in enumerate(beta))
                pos = index[mono]
                for e, c in rows[i][j].terms.items():
                    key = (pos, e)
                    v = (rel.get(key, 0) + c) % ring.p
                    if v:
                        rel[key] = v
                    else:
                        rel.pop(key, None)
            rels.append(rel)
    assert len(basis) == comb(k + g - 1, g - 1)
    return PresentedModule(ring, len(basis), rels)


# ----------------------------------------------------- resolutions, Ext

def _prune(gens: list[dict], ring: Ring, rank: int) -> list[dict]:
    """Drop generators lying in the span of the others (non-minimal allowed)."""
    gens = [g for g in gens if g]
    k = len(gens) - 1
    while k >= 0 and len(gens) > 1:
        others = gens[:k] + gens[k + 1:]
        if not buchberger(others, ring, rank).reduce_raw(gens[k]):
            gens = others
        k -= 1
    return gens


def free_resolution(P: PresentedModule, bound: int) -> ChainComplex:
    """F_bound -> ... -> F_0 -> P, built by iterated syzygies."""
    ring = P.ring
    mods = [free_module(ring, P.rank)]
    maps = {}
    cols = _prune(_drop_quotient_multiples(P.gb.elements, ring), ring, P.rank) if P.rank else []
    for i in range(1, bound + 1):
        if not cols:
            mods.append(free_module(ring, 0))
            maps[i] = zero_map(mods[i], mods[i - 1])
            cols = []
            continue
        src = free_module(ring, len(cols))
        mods.append(src)
        maps[i] = ModuleMap(src, mods[i - 1], cols, check=False)
        if i < bound:
            ker = _drop_quotient_multiples(_kernel_raw(maps[i]), ring)
            cols = _prune(ker, ring, src.rank)
    return ChainComplex(mods, maps, validate=False)


def _hom_dual(d: ModuleMap, L: PresentedModule, src_dual: PresentedModule,
              tgt_dual: PresentedModule) -> ModuleMap:
    """Hom(d, L): Hom(F_{k-1}, L) -> Hom(F_k, L), transpose acting on L-blocks."""
    r = L.rank
    cols = []
    for a in range(d.target.rank):
        for l in range(r):
            col: dict = {}
            for b, dcol in enumerate(d.columns):
                for (pos, e), c in dcol.items():
                    if pos == a:
                        col[(b * r + l, e)] = c
            cols.append(col)
    return ModuleMap(src_dual, tgt_dual, cols, check=False)


def ext_modules(A: PresentedModule, L: PresentedModule, top: int) -> list[PresentedModule]:
    """[Ext^0(A, L), ..., Ext^top(A, L)] from one free resolution of A."""
    F = free_resolution(A, top + 1)
    duals = [direct_sum_power(L, F.module(k).rank) for k in range(top + 2)]
    deltas = {k: _hom_dual(F.d(k + 1), L, duals[k], duals[k + 1]) for k in range(top + 1)}
    out = []
    for i in range(top + 1):
        d_in = deltas[i - 1] if i >= 1 else None
        out.append(homology(deltas[i], d_in, duals[i]))
    return out


def ext_module(A: PresentedModule, L: PresentedModule, i: int) -> PresentedModule:
    if i < 0:
        raise ValueError("negative Ext index")
    return ext_modules(A, L, i)[i]


def ext_grade(ring: Ring, ideal, L: PresentedModule, bound: int) -> int:
    """Least i <= bound with Ext^i(R/I, L) != 0."""
    A = cyclic_module(ring, ideal)
    exts = ext_modules(A, L, bound)
    for i, E in enumerate(exts):
        if not module_is_zero(E):
            return i
    raise GradeBoundExceeded(f"Ext^i(R/I, L) vanishes for all i <= {bound}")


def hom_into(ring: Ring, ideal, L: PresentedModule) -> PresentedModule:
    """Hom(R/I, L) = {v in L : I v = 0}."""
    gens = [ring(a) for a in ideal]
    gens = [a for a in gens if not a.is_zero()]
    if not gens:
        return homology(None, None, L)
    target = direct_sum_power(L, len(gens))
    r = L.rank
    cols = []
    for l in range(r):
        col = {}
        for t, a in enumerate(gens):
            for e, c in a.terms.items():
                col[(t * r + l, e)] = c
        cols.append(col)
    mult = ModuleMap(L, target, cols, check=False)
    return homology(mult, None, L)


__all__ = [
    "PresentedModule", "ModuleMap", "ChainComplex", "presented_module", "module_length",
    "module_is_zero", "map_kernel", "homology", "homology_at", "homology_length", "sym_power",
    "free_resolution", "ext_module", "ext_modules", "ext_grade", "hom_into", "koszul_complex",
    "free_module", "zero_module", "cyclic_module", "direct_sum_power", "zero_map", "INFINITE",
]
