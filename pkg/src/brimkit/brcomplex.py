"""The generalized Koszul complexes B(phi, L, nu).

S = R[T_1..T_g] is never built as a ring: every object lives in a single
T-degree, so a T-graded slice of a free S-module is a free R-module with an
explicit basis (exterior index, T-monomial or inverse monomial, L-generator).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from math import comb

from .arith import Polynomial, Ring, add_terms, mul_terms
from .errors import (CertificateMissing, InfiniteHomology, RankMismatch,
                     SpliceMismatch)
from .groebner import INFINITE, ideal_gb, krull_dim, origin_supported, quotient_kdim
from .modpres import (ChainComplex, ModuleMap, PresentedModule, cyclic_module, ext_modules,
                      hom_into, module_is_zero, module_length, sym_power, zero_module)


# --------------------------------------------------------------- bases

def exterior_basis(f: int, p: int) -> list[tuple[int, ...]]:
    if p < 0 or p > f:
        return []
    return list(combinations(range(f), p))


def t_monomials(g: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree k in g variables, T_1^k first."""
    if k < 0:
        return []
    if g == 0:
        return [()] if k == 0 else []
    out = []
    for a in range(k, -1, -1):
        for rest in t_monomials(g - 1, k - a):
            out.append((a,) + rest)
    return out


def inverse_monomials(g: int, m: int) -> list[tuple[int, ...]]:
    """Exponents a (all a_i >= 1) of T^-a spanning H^g(S) in degree -g-m."""
    if m < 0:
        return []
    return [tuple(x + 1 for x in e) for e in t_monomials(g, m)]


def determinant(ring: Ring, rows: list[list[Polynomial]]) -> Polynomial:
    n = len(rows)
    if n == 0:
        return ring.one()
    total: dict = {}
    p = ring.p
    for perm in permutations(range(n)):
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        term = {(0,) * ring.nvars: 1}
        for i in range(n):
            term = mul_terms(term, rows[i][perm[i]].terms, p)
            if not term:
                break
        if term:
            total = add_terms(total, term, p, -1 if inversions % 2 else 1)
    return Polynomial(ring, total)


def maximal_minors(ring: Ring, rows: list[list[Polynomial]]) -> list[Polynomial]:
    """All r x r minors of an r x m matrix (columns in lexicographic order)."""
    r = len(rows)
    m = len(rows[0]) if rows else 0
    if r == 0:
        return [ring.one()]
    if m < r:
        return []
    return [determinant(ring, [[row[j] for j in cols] for row in rows])
            for cols in combinations(range(m), r)]


def shuffle_sign(I, J) -> int:
    """Sign of the permutation putting I (in order) before J minus I."""
    pos = [J.index(i) for i in I]
    return -1 if (sum(pos) - sum(range(len(I)))) % 2 else 1


# ---------------------------------------------------------------- input

@dataclass(frozen=True)
class GammaSystem:
    """gamma_j = sum_i phi[i][j] T_i, stored as the columns of phi."""

    columns: tuple[tuple[Polynomial, ...], ...]

    @property
    def f(self) -> int:
        return len(self.columns)


@dataclass(eq=False)
class InputDatum:
    ring: Ring
    phi: list[list[Polynomial]]
    L: PresentedModule
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.phi = [[self.ring(x) for x in row] for row in self.phi]
        if not self.phi or not self.phi[0]:
            raise RankMismatch("phi must have at least one row and one column")
        if any(len(row) != len(self.phi[0]) for row in self.phi):
            raise RankMismatch("ragged matrix")
        if self.f < self.g:
            raise RankMismatch("f >= g required")
        if self.L.ring != self.ring:
            raise RankMismatch("L lives over a different ring")

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        for k in ("minors", "fitting_ideal", "certificate_gb"):
            state.pop(k, None)
        return state

    @property
    def g(self) -> int:
        return len(self.phi)

    @property
    def f(self) -> int:
        return len(self.phi[0])

    @property
    def r(self) -> int:
        return self.L.rank

    @cached_property
    def minors(self) -> list[Polynomial]:
        """Generators of I_g(phi)."""
        return maximal_minors(self.ring, self.phi)

    @cached_property
    def fitting_ideal(self) -> list[Polynomial]:
        """Fitt_0(L): maximal minors of L's presentation matrix."""
        rels = self.L.relations
        rows = [[v[i] for v in rels] for i in range(self.L.rank)]
        return maximal_minors(self.ring, rows)

    @cached_property
    def certificate_gb(self):
        return ideal_gb(self.minors + self.fitting_ideal, self.ring)

    @cached_property
    def certificate_dim(self):
        """k-dimension D of R/(I_g(phi) + Fitt_0(L) + J)."""
        return quotient_kdim(self.certificate_gb)

    @cached_property
    def certified(self) -> bool:
        """M (x) L is supported only at the origin."""
        if self.certificate_dim == INFINITE:
            return False
        return origin_supported(self.certificate_gb)

    def require_certificate(self):
        if not self.certified:
            raise CertificateMissing("M (x) L is not certified to be supported at the origin only")

    @cached_property
    def dim_L(self) -> int:
        return krull_dim(ideal_gb(self.fitting_ideal, self.ring))

    @property
    def d(self) -> int:
        return self.dim_L + self.g - 1

    @property
    def is_parameter(self) -> bool:
        return self.f == self.d


def gamma_of(datum: InputDatum) -> GammaSystem:
    return GammaSystem(tuple(tuple(row[j] for row in datum.phi) for j in range(datum.f)))


# ----------------------------------------------------- tensoring with L

def _tensor_module(datum: InputDatum, nbasis: int, labels=None) -> PresentedModule:
    L = datum.L
    r = L.rank
    rels = []
    for b in range(nbasis):
        for rel in L.raw_relations:
            rels.append({(b * r + pos, e): c for (pos, e), c in rel.items()})
    if labels is not None:
        labels = [(lab, l) for lab in labels for l in range(r)]
    return PresentedModule(datum.ring, nbasis * r, rels, labels=labels)


def _tensor_columns(cols: list[dict], r: int) -> list[dict]:
    out = []
    for col in cols:
        for l in range(r):
            out.append({(row * r + l, e): c for (row, e), c in col.items()})
    return out


def _accumulate(col: dict, row: int, poly_terms: dict, sign: int, p: int):
    for e, c in poly_terms.items():
        key = (row, e)
        v = (col.get(key, 0) + sign * c) % p
        if v:
            col[key] = v
        else:
            col.pop(key, None)


# ------------------------------------------------------------ slices

def graded_piece(datum: InputDatum, nu: int) -> PresentedModule:
    """(S (x) L)_nu as a presented R-module; zero for negative nu."""
    if nu < 0:
        return zero_module(datum.ring)
    monos = t_monomials(datum.g, nu)
    return _tensor_module(datum, len(monos), labels=[("T", m) for m in monos])


def _koszul_basis(datum: InputDatum, nu: int, p: int):
    return [(J, b) for J in exterior_basis(datum.f, p) for b in t_monomials(datum.g, nu - p)]


def _inverse_basis(datum: InputDatum, nu: int, p: int):
    m = p - nu - datum.g
    return [(J, a) for J in exterior_basis(datum.f, p) for a in inverse_monomials(datum.g, m)]


def _koszul_columns(datum: InputDatum, nu: int, p: int) -> list[dict]:
    """Columns of d: K_p(gamma, S)_nu -> K_{p-1}(gamma, S)_nu before tensoring."""
    pr = datum.ring.p
    target = {lab: k for k, lab in enumerate(_koszul_basis(datum, nu, p - 1))}
    cols = []
    for J, beta in _koszul_basis(datum, nu, p):
        col: dict = {}
        for t, j in enumerate(J):
            sign = -1 if t % 2 else 1
            rest = J[:t] + J[t + 1:]
            for i in range(datum.g):
                entry = datum.phi[i][j]
                if entry.is_zero():
                    continue
                mono = tuple(b + (1 if s == i else 0) for s, b in enumerate(beta))
                _accumulate(col, target[(rest, mono)], entry.terms, sign, pr)
        cols.append(col)
    return cols


def _inverse_columns(datum: InputDatum, nu: int, p: int) -> list[dict]:
    """Columns of delta: K_p(gamma, H)_nu -> K_{p-1}(gamma, H)_nu before tensoring.

    T_i sends T^-a to T^-(a - e_i) when a_i >= 2 and kills it when a_i = 1.
    """
    pr = datum.ring.p
    target = {lab: k for k, lab in enumerate(_inverse_basis(datum, nu, p - 1))}
    cols = []
    for J, a in _inverse_basis(datum, nu, p):
        col: dict = {}
        for t, j in enumerate(J):
            sign = -1 if t % 2 else 1
            rest = J[:t] + J[t + 1:]
            for i in range(datum.g):
                entry = datum.phi[i][j]
                if entry.is_zero() or a[i] < 2:
                    continue
                lowered = tuple(x - (1 if s == i else 0) for s, x in enumerate(a))
                _accumulate(col, target[(rest, lowered)], entry.terms, sign, pr)
        cols.append(col)
    return cols


def _tau_columns(datum: InputDatum, nu: int) -> list[dict]:
    """e_J (x) (T_1..T_g)^-1 -> sum_I sign(I, J-I) det(phi_I) e_{J-I}."""
    pr = datum.ring.p
    g = datum.g
    target = {J: k for k, J in enumerate(exterior_basis(datum.f, nu))}
    cols = []
    for J in exterior_basis(datum.f, g + nu):
        col: dict = {}
        for I in combinations(J, g):
            rest = tuple(j for j in J if j not in I)
            minor = _minor(datum, I)
            if minor.is_zero():
                continue
            _accumulate(col, target[rest], minor.terms, shuffle_sign(I, J), pr)
        cols.append(col)
    return cols


def _minor(datum: InputDatum, cols) -> Polynomial:
    cache = datum._cache.setdefault("minor", {})
    hit = cache.get(cols)
    if hit is None:
        hit = cache[cols] = determinant(datum.ring, [[row[j] for j in cols] for row in datum.phi])
    return hit


def _koszul_module(datum: InputDatum, nu: int, p: int) -> PresentedModule:
    basis = _koszul_basis(datum, nu, p)
    return _tensor_module(datum, len(basis), labels=[("K", J, b) for J, b in basis])


def _inverse_module(datum: InputDatum, nu: int, p: int) -> PresentedModule:
    basis = _inverse_basis(datum, nu, p)
    return _tensor_module(datum, len(basis), labels=[("H", J, tuple(-x for x in a)) for J, a in basis])


# --------------------------------------------------------- complexes

def koszul_strand(datum: InputDatum, nu: int, validate: bool = True) -> ChainComplex:
    """K(gamma, S (x) L)_nu with Lambda^p R^f (x) (S (x) L)_{nu-p} at position p."""
    if nu < 0:
        raise ValueError("koszul_strand needs nu >= 0")
    top = min(nu, datum.f)
    mods = [_koszul_module(datum, nu, p) for p in range(top + 1)]
    maps = {}
    for p in range(1, top + 1):
        cols = _tensor_columns(_koszul_columns(datum, nu, p), datum.r)
        maps[p] = ModuleMap(mods[p], mods[p - 1], cols, check=False)
    return ChainComplex(mods, maps, start=0, validate=validate)


def _inverse_range(datum: InputDatum, nu: int) -> range:
    return range(max(0, nu + datum.g), datum.f + 1)


def inverse_strand(datum: InputDatum, nu: int, validate: bool = True) -> ChainComplex:
    """K(gamma, H^g(S) (x) L)_nu with Lambda^p at homological position p - g + 1."""
    if nu > datum.f - datum.g:
        raise ValueError("inverse strand vanishes for nu > f - g")
    ps = _inverse_range(datum, nu)
    mods = [_inverse_module(datum, nu, p) for p in ps]
    shift = 1 - datum.g
    maps = {}
    for k, p in enumerate(ps):
        if k == 0:
            continue
        cols = _tensor_columns(_inverse_columns(datum, nu, p), datum.r)
        maps[p + shift] = ModuleMap(mods[k], mods[k - 1], cols, check=False)
    return ChainComplex(mods, maps, start=ps[0] + shift, validate=validate)


def splice_tau(datum: InputDatum, nu: int) -> ModuleMap:
    if not 0 <= nu <= datum.f - datum.g:
        raise ValueError("tau is defined for 0 <= nu <= f - g")
    src = _inverse_module(datum, nu, datum.g + nu)
    tgt = _koszul_module(datum, nu, nu)
    cols = _tensor_columns(_tau_columns(datum, nu), datum.r)
    return ModuleMap(src, tgt, cols, check=False)


def assemble_B(datum: InputDatum, nu: int, validate: bool = True) -> ChainComplex:
    """B(phi, L, nu) in all three regimes."""
    f, g = datum.f, datum.g
    if nu > f - g:
        return koszul_strand(datum, nu, validate=validate)
    if nu < 0:
        return inverse_strand(datum, nu, validate=validate)
    kos = koszul_strand(datum, nu, validate=False)
    inv = inverse_strand(datum, nu, validate=False)
    mods = kos.modules + inv.modules
    maps = dict(kos.maps)
    maps.update(inv.maps)
    tau = splice_tau(datum, nu)
    tau = ModuleMap(mods[nu + 1], mods[nu], tau.columns, check=False)
    maps[nu + 1] = tau
    C = ChainComplex(mods, maps, start=0, validate=False)
    if validate:
        _validate_splice(C, nu)
    return C


def _validate_splice(C: ChainComplex, nu: int):
    for i in range(C.start + 2, C.end + 1):
        if not C.maps[i - 1].compose(C.maps[i]).is_zero():
            if i in (nu + 1, nu + 2):
                raise SpliceMismatch(f"d_{i - 1} o d_{i} != 0 across the tau splice")
            raise SpliceMismatch(f"d_{i - 1} o d_{i} != 0")


def expected_ranks(datum: InputDatum, nu: int) -> dict[int, int]:
    """Closed-form module ranks of B(phi, L, nu) keyed by position."""
    f, g, r = datum.f, datum.g, datum.r
    out = {}
    if nu > f - g:
        for i in range(0, min(nu, f) + 1):
            out[i] = comb(f, i) * comb(nu - i + g - 1, g - 1) * r
        return out
    if nu < 0:
        for p in _inverse_range(datum, nu):
            out[p - g + 1] = comb(f, p) * comb(p - nu - 1, g - 1) * r
        return out
    for i in range(0, f - g + 2):
        if i <= nu:
            out[i] = comb(f, i) * comb(nu - i + g - 1, g - 1) * r
        else:
            out[i] = comb(f, g + i - 1) * comb(i - nu + g - 2, g - 1) * r
    return out


def homology_length_vector(datum: InputDatum, nu: int) -> list[int]:
    """Lengths of H_i(B(phi, L, nu)) for i = start..end (see ``complex_start``)."""
    datum.require_certificate()
    cache = datum._cache.setdefault("B_lengths", {})
    if nu in cache:
        return list(cache[nu])
    if nu > datum.f - datum.g:
        out = koszul_homology_lengths(datum, nu)
    else:
        C = assemble_B(datum, nu)
        out = [C.homology_length(i) for i in C.positions]
    if any(x == INFINITE for x in out):
        raise InfiniteHomology(f"infinite homology length in B(phi, L, {nu})")
    cache[nu] = out
    return list(out)


def complex_start(datum: InputDatum, nu: int) -> int:
    if nu >= 0:
        return 0
    return _inverse_range(datum, nu)[0] - datum.g + 1


def koszul_homology_lengths(datum: InputDatum, nu: int) -> list:
    """Lengths of H_j(gamma, S (x) L)_nu for j = 0..min(nu, f); cached per nu."""
    cache = datum._cache.setdefault("K_lengths", {})
    if nu not in cache:
        C = koszul_strand(datum, nu)
        cache[nu] = [C.homology_length(i) for i in C.positions]
    return list(cache[nu])


def grade_sensitivity(datum: InputDatum) -> dict:
    """Compare grade(I_g(phi), L) with the first non-vanishing homology of
    B(phi, L, nu) for 0 <= nu < f-g.  Needs no finite-length certificate."""
    f, g = datum.f, datum.g
    top = f - g + 1
    ring = datum.ring
    ideal = [m for m in datum.minors if not m.is_zero()]
    exts = ext_modules(cyclic_module(ring, ideal), datum.L, top + 1)
    grade = next((i for i, E in enumerate(exts) if not module_is_zero(E)), None)
    out = {"f": f, "g": g, "grade": grade, "eagon_bound": grade is not None and grade <= top,
           "per_nu": {}}
    acyclic = []
    for nu in range(0, f - g):
        C = assemble_B(datum, nu)
        zero = {i: module_is_zero(C.homology_at(i)) for i in C.positions}
        first = next((i for i in range(0, top + 1) if not zero[top - i]), None)
        entry = {"first_nonzero": first, "matches_grade": first == grade,
                 "acyclic": all(zero[i] for i in C.positions if i >= 1)}
        if grade is not None:
            sym = sym_power(ring, datum.phi, f - g - nu)
            h = C.homology_length(top - grade)
            e = module_length(ext_modules(sym, datum.L, grade)[grade])
            entry["homology_length"] = h
            entry["ext_length"] = e
            entry["ext_matches"] = h == e
        acyclic.append(entry["acyclic"])
        out["per_nu"][nu] = entry
    max_grade = grade == top
    out["acyclicity_consistent"] = all(a == max_grade for a in acyclic)
    out["all_pass"] = (out["eagon_bound"] and out["acyclicity_consistent"]
                       and all(e["matches_grade"] and e.get("ext_matches", True)
                               for e in out["per_nu"].values()))
    return out


def top_homology_check(datum: InputDatum) -> dict:
    """Length of the top homology of B(phi, L, nu) against the Hom module it should be."""
    f, g = datum.f, datum.g
    top = f - g + 1
    ring = datum.ring
    out = {}
    for nu in range(0, f - g + 1):
        C = assemble_B(datum, nu)
        h = C.homology_length(top)
        if nu == f - g:
            expect = module_length(hom_into(ring, datum.minors, datum.L))
        else:
            expect = module_length(ext_modules(sym_power(ring, datum.phi, f - g - nu), datum.L, 0)[0])
        out[nu] = {"homology_length": h, "hom_length": expect, "match": h == expect}
    return out


def complex_report(C: ChainComplex) -> dict:
    """Dense dump of a complex: ranks, basis labels and differential matrices."""
    from .arith import render_poly
    out = {"start": C.start, "ranks": C.ranks(), "bases": {}, "differentials": {}}
    for i in C.positions:
        mod = C.module(i)
        out["bases"][str(i)] = [_label(lab) for lab in (mod.labels or range(mod.rank))]
    for i in range(C.start + 1, C.end + 1):
        d = C.d(i)
        out["differentials"][str(i)] = [[render_poly(x) for x in row] for row in d.matrix]
    return out


def _label(lab) -> str:
    if isinstance(lab, int):
        return f"g{lab}"
    (kind, *rest), l = lab
    if kind == "T":
        mono = rest[0]
        s = "T^(" + ",".join(map(str, mono)) + ")"
    else:
        J, mono = rest
        s = "e" + "".join(str(j + 1) for j in J) + "*T^(" + ",".join(map(str, mono)) + ")"
    return f"{s}@l{l + 1}"
