"""Buchsbaum-Rim function and polynomial, Euler characteristics, Koszul
homology Hilbert polynomials and the identity checks tying them together."""

from __future__ import annotations

import os
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations_with_replacement
from math import comb

from .arith import Ring
from .brcomplex import (InputDatum, assemble_B, complex_start, graded_piece, homology_length_vector,
                        koszul_homology_lengths, t_monomials)
from .errors import InfiniteHomology, NonPolynomialBehavior, NotIdealOfDefinition, NotYetPolynomial
from .groebner import INFINITE, ideal_gb, origin_supported, quotient_kdim
from .modpres import PresentedModule, free_module, koszul_complex, module_length

STABILITY_MARGIN = 4
BACKOFF_CAP = 40


def gbinom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k) for any integer n and k >= 0."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k)
    # C(-m, k) = (-1)^k C(m + k - 1, k)
    return (-1) ** k * comb(-n + k - 1, k)


@dataclass(frozen=True)
class HilbertPoly:
    """Integer-valued polynomial sum_i c_i * C(nu, i), valid for nu >= window_start."""

    newton_coeffs: tuple[int, ...]
    degree_bound: int = 0
    window_start: int = 0

    def __post_init__(self):
        c = list(self.newton_coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "newton_coeffs", tuple(int(x) for x in c))

    def __call__(self, nu: int) -> int:
        return sum(c * gbinom(nu, i) for i, c in enumerate(self.newton_coeffs))

    @property
    def degree(self) -> int:
        """Effective degree; -1 for the zero polynomial."""
        return len(self.newton_coeffs) - 1

    def coeff(self, i: int) -> int:
        return self.newton_coeffs[i] if 0 <= i < len(self.newton_coeffs) else 0

    def is_constant(self) -> bool:
        return self.degree <= 0

    def _combine(self, other: "HilbertPoly", sign: int) -> "HilbertPoly":
        n = max(len(self.newton_coeffs), len(other.newton_coeffs))
        c = [self.coeff(i) + sign * other.coeff(i) for i in range(n)]
        return HilbertPoly(tuple(c), max(self.degree_bound, other.degree_bound),
                           max(self.window_start, other.window_start))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return HilbertPoly(tuple(-c for c in self.newton_coeffs), self.degree_bound, self.window_start)

    @classmethod
    def zero(cls) -> "HilbertPoly":
        return cls(())


def newton_interpolate(samples, degree_bound: int, min_margin: int = 0) -> HilbertPoly:
    """Fit a polynomial of degree <= degree_bound through consecutive samples.

    Every difference of order > degree_bound inside the window must vanish,
    otherwise NotYetPolynomial is raised and the caller should sample later.
    """
    samples = sorted((int(n), int(v)) for n, v in samples)
    D = degree_bound
    if len(samples) < D + 1 + min_margin:
        raise ValueError(f"need at least {D + 1 + min_margin} samples, got {len(samples)}")
    nus = [n for n, _ in samples]
    if nus != list(range(nus[0], nus[0] + len(nus))):
        raise ValueError("samples must sit at consecutive integers")
    row = [v for _, v in samples]
    diffs = []
    order = 0
    while row:
        if order <= D:
            diffs.append(row[0])
        elif any(row):
            raise NotYetPolynomial(f"difference of order {order} is nonzero on the window starting at {nus[0]}")
        row = [b - a for a, b in zip(row, row[1:])]
        order += 1
    nu0 = nus[0]
    # C(nu - nu0, i) = sum_k C(-nu0, i - k) C(nu, k)
    coeffs = [0] * len(diffs)
    for i, di in enumerate(diffs):
        if not di:
            continue
        for k in range(i + 1):
            coeffs[k] += di * gbinom(-nu0, i - k)
    return HilbertPoly(tuple(coeffs), D, nu0)


# ------------------------------------------------------ parallel helper

def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("BRIMKIT_THREADS", "1")))
    except ValueError:
        return 1


def _datum_payload(datum: InputDatum):
    return (datum.ring, [[str(x) for x in row] for row in datum.phi], datum.L.rank,
            [r for r in datum.L.raw_relations])


def _rebuild(payload) -> InputDatum:
    ring, phi, rank, rels = payload
    return InputDatum(ring, phi, PresentedModule(ring, rank, rels))


def _koszul_worker(args):
    payload, nu = args
    return nu, koszul_homology_lengths(_rebuild(payload), nu)


def prefetch_koszul(datum: InputDatum, nus) -> None:
    """Fill the per-nu Koszul homology cache, in worker processes when allowed."""
    cache = datum._cache.setdefault("K_lengths", {})
    todo = [nu for nu in nus if nu not in cache]
    n = min(thread_cap(), len(todo))
    if n <= 1:
        for nu in todo:
            koszul_homology_lengths(datum, nu)
        return
    from concurrent.futures import ProcessPoolExecutor
    payload = _datum_payload(datum)
    with ProcessPoolExecutor(max_workers=n) as pool:
        for nu, lengths in pool.map(_koszul_worker, [(payload, nu) for nu in todo]):
            cache[nu] = lengths


# ------------------------------------------------------ BR function

def _gamma_products(datum: InputDatum, nu: int):
    """Yield each product gamma_{j1}...gamma_{jnu} as {T-exps: {x-exps: coeff}}."""
    p = datum.ring.p
    g = datum.g
    zero_t = (0,) * g
    one = {(0,) * datum.ring.nvars: 1}
    gammas = []
    for j in range(datum.f):
        lin = {}
        for i in range(g):
            if not datum.phi[i][j].is_zero():
                lin[tuple(1 if s == i else 0 for s in range(g))] = datum.phi[i][j].terms
        gammas.append(lin)

    def times(prod, lin):
        out: dict = {}
        for te, poly in prod.items():
            for le_, lpoly in lin.items():
                t = tuple(a + b for a, b in zip(te, le_))
                acc = out.setdefault(t, {})
                for e1, c1 in poly.items():
                    for e2, c2 in lpoly.items():
                        e = tuple(a + b for a, b in zip(e1, e2))
                        v = (acc.get(e, 0) + c1 * c2) % p
                        if v:
                            acc[e] = v
                        else:
                            acc.pop(e, None)
        return {t: poly for t, poly in out.items() if poly}

    memo = {(): {zero_t: one}}
    for combo in combinations_with_replacement(range(datum.f), nu):
        prefix = combo[:-1]
        if prefix not in memo:
            prod = {zero_t: one}
            for j in prefix:
                prod = times(prod, gammas[j])
            memo[prefix] = prod
        yield times(memo[prefix], gammas[combo[-1]]) if combo else memo[()]


def br_module(datum: InputDatum, nu: int) -> PresentedModule:
    """(S / R[gamma])_nu (x) L as a presented module."""
    piece = graded_piece(datum, nu)
    if nu < 0:
        return piece
    index = {m: k for k, m in enumerate(t_monomials(datum.g, nu))}
    r = datum.r
    rels = list(piece.raw_relations)
    for prod in _gamma_products(datum, nu):
        for l in range(r):
            rel = {}
            for te, poly in prod.items():
                row = index[te] * r + l
                for e, c in poly.items():
                    rel[(row, e)] = c
            if rel:
                rels.append(rel)
    return PresentedModule(datum.ring, piece.rank, rels, labels=piece.labels)


def br_function(datum: InputDatum, nu: int) -> int:
    """P_phi(nu, L) = length of (S / R[gamma])_nu (x) L."""
    datum.require_certificate()
    cache = datum._cache.setdefault("br_values", {})
    if nu not in cache:
        value = module_length(br_module(datum, nu))
        if value == INFINITE:
            raise InfiniteHomology(f"infinite length for the BR function at nu={nu}")
        cache[nu] = value
    return cache[nu]


def _sampled_poly(sampler, degree_bound: int, start: int, what: str) -> HilbertPoly:
    nu0 = start
    while nu0 <= BACKOFF_CAP:
        window = range(nu0, nu0 + degree_bound + 1 + STABILITY_MARGIN)
        samples = [(nu, sampler(nu)) for nu in window]
        try:
            return newton_interpolate(samples, degree_bound, STABILITY_MARGIN)
        except NotYetPolynomial:
            nu0 *= 2
    raise NonPolynomialBehavior(f"{what} is not polynomial on any window starting at or below {BACKOFF_CAP}")


@dataclass(frozen=True)
class BrResult:
    br: int
    is_parameter: bool
    d: int
    br_poly: HilbertPoly


def br_polynomial(datum: InputDatum) -> HilbertPoly:
    datum.require_certificate()
    return _sampled_poly(lambda nu: br_function(datum, nu), max(datum.d, 0), 1, "the BR function")


def br_multiplicity(datum: InputDatum) -> BrResult:
    poly = br_polynomial(datum)
    d = datum.d
    return BrResult(br=poly.coeff(d), is_parameter=datum.is_parameter, d=d, br_poly=poly)


# -------------------------------------------------- Koszul homology

def koszul_hilbert_poly(datum: InputDatum, j: int) -> HilbertPoly:
    """Tail Hilbert polynomial of H_j(gamma, S (x) L); equals P of its saturation."""
    datum.require_certificate()
    if not 0 <= j <= datum.f:
        raise ValueError(f"Koszul index {j} outside 0..{datum.f}")
    cache = datum._cache.setdefault("K_polys", {})
    if j in cache:
        return cache[j]
    D = max(datum.d, 0)
    start = datum.f - datum.g + 1
    prefetch_koszul(datum, range(start, start + D + 1 + STABILITY_MARGIN))

    def sample(nu):
        lengths = koszul_homology_lengths(datum, nu)
        value = lengths[j] if j < len(lengths) else 0
        if value == INFINITE:
            raise InfiniteHomology(f"H_{j} has infinite length in degree {nu}")
        return value

    poly = _sampled_poly(sample, D, start, f"the length of H_{j}")
    cache[j] = poly
    return poly


def koszul_hilbert_polys(datum: InputDatum) -> list[HilbertPoly]:
    return [koszul_hilbert_poly(datum, j) for j in range(datum.f + 1)]


def rho(datum: InputDatum, j: int, nu: int) -> int:
    return koszul_hilbert_poly(datum, j)(nu)


def chi_B(datum: InputDatum, nu: int) -> int:
    lengths = homology_length_vector(datum, nu)
    start = complex_start(datum, nu)
    return sum(x if (start + k) % 2 == 0 else -x for k, x in enumerate(lengths))


def alternating_poly(polys: list[HilbertPoly]) -> HilbertPoly:
    out = HilbertPoly.zero()
    for j, P in enumerate(polys):
        out = out + P if j % 2 == 0 else out - P
    return out


def partial_sums(polys: list[HilbertPoly], nu: int) -> list[int]:
    """chi^j(nu) = P_j(nu) - P_{j+1}(nu) + ... for j = 0..f."""
    vals = [P(nu) for P in polys]
    out = []
    for j in range(len(vals)):
        out.append(sum((-1) ** (i - j) * vals[i] for i in range(j, len(vals))))
    return out


def _sign(x: int) -> str:
    return "+" if x > 0 else "-" if x < 0 else "0"


# ----------------------------------------------------- verification

@dataclass
class VerificationReport:
    br: int
    is_parameter: bool
    d: int
    dim_L: int
    g: int
    f: int
    br_poly: list[int]
    hilbert_polys: list[list[int]]
    alternating_poly: list[int]
    tserre_constant: int | None
    alternating_expected: int
    per_nu: list[dict] = field(default_factory=list)
    genus_terms: list[int] = field(default_factory=list)
    genus_sum: int = 0
    checks: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.checks.values())

    def recheck(self) -> dict:
        """Recompute every pass/fail flag from the stored numbers."""
        expected = self.br if self.is_parameter else 0
        chis = [row["chi"] for row in self.per_nu]
        return {
            "chi_matches_rho": all(row["chi"] == row["rho_alternating_sum"] for row in self.per_nu),
            "alternating_is_constant": len(self.alternating_poly) <= 1,
            "alternating_value": self.tserre_constant == expected,
            "chi_equals_br_or_zero": all(c == expected for c in chis),
            "chi_constant": len(set(chis)) <= 1,
            "genus": self.genus_sum == expected,
            "degree_bound": all(len(P) - 1 <= self.d for P in self.hilbert_polys),
        }

    def to_dict(self) -> dict:
        out = asdict(self)
        out["all_pass"] = self.all_pass
        return out


def verify_identities(datum: InputDatum, nu_range=None) -> VerificationReport:
    datum.require_certificate()
    t0 = time.perf_counter()
    if nu_range is None:
        nu_range = range(-2, datum.f - datum.g + 3)
    res = br_multiplicity(datum)
    t1 = time.perf_counter()
    polys = koszul_hilbert_polys(datum)
    t2 = time.perf_counter()
    alt = alternating_poly(polys)
    expected = res.br if res.is_parameter else 0
    per_nu = []
    for nu in nu_range:
        chi = chi_B(datum, nu)
        rhos = [P(nu) for P in polys]
        alt_sum = sum((-1) ** j * v for j, v in enumerate(rhos))
        sums = partial_sums(polys, nu)
        per_nu.append({
            "nu": nu,
            "chi": chi,
            "homology_lengths": homology_length_vector(datum, nu),
            "complex_start": complex_start(datum, nu),
            "rho": rhos,
            "rho_alternating_sum": alt_sum,
            "partial_sums": sums,
            "partial_sum_signs": "".join(_sign(s) for s in sums),
        })
    t3 = time.perf_counter()
    genus = [P(0) for P in polys]
    report = VerificationReport(
        br=res.br, is_parameter=res.is_parameter, d=res.d, dim_L=datum.dim_L, g=datum.g, f=datum.f,
        br_poly=list(res.br_poly.newton_coeffs),
        hilbert_polys=[list(P.newton_coeffs) for P in polys],
        alternating_poly=list(alt.newton_coeffs),
        tserre_constant=alt.coeff(0) if alt.is_constant() else None,
        alternating_expected=expected,
        per_nu=per_nu,
        genus_terms=genus,
        genus_sum=sum((-1) ** j * v for j, v in enumerate(genus)),
        timing={"br": round(t1 - t0, 3), "koszul": round(t2 - t1, 3), "complexes": round(t3 - t2, 3)},
    )
    report.checks = report.recheck()
    return report


def hilbert_samuel_multiplicity(ring: Ring, ideal, max_start: int = BACKOFF_CAP) -> int:
    """e(I, R) from the lengths of R/I^nu, independently of any Koszul data."""
    gens = [ring(a) for a in ideal]
    dim = _ring_dim(ring)

    powers = {1: gens}

    def power(nu):
        if nu not in powers:
            prev = power(nu - 1)
            powers[nu] = list({a * b for a in prev for b in gens})
        return powers[nu]

    def length(nu):
        if nu == 0:
            return 0
        value = quotient_kdim(ideal_gb(power(nu), ring))
        if value == INFINITE:
            raise NotIdealOfDefinition("R/I^nu has infinite length")
        return value

    poly = _sampled_poly(length, dim, 1, "the Hilbert-Samuel function")
    return poly.coeff(dim)


def _ring_dim(ring: Ring) -> int:
    from .groebner import krull_dim
    return krull_dim(ideal_gb(ring.quotient_polys(), ring))


@dataclass
class SerreReport:
    e: int
    is_parameter: bool
    koszul_lengths: list[int]
    b_lengths: list[int]
    alternating_sum: int
    hilbert_samuel: int
    checks: dict

    @property
    def all_pass(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        out = asdict(self)
        out["all_pass"] = self.all_pass
        return out


def verify_serre(ring: Ring, elements) -> SerreReport:
    """Serre's formula: e(I, R) is the Koszul Euler characteristic for an sop."""
    a = [ring(x) for x in elements]
    gb = ideal_gb(a, ring)
    if quotient_kdim(gb) == INFINITE or not origin_supported(gb):
        raise NotIdealOfDefinition("the elements do not generate an ideal of definition at the origin")
    datum = InputDatum(ring, [a], free_module(ring, 1))
    K = koszul_complex(ring, a)
    lengths = [K.homology_length(i) for i in K.positions]
    b_lengths = homology_length_vector(datum, 0)
    alt = sum((-1) ** j * x for j, x in enumerate(lengths))
    res = br_multiplicity(datum)
    hs = hilbert_samuel_multiplicity(ring, a)
    expected = res.br if res.is_parameter else 0
    checks = {
        "serre": alt == expected,
        "b_is_koszul": b_lengths == lengths,
        "br_equals_hilbert_samuel": res.br == hs,
    }
    return SerreReport(e=res.br, is_parameter=res.is_parameter, koszul_lengths=lengths, b_lengths=b_lengths,
                       alternating_sum=alt, hilbert_samuel=hs, checks=checks)


__all__ = [
    "HilbertPoly", "BrResult", "VerificationReport", "SerreReport", "newton_interpolate", "br_function",
    "br_module", "br_polynomial", "br_multiplicity", "koszul_hilbert_poly", "koszul_hilbert_polys", "rho",
    "chi_B", "verify_identities", "verify_serre", "hilbert_samuel_multiplicity", "partial_sums",
    "alternating_poly", "gbinom", "assemble_B",
]
