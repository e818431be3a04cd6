import pytest

from brimkit import catalog_names, catalog_session
from brimkit.arith import Ring
from brimkit.brcomplex import (InputDatum, assemble_B, expected_ranks, gamma_of, grade_sensitivity,
                               graded_piece, homology_length_vector, inverse_strand, koszul_strand,
                               shuffle_sign, splice_tau, t_monomials, top_homology_check)
from brimkit.errors import CertificateMissing, RankMismatch
from brimkit.modpres import cyclic_module, free_module, module_is_zero, module_length

R = Ring(("x", "y"))
x, y = R.gens()
EN = [[x, y, 0], [0, x, y]]


def datum(phi, L=None, ring=R):
    return InputDatum(ring, phi, L or free_module(ring, 1))


def test_gamma_columns():
    G = gamma_of(datum(EN))
    assert G.columns == ((x, R.zero()), (y, x), (R.zero(), y))
    assert gamma_of(datum([[x ** 2, y ** 3]])).columns == ((x ** 2,), (y ** 3,))
    assert all(c.is_zero() for col in gamma_of(datum([[0, 0]])).columns for c in col)


def test_f_at_least_g():
    with pytest.raises(RankMismatch, match="f >= g required"):
        datum([[x], [y]])


def test_graded_pieces():
    assert graded_piece(datum(EN), 2).rank == 3
    assert graded_piece(datum(EN), 0).rank == 1
    P = graded_piece(datum([[x]], cyclic_module(R, [x])), 5)
    assert P.rank == 1 and len(P.raw_relations) == 1
    assert graded_piece(datum(EN), -1).rank == 0


def test_t_monomial_order_is_fixed():
    assert t_monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]


def test_koszul_strands():
    assert koszul_strand(datum(EN), 2).ranks() == [3, 6, 3]
    assert koszul_strand(datum([[x ** 2, y ** 3]]), 1).ranks() == [1, 2]
    assert koszul_strand(datum(EN), 0).ranks() == [1]


def test_inverse_strands():
    C = inverse_strand(datum(EN), -1)
    assert C.ranks() == [3, 6, 3] and C.start == 0
    C = inverse_strand(datum(EN), 0)
    assert C.ranks() == [3, 2] and C.start == 1
    C = inverse_strand(datum([[x, y]]), -1)
    assert C.ranks()[0] == 1


def test_inverse_strand_below_minus_g_starts_negative():
    C = inverse_strand(datum(EN), -2)
    assert C.start == -1
    assert C.ranks() == [1, 6, 9, 4]


def test_tau_is_multiplication_by_minors():
    tau = splice_tau(datum(EN), 0)
    assert [row for row in tau.matrix] == [[x ** 2, x * y, y ** 2]]
    tau = splice_tau(datum([[x, y, x * y]]), 0)
    assert tau.matrix == [[x, y, x * y]]


def test_tau_at_top_degree():
    tau = splice_tau(datum(EN), 1)
    assert tau.source.rank == 1
    # image: signed minors x^2, xy, y^2 on e3, e2, e1 (entries up to sign)
    col = [c for row in tau.matrix for c in row]
    assert {str(c).lstrip("-") for c in col} == {"x^2", "x*y", "y^2"}


def test_shuffle_signs():
    assert shuffle_sign((0, 1), (0, 1, 2)) == 1
    assert shuffle_sign((0, 2), (0, 1, 2)) == -1
    assert shuffle_sign((1, 2), (0, 1, 2)) == 1


def test_assembled_shapes():
    assert assemble_B(datum(EN), 0).ranks() == [1, 3, 2]
    assert assemble_B(datum(EN), 1).ranks() == [2, 3, 1]
    assert assemble_B(datum(EN), 2).ranks() == [3, 6, 3]


def test_homology_length_vectors():
    assert homology_length_vector(datum(EN), 0) == [3, 0, 0]
    assert homology_length_vector(datum([[x ** 2, y ** 3]]), 0) == [6, 0, 0]
    assert homology_length_vector(datum([[x, y, x * y]]), 0) == [1, 1, 0, 0]


def test_uncertified_inputs_refuse_lengths():
    with pytest.raises(CertificateMissing):
        homology_length_vector(datum([[x, 0, 0], [0, x, 0]]), 0)


def catalog_data():
    return [(name, catalog_session(name).datum) for name in catalog_names()]


@pytest.mark.parametrize("name,d", catalog_data())
def test_d_squared_and_rank_bookkeeping(name, d):
    for nu in range(-2, d.f - d.g + 3):
        C = assemble_B(d, nu)
        C.validate()
        assert dict(zip(C.positions, C.ranks())) == expected_ranks(d, nu)


@pytest.mark.parametrize("name,d", catalog_data())
def test_h0_of_eagon_northcott_is_r_mod_minors(name, d):
    if d.L.rank != 1 or d.L.raw_relations:
        pytest.skip("statement is for L = R")
    C = assemble_B(d, 0)
    assert module_length(C.homology_at(0)) == module_length(cyclic_module(d.ring, d.minors))


@pytest.mark.parametrize("name,d", catalog_data())
def test_grade_sensitivity_on_catalog(name, d):
    rep = grade_sensitivity(d)
    assert rep["all_pass"], rep


@pytest.mark.parametrize("name,d", catalog_data())
def test_top_homology_is_a_hom_module(name, d):
    assert all(v["match"] for v in top_homology_check(d).values())


def test_non_maximal_grade():
    d = datum([[x, 0, 0], [0, x, 0]])
    rep = grade_sensitivity(d)
    assert rep["grade"] == 1
    assert rep["per_nu"][0]["first_nonzero"] == 1
    assert not rep["per_nu"][0]["acyclic"]
    assert rep["all_pass"]


def test_grade_zero_and_nonzero_top_homology():
    d = datum(EN, cyclic_module(R, [x, y]))
    rep = grade_sensitivity(d)
    assert rep["grade"] == 0 and rep["all_pass"]
    top = top_homology_check(d)
    assert top[1]["homology_length"] == 1 and top[0]["homology_length"] == 2
    assert all(v["match"] for v in top.values())


def test_acyclicity_iff_maximal_grade():
    for phi in (EN, [[x, y, 0, y], [0, x, y, x]], [[x, 0, 0], [0, x, 0]]):
        d = datum(phi)
        rep = grade_sensitivity(d)
        top = d.f - d.g + 1
        flags = {e["acyclic"] for e in rep["per_nu"].values()}
        assert len(flags) <= 1
        if flags:
            assert flags.pop() == (rep["grade"] == top)


def test_homology_vanishing_used_by_grade():
    d = datum([[x, 0, 0], [0, x, 0]])
    C = assemble_B(d, 0)
    assert module_is_zero(C.homology_at(2))
    assert not module_is_zero(C.homology_at(1))
