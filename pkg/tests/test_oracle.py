import pytest

from brimkit import catalog_names, catalog_session
from brimkit.arith import Ring
from brimkit.errors import InfiniteLength
from brimkit.modpres import cyclic_module
from brimkit.multiplicity import br_function
from brimkit.oracle import (br_function_oracle, local_length, module_length_oracle, rank_mod_p,
                            truncated_colength)

R = Ring(("x", "y"))
x, y = R.gens()


def test_rank_mod_p():
    assert rank_mod_p([{0: 1, 1: 2}, {0: 2, 1: 4}], 7) == 1
    assert rank_mod_p([{0: 1}, {1: 7}], 7) == 1
    assert rank_mod_p([], 7) == 0


def test_truncations_grow_then_stop():
    rels = [{(0, (2, 0)): 1}, {(0, (0, 3)): 1}]
    dims = [truncated_colength(R, 1, rels, B) for B in range(6)]
    assert dims == [1, 3, 5, 6, 6, 6]
    assert local_length(R, 1, rels) == 6


def test_only_the_origin_counts():
    # R/(x-1, y) is a point away from the origin, so locally it vanishes
    assert module_length_oracle(cyclic_module(R, [x - 1, y])) == 0
    assert module_length_oracle(cyclic_module(R, [x * (x - 1), y])) == 1


def test_infinite_length_detected():
    with pytest.raises(InfiniteLength):
        local_length(R, 1, [{(0, (1, 0)): 1}], cap=12)


@pytest.mark.parametrize("name", catalog_names())
def test_br_function_matches_oracle_on_catalog(name):
    s = catalog_session(name)
    for nu in (1, 2, 3):
        expect = br_function_oracle(s.ring, s.phi, s.L.rank, s.L.raw_relations, nu)
        assert br_function(s.datum, nu) == expect


def test_quotient_ring_is_respected():
    Q = Ring(("x", "y", "z")).with_quotient(["x^3"])
    assert module_length_oracle(cyclic_module(Q, ["y", "z"])) == 3
    assert module_length_oracle(cyclic_module(Q, ["x", "y", "z"])) == 1
