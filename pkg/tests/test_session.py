import pytest

from brimkit import catalog_names, catalog_text
from brimkit.errors import InputError, RankMismatch
from brimkit.session import parse_session, render_session, split_entries

EN_TEXT = """# two by three
vars x y
matrix 2 3
x y 0
0 x y
module L free 1
"""


def test_parse_catalog_file():
    s = parse_session(EN_TEXT)
    assert (s.g, s.f) == (2, 3)
    assert s.L.rank == 1 and s.L_kind == "free"
    assert s.ring.p == 32003
    assert s.certified and not s.warnings


def test_f_smaller_than_g():
    with pytest.raises(RankMismatch, match="f >= g required"):
        parse_session("vars x y\nmatrix 2 1\nx\ny\n")


def test_undeclared_variable_has_line_and_position():
    with pytest.raises(InputError) as e:
        parse_session("vars x y\nmatrix 1 2\nx z\n")
    assert e.value.info["line"] == 3
    assert "position" in e.value.info


@pytest.mark.parametrize("text,line", [
    ("vars x y\nmatrix 1 2\nx\n", 3),
    ("vars x y\nbogus 3\n", 2),
    ("vars x y\nmatrix 1 two\n", 2),
    ("vars x y\nmatrix 1 2\nx y\nmodule L coker 1 2\nx\n", 5),
])
def test_line_numbered_errors(text, line):
    with pytest.raises(InputError) as e:
        parse_session(text)
    assert e.value.info["line"] == line


def test_missing_sections():
    with pytest.raises(InputError):
        parse_session("matrix 1 1\nx\n")
    with pytest.raises(InputError):
        parse_session("vars x\n")


def test_certificate_warning_recorded():
    s = parse_session("vars x y\nmatrix 2 3\nx 0 0\n0 x 0\n")
    assert not s.certified
    assert any("certificate" in w for w in s.warnings)


def test_entries_with_spaces():
    assert split_entries("x + y 0 -x") == ["x+y", "0", "-x"]
    assert split_entries("(x - y) ^ 2  y*x") == ["(x-y)^2", "y*x"]


def test_quotient_and_prime():
    s = parse_session("prime 101\nvars x y z\nquotient\n  x^3\nmatrix 1 2\ny z\n")
    assert s.ring.p == 101
    assert len(s.ring.quotient) == 1


@pytest.mark.parametrize("name", catalog_names())
def test_render_parse_round_trip(name):
    s = parse_session(catalog_text(name))
    again = parse_session(render_session(s))
    assert again.same_as(s)
    assert render_session(again) == render_session(s)


def test_options_survive_round_trip():
    s = parse_session(EN_TEXT + "option nu_max 3\n")
    assert parse_session(render_session(s)).options == {"nu_max": "3"}
