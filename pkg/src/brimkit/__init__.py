"""Exact Buchsbaum-Rim multiplicities over F_p[x]/J."""

from importlib import resources

from .arith import PrimeField, Ring, parse_poly, render_poly
from .brcomplex import InputDatum, assemble_B, homology_length_vector
from .errors import BrimkitError
from .modpres import PresentedModule, cyclic_module, free_module, presented_module
from .multiplicity import br_multiplicity, chi_B, verify_identities, verify_serre
from .session import Session, load_session, parse_session, render_session

__version__ = "0.1.0"


def catalog_names() -> list[str]:
    files = resources.files(__name__).joinpath("catalog")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".brim"))


def catalog_text(name: str) -> str:
    return resources.files(__name__).joinpath("catalog", name + ".brim").read_text(encoding="utf-8")


def catalog_session(name: str) -> Session:
    return parse_session(catalog_text(name))
