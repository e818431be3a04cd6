"""brimkit <command> [--nu N] [--j J] [--range A B] [--oracle] <session-file>

Writes one JSON report to stdout.  Exit status: 0 success, 1 identity
failure, 2 input or computation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import brcomplex as bc
from . import multiplicity as mu
from .errors import BrimkitError, InputError
from .groebner import INFINITE
from .oracle import br_function_oracle
from .session import Session, load_session

log = logging.getLogger("brimkit")

SCHEMA = 1
MAX_SAFE_INT = 2 ** 53 - 1
COMMANDS = ("br", "brpoly", "chi", "koszul", "hilbert", "complex", "grade", "verify", "serre", "question")


def jsonable(x):
    """Big ints become decimal strings, infinite lengths become "infinite"."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) > MAX_SAFE_INT else x
    if isinstance(x, float):
        return "infinite" if x == INFINITE else x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, mu.HilbertPoly):
        return poly_dict(x)
    return str(x)


def poly_dict(P: "mu.HilbertPoly") -> dict:
    return {"newton_coeffs": list(P.newton_coeffs), "degree": P.degree}


def _nu_range(args, session: Session, default):
    if args.range:
        a, b = args.range
        if a > b:
            raise InputError("--range A B needs A <= B")
        return range(a, b + 1)
    opts = session.options
    if "nu_min" in opts or "nu_max" in opts:
        try:
            return range(int(opts.get("nu_min", default.start)), int(opts.get("nu_max", default.stop - 1)) + 1)
        except ValueError as e:
            raise InputError(f"bad nu_min/nu_max option: {e}") from e
    return default


def _need(value, flag):
    if value is None:
        raise InputError(f"this command needs {flag}")
    return value


def _oracle_block(session: Session, values: dict) -> dict:
    """Recompute br_function values with the truncated linear algebra oracle."""
    L = session.L
    rows = []
    for nu, v in values.items():
        o = br_function_oracle(session.ring, session.phi, L.rank, L.raw_relations, nu)
        rows.append({"nu": nu, "groebner": v, "oracle": o, "match": v == o})
    return {"values": rows, "all_match": all(r["match"] for r in rows)}


def cmd_br(session, args):
    d = session.datum
    res = mu.br_multiplicity(d)
    out = {"br": res.br, "is_parameter": res.is_parameter, "d": res.d, "dim_L": d.dim_L,
           "g": d.g, "f": d.f, "br_poly": poly_dict(res.br_poly)}
    return out, True


def cmd_brpoly(session, args):
    d = session.datum
    P = mu.br_polynomial(d)
    nus = _nu_range(args, session, range(0, 6))
    values = {nu: mu.br_function(d, nu) for nu in nus if nu >= 0}
    out = {"br_poly": poly_dict(P), "window_start": P.window_start,
           "values": [{"nu": nu, "length": v, "poly": P(nu)} for nu, v in values.items()]}
    ok = True
    if args.oracle:
        out["oracle"] = _oracle_block(session, {nu: v for nu, v in values.items() if nu <= 3})
        ok = out["oracle"]["all_match"]
    return out, ok


def cmd_chi(session, args):
    d = session.datum
    nu = _need(args.nu, "--nu N")
    return {"nu": nu, "chi": mu.chi_B(d, nu), "complex_start": bc.complex_start(d, nu),
            "homology_lengths": bc.homology_length_vector(d, nu)}, True


def cmd_koszul(session, args):
    d = session.datum
    js = [args.j] if args.j is not None else list(range(d.f + 1))
    out = {"polys": {}}
    for j in js:
        if not 0 <= j <= d.f:
            raise InputError(f"--j must lie in 0..{d.f}")
        out["polys"][j] = poly_dict(mu.koszul_hilbert_poly(d, j))
    if args.nu is not None:
        out["nu"] = args.nu
        out["rho"] = {j: mu.rho(d, j, args.nu) for j in js}
    return out, True


def cmd_hilbert(session, args):
    d = session.datum
    polys = mu.koszul_hilbert_polys(d)
    alt = mu.alternating_poly(polys)
    return {"hilbert_polys": [poly_dict(P) for P in polys], "alternating": poly_dict(alt),
            "alternating_is_constant": alt.is_constant()}, True


def cmd_complex(session, args):
    d = session.datum
    nu = _need(args.nu, "--nu N")
    C = bc.assemble_B(d, nu)
    out = bc.complex_report(C)
    out["nu"] = nu
    out["expected_ranks"] = bc.expected_ranks(d, nu)
    out["d_squared_zero"] = True
    ok = {int(k): v for k, v in out["expected_ranks"].items()} == dict(zip(C.positions, C.ranks()))
    out["ranks_match"] = ok
    return out, ok


def cmd_grade(session, args):
    d = session.datum
    out = bc.grade_sensitivity(d)
    out["top_homology"] = bc.top_homology_check(d)
    top_ok = all(v["match"] for v in out["top_homology"].values())
    out["all_pass"] = out["all_pass"] and top_ok
    return out, out["all_pass"]


def cmd_verify(session, args):
    d = session.datum
    nus = _nu_range(args, session, range(-2, d.f - d.g + 3))
    rep = mu.verify_identities(d, nus)
    log.info("verify timing %s", rep.timing)
    out = rep.to_dict()
    out.pop("timing", None)
    ok = rep.all_pass
    if args.oracle:
        out["oracle"] = _oracle_block(session, {nu: mu.br_function(d, nu) for nu in (1, 2, 3)})
        ok = ok and out["oracle"]["all_match"]
        out["all_pass"] = ok
    return out, ok


def cmd_serre(session, args):
    if session.g != 1:
        raise InputError("serre needs a 1 x f matrix")
    if session.L_kind != "free" or session.L.rank != 1:
        raise InputError("serre runs over L = R")
    rep = mu.verify_serre(session.ring, session.phi[0])
    return rep.to_dict(), rep.all_pass


def cmd_question(session, args):
    d = session.datum
    polys = mu.koszul_hilbert_polys(d)
    nus = _nu_range(args, session, range(-2, d.f - d.g + 3))
    rows = []
    for nu in nus:
        sums = mu.partial_sums(polys, nu)
        rows.append({"nu": nu, "partial_sums": sums,
                     "signs": "".join(mu._sign(s) for s in sums),
                     "all_nonnegative": all(s >= 0 for s in sums)})
    return {"per_nu": rows, "note": "reported only, nothing is asserted"}, True


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def run_command(session: Session, command: str, args) -> tuple[dict, bool]:
    if command not in HANDLERS:
        raise InputError(f"unknown command {command!r}")
    body, ok = HANDLERS[command](session, args)
    report = {"schema": SCHEMA, "command": command}
    if session.warnings:
        report["warnings"] = list(session.warnings)
    report.update(body)
    return jsonable(report), ok


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="brimkit", description="Buchsbaum-Rim multiplicities and generalized Koszul complexes")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("session", help="session file")
    ap.add_argument("--nu", type=int)
    ap.add_argument("--j", type=int)
    ap.add_argument("--range", type=int, nargs=2, metavar=("A", "B"))
    ap.add_argument("--oracle", action="store_true", help="cross-check br_function with truncated linear algebra")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def dump(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="brimkit: %(levelname)s %(message)s", stream=sys.stderr)
    t0 = time.perf_counter()
    try:
        session = load_session(args.session)
        report, ok = run_command(session, args.command, args)
    except OSError as e:
        log.error("%s", e)
        sys.stdout.write(dump({"schema": SCHEMA, "command": args.command,
                               "error": {"code": "io_error", "message": str(e)}}))
        return 2
    except BrimkitError as e:
        log.error("%s: %s", e.code, e)
        sys.stdout.write(dump({"schema": SCHEMA, "command": args.command,
                               "error": jsonable({"code": e.code, "message": str(e), **e.info})}))
        return e.exit_code
    log.info("%s finished in %.3fs", args.command, time.perf_counter() - t0)
    sys.stdout.write(dump(report))
    if not ok:
        log.error("identity check failed")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
