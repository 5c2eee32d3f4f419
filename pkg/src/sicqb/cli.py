"""``sicqb`` command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, is_dataclass

import numpy as np

from . import acceptance
from . import axioms as ax
from . import born_rule as br
from . import geometry as geo
from . import serialization as ser
from . import state_rep as sr
from .errors import (
    DimensionError,
    FundamentalInequalityError,
    SicNotFoundError,
    SicqbError,
    UndefinedPosteriorError,
)
from .sic_core import (
    MAX_DIMENSION,
    SEARCH_TOL,
    VERIFY_TOL,
    SearchOptions,
    builtin_sic,
    find_sic,
    fiducial_orbit,
    verify_sic,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class VerificationFailure(Exception):
    """Carries a payload that is still printed before exiting with status 1."""

    def __init__(self, payload, message):
        super().__init__(message)
        self.payload = payload


@dataclass(frozen=True)
class CliConfig:
    verify_tol: float = VERIFY_TOL
    search_tol: float = SEARCH_TOL
    zero_tol: float = geo.ZERO_TOL
    seed: int = 0
    output_format: str = "json"
    max_dimension: int = MAX_DIMENSION

    def __post_init__(self):
        if min(self.verify_tol, self.search_tol, self.zero_tol) <= 0:
            raise UsageError("tolerances must be positive")
        if self.max_dimension < 2:
            raise UsageError("max dimension must be >= 2")

    @classmethod
    def from_args(cls, args, environ=None):
        environ = os.environ if environ is None else environ
        max_d = MAX_DIMENSION
        if environ.get("SICQB_MAX_D"):
            try:
                max_d = int(environ["SICQB_MAX_D"])
            except ValueError:
                raise UsageError(f"SICQB_MAX_D must be an integer, got {environ['SICQB_MAX_D']!r}")
        return cls(
            verify_tol=args.tol,
            search_tol=args.search_tol,
            zero_tol=args.zero_tol,
            seed=args.seed,
            output_format=args.output,
            max_dimension=max_d,
        )

    @property
    def search_options(self):
        return SearchOptions(tol=self.search_tol, max_dimension=self.max_dimension)


# --- formatting -----------------------------------------------------------

def _plain(obj):
    if is_dataclass(obj):
        return {k: _plain(v) for k, v in asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def render(payload, fmt):
    if isinstance(payload, geo.GeometryReport):
        if fmt == "table":
            return payload.to_table()
        payload = payload.to_dict()
    payload = _plain(payload)
    if fmt == "json":
        return json.dumps(payload, separators=(",", ":"))
    rows = payload if isinstance(payload, list) else [payload]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
        return buf.getvalue().rstrip("\n")
    # table
    if isinstance(payload, list):
        keys = list(rows[0])
        table = [keys] + [[_cell(r[k]) for k in keys] for r in rows]
        widths = [max(len(t[i]) for t in table) for i in range(len(keys))]
        return "\n".join("  ".join(c.ljust(w) for c, w in zip(t, widths)).rstrip() for t in table)
    width = max(len(k) for k in payload)
    return "\n".join(f"{k.ljust(width)}  {_cell(v)}" for k, v in payload.items())


def _cell(v):
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


# --- input helpers --------------------------------------------------------

def _load(path, decoder):
    try:
        return decoder(ser.load_json(path))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed input in {path}: {exc}")


def _check_dimension(d, cfg):
    if d < 2:
        raise UsageError(f"dimension must be >= 2, got {d}")
    if d > cfg.max_dimension:
        raise UsageError(f"dimension {d} exceeds the maximum {cfg.max_dimension} (set SICQB_MAX_D to raise it)")


def resolve_sic(args, cfg):
    """SIC from ``--sic``, ``--fiducial``, ``--builtin`` or ``--d`` (built-in if 2 or 3, else searched)."""
    if getattr(args, "sic", None):
        s = _load(args.sic, ser.sicset_from_dict)
        _check_dimension(s.d, cfg)
        return s
    if getattr(args, "fiducial", None):
        f = _load(args.fiducial, ser.fiducial_from_dict)
        _check_dimension(f.d, cfg)
        return fiducial_orbit(f)
    d = getattr(args, "builtin", None)
    if d is not None:
        if d not in (2, 3):
            raise UsageError(f"no built-in SIC for d={d}; supported dimensions are 2 and 3")
        return builtin_sic(d)
    d = getattr(args, "d", None)
    if d is None:
        raise UsageError("a SIC is required: pass --d, --builtin, --sic or --fiducial")
    _check_dimension(d, cfg)
    if d in (2, 3):
        return builtin_sic(d)
    return fiducial_orbit(find_sic(d, cfg.seed, cfg.search_options))


def _probs_arg(args):
    path = args.probs or getattr(args, "state", None)
    if path is None:
        raise UsageError("a probability vector is required (--probs)")
    return _load(path, ser.probs_from_dict)


def _need_length(p, d):
    if p.shape != (d * d,):
        raise UsageError(f"probability vector has length {p.size}, expected {d * d}")


# --- subcommands ----------------------------------------------------------

def cmd_find_sic(args, cfg):
    _check_dimension(args.d, cfg)
    opts = SearchOptions(
        tol=cfg.search_tol, max_restarts=args.max_restarts, max_dimension=cfg.max_dimension
    )
    f = find_sic(args.d, cfg.seed, opts)
    if args.orbit:
        return ser.sicset_to_dict(fiducial_orbit(f))
    return ser.fiducial_to_dict(f)


def cmd_verify(args, cfg):
    report = verify_sic(resolve_sic(args, cfg), cfg.verify_tol)
    if not report.passed:
        raise VerificationFailure(report, "SIC verification failed")
    return report


def cmd_convert(args, cfg):
    s = resolve_sic(args, cfg)
    if args.state_matrix:
        rho = _load(args.state_matrix, ser.density_from_dict)
        if rho.shape[0] != s.d:
            raise UsageError(f"state is {rho.shape[0]}-dimensional but the SIC has d={s.d}")
        return ser.probs_to_dict(sr.state_to_probs(rho, s))
    p = _probs_arg(args)
    _need_length(p, s.d)
    return ser.density_to_dict(sr.probs_to_state(p, s))


def cmd_validate(args, cfg):
    s = resolve_sic(args, cfg)
    p = _probs_arg(args)
    _need_length(p, s.d)
    v = sr.validate_probs(p, s)
    payload = {"valid": v.valid, "min_eigenvalue": v.min_eigenvalue}
    if not v.valid:
        raise VerificationFailure(payload, f"not a valid state: min eigenvalue {v.min_eigenvalue:.3e}")
    return payload


def cmd_urgleichung(args, cfg):
    s = resolve_sic(args, cfg)
    p = _probs_arg(args)
    _need_length(p, s.d)
    povm = _load(args.povm, ser.povm_from_dict)
    R = br.conditional_matrix(s, povm)
    return ser.probs_to_dict(br.urgleichung(p, R, s.d))


def cmd_evolve(args, cfg):
    s = resolve_sic(args, cfg)
    p = _probs_arg(args)
    _need_length(p, s.d)
    U = _load(args.unitary, ser.unitary_from_dict)
    return ser.probs_to_dict(br.evolve_probs(p, br.unitary_transition(s, U), s.d))


def cmd_posterior(args, cfg):
    s = resolve_sic(args, cfg)
    povm = _load(args.povm, ser.povm_from_dict)
    R = br.conditional_matrix(s, povm)
    if not 0 <= args.outcome < R.m:
        raise UsageError(f"outcome must lie in [0, {R.m}), got {args.outcome}")
    return ser.probs_to_dict(br.reciprocity_posterior(R, args.outcome))


def cmd_geometry(args, cfg):
    what = args.what
    if what == "gram":
        g = geo.max_distant_gram(args.d, args.n)
        payload = {"eigenvalues": g.eigenvalues, "lambda0": g.lambda0, "lambda_rest": g.lambda_rest, "psd": g.psd}
        return payload
    if what == "nflat":
        try:
            return geo.nflat_min_distance(args.d, args.n)
        except ValueError as exc:
            raise UsageError(str(exc))
    if what == "basis":
        return ser.probs_to_dict(geo.basis_distribution(args.d, args.k))
    p = _probs_arg(args)
    if what == "entropy":
        return geo.order2_entropies(p)
    _need_length(p, args.d)
    if what == "sphere":
        report = geo.sphere_check(p, args.d)
        if not report.passed:
            raise VerificationFailure(report, "state is not on the pure-state sphere")
        return report
    if what == "zeros":
        audit = geo.zeros_audit(p, args.d, cfg.zero_tol)
        if not audit.passed:
            raise VerificationFailure(audit, "zero-count bound violated")
        return audit
    raise UsageError(f"unknown geometry check {what!r}")


def cmd_axioms(args, cfg):
    if args.what == "solve":
        if args.qbar is None or args.m0 is None:
            raise UsageError("axioms solve needs --qbar and --m0")
        try:
            params = ax.solve_constants(args.qbar, args.m0)
        except ValueError as exc:
            raise UsageError(str(exc))
        full = params.to_dict()
        return {"n": full["n"], "alpha": full["alpha"], "beta": full["beta"]}
    if args.what == "table":
        rows = ax.universal_angle_table(args.qbar_max, args.m0_max)
        return [dict(r.to_dict(), real_hilbert_space=r.real_hilbert_space) for r in rows]
    if args.what == "certainty":
        s = resolve_sic(args, cfg)
        report = ax.certainty_check(s, ax.computational_basis_projectors(s.d))
        if not report.passed:
            raise VerificationFailure(report, "certainty check failed")
        return report
    raise UsageError(f"unknown axioms action {args.what!r}")


def cmd_selftest(args, cfg):
    results = acceptance.run_all(slow=args.slow, seed=cfg.seed)
    for r in results:
        print(r.line(), file=args.stderr)
    payload = [
        {"criterion": r.number, "name": r.name, "passed": r.passed, "detail": r.detail, "seconds": round(r.seconds, 3)}
        for r in results
    ]
    if not all(r.passed for r in results):
        raise VerificationFailure(payload, "acceptance criteria failed")
    return payload


# --- parser ---------------------------------------------------------------

def _add_sic_source(p):
    g = p.add_argument_group("SIC source")
    g.add_argument("--d", type=int, help="dimension; built-in SIC for 2 and 3, searched otherwise")
    g.add_argument("--builtin", type=int, choices=(2, 3))
    g.add_argument("--sic", metavar="FILE", help="SicSet JSON")
    g.add_argument("--fiducial", metavar="FILE", help="Fiducial JSON")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=("json", "table", "csv"), default="json")
    common.add_argument("--tol", type=float, default=VERIFY_TOL, help="verification tolerance")
    common.add_argument("--search-tol", type=float, default=SEARCH_TOL)
    common.add_argument("--zero-tol", type=float, default=geo.ZERO_TOL)

    parser = argparse.ArgumentParser(prog="sicqb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("find-sic", parents=[common], help="search for a Weyl-Heisenberg SIC fiducial")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--max-restarts", type=int, default=SearchOptions.max_restarts)
    p.add_argument("--orbit", action="store_true", help="print the full SicSet instead of the fiducial")
    p.set_defaults(func=cmd_find_sic)

    p = sub.add_parser("verify", parents=[common], help="verify a SIC")
    _add_sic_source(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convert", parents=[common], help="density matrix <-> SIC probabilities")
    _add_sic_source(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state-matrix", metavar="FILE", help="DensityMatrix JSON -> ProbVector")
    src.add_argument("--probs", metavar="FILE", help="ProbVector JSON -> DensityMatrix")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", parents=[common], help="check that a probability vector is a quantum state")
    _add_sic_source(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", metavar="FILE", help="ProbVector JSON")
    src.add_argument("--probs", metavar="FILE", help="alias of --state")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("urgleichung", parents=[common], help="ground probabilities for a POVM")
    _add_sic_source(p)
    p.add_argument("--probs", metavar="FILE", required=True)
    p.add_argument("--povm", metavar="FILE", required=True)
    p.set_defaults(func=cmd_urgleichung)

    p = sub.add_parser("evolve", parents=[common], help="unitary evolution of a SIC vector")
    _add_sic_source(p)
    p.add_argument("--probs", metavar="FILE", required=True)
    p.add_argument("--unitary", metavar="FILE", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("posterior", parents=[common], help="posterior from maximal ignorance")
    _add_sic_source(p)
    p.add_argument("--povm", metavar="FILE", required=True)
    p.add_argument("--outcome", type=int, required=True, help="0-based ground outcome")
    p.set_defaults(func=cmd_posterior)

    p = sub.add_parser("geometry", parents=[common], help="state-space geometry probes")
    p.add_argument("what", choices=("sphere", "zeros", "gram", "nflat", "entropy", "basis"))
    p.add_argument("--d", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, help="0-based slot for 'basis'")
    p.add_argument("--probs", metavar="FILE")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("axioms", parents=[common], help="exact constants of the generalized urgleichung")
    p.add_argument("what", choices=("solve", "table", "certainty"))
    p.add_argument("--qbar", type=int)
    p.add_argument("--m0", type=int)
    p.add_argument("--qbar-max", type=int, default=4)
    p.add_argument("--m0-max", type=int, default=10)
    _add_sic_source(p)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--slow", action="store_true", help="include the SIC search criterion")
    p.set_defaults(func=cmd_selftest)
    return parser


def _geometry_needs(args):
    need = {"gram": ("d", "n"), "nflat": ("d", "n"), "basis": ("d", "k"),
            "sphere": ("d", "probs"), "zeros": ("d", "probs"), "entropy": ("probs",)}
    missing = [a for a in need[args.what] if getattr(args, a) is None]
    if missing:
        raise UsageError(f"geometry {args.what} needs " + ", ".join("--" + m for m in missing))


def run(argv=None, stdout=None, stderr=None, environ=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        args.stderr = stderr
        cfg = CliConfig.from_args(args, environ)
        if args.command == "geometry":
            _geometry_needs(args)
        payload = args.func(args, cfg)
    except VerificationFailure as exc:
        print(render(exc.payload, args.output), file=stdout)
        print(f"sicqb: {exc}", file=stderr)
        return EXIT_FAIL
    except (SicNotFoundError, FundamentalInequalityError, UndefinedPosteriorError) as exc:
        print(f"sicqb: {exc}", file=stderr)
        return EXIT_FAIL
    except (UsageError, DimensionError) as exc:
        print(f"sicqb: {exc}", file=stderr)
        return EXIT_USAGE
    except (SicqbError, ValueError, IndexError) as exc:
        print(f"sicqb: {exc}", file=stderr)
        return EXIT_USAGE
    print(render(payload, args.output), file=stdout)
    return EXIT_OK


def main():
    sys.exit(run())
