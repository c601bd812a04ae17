"""
Command line front end.

    dendrify validate FILE
    dendrify certify FILE [--beta-depth N]
    dendrify verify FILE [--samples K] [--depth D] [--seed S] [--lambda-override L]
                         [--lemma-trials N] [--invariance-trials N]
    dendrify render FILE --depth D [--arc X Y] -o OUT.svg
    dendrify growth FILE [--map I] [--x TOKEN] [--y TOKEN] [--n-max N]
    dendrify catalog [NAME]
    dendrify serve

FILE is a system definition (JSON) or catalog:NAME for a built-in system.
Reports go to stdout as JSON; logs go to stderr.

Exit codes: 0 success, 1 parse or IO error, 2 invalid system or endpoint,
3 cell budget exceeded.
"""

import argparse
import json
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import BaseModel

from .config import settings
from .errors import (
    CoincidentEndpoints,
    DepthTooLarge,
    InvalidEndpoint,
    InvalidSystem,
    LemmaViolated,
    NoSeparatedPairs,
    SystemParseError,
)
from .schemas import (
    ArcModel,
    CertificateReportModel,
    GrowthReportModel,
    Lemma1Model,
    ValidationReportModel,
    VerificationReportModel,
)
from .services.arcs import arc
from .services.attractor import AddressedPoint, refine, render_svg
from .services.catalog import CATALOG
from .services.holder import (
    compute_certificate,
    growth_profile,
    verify_bounded_turning,
    verify_lemma1,
    verify_semigroup_invariance,
)
from .services.loader import dump_system, load_system
from .services.polysys import PolygonalSystem, validate, validated
from .services.report_store import write_atomic
from .version import tool_stamp

logger = logging.getLogger("dendrify")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3

CATALOG_PREFIX = "catalog:"


def _emit(report: BaseModel) -> None:
    sys.stdout.write(report.model_dump_json(indent=2, by_alias=True) + "\n")


def _load(source: str) -> PolygonalSystem:
    if source.startswith(CATALOG_PREFIX):
        name = source[len(CATALOG_PREFIX):]
        if name not in CATALOG:
            raise SystemParseError(f"unknown catalog system {name!r}")
        return CATALOG[name]()
    return load_system(source)


# -- Commands --------------------------------------------------------------------

def cmd_validate(args: argparse.Namespace) -> int:
    report = validate(_load(args.file))
    _emit(ValidationReportModel.from_report(report))
    return EXIT_OK if report.overall else EXIT_INVALID


def cmd_certify(args: argparse.Namespace) -> int:
    system = _load(args.file)
    cert = compute_certificate(system, args.beta_depth)
    _emit(CertificateReportModel.from_certificate(cert, system.m))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    system = _load(args.file)
    cert = compute_certificate(system, args.beta_depth)
    outcome = verify_bounded_turning(
        system, cert,
        samples=args.samples,
        depth=args.depth,
        seed=args.seed,
        lambda_override=args.lambda_override,
        workers=args.workers,
    )
    lemma = None
    if args.lemma_trials:
        try:
            lemma = Lemma1Model.from_outcome(
                verify_lemma1(system, outcome.lam, trials=args.lemma_trials, seed=outcome.seed)
            )
        except LemmaViolated as exc:
            logger.warning("%s", exc)
            lemma = Lemma1Model(
                trials=args.lemma_trials,
                max_len=settings.lemma_max_len,
                max_ratio=exc.stretch / exc.bound,
                witness=list(exc.witness),
                violations=1,
            )
    invariance = None
    if args.invariance_trials and outcome.witness is not None:
        x, y = outcome.witness
        invariance = verify_semigroup_invariance(
            system, outcome.lam, x, y, depth=outcome.depth,
            trials=args.invariance_trials, seed=outcome.seed,
        )
    report = VerificationReportModel.from_outcome(
        outcome, system.m, invariance=invariance, overridden=args.lambda_override is not None,
    )
    if lemma is not None:
        report.lemma1 = lemma
    _emit(report)
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    system = _load(args.file)
    validated(system)
    refinement = refine(system, args.depth)
    arcs, chain = [], ()
    if args.arc:
        x, y = (AddressedPoint.parse(token, system) for token in args.arc)
        approx = arc(system, x, y, max(args.depth, len(x.address), len(y.address)))
        arcs = [[approx.points[0], *approx.junctions, approx.points[1]]]
        chain = approx.chain
        _emit(ArcModel.from_approximation(approx, system.m))
    write_atomic(args.output, render_svg(refinement, arcs, chain))
    return EXIT_OK


def cmd_growth(args: argparse.Namespace) -> int:
    system = _load(args.file)
    x = AddressedPoint.parse(args.x, system)
    y = AddressedPoint.parse(args.y, system)
    if not 1 <= args.map <= system.m:
        raise InvalidEndpoint(f"map index {args.map} outside 1..{system.m}")
    rows = growth_profile(
        system, args.map, x, y, range(1, args.n_max + 1), extra_depth=args.extra_depth,
    )
    _emit(GrowthReportModel.from_rows(rows, args.map, (args.x, args.y)))
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace) -> int:
    if args.name is None:
        sys.stdout.write("\n".join(sorted(CATALOG)) + "\n")
        return EXIT_OK
    if args.name not in CATALOG:
        raise SystemParseError(f"unknown catalog system {args.name!r}")
    sys.stdout.write(json.dumps(dump_system(CATALOG[args.name]()), indent=2) + "\n")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run(
        "dendrify.main:app",
        host=args.host or settings.host,
        port=args.port or settings.port,
        log_level=settings.log_level.lower(),
    )
    return EXIT_OK


# -- Parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dendrify",
        description="Validate self-affine polygonal dendrites and certify their Hölder arcs.",
    )
    parser.add_argument("--version", action="version", version=tool_stamp())
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the four polygonal-system conditions")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("certify", help="compute lambda, rho, beta and C")
    p.add_argument("file")
    p.add_argument("--beta-depth", type=int, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="sample arcs against the certified bound")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--beta-depth", type=int, default=None)
    p.add_argument("--lambda-override", type=float, default=None,
                   help="use this exponent instead of the certified one")
    p.add_argument("--lemma-trials", type=int, default=settings.lemma_trials,
                   help="random multiindices for the Q <= q^lambda check (0 to skip)")
    p.add_argument("--invariance-trials", type=int, default=0,
                   help="random maps applied to the witness pair to check ratio invariance")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="write the depth-d cells (and an arc) as SVG")
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--arc", nargs=2, metavar=("X", "Y"), help="endpoint tokens such as 12:3 or ε:1")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("growth", help="D_n / Delta_n along S_i^n of an arc")
    p.add_argument("file")
    p.add_argument("--map", type=int, default=1)
    p.add_argument("--x", default="ε:1")
    p.add_argument("--y", default="ε:4")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--extra-depth", type=int, default=6)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("catalog", help="list built-in systems or print one as JSON")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)
    return parser


# Exceptions not listed here propagate.
_EXIT_CODES: Dict[type, int] = {
    OSError: EXIT_INPUT,
    SystemParseError: EXIT_INPUT,
    InvalidSystem: EXIT_INVALID,
    NoSeparatedPairs: EXIT_INVALID,
    InvalidEndpoint: EXIT_INVALID,
    CoincidentEndpoints: EXIT_INVALID,
    DepthTooLarge: EXIT_BUDGET,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except tuple(_EXIT_CODES) as exc:
        code = next(c for kind, c in _EXIT_CODES.items() if isinstance(exc, kind))
        logger.error("%s: %s", type(exc).__name__, exc)
        return code


if __name__ == "__main__":
    sys.exit(main())
