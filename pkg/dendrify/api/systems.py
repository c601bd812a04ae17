from fastapi import APIRouter, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import Response
from typing import Optional
import logging

from ..errors import (
    CoincidentEndpoints,
    DepthTooLarge,
    InvalidEndpoint,
    InvalidSystem,
    NoSeparatedPairs,
    SystemParseError,
)
from ..schemas import CertificateReportModel, ValidationReportModel, VerificationReportModel
from ..services.arcs import arc
from ..services.attractor import AddressedPoint, refine, render_svg
from ..services.holder import compute_certificate, verify_bounded_turning
from ..services.loader import parse_system
from ..services.polysys import PolygonalSystem, validate, validated

logger = logging.getLogger(__name__)
router = APIRouter(tags=["systems"])

SVG_MEDIA_TYPE = "image/svg+xml"


async def _system(request: Request) -> PolygonalSystem:
    """The request body is a system definition; decimals stay exact."""
    body = (await request.body()).decode("utf-8")
    try:
        return parse_system(body)
    except SystemParseError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


async def _run(func, *args, **kwargs):
    """Run CPU-bound work off the event loop; map domain errors to status codes."""
    try:
        return await run_in_threadpool(func, *args, **kwargs)
    except (InvalidSystem, NoSeparatedPairs, InvalidEndpoint, CoincidentEndpoints) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except DepthTooLarge as exc:
        raise HTTPException(status_code=413, detail=str(exc))


@router.post("/validate", response_model=ValidationReportModel)
async def validate_system(request: Request):
    system = await _system(request)
    report = await _run(validate, system)
    return ValidationReportModel.from_report(report)


@router.post("/certify", response_model=CertificateReportModel)
async def certify_system(request: Request, beta_depth: Optional[int] = None):
    system = await _system(request)
    cert = await _run(compute_certificate, system, beta_depth)
    return CertificateReportModel.from_certificate(cert, system.m)


@router.post("/verify", response_model=VerificationReportModel)
async def verify_system(
    request: Request,
    samples: Optional[int] = None,
    depth: Optional[int] = None,
    seed: Optional[int] = None,
    lambda_override: Optional[float] = None,
):
    system = await _system(request)

    def work():
        cert = compute_certificate(system)
        return verify_bounded_turning(
            system, cert, samples=samples, depth=depth, seed=seed,
            lambda_override=lambda_override,
        )

    outcome = await _run(work)
    return VerificationReportModel.from_outcome(
        outcome, system.m, overridden=lambda_override is not None,
    )


@router.post("/render")
async def render_system(
    request: Request,
    depth: int = 3,
    x: Optional[str] = None,
    y: Optional[str] = None,
):
    """SVG of the depth-d cells; with both x and y, the arc between them."""
    if (x is None) != (y is None):
        raise HTTPException(status_code=400, detail="give both arc endpoints or neither")
    system = await _system(request)

    def work():
        validated(system)
        refinement = refine(system, depth)
        if x is None:
            return render_svg(refinement)
        px, py = AddressedPoint.parse(x, system), AddressedPoint.parse(y, system)
        approx = arc(system, px, py, max(depth, len(px.address), len(py.address)))
        return render_svg(
            refinement, [[approx.points[0], *approx.junctions, approx.points[1]]], approx.chain,
        )

    svg = await _run(work)
    return Response(content=svg, media_type=SVG_MEDIA_TYPE)
