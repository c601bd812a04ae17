from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from .services.arcs import ArcApproximation
from .services.attractor import format_address
from .services.geometry import Point2
from .services.holder import (
    GrowthRow,
    HolderCertificate,
    InvarianceOutcome,
    Lemma1Outcome,
    VerificationOutcome,
)
from .services.polysys import ValidationReport
from .version import get_version

XY = Tuple[float, float]


def _xy(p: Point2) -> XY:
    return p.as_floats()


class Report(BaseModel):
    version: str = Field(default_factory=get_version)


# -- Validation ----------------------------------------------------------------------

class ConditionModel(BaseModel):
    passed: bool
    detail: Optional[str] = None


class ConnectionPointModel(BaseModel):
    i: int
    j: int
    point: XY


class GraphModel(BaseModel):
    polygon_nodes: List[int]
    point_nodes: List[XY]
    edges: List[Tuple[int, int]]


class ValidationReportModel(Report):
    overall: bool
    condition1: ConditionModel
    condition2: ConditionModel
    condition3: ConditionModel
    condition4: ConditionModel
    connection_points: List[ConnectionPointModel] = []
    graph: Optional[GraphModel] = None
    boundary_in_vertices: Optional[bool] = None

    @classmethod
    def from_report(cls, report: ValidationReport) -> "ValidationReportModel":
        c1, c2, c3, c4 = report.condition1, report.condition2, report.condition3, report.condition4
        d1 = None
        if not c1.passed:
            v = c1.escaping_vertex
            d1 = (
                f"S{c1.offending_index}(P) is not contained in P: "
                f"vertex ({float(v.x):g}, {float(v.y):g}) lies outside"
            )
        d2 = None if c2.passed else "uncovered vertices: " + ", ".join(
            f"({float(p.x):g}, {float(p.y):g})" for p in c2.uncovered
        )
        d3 = None
        if not c3.passed:
            i, j = c3.offending_pair
            d3 = f"P{i} ∩ P{j} is {c3.kind.value}"
            if c3.point is not None:
                d3 += f" at ({float(c3.point.x):g}, {float(c3.point.y):g}) which is not a common vertex"
        if c4.skipped:
            d4 = "skipped: condition 3 failed"
        elif c4.cycle:
            d4 = "cycle: " + " - ".join(f"{kind}{k}" for kind, k in c4.cycle)
        elif c4.components:
            d4 = f"{len(c4.components)} components"
        else:
            d4 = None
        graph = None
        if report.graph is not None:
            graph = GraphModel(
                polygon_nodes=list(report.graph.polygon_nodes),
                point_nodes=[_xy(p) for p in report.graph.point_nodes],
                edges=list(report.graph.edges),
            )
        return cls(
            overall=report.overall,
            condition1=ConditionModel(passed=c1.passed, detail=d1),
            condition2=ConditionModel(passed=c2.passed, detail=d2),
            condition3=ConditionModel(passed=c3.passed, detail=d3),
            condition4=ConditionModel(passed=c4.passed, detail=d4),
            connection_points=[
                ConnectionPointModel(i=c.i, j=c.j, point=_xy(c.point))
                for c in report.connection_points
            ],
            graph=graph,
            boundary_in_vertices=report.boundary_in_vertices,
        )


# -- Certificate ------------------------------------------------------------------

class StretchModel(BaseModel):
    Q: float
    q: float


class CertificateReportModel(Report):
    per_map: List[StretchModel]
    lam: float = Field(serialization_alias="lambda")
    rho: float
    beta: float
    beta_depth: int
    beta_profile: List[float]
    beta_stabilized: bool
    beta_witness: Tuple[str, str]
    C: float
    diam_scale: float
    C_original: float

    @classmethod
    def from_certificate(cls, cert: HolderCertificate, m: int) -> "CertificateReportModel":
        a, b, _ = cert.beta_witness
        return cls(
            per_map=[StretchModel(Q=Q, q=q) for Q, q in cert.per_map],
            lam=cert.lam,
            rho=cert.rho,
            beta=cert.beta,
            beta_depth=cert.beta_depth,
            beta_profile=list(cert.beta_profile),
            beta_stabilized=cert.beta_stabilized,
            beta_witness=(format_address(a, m), format_address(b, m)),
            C=cert.C,
            diam_scale=cert.diam_scale,
            C_original=cert.constant_original,
        )


# -- Verification -----------------------------------------------------------------

class Lemma1Model(BaseModel):
    trials: int
    max_len: int
    max_ratio: float
    witness: List[int]
    violations: int = 0

    @classmethod
    def from_outcome(cls, outcome: Lemma1Outcome) -> "Lemma1Model":
        return cls(
            trials=outcome.trials,
            max_len=outcome.max_len,
            max_ratio=outcome.max_ratio,
            witness=list(outcome.witness),
        )


class InvarianceReportModel(BaseModel):
    seed: int
    trials: int
    base_ratio: Tuple[float, float]
    max_excess: float
    holds: bool
    witness: List[int]

    @classmethod
    def from_outcome(cls, outcome: InvarianceOutcome) -> "InvarianceReportModel":
        return cls(
            seed=outcome.seed,
            trials=outcome.trials,
            base_ratio=outcome.base_ratio,
            max_excess=outcome.max_excess,
            holds=outcome.holds,
            witness=list(outcome.witness),
        )


class VerificationReportModel(Report):
    seed: int
    samples: int
    evaluated: int
    depth: int
    lam: float = Field(serialization_alias="lambda")
    lambda_overridden: bool = False
    C: float
    C_original: float
    max_ratio: float
    max_lower_ratio: float
    margin: float
    within_bound: bool
    witness: Optional[Tuple[str, str]] = None
    strata_max: Dict[str, float] = {}
    lemma1: Optional[Lemma1Model] = None
    invariance: Optional[InvarianceReportModel] = None

    @classmethod
    def from_outcome(
        cls,
        outcome: VerificationOutcome,
        m: int,
        lemma1: Optional[Lemma1Outcome] = None,
        invariance: Optional[InvarianceOutcome] = None,
        overridden: bool = False,
    ) -> "VerificationReportModel":
        return cls(
            seed=outcome.seed,
            samples=outcome.samples,
            evaluated=outcome.evaluated,
            depth=outcome.depth,
            lam=outcome.lam,
            lambda_overridden=overridden,
            C=outcome.C,
            C_original=outcome.C_original,
            max_ratio=outcome.max_ratio,
            max_lower_ratio=outcome.max_lower_ratio,
            margin=outcome.margin,
            within_bound=outcome.within_bound,
            witness=(outcome.witness[0].token(m), outcome.witness[1].token(m)) if outcome.witness else None,
            strata_max=dict(sorted(outcome.strata_max.items())),
            lemma1=Lemma1Model.from_outcome(lemma1) if lemma1 else None,
            invariance=InvarianceReportModel.from_outcome(invariance) if invariance else None,
        )


# -- Arcs and growth ----------------------------------------------------------------

class ArcModel(BaseModel):
    endpoints: Tuple[str, str]
    points: Tuple[XY, XY]
    depth: int
    chain: List[str]
    junctions: List[XY]
    diam_lower: float
    diam_upper: float

    @classmethod
    def from_approximation(cls, approx: ArcApproximation, m: int) -> "ArcModel":
        x, y = approx.endpoints
        return cls(
            endpoints=(x.token(m), y.token(m)),
            points=(_xy(approx.points[0]), _xy(approx.points[1])),
            depth=approx.depth,
            chain=[format_address(a, m) for a in approx.chain],
            junctions=[_xy(p) for p in approx.junctions],
            diam_lower=approx.diam_lower,
            diam_upper=approx.diam_upper,
        )


class GrowthRowModel(BaseModel):
    n: int
    diam_lower: float
    diam_upper: float
    separation: float
    ratio: float


class GrowthReportModel(Report):
    map_index: int
    endpoints: Tuple[str, str]
    rows: List[GrowthRowModel]

    @classmethod
    def from_rows(cls, rows: List[GrowthRow], map_index: int, endpoints: Tuple[str, str]) -> "GrowthReportModel":
        return cls(
            map_index=map_index,
            endpoints=endpoints,
            rows=[
                GrowthRowModel(
                    n=r.n, diam_lower=r.diam_lower, diam_upper=r.diam_upper,
                    separation=r.separation, ratio=r.ratio,
                )
                for r in rows
            ],
        )


# -- Service ------------------------------------------------------------------------

class HealthResponse(BaseModel):
    version: str
    cell_budget: int
