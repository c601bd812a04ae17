"""
Hölder certificate — the constants (Q_i, q_i, λ, ρ, β, C) bounding
diam γ(x, y) ≤ C ‖x − y‖^λ on the attractor, and empirical checks of the
inequalities behind them.

All constants refer to coordinates in which diam(P) = 1. In the original
coordinates the certified inequality reads
diam γ(x, y) ≤ C · diam(P)^(1−λ) · ‖x − y‖^λ.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import settings
from ..errors import LemmaViolated, NoSeparatedPairs
from .arcs import ArcApproximation, arc, arc_ratio
from .attractor import AddressedPoint
from .geometry import (
    AffineMap2,
    IntersectionKind,
    Number,
    Point2,
    convex_intersection,
    incident_rays,
    min_distance,
    point_polygon_distance,
    same_point,
    singular_values,
    squared_diameter_exact,
    stretch_factors,
)
from .polysys import Address, PolygonalSystem, validated

logger = logging.getLogger(__name__)

LEMMA_SLACK = 1e-9
SIMILARITY_TOLERANCE = 1e-12


# -- Normalization -------------------------------------------------------------------

def _sqrt(value: Number) -> Number:
    """Exact square root for perfect-square rationals, float otherwise."""
    if isinstance(value, (int, Fraction)):
        value = Fraction(value)
        num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
        if num * num == value.numerator and den * den == value.denominator:
            return Fraction(num, den)
    return math.sqrt(float(value))


def normalize(sys: PolygonalSystem) -> Tuple[PolygonalSystem, Number]:
    """Conjugate by the homothety x ↦ x / diam(P); returns (system, diam(P))."""
    scale = _sqrt(squared_diameter_exact(sys.vertices))
    if scale == 1:
        return sys, 1
    inv = 1 / scale
    return sys.conjugate(AffineMap2(inv, 0, 0, inv)), scale


# -- Constants ---------------------------------------------------------------------

def _log_ratio(stretch: Tuple[float, float]) -> float:
    big, small = stretch
    if big - small <= SIMILARITY_TOLERANCE * big:
        return 1.0
    return math.log(big) / math.log(small)


def compute_lambda(sys: PolygonalSystem) -> float:
    """λ = min_i log Q_i / log q_i, in (0, 1]."""
    return min(_log_ratio(stretch_factors(s)) for s in sys.maps)


def compute_rho(sys: PolygonalSystem) -> float:
    """
    min(d1, d2): d1 over disjoint pairs P_i, P_j; d2 over vertices A ∉ P_i.
    """
    images = sys.images()
    candidates: List[float] = []
    for p1, p2 in combinations(images, 2):
        if convex_intersection(p1, p2).kind is IntersectionKind.EMPTY:
            candidates.append(min_distance(p1, p2))
    for vertex in sys.vertices:
        for image in images:
            if not image.contains(vertex):
                candidates.append(point_polygon_distance(vertex, image))
    if not candidates:
        raise NoSeparatedPairs(
            "every pair of copies touches and every vertex lies in every copy"
        )
    return min(candidates)


@dataclass(frozen=True)
class BetaEstimate:
    beta: float
    depth: int
    profile: Tuple[float, ...]          # profile[t-1] = β over configurations up to depth t
    witness: Tuple[Address, Address, Point2]

    @property
    def stabilized(self) -> bool:
        if len(self.profile) < 2:
            return True
        return self.profile[-1] >= self.profile[-2] - SIMILARITY_TOLERANCE


def _containing_cells(
    sys: PolygonalSystem, start: Address, vertex: int, depth: int,
) -> List[Tuple[Address, int]]:
    """Cells below `start` (inclusive, length <= depth) holding S_start(A_vertex) as a vertex."""
    children: Dict[int, List[Tuple[int, int]]] = sys._cache.get("vertex_children")
    if children is None:
        children = {}
        for w, target in enumerate(sys.vertices, start=1):
            children[w] = []
            for c, s in enumerate(sys.maps, start=1):
                hit = next(
                    (w2 for w2, src in enumerate(sys.vertices, start=1) if same_point(s(src), target)),
                    None,
                )
                if hit is not None:
                    children[w].append((c, hit))
        sys._cache["vertex_children"] = children
    found = [(start, vertex)]
    frontier = [(start, vertex)]
    while frontier:
        address, w = frontier.pop()
        if len(address) >= depth:
            continue
        for c, w2 in children[w]:
            entry = (address + (c,), w2)
            found.append(entry)
            frontier.append(entry)
    return sorted(found)


def compute_beta(sys: PolygonalSystem, max_depth: Optional[int] = None) -> BetaEstimate:
    """
    Minimum incident-side angle over every pair of incomparable cells of
    length <= max_depth that meet in a single point.

    Two such cells meet only at S_𝐤(A) for their longest common prefix 𝐤 and
    a level-1 junction A, so configurations are enumerated as (𝐤, A, pair of
    copies at A) together with the descendants that still hold the junction.
    Rays are computed once per configuration and transported by the linear
    part of S_𝐤.
    """
    depth = settings.beta_depth if max_depth is None else max_depth
    if depth < 1:
        raise ValueError("beta depth must be at least 1")
    graph = validated(sys).graph

    configs = []
    for node, point in enumerate(graph.point_nodes):
        at = graph.polygons_at(node)
        vertex_of = {}
        for i in at:
            s = sys.maps[i - 1]
            vertex_of[i] = next(
                w for w, v in enumerate(sys.vertices, start=1) if same_point(s(v), point)
            )
        for a, b in combinations(at, 2):
            sides = []
            for i in (a, b):
                cells = _containing_cells(sys, (i,), vertex_of[i], depth)
                rays = np.array([incident_rays(point, sys.cell(c)) for c, _ in cells])
                levels = np.array([len(c) for c, _ in cells])
                sides.append(([c for c, _ in cells], rays, levels))
            configs.append((point, sides))

    best = math.inf
    witness = None
    per_depth = [math.inf] * depth
    for length in range(depth):
        for k in product(range(1, sys.m + 1), repeat=length):
            lin = sys.map_for(k).linear_matrix().T
            image = sys.map_for(k)
            for point, ((cells_a, rays_a, lv_a), (cells_b, rays_b, lv_b)) in configs:
                ua = rays_a @ lin            # (Na, 2, 2)
                ub = rays_b @ lin
                crs = np.abs(
                    ua[:, None, :, None, 0] * ub[None, :, None, :, 1]
                    - ua[:, None, :, None, 1] * ub[None, :, None, :, 0]
                )
                dot = (
                    ua[:, None, :, None, 0] * ub[None, :, None, :, 0]
                    + ua[:, None, :, None, 1] * ub[None, :, None, :, 1]
                )
                angles = np.arctan2(crs, dot).min(axis=(2, 3))       # (Na, Nb)
                levels = length + np.maximum(lv_a[:, None], lv_b[None, :])
                valid = levels <= depth
                if not valid.any():
                    continue
                for t in np.unique(levels[valid]):
                    per_depth[t - 1] = min(per_depth[t - 1], float(angles[levels == t].min()))
                masked = np.where(valid, angles, np.inf)
                ia, ib = np.unravel_index(int(np.argmin(masked)), masked.shape)
                if masked[ia, ib] < best:
                    best = float(masked[ia, ib])
                    witness = (k + cells_a[ia], k + cells_b[ib], image(point))

    if witness is None:
        raise NoSeparatedPairs("system has no connection points to measure angles at")
    profile = tuple(np.minimum.accumulate(np.array(per_depth)).tolist())
    estimate = BetaEstimate(beta=best, depth=depth, profile=profile, witness=witness)
    if not estimate.stabilized:
        logger.warning(
            "beta still decreasing at depth %d: %.6g -> %.6g",
            depth, profile[-2], profile[-1],
        )
    return estimate


@dataclass(frozen=True)
class HolderCertificate:
    per_map: Tuple[Tuple[float, float], ...]
    lam: float
    rho: float
    beta: float
    beta_depth: int
    beta_profile: Tuple[float, ...]
    beta_stabilized: bool
    beta_witness: Tuple[Address, Address, Point2]
    C: float
    diam_scale: float

    @property
    def constant_original(self) -> float:
        """C in the original coordinates: C · diam(P)^(1−λ)."""
        return self.C * self.diam_scale ** (1 - self.lam)


def certificate_constant(rho: float, beta: float, lam: float) -> float:
    return 2 / (rho ** lam * math.sin(beta) ** lam)


def compute_certificate(
    sys: PolygonalSystem, beta_depth: Optional[int] = None,
) -> HolderCertificate:
    validated(sys)
    scale = _sqrt(squared_diameter_exact(sys.vertices))
    per_map = tuple(stretch_factors(s) for s in sys.maps)
    lam = compute_lambda(sys)
    # ρ is a length, β an angle: rescaling by the homothety divides ρ and keeps β
    rho = compute_rho(sys) / float(scale)
    estimate = compute_beta(sys, beta_depth)
    cert = HolderCertificate(
        per_map=per_map,
        lam=lam,
        rho=rho,
        beta=estimate.beta,
        beta_depth=estimate.depth,
        beta_profile=estimate.profile,
        beta_stabilized=estimate.stabilized,
        beta_witness=estimate.witness,
        C=certificate_constant(rho, estimate.beta, lam),
        diam_scale=float(scale),
    )
    logger.info(
        "Certificate: lambda=%.6g rho=%.6g beta=%.6g C=%.6g",
        cert.lam, cert.rho, cert.beta, cert.C,
    )
    return cert


# -- Expansion exponent of composed maps ------------------------------------------

@dataclass(frozen=True)
class Lemma1Outcome:
    trials: int
    max_len: int
    seed: int
    lam: float
    max_ratio: float                     # max over words of Q_𝐢 / q_𝐢^λ
    witness: Tuple[int, ...]


def _random_word(rng: np.random.Generator, m: int, min_len: int, max_len: int) -> Tuple[int, ...]:
    length = int(rng.integers(min_len, max_len + 1))
    return tuple(int(v) for v in rng.integers(1, m + 1, size=length))


def _compose(sys: PolygonalSystem, word: Sequence[int]) -> AffineMap2:
    composed = AffineMap2.identity()
    for letter in word:
        composed = composed.compose(sys.maps[letter - 1])
    return composed


def verify_lemma1(
    sys: PolygonalSystem,
    lam: float,
    trials: Optional[int] = None,
    max_len: Optional[int] = None,
    seed: Optional[int] = None,
) -> Lemma1Outcome:
    """Q_𝐢 <= q_𝐢^λ for random multiindices, composed exactly."""
    trials = settings.lemma_trials if trials is None else trials
    max_len = settings.lemma_max_len if max_len is None else max_len
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    worst, witness = 0.0, ()
    for _ in range(trials):
        word = _random_word(rng, sys.m, 1, max_len)
        big, small = singular_values(_compose(sys, word))
        bound = small ** lam
        if big > bound * (1 + LEMMA_SLACK):
            raise LemmaViolated(word, big, bound)
        if big / bound > worst:
            worst, witness = big / bound, word
    return Lemma1Outcome(trials, max_len, seed, lam, worst, witness)


# -- Bounded turning ---------------------------------------------------------------

STRATA = ("across", "deep", "within")


@dataclass(frozen=True)
class PairResult:
    stratum: str
    x: AddressedPoint
    y: AddressedPoint
    ratio_lower: float
    ratio_upper: float


@dataclass(frozen=True)
class VerificationOutcome:
    samples: int
    evaluated: int
    depth: int
    seed: int
    lam: float
    C: float
    C_original: float
    max_ratio: float
    max_lower_ratio: float
    witness: Optional[Tuple[AddressedPoint, AddressedPoint]]
    strata_max: Dict[str, float] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.C - self.max_ratio

    @property
    def within_bound(self) -> bool:
        return self.max_ratio <= self.C


def _tail(rng: np.random.Generator, m: int, room: int) -> Tuple[int, ...]:
    return _random_word(rng, m, 0, max(room, 0))


def _sample_pair(
    rng: np.random.Generator, sys: PolygonalSystem, depth: int, stratum: str,
) -> Tuple[AddressedPoint, AddressedPoint]:
    m, n = sys.m, len(sys.vertices)

    def vertex() -> int:
        return int(rng.integers(1, n + 1))

    if stratum == "across" or depth < 2:
        i, j = rng.choice(np.arange(1, m + 1), size=2, replace=False)
        x = (int(i),) + _tail(rng, m, depth - 1)
        y = (int(j),) + _tail(rng, m, depth - 1)
    elif stratum == "deep":
        k = _random_word(rng, m, 1, depth - 1)
        i, j = rng.choice(np.arange(1, m + 1), size=2, replace=False)
        room = depth - len(k) - 1
        x = k + (int(i),) + _tail(rng, m, room)
        y = k + (int(j),) + _tail(rng, m, room)
    else:
        k = _random_word(rng, m, 1, depth - 1)
        room = depth - len(k)
        x = k + _tail(rng, m, room)
        y = k + _tail(rng, m, room)
    return AddressedPoint(x, vertex()), AddressedPoint(y, vertex())


def sample_pairs(
    sys: PolygonalSystem, samples: int, depth: int, seed: int,
) -> List[Tuple[str, AddressedPoint, AddressedPoint]]:
    """Distinct-point pairs, strata assigned round-robin."""
    rng = np.random.default_rng(seed)
    pairs = []
    for t in range(samples):
        stratum = STRATA[t % len(STRATA)]
        for _ in range(20):
            x, y = _sample_pair(rng, sys, depth, stratum)
            if not same_point(x.denote(sys), y.denote(sys)):
                pairs.append((stratum, x, y))
                break
    return pairs


def verify_bounded_turning(
    sys: PolygonalSystem,
    cert: HolderCertificate,
    samples: Optional[int] = None,
    depth: Optional[int] = None,
    seed: Optional[int] = None,
    lambda_override: Optional[float] = None,
    workers: Optional[int] = None,
) -> VerificationOutcome:
    """
    Max of diam_upper / ‖x − y‖^λ over sampled pairs, in normalized
    coordinates, against the certified C. A ratio above C is a finding.
    """
    samples = settings.samples if samples is None else samples
    depth = settings.verify_depth if depth is None else depth
    seed = settings.seed if seed is None else seed
    workers = settings.workers if workers is None else workers
    lam = cert.lam if lambda_override is None else lambda_override
    # ratio in coordinates where diam(P) = 1
    rescale = cert.diam_scale ** (lam - 1)
    validated(sys)

    def evaluate(item) -> PairResult:
        stratum, x, y = item
        lower, upper = arc_ratio(arc(sys, x, y, depth), lam)
        return PairResult(stratum, x, y, lower * rescale, upper * rescale)

    pairs = sample_pairs(sys, samples, depth, seed)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(evaluate, pairs))
    else:
        results = [evaluate(item) for item in pairs]

    worst: Optional[PairResult] = None
    strata_max: Dict[str, float] = {}
    max_lower = 0.0
    for result in results:
        strata_max[result.stratum] = max(strata_max.get(result.stratum, 0.0), result.ratio_upper)
        max_lower = max(max_lower, result.ratio_lower)
        if worst is None or result.ratio_upper > worst.ratio_upper:
            worst = result

    C = cert.C if lambda_override is None else certificate_constant(cert.rho, cert.beta, lam)
    outcome = VerificationOutcome(
        samples=samples,
        evaluated=len(results),
        depth=depth,
        seed=seed,
        lam=lam,
        C=C,
        C_original=C * cert.diam_scale ** (1 - lam),
        max_ratio=worst.ratio_upper if worst else 0.0,
        max_lower_ratio=max_lower,
        witness=(worst.x, worst.y) if worst else None,
        strata_max=strata_max,
    )
    if not outcome.within_bound:
        logger.warning(
            "max ratio %.6g exceeds C=%.6g at %s / %s",
            outcome.max_ratio, C,
            worst.x.token(sys.m), worst.y.token(sys.m),
        )
    return outcome


# -- Ratio invariance under the maps ----------------------------------------------

@dataclass(frozen=True)
class InvarianceOutcome:
    trials: int
    seed: int
    base_ratio: Tuple[float, float]
    max_excess: float                   # max of image ratio / (base ratio · Q/q^λ)
    witness: Tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.max_excess <= 1 + LEMMA_SLACK


def verify_semigroup_invariance(
    sys: PolygonalSystem,
    lam: float,
    x: AddressedPoint,
    y: AddressedPoint,
    depth: int,
    trials: int = 100,
    max_len: int = 4,
    seed: Optional[int] = None,
) -> InvarianceOutcome:
    """ratio(S_𝐢x, S_𝐢y) <= ratio(x, y) · Q_𝐢 / q_𝐢^λ for random 𝐢."""
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    base = arc_ratio(arc(sys, x, y, depth), lam)
    worst, witness = 0.0, ()
    for _ in range(trials):
        word = _random_word(rng, sys.m, 1, max_len)
        big, small = singular_values(_compose(sys, word))
        factor = big / small ** lam
        image = arc(
            sys,
            AddressedPoint(word + x.address, x.vertex),
            AddressedPoint(word + y.address, y.vertex),
            depth + len(word),
        )
        lower, upper = arc_ratio(image, lam)
        excess = max(
            lower / (base[0] * factor) if base[0] else 0.0,
            upper / (base[1] * factor),
        )
        if excess > worst:
            worst, witness = excess, word
    return InvarianceOutcome(trials, seed, base, worst, witness)


# -- Divergence of the bounded-turning ratio ----------------------------------------

@dataclass(frozen=True)
class GrowthRow:
    n: int
    diam_lower: float
    diam_upper: float
    separation: float

    @property
    def ratio(self) -> float:
        return self.diam_lower / self.separation


def growth_profile(
    sys: PolygonalSystem,
    map_index: int,
    x: AddressedPoint,
    y: AddressedPoint,
    ns: Sequence[int],
    extra_depth: int = 6,
) -> List[GrowthRow]:
    """D_n / Δ_n for the arcs between S_iⁿ(x) and S_iⁿ(y)."""
    rows = []
    for n in ns:
        word = (map_index,) * n
        xn = AddressedPoint(word + x.address, x.vertex)
        yn = AddressedPoint(word + y.address, y.vertex)
        approx: ArcApproximation = arc(
            sys, xn, yn, n + max(len(x.address), len(y.address)) + extra_depth,
        )
        rows.append(GrowthRow(n, approx.diam_lower, approx.diam_upper, approx.separation))
        logger.debug("growth n=%d ratio=%.6g", n, rows[-1].ratio)
    return rows

