"""Hölder certificate constants and the empirical checks behind them."""

import math

import numpy as np
import pytest

from dendrify.errors import InvalidSystem, LemmaViolated
from dendrify.services.attractor import AddressedPoint
from dendrify.services.geometry import same_point
from dendrify.services.holder import (
    certificate_constant,
    compute_beta,
    compute_certificate,
    compute_lambda,
    compute_rho,
    growth_profile,
    normalize,
    sample_pairs,
    verify_bounded_turning,
    verify_lemma1,
    verify_semigroup_invariance,
)
from dendrify.services.polysys import validate

DT2_BETA_1 = math.acos(0.8)


def _svd_lambda(sys):
    terms = []
    for s in sys.maps:
        big, small = np.linalg.svd(s.linear_matrix(), compute_uv=False)
        terms.append(1.0 if math.isclose(big, small) else math.log(big) / math.log(small))
    return min(terms)


# -- normalization and constants ---------------------------------------------------

def test_normalize_unit_diameter_is_identity(dt2):
    sys, scale = normalize(dt2)
    assert sys is dt2
    assert scale == 1


def test_normalize_vicsek(vicsek):
    sys, scale = normalize(vicsek)
    assert scale == 2
    assert validate(sys).overall
    assert compute_lambda(sys) == compute_lambda(vicsek)


def test_lambda(dt2, gf, vicsek):
    assert compute_lambda(dt2) == pytest.approx(_svd_lambda(dt2))
    assert 0 < compute_lambda(dt2) < 1
    assert compute_lambda(gf) == pytest.approx(math.log(2 / 3) / math.log(1 / 3))
    assert compute_lambda(vicsek) == 1.0


def test_rho(dt2):
    assert compute_rho(dt2) == pytest.approx(5 / 12)


def test_beta_at_depth_one(dt2):
    estimate = compute_beta(dt2, 1)
    assert estimate.beta == pytest.approx(DT2_BETA_1)
    assert estimate.witness[2].as_floats() == (0.5, 0.0)
    assert estimate.stabilized


def test_beta_profile_is_non_increasing(gf):
    estimate = compute_beta(gf, 4)
    assert len(estimate.profile) == 4
    assert all(b <= a for a, b in zip(estimate.profile, estimate.profile[1:]))
    assert estimate.beta == estimate.profile[-1]
    assert 0 < estimate.beta <= math.pi


def test_beta_of_square_contacts(vicsek):
    assert compute_beta(vicsek, 3).beta == pytest.approx(math.pi / 2)


def test_certificate(dt2):
    cert = compute_certificate(dt2, 4)
    assert cert.lam == pytest.approx(compute_lambda(dt2))
    assert cert.rho == pytest.approx(5 / 12)
    assert cert.beta <= DT2_BETA_1 + 1e-12
    assert cert.C == pytest.approx(2 / (cert.rho * math.sin(cert.beta)) ** cert.lam)
    assert cert.diam_scale == 1.0
    assert cert.constant_original == pytest.approx(cert.C)


def test_certificate_in_original_coordinates(vicsek):
    cert = compute_certificate(vicsek, 2)
    assert cert.lam == 1.0
    assert cert.diam_scale == 2.0
    assert cert.constant_original == pytest.approx(cert.C)
    assert cert.C == pytest.approx(certificate_constant(cert.rho, cert.beta, 1.0))


def test_certificate_needs_a_valid_system(sierpinski):
    with pytest.raises(InvalidSystem):
        compute_certificate(sierpinski)


# -- expansion exponent --------------------------------------------------------

@pytest.mark.parametrize("name", ["dt2", "gf"])
def test_lemma1_holds(name, request):
    sys = request.getfixturevalue(name)
    outcome = verify_lemma1(sys, compute_lambda(sys), trials=2000, max_len=10, seed=3)
    assert outcome.max_ratio <= 1 + 1e-9
    assert 1 <= len(outcome.witness) <= 10


def test_lemma1_fails_with_too_large_exponent(dt2):
    with pytest.raises(LemmaViolated) as info:
        verify_lemma1(dt2, 1.0, trials=200, max_len=6, seed=0)
    assert 2 in info.value.witness


# -- bounded turning -----------------------------------------------------------------

def test_sampling_is_deterministic(dt2):
    assert sample_pairs(dt2, 60, 6, seed=11) == sample_pairs(dt2, 60, 6, seed=11)
    strata = [stratum for stratum, _, _ in sample_pairs(dt2, 9, 6, seed=1)]
    assert strata == ["across", "deep", "within"] * 3


def test_dt2_stays_within_the_certified_bound(dt2):
    cert = compute_certificate(dt2, 6)
    outcome = verify_bounded_turning(dt2, cert, samples=300, depth=6, seed=0)
    assert outcome.evaluated == 300
    assert outcome.max_ratio > 0
    assert outcome.within_bound
    assert outcome.margin > 0
    assert set(outcome.strata_max) == {"across", "deep", "within"}


def test_float_input_skips_round_off_twins(dt2_floats):
    for _, x, y in sample_pairs(dt2_floats, 600, 6, seed=0):
        assert not same_point(x.denote(dt2_floats), y.denote(dt2_floats))


def test_float_input_stays_within_the_certified_bound(dt2_floats):
    cert = compute_certificate(dt2_floats, 6)
    outcome = verify_bounded_turning(dt2_floats, cert, samples=600, depth=6, seed=0)
    assert outcome.within_bound


def test_similarity_system_is_bounded_turning(vicsek):
    cert = compute_certificate(vicsek, 3)
    outcome = verify_bounded_turning(vicsek, cert, samples=150, depth=4, seed=2)
    assert math.isfinite(outcome.max_ratio)
    assert outcome.within_bound


def test_workers_do_not_change_the_result(dt2):
    cert = compute_certificate(dt2, 3)
    serial = verify_bounded_turning(dt2, cert, samples=60, depth=5, seed=4, workers=1)
    pooled = verify_bounded_turning(dt2, cert, samples=60, depth=5, seed=4, workers=3)
    assert serial == pooled


def test_lambda_override(gf):
    cert = compute_certificate(gf, 3)
    outcome = verify_bounded_turning(gf, cert, samples=30, depth=4, seed=0, lambda_override=1.0)
    assert outcome.lam == 1.0
    assert outcome.C == pytest.approx(certificate_constant(cert.rho, cert.beta, 1.0))


# -- ratio invariance --------------------------------------------------------------

def test_semigroup_invariance(dt2):
    lam = compute_lambda(dt2)
    outcome = verify_semigroup_invariance(
        dt2, lam, AddressedPoint((), 1), AddressedPoint((2,), 3), depth=4, trials=40, seed=5,
    )
    assert outcome.holds
    assert outcome.max_excess > 0


# -- divergence ------------------------------------------------------------------------

def test_growth_ratio_doubles(gf):
    rows = growth_profile(
        gf, 1, AddressedPoint((), 1), AddressedPoint((), 4), range(1, 11), extra_depth=6,
    )
    assert [row.n for row in rows] == list(range(1, 11))
    for row in rows:
        assert row.separation == pytest.approx(3.0 ** -row.n)
        assert row.ratio == pytest.approx(2.0 ** row.n, rel=0.05)
        assert row.diam_lower <= row.diam_upper


@pytest.mark.slow
def test_dt2_bound_at_full_scale(dt2):
    cert = compute_certificate(dt2)
    outcome = verify_bounded_turning(dt2, cert, samples=10_000, depth=8, seed=0)
    assert outcome.evaluated == 10_000
    assert outcome.within_bound
    assert outcome.margin > 0
