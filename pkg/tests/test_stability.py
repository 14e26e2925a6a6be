"""Linearization, stability verdicts, asymptotic spectra, pairing checks."""

import dataclasses

import numpy as np
import pytest

from vortexeq import (
    DegenerateSeed,
    JacobianUnstable,
    StabilityClass,
    asymptotic_eigenvalues,
    cabral_schmidt_check,
    continue_equilibrium,
    hessian,
    linearize,
    newton_refine,
    ngon,
    reduced_field,
    skew_pairing_check,
    stability_verdict,
    truncation_crosscheck,
)
from tests.test_continuation import make_degenerate_point


def test_reduced_field_vanishes_at_equilibrium(min3_eq):
    f = reduced_field(min3_eq.r, min3_eq.theta, min3_eq.epsilon, min3_eq.omega)
    assert np.abs(f).max() < 1e-12


def test_linearize_requires_equilibrium(min3_eq):
    junk = dataclasses.replace(min3_eq, residual=1e-6)
    with pytest.raises(ValueError):
        linearize(junk)


def test_linearize_block_structure(min3_eq):
    n = 3
    eps = min3_eq.epsilon
    mat = linearize(min3_eq)
    assert mat.shape == (2 * n, 2 * n)
    ll = mat[n:, :n]
    assert np.abs(ll + 2 * np.eye(n)).max() < 10 * abs(eps)
    ur = mat[:n, n:]
    vtt = hessian(min3_eq.theta)
    assert np.abs(ur - eps * vtt).max() < 100 * eps * eps


def test_linearize_flags_bad_step(min3_eq):
    with pytest.raises(JacobianUnstable):
        linearize(min3_eq, fd_step=0.5)


def test_verdict_dichotomy_pair():
    point = newton_refine(np.array([0.0, np.pi / 3]))
    stable = stability_verdict(continue_equilibrium(point, 1e-3))
    assert stable.classification is StabilityClass.LINEARLY_STABLE
    assert stable.n_zero == 2
    assert stable.instability_count == 0
    unstable = stability_verdict(continue_equilibrium(point, -1e-3))
    assert unstable.classification is StabilityClass.LINEARLY_UNSTABLE
    assert unstable.instability_count == 1
    assert unstable.max_real_part == pytest.approx(np.sqrt(6e-3), rel=0.02)


def test_verdict_spectrum_structure(triangle_eq):
    verdict = stability_verdict(triangle_eq)
    ev = verdict.spectrum.eigenvalues
    assert ev.size == 4
    assert np.count_nonzero(ev == 0) == 2
    nonzero = ev[ev != 0]
    # pure imaginary conjugate pair at the linearized frequency
    assert np.abs(nonzero.real).max() < 1e-4 * np.abs(nonzero).max()
    np.testing.assert_allclose(
        np.sort(nonzero.imag), [-np.sqrt(6e-3), np.sqrt(6e-3)], rtol=5e-3
    )


def test_spectrum_pairs_lambda_with_minus_lambda(min3_eq):
    ev = stability_verdict(min3_eq).spectrum.eigenvalues
    ev = np.asarray(ev)
    for lam in ev:
        dist = np.abs(ev + lam).min()
        assert dist < 1e-8 * max(1.0, abs(lam))


def test_asymptotic_matches_exact_small_eps(min3_point):
    for eps in (1e-4, 1e-5):
        eq = continue_equilibrium(min3_point, eps)
        exact = stability_verdict(eq).spectrum.eigenvalues
        exact = np.sort(np.abs(exact[exact != 0]))
        predicted = np.sort(np.abs(asymptotic_eigenvalues(min3_point, eps)))
        assert np.abs(exact - predicted).max() / predicted.max() < 0.05


def test_asymptotic_sqrt_scaling(min3_point):
    lo = np.abs(asymptotic_eigenvalues(min3_point, 1e-5)).max()
    hi = np.abs(asymptotic_eigenvalues(min3_point, 1e-4)).max()
    assert hi / lo == pytest.approx(np.sqrt(10), rel=1e-12)


def test_asymptotic_rejects_degenerate():
    with pytest.raises(DegenerateSeed):
        asymptotic_eigenvalues(make_degenerate_point(), 1e-3)


def test_skew_pairing_triangle(triangle_eq):
    report = skew_pairing_check(triangle_eq)
    assert report.all_nondegenerate
    assert report.normalized.min() > 0.1
    assert report.eigenvalues.size == 2


def test_truncation_error_orders(min3_point):
    errs = {}
    for eps in (1e-3, 1e-4):
        eq = continue_equilibrium(min3_point, eps)
        errs[eps] = truncation_crosscheck(eq).block_errors
    orders = {"upper_left": 2, "upper_right": 2, "lower_left": 1, "lower_right": 2}
    for block, expected in orders.items():
        ratio = errs[1e-3][block] / errs[1e-4][block]
        target = 10.0 ** expected
        assert target / 2 < ratio < target * 2, (block, ratio)


def test_truncation_report_fields(min3_eq):
    report = truncation_crosscheck(min3_eq)
    assert report.epsilon == min3_eq.epsilon
    expected = {"upper_left": 2, "upper_right": 2, "lower_left": 1, "lower_right": 2}
    assert set(report.block_errors) == set(expected)
    assert report.expected_orders == expected


def test_ring_instability_counts():
    point = newton_refine(ngon(10))
    plus = stability_verdict(continue_equilibrium(point, 1e-3))
    assert plus.classification is StabilityClass.LINEARLY_UNSTABLE
    assert plus.instability_count == 2
    minus = stability_verdict(continue_equilibrium(point, -1e-3))
    assert minus.instability_count == 7


def test_cabral_schmidt_outside_and_consistent():
    for n in (4, 7, 12):
        for eps in (1e-3, -1e-3):
            inside, consistent = cabral_schmidt_check(n, eps)
            assert not inside
            assert consistent


def test_cabral_schmidt_with_supplied_verdict():
    point = newton_refine(ngon(6))
    verdict = stability_verdict(continue_equilibrium(point, 1e-3))
    inside, consistent = cabral_schmidt_check(6, 1e-3, verdict=verdict)
    assert not inside
    assert consistent
