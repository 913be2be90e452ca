"""Hyperkahler quotient charts: moments, projectors, forms, growth bounds."""

import math

import numpy as np
import pytest

from hkforms.bianchi import eguchi_hanson_profile, ratio
from hkforms.quotient import (
    FlatCotangentSpace,
    GroupActionSpec,
    QuotientChart,
    ambient_linear_part,
    calabi_orbit_data,
    cotangent_moment,
    growth_check,
    su2_generators,
)

TN = GroupActionSpec("taubnut_R")
CAL = GroupActionSpec("calabi_circle", level_shift=0.5)
CHART_TN = QuotientChart(TN)
CHART_CAL = QuotientChart(CAL)


# -- flat structure ------------------------------------------------------------

def test_flat_quaternionic_identities():
    sp = FlatCotangentSpace(3)
    I, J, K = sp.I_matrix(), sp.J_matrix(), sp.K_matrix()
    eye = np.eye(sp.real_dim)
    assert np.abs(I @ I + eye).max() == 0
    assert np.abs(J @ J + eye).max() == 0
    assert np.abs(K @ K + eye).max() == 0
    assert np.abs(I @ J @ K + eye).max() == 0


def test_omega_c_is_canonical_pairing():
    sp = FlatCotangentSpace(2)
    Wc = sp.omega_matrix(2) + 1j * sp.omega_matrix(3)
    rng = np.random.default_rng(2)
    for _ in range(20):
        X, Y = rng.standard_normal(8), rng.standard_normal(8)
        assert X @ Wc @ Y == pytest.approx(sp.canonical_pairing(X, Y), abs=1e-12)


def test_omegas_constant_and_closed_by_construction():
    sp = FlatCotangentSpace(2)
    for axis in (1, 2, 3):
        W = sp.omega_matrix(axis)
        assert np.abs(W + W.T).max() == 0
        assert abs(np.linalg.det(W)) == pytest.approx(1.0)


# -- moment maps -----------------------------------------------------------------

def test_taubnut_moment_example():
    mu1, muc = TN.moment_maps(np.array([1.0, 1j]), np.array([1.0, -1j]))
    assert muc == pytest.approx(0.0)
    assert mu1 == pytest.approx(1.0)


def test_calabi_moment_on_level_points():
    # zero-section point of the level |z|^2 - |w|^2 = 1
    mu1, muc = CAL.moment_maps(np.array([1.0, 0.0]), np.array([0.0, 0.0]))
    assert mu1 == pytest.approx(0.0)
    assert muc == pytest.approx(0.0)
    # off-level: mu_1 reports the defect
    mu1, muc = CAL.moment_maps(np.array([1.0, 0.0]), np.array([0.0, 5.0]))
    assert muc == pytest.approx(0.0)
    assert mu1 == pytest.approx(12.5)


def test_moment_equivariance():
    rng = np.random.default_rng(3)
    for spec in (TN, CAL):
        for _ in range(100):
            z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            t = float(rng.standard_normal())
            before = spec.moment_maps(z, w)
            after = spec.moment_maps(*spec.act(t, z, w))
            assert abs(before[0] - after[0]) <= 1e-12
            assert abs(before[1] - after[1]) <= 1e-12


def test_moment_defining_identity():
    # d mu = iota(Y) omega for all three components, both models
    rng = np.random.default_rng(4)
    for spec in (TN, CAL):
        for _ in range(20):
            p = rng.standard_normal(8)
            rows = spec.moment_gradient_rows(p)
            Y = spec.generator_real(p)
            X = rng.standard_normal(8)
            for i, axis in enumerate((1, 2, 3)):
                assert rows[i] @ X == pytest.approx(Y @ spec.space.omega_matrix(axis) @ X,
                                                    abs=1e-12)


def test_generator_preserves_kahler_forms():
    # the infinitesimal action is omega-antisymmetric: A^T W + W A = 0
    for spec in (TN, CAL):
        A = ambient_linear_part(spec.generator_real, 8)
        for axis in (1, 2, 3):
            W = spec.space.omega_matrix(axis)
            assert np.abs(A.T @ W + W @ A).max() <= 1e-14


def test_cotangent_moment_reproduces_models():
    rng = np.random.default_rng(5)
    for _ in range(10):
        z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        tn_val = cotangent_moment(lambda zz: np.array([1j * zz[0], 1.0]), z, w)
        assert tn_val == pytest.approx(TN.moment_maps(z, w)[1], abs=1e-12)
        cal_val = cotangent_moment(lambda zz: 1j * zz, z, w)
        assert cal_val == pytest.approx(CAL.moment_maps(z, w)[1], abs=1e-12)
    assert cotangent_moment(lambda zz: np.zeros(2), z, w) == 0


def test_unknown_model_rejected():
    with pytest.raises(ValueError):
        GroupActionSpec("torus")


def test_calabi_n3_regression():
    # the diagonal-circle model scales to n = 3 at the moment-map level
    spec = GroupActionSpec("calabi_circle", level_shift=0.5, n=3)
    rng = np.random.default_rng(30)
    for _ in range(10):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        w = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        t = float(rng.standard_normal())
        before = spec.moment_maps(z, w)
        after = spec.moment_maps(*spec.act(t, z, w))
        assert abs(before[1] - after[1]) <= 1e-12
        p = spec.space.to_real(z, w)
        rows = spec.moment_gradient_rows(p)
        Y = spec.generator_real(p)
        X = rng.standard_normal(12)
        for i, axis in enumerate((1, 2, 3)):
            assert rows[i] @ X == pytest.approx(Y @ spec.space.omega_matrix(axis) @ X,
                                                abs=1e-12)
    # charts stay a 4-dimensional construction
    with pytest.raises(ValueError):
        QuotientChart(spec)


# -- level sets and horizontal geometry -------------------------------------------

def test_taubnut_level_set_examples():
    p = CHART_TN.solve_level_set(np.array([1.0, 0.0, 1.0, 0.0]))
    z, w = TN.space.to_complex(p)
    assert z[1] == pytest.approx(0.0)
    assert w[1] == pytest.approx(-1j)
    p0 = CHART_TN.solve_level_set(np.zeros(4))
    assert np.abs(p0).max() == 0.0


def test_level_set_residuals():
    rng = np.random.default_rng(6)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(25):
            p = chart.solve_level_set(rng.standard_normal(4))
            assert chart.spec.moment_residual(p) <= 1e-12


def test_calabi_phase_slice():
    # z . conj(v0) with v0 = (1, 0) is real-positive on the chart
    rng = np.random.default_rng(7)
    for _ in range(10):
        p = CHART_CAL.representative(rng.standard_normal(4))
        z, _ = CAL.space.to_complex(p)
        assert z[0].imag == pytest.approx(0.0, abs=1e-15)
        assert z[0].real > 0


def test_projector_properties():
    rng = np.random.default_rng(8)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(10):
            p = chart.representative(rng.standard_normal(4))
            P = chart.projector(p)
            assert np.abs(P @ P - P).max() <= 1e-10
            assert np.abs(P - P.T).max() <= 1e-10
            assert np.abs(P @ chart.spec.generator_real(p)).max() <= 1e-10
            assert np.abs(chart.spec.moment_gradient_rows(p) @ P).max() <= 1e-10


def test_chart_map_well_conditioned():
    rng = np.random.default_rng(9)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(10):
            T = chart.chart_tangents(rng.standard_normal(4))
            s = np.linalg.svd(T, compute_uv=False)
            assert s[0] / s[-1] < 50.0


# -- quotient metric and forms ------------------------------------------------------

def test_taubnut_metric_identity_at_origin():
    assert np.abs(CHART_TN.metric(np.zeros(4)) - np.eye(4)).max() <= 1e-12


def test_metric_positive_definite():
    rng = np.random.default_rng(10)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(100):
            g = chart.metric(rng.standard_normal(4))
            assert np.linalg.eigvalsh(g).min() > 0


def test_taubnut_forms_flat_at_origin():
    expected = {
        1: np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], float),
        2: np.array([[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]], float),
        3: np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]], float),
    }
    for axis, mat in expected.items():
        assert np.abs(CHART_TN.kahler_form(axis, np.zeros(4)) - mat).max() <= 1e-12


def test_quotient_forms_closed():
    rng = np.random.default_rng(11)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(2):
            u = 0.7 * rng.standard_normal(4)
            for axis in (1, 2, 3):
                assert chart.closedness_residual(axis, u) <= 1e-5


def test_complex_structures_reconstructed_from_forms():
    # I_i = -g^{-1} Omega_i satisfies the quaternion relations pointwise
    rng = np.random.default_rng(12)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(5):
            u = 0.6 * rng.standard_normal(4)
            g = chart.metric(u)
            ginv = np.linalg.inv(g)
            Is = [-ginv @ chart.kahler_form(axis, u) for axis in (1, 2, 3)]
            eye = np.eye(4)
            for M in Is:
                assert np.abs(M @ M + eye).max() <= 1e-8
            assert np.abs(Is[0] @ Is[1] @ Is[2] + eye).max() <= 1e-8


def test_rotation_relations():
    rng = np.random.default_rng(13)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(2):
            u = 0.7 * rng.standard_normal(4)
            res = chart.omegas_relation_residuals(u)
            assert max(res.values()) <= 1e-5


def test_beta_exactness():
    rng = np.random.default_rng(14)
    for chart in (CHART_TN, CHART_CAL):
        u = 0.7 * rng.standard_normal(4)
        assert chart.beta_exactness_residual(u) <= 1e-5


def test_triholomorphic_circle_annihilates_forms():
    rng = np.random.default_rng(15)
    for _ in range(3):
        u = 0.7 * rng.standard_normal(4)
        for axis in (1, 2, 3):
            L = CHART_TN.lie_derivative(CHART_TN.triholomorphic_ambient, axis, u)
            assert np.abs(L).max() <= 1e-5


def test_rotation_field_fixed_on_zero_section():
    X = CHART_TN.pushdown_field(CHART_TN.rotation_ambient, np.array([0.7, -0.2, 0.0, 0.0]))
    assert np.abs(X).max() <= 1e-12


def test_rotating_field_bundle():
    from hkforms.quotient import rotating_field
    u = np.array([0.4, -0.3, 0.5, 0.2])
    vec, residuals = rotating_field(CHART_TN, u)
    assert vec.shape == (4,)
    assert np.abs(vec).max() > 1e-3      # nonzero away from the fixed set
    assert max(residuals.values()) <= 1e-5


# -- growth --------------------------------------------------------------------------

def _growth_points(seed=16):
    rng = np.random.default_rng(seed)
    pts = [rng.standard_normal(4) * s for s in np.linspace(0.5, 4.0, 12)]
    pts += [np.array([0.0, 0.0, t, 0.0]) for t in (0.1, 0.2, 0.5)]
    return np.array(pts)


def test_growth_rotation_field():
    report = growth_check(CHART_TN, CHART_TN.rotation_ambient, _growth_points())
    assert report.violations == 0
    assert report.linear_part_norm == pytest.approx(1.0)
    assert abs(report.c1_ambient - report.linear_part_norm) <= 0.05 * report.linear_part_norm
    assert report.c1_pushed <= report.c1_ambient + 1e-12
    assert abs(report.c1_pushed - report.linear_part_norm) <= 0.05 * report.linear_part_norm


def test_growth_pushed_never_exceeds_ambient():
    rng = np.random.default_rng(17)
    for chart in (CHART_TN, CHART_CAL):
        for _ in range(20):
            p = chart.representative(rng.standard_normal(4))
            X = chart.rotation_ambient(p)
            Xh = chart.projector(p) @ X
            assert np.linalg.norm(Xh) <= np.linalg.norm(X) + 1e-12


def test_growth_zero_field():
    report = growth_check(CHART_TN, lambda p: np.zeros(8), _growth_points())
    assert report.c1_pushed == 0.0
    assert report.c0 == 0.0
    assert report.violations == 0


# -- the Calabi quotient is the Eguchi-Hanson metric ------------------------------------

def test_su2_generator_normalization():
    E = su2_generators()
    comm = E[0] @ E[1] - E[1] @ E[0]
    assert np.abs(comm + E[2]).max() <= 1e-15


def test_calabi_orbit_biaxial_and_diagonal():
    for t in (0.0, 0.4, 1.1):
        d = calabi_orbit_data(CHART_CAL, t)
        assert abs(d["A_sq"] - d["B_sq"]) <= 1e-12
        assert d["cross_max"] <= 1e-12
        assert d["radial_cross"] <= 1e-9


def test_calabi_quotient_is_eguchi_hanson():
    """Arc-length matching against the Eguchi-Hanson profile.

    The identification sends the orbit coefficient A(t) to the profile's
    radial coordinate r.  The bolt radius fixes a_param = A(0) = 1/2, and the
    radial parts match after the factor 2 that converts the profile's
    literature display to the coframe normalization ds_1 = s_2 ^ s_3 used
    everywhere in this package (the same rescaling of the coframe halves the
    orbit coefficients and doubles the radial factor).
    """
    bolt = calabi_orbit_data(CHART_CAL, 0.0)
    a_param = math.sqrt(bolt["A_sq"])
    assert a_param == pytest.approx(0.5, abs=1e-12)
    assert bolt["C_sq"] <= 1e-12
    profile = eguchi_hanson_profile(a_param)
    ts = (0.25, 0.5, 0.9, 1.4, 2.0)
    a_estimates = []
    for t in ts:
        d = calabi_orbit_data(CHART_CAL, t)
        r = math.sqrt(d["A_sq"])
        # fiber coefficient: C^2 = r^2 (1 - (a/r)^4) to 1e-4
        c_expected = profile.c(r) ** 2
        assert abs(d["C_sq"] - c_expected) <= 1e-4 * max(c_expected, 1.0)
        a_estimates.append((r ** 4 * (1.0 - d["C_sq"] / d["A_sq"])) ** 0.25)
        # radial coefficient: f_quotient dt = 2 f_EH dr along the ray
        h = 1e-5
        dr_dt = (math.sqrt(calabi_orbit_data(CHART_CAL, t + h)["A_sq"])
                 - math.sqrt(calabi_orbit_data(CHART_CAL, t - h)["A_sq"])) / (2.0 * h)
        f_quotient = math.sqrt(d["f_sq"])
        assert f_quotient == pytest.approx(2.0 * profile.f(r) * dr_dt, rel=1e-4)
    # the bolt parameter inferred away from the bolt is uniform
    assert max(abs(a - a_param) for a in a_estimates) <= 1e-6


def test_calabi_ratio3_matches_quotient_coefficients():
    # ratio_3 = f c / (a b) from the extracted coefficients agrees with the
    # Eguchi-Hanson profile value at the identified radius (factor 2 from the
    # radial normalization, as in the metric match)
    for t in (0.5, 1.0):
        d = calabi_orbit_data(CHART_CAL, t)
        r = math.sqrt(d["A_sq"])
        h = 1e-5
        dr_dt = (math.sqrt(calabi_orbit_data(CHART_CAL, t + h)["A_sq"])
                 - math.sqrt(calabi_orbit_data(CHART_CAL, t - h)["A_sq"])) / (2.0 * h)
        quotient_ratio = (math.sqrt(d["f_sq"]) / dr_dt) * math.sqrt(d["C_sq"]) / d["A_sq"]
        assert quotient_ratio == pytest.approx(2.0 * ratio(3, eguchi_hanson_profile(0.5), r),
                                               rel=1e-4)
