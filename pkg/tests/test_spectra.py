"""Susceptibility extraction, closed-form cross-checks and angle analysis."""
import math

import numpy as np
import pytest

from fourlevel import (DriveConfig, NoTransparencyAngle, PolarizationConfig,
                       RelaxationParams, absorption_rate, chi_components,
                       chi_of_psi, dispersion, im_chi_resonant_analytic,
                       non_raman_angle_analytic, non_raman_angle_numeric,
                       spectrum_sweep)

SQRT2 = math.sqrt(2.0)
R = RelaxationParams(1.0, 1e-4)


def pol(psi=0.0, scalar_rf=0.01, e_amp=SQRT2 * 1e-3):
    return PolarizationConfig.from_angles(e_amp=e_amp, psi=psi,
                                          h_amp=SQRT2 * scalar_rf)


class TestChiOfPsi:
    def test_parallel_selects_x(self):
        pt = chi_of_psi((1 + 2j, 3 + 4j), 0.0)
        assert pt.chi_psi == 1 + 2j

    def test_perpendicular_selects_y(self):
        pt = chi_of_psi((1 + 2j, 3 + 4j), math.pi / 2)
        assert pt.chi_psi == pytest.approx(3 + 4j, abs=1e-15)

    def test_diagonal_average(self):
        pt = chi_of_psi((1 + 2j, 3 + 4j), math.pi / 4)
        assert pt.chi_psi == pytest.approx(2 + 3j, abs=1e-15)

    def test_decomposition_identity(self):
        rng = np.random.default_rng(12)
        for _ in range(30):
            cx, cy = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            psi = rng.uniform(0, math.pi)
            pt = chi_of_psi((cx, cy), psi)
            assert pt.delta_chi == cy - cx
            recon = pt.chi_x + pt.delta_chi * math.sin(psi) ** 2
            assert recon == pytest.approx(pt.chi_psi, rel=1e-12, abs=1e-15)


class TestAbsorption:
    def test_transparent(self):
        pt = chi_of_psi((0.5, 0.7), 0.3)
        assert absorption_rate(pt) == 0.0

    def test_resonant_gain_value(self):
        pt = chi_of_psi((-1.3325e-4j, 0.0), 0.0)
        assert absorption_rate(pt) == pytest.approx(8 * math.pi**2 * -1.3325e-4)
        assert absorption_rate(pt) == pytest.approx(-1.0522e-2, rel=1e-3)

    def test_pi_periodic(self):
        comps = (0.1 + 0.2j, 0.3 + 0.4j)
        for psi in (0.0, 0.4, 1.1):
            a = absorption_rate(chi_of_psi(comps, psi))
            b = absorption_rate(chi_of_psi(comps, psi + math.pi))
            assert a == pytest.approx(b, rel=1e-12)

    def test_matches_packaged_value(self):
        pt = chi_of_psi((0.1 + 0.2j, 0.3 - 0.1j), 0.7)
        assert absorption_rate(pt) == pytest.approx(pt.f_abs, rel=1e-15)


class TestDispersion:
    def test_vacuum(self):
        pt = chi_of_psi((0.0, 0.0), 0.2)
        d = dispersion(pt, 0.2)
        assert d.k2_exact == 1.0 and d.n_eff == 1.0 and d.phi_psi_ratio == -1.0

    def test_single_axis(self):
        pt = chi_of_psi((0.01 + 0.0j, 0.02), 0.0)
        d = dispersion(pt, 0.0)
        eps_x = 1 + 4 * math.pi * 0.01
        assert d.k2_exact == pytest.approx(eps_x, rel=1e-12)
        assert d.n_eff == pytest.approx(1 + 2 * math.pi * 0.01, rel=1e-12)

    def test_linearization_error_is_second_order(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            scale = 10.0 ** rng.uniform(-6, -3)
            cx, cy = rng.normal(size=2) * scale
            psi = rng.uniform(0, math.pi / 2)
            d = dispersion(chi_of_psi((complex(cx), complex(cy)), psi), psi)
            chi_mag = max(abs(cx), abs(cy))
            # the mismatch carries (4 pi)^2-scale coefficients
            assert abs(math.sqrt(d.k2_exact) - d.n_eff) < 200.0 * chi_mag ** 2


class TestResonantClosedForm:
    def test_parallel_value(self):
        val = im_chi_resonant_analytic(1.0, 0.01, 1e-4, 0.0)
        assert val == pytest.approx(-4e-4 / 3.0018, rel=1e-12)
        assert val < 0  # optical gain at parallel polarizations

    def test_rf_off_is_angle_free(self):
        base = im_chi_resonant_analytic(1.0, 0.0, 1e-4, 0.0)
        for psi in (0.2, 0.9, math.pi / 2):
            assert im_chi_resonant_analytic(1.0, 0.0, 1e-4, psi) == base

    def test_zero_at_transparency_angle(self):
        psi_star = non_raman_angle_analytic(1.0, 0.1, 1e-4)
        assert im_chi_resonant_analytic(1.0, 0.1, 1e-4, psi_star) == pytest.approx(
            0.0, abs=1e-19)


class TestTransparencyAngle:
    def test_reference_value(self):
        # required sin^2 comes out exactly 1e-2 for these parameters
        assert non_raman_angle_analytic(1.0, 0.1, 1e-4) == pytest.approx(
            math.asin(0.1), rel=1e-12)

    def test_strong_rf_limit(self):
        assert non_raman_angle_analytic(1.0, 100.0, 1e-4) < 1e-3

    def test_weak_rf_raises_with_rhs(self):
        with pytest.raises(NoTransparencyAngle, match="rf field too weak") as exc:
            non_raman_angle_analytic(1.0, 0.005, 1e-4)
        assert exc.value.rhs == pytest.approx(4.0, rel=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            non_raman_angle_analytic(0.0, 0.1, 1e-4)
        with pytest.raises(ValueError):
            non_raman_angle_analytic(1.0, 0.1, 0.0)


class TestChiComponents:
    def test_isotropic_without_rf(self):
        p = pol(scalar_rf=0.0)
        for delta in (0.0, 0.37, -1.2):
            cx, cy = chi_components(DriveConfig(omega_c=1.0), R, p, delta)
            assert abs(cx - cy) <= 1e-10 * abs(cx)

    def test_components_ignore_probe_angle(self):
        base = DriveConfig(omega_c=1.0)
        ref = chi_components(base, R, pol(psi=0.0), 0.2)
        for psi in (0.3, 1.1):
            got = chi_components(base, R, pol(psi=psi), 0.2)
            assert got[0] == pytest.approx(ref[0], rel=1e-12)
            assert got[1] == pytest.approx(ref[1], rel=1e-12)

    def test_matches_resonant_closed_form(self):
        cx, cy = chi_components(DriveConfig(omega_c=1.0), R, pol(), 0.0)
        ana0 = im_chi_resonant_analytic(1.0, 0.01, 1e-4, 0.0)
        assert cx.imag == pytest.approx(ana0, rel=1e-4)
        for psi in (0.4, 1.0):
            num = (cx * math.cos(psi) ** 2 + cy * math.sin(psi) ** 2).imag
            ana = im_chi_resonant_analytic(1.0, 0.01, 1e-4, psi)
            assert num == pytest.approx(ana, abs=1e-3 * abs(ana0))

    def test_probe_amplitude_cancels(self):
        a = chi_components(DriveConfig(omega_c=1.0), R, pol(e_amp=SQRT2 * 1e-3), 0.1)
        b = chi_components(DriveConfig(omega_c=1.0), R, pol(e_amp=SQRT2 * 5e-2), 0.1)
        assert a[0] == pytest.approx(b[0], rel=1e-10)
        assert a[1] == pytest.approx(b[1], rel=1e-10)

    def test_parallel_component_blind_to_rf(self):
        # the parallel response decouples from the rf drive entirely; the rf
        # imprint (quadratic at leading order) lives in the other component
        base = DriveConfig(omega_c=1.0)
        cx_off, cy_off = chi_components(base, R, pol(scalar_rf=0.0), 0.0)
        for eps in (1e-3, 0.1):
            cx, _ = chi_components(base, R, pol(scalar_rf=eps), 0.0)
            assert abs(cx - cx_off) < 1e-15

    def test_quadratic_rf_dependence_of_rf_component(self):
        base = DriveConfig(omega_c=1.0)
        _, cy_off = chi_components(base, R, pol(scalar_rf=0.0), 0.0)
        for eps in (5e-4, 1e-3):
            h1 = chi_components(base, R, pol(scalar_rf=eps), 0.0)[1] - cy_off
            h2 = chi_components(base, R, pol(scalar_rf=2 * eps), 0.0)[1] - cy_off
            ratio = h2 / h1
            assert abs(ratio - 4.0) < 0.2


class TestTransparencyAngleNumeric:
    def test_agrees_with_closed_form(self):
        psi_star = non_raman_angle_analytic(1.0, 0.1, 1e-4)
        root = non_raman_angle_numeric(DriveConfig(omega_c=1.0), R,
                                       pol(scalar_rf=0.1), (0.0, math.pi / 2))
        assert abs(root - psi_star) / psi_star < 0.01

    def test_root_satisfies_component_balance(self):
        root = non_raman_angle_numeric(DriveConfig(omega_c=1.0), R,
                                       pol(scalar_rf=0.1), (0.0, math.pi / 2))
        cx, cy = chi_components(DriveConfig(omega_c=1.0), R, pol(scalar_rf=0.1), 0.0)
        sin2 = -cx.imag / (cy.imag - cx.imag)
        assert math.sin(root) ** 2 == pytest.approx(sin2, abs=1e-6)

    def test_rf_off_has_no_root(self):
        with pytest.raises(ValueError, match="no non-Raman resonance"):
            non_raman_angle_numeric(DriveConfig(omega_c=1.0), R,
                                    pol(scalar_rf=0.0), (1e-6, math.pi / 2))

    def test_bad_bracket(self):
        with pytest.raises(ValueError, match="bracket"):
            non_raman_angle_numeric(DriveConfig(omega_c=1.0), R,
                                    pol(scalar_rf=0.1), (1.0, 0.5))


class TestSpectrumSweep:
    def test_order_and_fields(self):
        grid = [-0.2, 0.0, 0.2]
        pts = spectrum_sweep(DriveConfig(omega_c=1.0), R, pol(psi=0.4), grid)
        assert [pt.delta for pt in pts] == grid
        for pt in pts:
            expected = pt.chi_x * math.cos(0.4) ** 2 + pt.chi_y * math.sin(0.4) ** 2
            assert pt.chi_psi == pytest.approx(expected, rel=1e-12)
            assert pt.delta_chi == pt.chi_y - pt.chi_x

    def test_unsorted_grid_rejected(self):
        with pytest.raises(ValueError, match="sorted"):
            spectrum_sweep(DriveConfig(omega_c=1.0), R, pol(), [0.1, -0.1])

    def test_single_resonance_without_rf(self):
        grid = np.linspace(-0.2, 0.2, 41)
        pts = spectrum_sweep(DriveConfig(omega_c=4.0), R, pol(scalar_rf=0.0), grid)
        im = np.array([pt.chi_psi.imag for pt in pts])
        mins = [i for i in range(1, len(im) - 1)
                if im[i] < im[i - 1] and im[i] < im[i + 1]]
        assert len(mins) == 1
        assert abs(grid[mins[0]]) < 0.02
