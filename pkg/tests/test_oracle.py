"""Oracle machinery: grid propagator and adaptive quadrature."""

import numpy as np
import pytest

from ckbackflow import (
    BoundaryContaminationError,
    CKParams,
    GaussianPacket,
    QuadratureAccuracyError,
    SuperposedState,
    effective_time,
    evolution_coefficients,
    half_line_gaussian_overlap,
    left_probability,
    momentum_amplitude,
    packet_amplitude,
    superposed_amplitude,
)
from ckbackflow.oracle import (
    GridSpec,
    adaptive_quadrature,
    propagate_ck,
    quadrant_quadrature_2d,
)

from conftest import SIGMA_P


def _textbook_free_gaussian(x, t, sigma_0, p0, x0=0.0):
    """Undamped spreading Gaussian, written independently of the package."""
    s = sigma_0 * (1.0 + 1j * t / (2.0 * sigma_0**2))
    return (
        (2.0 * np.pi) ** -0.25
        / np.sqrt(s)
        * np.exp(
            -((x - x0 - p0 * t) ** 2) / (4.0 * sigma_0 * s)
            + 1j * p0 * (x - x0 - p0 * t)
            + 1j * p0**2 * t / 2.0
        )
    )


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(1.0, -1.0, 1024, 0.01)
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, 1000, 0.01)  # not a power of two
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, 128, 0.01)  # too small
        with pytest.raises(ValueError):
            GridSpec(-1.0, 1.0, 1024, 0.0)

    def test_positions(self):
        grid = GridSpec(-2.0, 2.0, 256, 0.1)
        x = grid.positions()
        assert x.size == 256
        assert x[0] == -2.0
        assert x[1] - x[0] == pytest.approx(grid.dx)


class TestPropagator:
    def test_free_gaussian_matches_textbook(self):
        packet = GaussianPacket(x0=0.0, p0=1.4, sigma_p=SIGMA_P)
        params = CKParams()
        grid = GridSpec(-400.0, 400.0, 1 << 14, 1e-2)
        prop = propagate_ck(
            lambda x: _textbook_free_gaussian(x, 0.0, 10.0, 1.4), params, grid, 6.0
        )
        exact = _textbook_free_gaussian(prop.x, 6.0, 10.0, 1.4)
        l2 = np.sqrt(np.sum(np.abs(prop.values - exact) ** 2) * grid.dx)
        assert l2 < 1e-10

    def test_damped_superposition_matches_analytic(self, reference_state):
        grid = GridSpec(-400.0, 400.0, 1 << 14, 1e-2)
        for gamma in (0.0, 0.3):
            params = CKParams(gamma=gamma)
            prop = propagate_ck(
                lambda x: superposed_amplitude(reference_state, params, x, 0.0),
                params, grid, 10.0,
            )
            exact = superposed_amplitude(reference_state, params, prop.x, 10.0)
            l2 = np.sqrt(np.sum(np.abs(prop.values - exact) ** 2) * grid.dx)
            assert l2 < 1e-8

    def test_norm_preserved_through_stepping(self):
        packet = GaussianPacket(x0=0.0, p0=1.0, sigma_p=0.05)
        params = CKParams(gamma=0.2, g=0.05)
        grid = GridSpec(-400.0, 400.0, 1 << 13, 1e-3)
        prop = propagate_ck(
            lambda x: packet_amplitude(packet, CKParams(gamma=0.2), x, 0.0),
            params, grid, 1.0,
            potential=lambda x: -params.mass * params.g * x,
        )
        assert prop.norm() == pytest.approx(1.0, abs=1e-12)

    def test_linear_potential_momentum_centroid(self):
        # physical momentum centroid against the closed-form p_t
        packet = GaussianPacket(x0=0.0, p0=1.0, sigma_p=0.05)
        params = CKParams(gamma=0.2, g=0.05)
        grid = GridSpec(-400.0, 400.0, 1 << 13, 1e-3)
        t_final = 2.0
        prop = propagate_ck(
            lambda x: packet_amplitude(packet, CKParams(gamma=0.2), x, 0.0),
            params, grid, t_final,
            potential=lambda x: -params.mass * params.g * x,
        )
        p = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
        psi_p = np.fft.fft(prop.values)
        weights = np.abs(psi_p) ** 2
        p_mean = np.sum(p * weights) / np.sum(weights)
        expect = evolution_coefficients(packet, params, t_final).p_t
        physical = np.exp(-2.0 * params.gamma * t_final) * p_mean
        assert physical == pytest.approx(expect, abs=1e-8)

    def test_linear_potential_momentum_amplitude_with_phases(self):
        # full complex comparison of the propagated state against the
        # closed-form momentum amplitude: validates center, width and the
        # action phase (including its g-dependent terms) together
        packet = GaussianPacket(x0=0.5, p0=1.0, sigma_p=0.05, eta=0.4)
        params = CKParams(gamma=0.2, g=0.05)
        grid = GridSpec(-400.0, 400.0, 1 << 12, 5e-4)
        t_final = 2.0
        prop = propagate_ck(
            lambda x: packet_amplitude(packet, CKParams(gamma=0.2), x, 0.0),
            params, grid, t_final,
            potential=lambda x: -params.mass * params.g * x,
        )
        p = 2.0 * np.pi * np.fft.fftfreq(grid.n_points, d=grid.dx)
        # continuum transform: psi~(p_k) = dx/sqrt(2 pi) e^{-i p_k x_0} FFT`
        psi_p = (
            np.fft.fft(prop.values)
            * grid.dx / np.sqrt(2.0 * np.pi)
            * np.exp(-1j * p * prop.x[0])
        )
        exact = momentum_amplitude(packet, params, p, t_final)
        mask = np.abs(p - 1.0) < 1.0
        err = np.abs(psi_p[mask] - exact[mask])
        assert err.max() < 1e-6

    def test_second_order_time_convergence(self):
        # self-convergence of the Strang splitting: halving t_step cuts
        # the error by ~4
        packet = GaussianPacket(x0=0.0, p0=1.0, sigma_p=0.05)
        params = CKParams(gamma=0.15, g=0.08)
        pot = lambda x: -params.mass * params.g * x

        def solve(dt):
            grid = GridSpec(-400.0, 400.0, 1 << 12, dt)
            return propagate_ck(
                lambda x: packet_amplitude(packet, CKParams(gamma=0.15), x, 0.0),
                params, grid, 2.0, potential=pot,
            )

        ref = solve(0.0025)
        dx = 800.0 / (1 << 12)
        err = []
        for dt in (0.08, 0.04, 0.02):
            got = solve(dt)
            err.append(np.sqrt(np.sum(np.abs(got.values - ref.values) ** 2) * dx))
        assert err[0] / err[1] == pytest.approx(4.0, rel=0.2)
        assert err[1] / err[2] == pytest.approx(4.0, rel=0.3)

    def test_boundary_contamination_raises(self):
        packet = GaussianPacket(x0=0.0, p0=1.4, sigma_p=0.05)
        params = CKParams()
        small = GridSpec(-40.0, 40.0, 256, 1e-2)
        with pytest.raises(BoundaryContaminationError):
            propagate_ck(
                lambda x: packet_amplitude(packet, params, x, 0.0),
                params, small, 5.0,
            )

    def test_interpolation_calls(self):
        packet = GaussianPacket(x0=0.0, p0=0.5, sigma_p=0.05)
        params = CKParams()
        grid = GridSpec(-400.0, 400.0, 1 << 13, 1e-2)
        prop = propagate_ck(
            lambda x: packet_amplitude(packet, params, x, 0.0), params, grid, 1.0
        )
        xs = np.array([-3.3, 0.1, 7.7])
        exact = packet_amplitude(packet, params, xs, 1.0)
        assert np.max(np.abs(prop(xs) - exact)) < 1e-8

    def test_negative_time_rejected(self):
        packet = GaussianPacket(x0=0.0, p0=0.5, sigma_p=0.05)
        params = CKParams()
        grid = GridSpec(-400.0, 400.0, 1024, 1e-2)
        with pytest.raises(ValueError):
            propagate_ck(
                lambda x: packet_amplitude(packet, params, x, 0.0),
                params, grid, -1.0,
            )


class TestAdaptiveQuadrature:
    def test_standard_normal(self):
        val, err = adaptive_quadrature(
            lambda x: np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi),
            -np.inf, np.inf, abs_tol=1e-12, points=(0.0,),
        )
        assert val == pytest.approx(1.0, abs=1e-12)
        assert err <= 1e-12

    def test_complementarity_with_left_probability(self, reference_state):
        params = CKParams(gamma=0.1)
        t = 5.0
        val, _ = adaptive_quadrature(
            lambda x: abs(superposed_amplitude(reference_state, params, x, t)) ** 2,
            0.0, np.inf, abs_tol=1e-11, points=(30.0, 80.0),
        )
        assert val == pytest.approx(
            1.0 - left_probability(reference_state, params, t), abs=1e-10
        )

    def test_oscillatory_cross_term_vs_overlap(self):
        c1 = 0.02 + 0.3j
        c2 = 0.05 - 0.1j
        m1 = 1.0 + 2.5j
        m2 = -0.5 + 1.0j
        analytic = half_line_gaussian_overlap(c1, m1, c2, m2)
        n1 = (2 * c1.real / np.pi) ** 0.25
        n2 = (2 * c2.real / np.pi) ** 0.25
        val, _ = adaptive_quadrature(
            lambda x: np.conj(n1 * np.exp(-c1 * (x - m1) ** 2))
            * (n2 * np.exp(-c2 * (x - m2) ** 2)),
            0.0, np.inf, abs_tol=1e-11,
        )
        assert abs(val - analytic) < 1e-10

    def test_error_estimate_conservative(self):
        cases = [
            (lambda x: np.exp(-x * x), -np.inf, np.inf, np.sqrt(np.pi)),
            (lambda x: x * x * np.exp(-x), 0.0, np.inf, 2.0),
            (lambda x: np.sin(x) ** 2 * np.exp(-0.5 * x), 0.0, np.inf, 8.0 / 17.0 * 0.5 + 0.0),
        ]
        # exact third value: int sin^2(x) e^{-x/2} = 1/2 * (1/(1/2) - ... ) use
        # closed form: int_0^inf sin^2(x) e^{-a x} dx = 2/(a(a^2+4)); a = 1/2
        cases[2] = (
            lambda x: np.sin(x) ** 2 * np.exp(-0.5 * x),
            0.0, np.inf,
            2.0 / (0.5 * (0.25 + 4.0)),
        )
        for f, a, b, truth in cases:
            val, err = adaptive_quadrature(f, a, b, abs_tol=1e-9)
            assert abs(val - truth) <= max(err, 1e-15)

    def test_unreachable_tolerance_raises_with_estimate(self):
        with pytest.raises(QuadratureAccuracyError) as info:
            adaptive_quadrature(
                lambda x: np.exp(-x * x), -np.inf, np.inf, abs_tol=1e-300
            )
        assert info.value.best_estimate == pytest.approx(np.sqrt(np.pi), rel=1e-10)
        assert info.value.error_estimate > 0.0

    def test_complex_integrand(self):
        val, _ = adaptive_quadrature(
            lambda x: np.exp(1j * x - x * x), -np.inf, np.inf, abs_tol=1e-12
        )
        expect = np.sqrt(np.pi) * np.exp(-0.25)
        assert abs(val - expect) < 1e-12

    def test_bad_tolerance(self):
        with pytest.raises(ValueError):
            adaptive_quadrature(lambda x: x, 0.0, 1.0, abs_tol=0.0)


class TestQuadrantQuadrature:
    def test_separable_gaussian_quarter(self):
        val = quadrant_quadrature_2d(
            lambda x, y: np.exp(-(x * x + y * y) / 2.0) / (2 * np.pi),
            30.0, 30.0, n_nodes=200,
        )
        assert val == pytest.approx(0.25, abs=1e-12)
