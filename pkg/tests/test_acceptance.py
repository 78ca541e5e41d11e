"""Acceptance gate: one test per criterion, stated tolerances, one
pass/fail line each (run with -s to see them)."""

import time

import numpy as np
import pytest

from ckbackflow import (
    CKParams,
    GaussianPacket,
    SuperposedState,
    TwoParticleState,
    at_least_one_negative_probability,
    boson_fermion_initial_slope,
    current_density,
    erfc_complex,
    fidelity,
    find_backflow_intervals,
    left_probability,
    linear_potential_negative_momentum_probability,
    negative_momentum_probability,
    peak_probability_rise,
    quadrant_probabilities,
    superposed_amplitude,
    superposed_momentum_amplitude,
    two_particle_amplitude,
)
from ckbackflow.oracle import (
    GridSpec,
    adaptive_quadrature,
    propagate_ck,
    quadrant_quadrature_2d,
)

from pathlib import Path

from conftest import ALPHA, P0A, P0B, SIGMA_P, stretched_state

FIXTURE = Path(__file__).parent / "fixtures" / "erfc_reference.txt"


class _Criterion:
    """Times a criterion, prints its verdict line, enforces the budget."""

    def __init__(self, number: int, description: str, budget_s: float):
        self.number = number
        self.description = description
        self.budget_s = budget_s

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        verdict = "PASS" if exc_type is None else "FAIL"
        print(
            f"criterion {self.number} {verdict} ({elapsed:6.2f} s / "
            f"budget {self.budget_s:g} s): {self.description}"
        )
        if exc_type is None:
            assert elapsed < self.budget_s, (
                f"criterion {self.number} exceeded its runtime budget: "
                f"{elapsed:.2f} s >= {self.budget_s:g} s"
            )
        return False


def _reference_superposition(theta=np.pi, eta=0.0):
    a = GaussianPacket(0.0, P0A, SIGMA_P, eta)
    b = GaussianPacket(0.0, P0B, SIGMA_P, eta)
    return SuperposedState(a, b, ALPHA, theta)


def _pair(theta_chi=np.pi, theta_phi=1.01 * np.pi, symmetry=1):
    a = GaussianPacket(0.0, P0A, SIGMA_P)
    b = GaussianPacket(0.0, P0B, SIGMA_P)
    chi = SuperposedState(a, b, ALPHA, theta_chi)
    phi = SuperposedState(a, b, ALPHA, theta_phi)
    return TwoParticleState(chi, phi, symmetry)


def test_criterion_1_negative_momentum_probability():
    with _Criterion(1, "negative-momentum probability scale and constancy", 1.0):
        params = CKParams()
        for theta in (0.0, np.pi / 2, np.pi, 1.5 * np.pi):
            state = _reference_superposition(theta)
            value = negative_momentum_probability(state)
            assert 1e-12 < value < 1e-8
            # time-constancy: integrate the evolved canonical momentum
            # density at t = 0 and t = 10
            vals = []
            for t in (0.0, 10.0):
                v, _ = adaptive_quadrature(
                    lambda p: abs(
                        superposed_momentum_amplitude(state, params, p, t)
                    ) ** 2,
                    -np.inf, 0.0, abs_tol=1e-13, points=(-1.0, -0.2),
                )
                vals.append(v)
            assert abs(vals[1] - vals[0]) < 1e-12
            assert abs(vals[0] - value) < 1e-11


def test_criterion_2_single_gaussian_no_backflow():
    with _Criterion(2, "no backflow for single stretched Gaussians", 10.0):
        for eta in (0.0, 0.5, 1.0, 2.0):
            a = GaussianPacket(0.0, P0A, SIGMA_P, eta)
            b = GaussianPacket(0.0, P0B, SIGMA_P, eta)
            state = SuperposedState(a, b, 0.0, 0.0)
            for gamma in (0.0, 0.1, 0.3):
                params = CKParams(gamma=gamma)
                intervals = find_backflow_intervals(
                    lambda ts: left_probability(state, params, ts), 20.0, 1e-9
                )
                assert intervals == []


def test_criterion_3_interval_counts():
    with _Criterion(3, "2 intervals undamped, 1 with gamma = 0.3", 10.0):
        state = _reference_superposition()
        free = find_backflow_intervals(
            lambda ts: left_probability(state, CKParams(), ts), 10.0, 1e-9
        )
        assert len(free) >= 2
        damped = find_backflow_intervals(
            lambda ts: left_probability(state, CKParams(gamma=0.3), ts), 10.0, 1e-9
        )
        assert len(damped) == 1


def test_criterion_4_eta_monotonicity():
    with _Criterion(4, "backflow amount strictly decreasing in eta", 30.0):
        for gamma in (0.0, 0.3):
            params = CKParams(gamma=gamma)
            amounts = []
            for eta in (0.0, 0.5, 1.0, 2.0):
                state = stretched_state(eta)
                amounts.append(
                    peak_probability_rise(
                        lambda ts: left_probability(state, params, ts), 10.0
                    )
                )
            assert all(x > y for x, y in zip(amounts, amounts[1:]))


def test_criterion_5_boson_fermion_dichotomy():
    with _Criterion(5, "boson backflow, fermion none, slope signs", 60.0):
        boson = _pair(symmetry=1)
        fermion = _pair(symmetry=-1)
        params0 = CKParams()
        assert boson_fermion_initial_slope(boson, params0) < 0.0
        assert boson_fermion_initial_slope(fermion, params0) > 0.0
        for gamma in (0.0, 0.1, 0.2):
            params = CKParams(gamma=gamma)
            b_ivs = find_backflow_intervals(
                lambda ts: at_least_one_negative_probability(boson, params, ts),
                10.0, 1e-9,
            )
            f_ivs = find_backflow_intervals(
                lambda ts: at_least_one_negative_probability(fermion, params, ts),
                10.0, 1e-9,
            )
            assert len(b_ivs) >= 1
            assert f_ivs == []


def test_criterion_6_fidelity():
    with _Criterion(6, "fidelity unity/plateau and amount maximal at 1.9", 60.0):
        a = GaussianPacket(0.0, P0A, SIGMA_P)
        b = GaussianPacket(0.0, P0B, SIGMA_P)
        chi = SuperposedState(a, b, 1.9, np.pi)
        assert abs(fidelity(chi, SuperposedState(a, b, 1.9, np.pi)) - 1.0) < 1e-12
        plateau = fidelity(chi, SuperposedState(a, b, 50.0, np.pi))
        assert 0.78 <= plateau <= 0.80
        params = CKParams()
        amounts = {}
        for alpha_phi in (1.0, 1.9, 3.5):
            pair = TwoParticleState(
                chi, SuperposedState(a, b, alpha_phi, np.pi), 1
            )
            amounts[alpha_phi] = peak_probability_rise(
                lambda ts: at_least_one_negative_probability(pair, params, ts),
                10.0,
            )
        assert amounts[1.9] > amounts[1.0]
        assert amounts[1.9] > amounts[3.5]


def test_criterion_7_analytic_vs_oracle():
    with _Criterion(7, "grid propagator, quadrature and 2-D oracles", 300.0):
        state = _reference_superposition()
        grid = GridSpec(-400.0, 400.0, 1 << 14, 1e-2)
        for gamma in (0.0, 0.3):
            params = CKParams(gamma=gamma)
            for t in (1.0, 5.0, 10.0):
                prop = propagate_ck(
                    lambda x: superposed_amplitude(state, params, x, 0.0),
                    params, grid, t,
                )
                exact = superposed_amplitude(state, params, prop.x, t)
                l2 = np.sqrt(np.sum(np.abs(prop.values - exact) ** 2) * grid.dx)
                assert l2 <= 1e-8

        for gamma in (0.0, 0.3):
            params = CKParams(gamma=gamma)
            for eta in (0.0, 1.0):
                st = stretched_state(eta)
                for t in (0.5, 5.0):
                    closed = left_probability(st, params, t)
                    quad = left_probability(st, params, t, method="quadrature")
                    assert abs(closed - quad) <= 1e-10

        rng = np.random.default_rng(2468)
        a = GaussianPacket(0.0, P0A, SIGMA_P)
        b = GaussianPacket(0.0, P0B, SIGMA_P)
        params = CKParams()
        for _ in range(20):
            chi = SuperposedState(
                a, b, rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * np.pi)
            )
            phi = SuperposedState(
                a, b, rng.uniform(0.2, 3.0), rng.uniform(0.0, 2 * np.pi)
            )
            sym = 1 if rng.uniform() < 0.5 else -1
            if sym == -1 and 1.0 - fidelity(chi, phi) <= 1e-9:
                sym = 1
            pair = TwoParticleState(chi, phi, sym)
            t = rng.uniform(0.0, 5.0)
            pp = quadrant_probabilities(pair, params, t).pp
            span = max(P0A, P0B) * t + 15.0 * 20.0
            direct = quadrant_quadrature_2d(
                lambda x1, x2: np.abs(
                    two_particle_amplitude(pair, params, x1, x2, t)
                ) ** 2,
                span, span, n_nodes=400,
            )
            assert abs(pp - direct) <= 1e-8


def test_criterion_8_structural_identities():
    with _Criterion(8, "continuity, quadrant sum, Pauli node, monotone", 60.0):
        state = _reference_superposition()
        rng = np.random.default_rng(13579)
        h = 1e-5
        for _ in range(100):
            gamma = float(rng.choice([0.0, 0.1, 0.3]))
            params = CKParams(gamma=gamma)
            t = rng.uniform(0.05, 10.0)
            dp = (
                left_probability(state, params, t + h)
                - left_probability(state, params, t - h)
            ) / (2 * h)
            assert abs(dp + current_density(state, params, 0.0, t)) <= 1e-6

        boson = _pair(symmetry=1)
        fermion = _pair(symmetry=-1)
        for pair in (boson, fermion):
            for t in (0.0, 2.0, 8.0):
                q = quadrant_probabilities(pair, CKParams(), t)
                assert abs(q.pp + q.pn + q.np + q.nn - 1.0) <= 1e-10

        xs = rng.uniform(-30.0, 30.0, 50)
        for t in (0.0, 3.0):
            node = np.abs(
                two_particle_amplitude(fermion, CKParams(), xs, xs, t)
            )
            assert node.max() <= 1e-12

        packet = GaussianPacket(0.0, P0A, SIGMA_P)
        params = CKParams(gamma=0.2, g=0.1)
        ts = np.linspace(0.0, 10.0, 100)
        vals = linear_potential_negative_momentum_probability(packet, params, ts)
        assert np.all(np.diff(vals) <= 0.0)


def test_criterion_9_kernel_accuracy():
    with _Criterion(9, "erfc kernel vs arbitrary-precision fixture", 10.0):
        data = np.loadtxt(FIXTURE)
        assert data.shape[0] >= 10_000
        z = data[:, 0] + 1j * data[:, 1]
        ref = data[:, 2] + 1j * data[:, 3]
        got = erfc_complex(z)
        rel = np.abs(got - ref) / np.abs(ref)
        assert float(rel.max()) < 1e-13
