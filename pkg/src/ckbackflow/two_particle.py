"""Symmetrized two-identical-particle states and their quadrant probabilities.

Boson (+) and fermion (-) states are built from two one-particle
superpositions chi and phi that share the same component packets:

    Psi_pm(x1, x2, t) = n_pm [chi(x1,t) phi(x2,t) +/- phi(x1,t) chi(x2,t)],
    n_pm = 1/sqrt(2 (1 +/- |<chi|phi>|^2)).

Because the pair density factorizes into one-particle half-line integrals,
every quadrant probability reduces to

    P_pm,pp = n_pm^2 (2 A_chi A_phi +/- 2 |B|^2),

with A the one-particle positive-half-line populations and B the
positive-half-line cross integral of conj(chi) phi; the nn and pn
quadrants use the mirrored integrals.  All of these go through the same
scaled complex-erfc machinery as the one-particle module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import (
    CKParams,
    SuperposedState,
    superposed_amplitude,
    _momentum_pair_quadratic,
    _position_half_line_pairs,
    _check_time,
    _maybe_scalar,
    _require_free,
)
from .errors import UnsupportedConfigurationError
from .special_functions import gaussian_half_line_integral

__all__ = [
    "TwoParticleState",
    "QuadrantProbabilities",
    "overlap",
    "fidelity",
    "quadrant_probabilities",
    "at_least_one_negative_probability",
    "momentum_quadrant_probability",
    "boson_fermion_initial_slope",
    "two_particle_amplitude",
]

_PAULI_GAP = 1e-12


def _check_compatible(chi: SuperposedState, phi: SuperposedState) -> None:
    a_c, a_p = chi.packet_a, phi.packet_a
    if a_c.sigma_p != a_p.sigma_p or a_c.eta != a_p.eta:
        raise UnsupportedConfigurationError(
            "chi and phi must be built from packets sharing sigma_p and eta"
        )
    if a_c.x0 != a_p.x0:
        raise UnsupportedConfigurationError(
            "chi and phi must be built from packets sharing the center x0"
        )


def _check_shared_packets(chi: SuperposedState, phi: SuperposedState) -> None:
    """The factorized quadrant identities reuse one set of pairwise packet
    integrals, which requires chi and phi to share their component packets
    outright (they may differ only in alpha and theta)."""
    if chi.packet_a != phi.packet_a or chi.packet_b != phi.packet_b:
        raise UnsupportedConfigurationError(
            "quadrant probabilities require chi and phi built from the same "
            "two packets (only alpha and theta may differ)"
        )


def overlap(chi: SuperposedState, phi: SuperposedState) -> complex:
    """One-particle overlap <chi|phi>, independent of time.

    Computed from the four pairwise packet overlaps; all packets share
    (sigma_p, eta, x0), so each pairwise overlap is the real Gaussian
    suppression factor exp(-dp^2 (1+eta^2)/(8 sigma_p^2)).
    """
    _check_compatible(chi, phi)
    sigma_p = chi.packet_a.sigma_p
    eta = chi.packet_a.eta

    def weight(p_u: float, p_v: float) -> float:
        dp = p_u - p_v
        return math.exp(-dp * dp * (1.0 + eta * eta) / (8.0 * sigma_p * sigma_p))

    w_aa = weight(chi.packet_a.p0, phi.packet_a.p0)
    w_ab = weight(chi.packet_a.p0, phi.packet_b.p0)
    w_ba = weight(chi.packet_b.p0, phi.packet_a.p0)
    w_bb = weight(chi.packet_b.p0, phi.packet_b.p0)

    a_c, t_c = chi.alpha, chi.theta
    a_p, t_p = phi.alpha, phi.theta
    value = (
        w_aa
        + a_p * np.exp(1j * t_p) * w_ab
        + a_c * np.exp(-1j * t_c) * w_ba
        + a_c * a_p * np.exp(1j * (t_p - t_c)) * w_bb
    )
    return complex(chi.norm * phi.norm * value)


def fidelity(chi: SuperposedState, phi: SuperposedState) -> float:
    """Squared overlap F = |<chi|phi>|^2, clipped into [0, 1]."""
    return float(min(1.0, abs(overlap(chi, phi)) ** 2))


@dataclass(frozen=True)
class TwoParticleState:
    """Symmetrized pair of one-particle superpositions.

    symmetry +1 builds the boson state, -1 the fermion state.  The
    normalization 1/sqrt(2 (1 +/- F)) is derived at construction; the
    fermion state requires F < 1 (the antisymmetric combination of
    identical states vanishes).
    """

    chi: SuperposedState
    phi: SuperposedState
    symmetry: int
    norm_pm: float = field(init=False)
    _fidelity: float = field(init=False, repr=False)

    def __post_init__(self):
        if self.symmetry not in (1, -1):
            raise ValueError("symmetry must be +1 (boson) or -1 (fermion)")
        _check_compatible(self.chi, self.phi)
        f = fidelity(self.chi, self.phi)
        if self.symmetry == -1 and 1.0 - f <= _PAULI_GAP:
            raise UnsupportedConfigurationError(
                "antisymmetric state of (numerically) identical one-particle "
                f"states vanishes: 1 - F = {1.0 - f:.3e}"
            )
        object.__setattr__(self, "_fidelity", f)
        object.__setattr__(
            self, "norm_pm", 1.0 / math.sqrt(2.0 * (1.0 + self.symmetry * f))
        )

    @property
    def pair_fidelity(self) -> float:
        return self._fidelity


def _one_particle_half_line(state, params, t, negative_axis):
    """A = integral of |state|^2 over the half line, array over t."""
    i_aa, i_bb, i_ab = _position_half_line_pairs(state, params, t, negative_axis)
    phase = state.alpha * np.exp(1j * state.theta)
    total = (
        np.real(i_aa)
        + state.alpha ** 2 * np.real(i_bb)
        + 2.0 * np.real(phase * i_ab)
    )
    return state.norm ** 2 * total


def _cross_half_line(chi, phi, params, t, negative_axis):
    """B = integral of conj(chi) phi over the half line, array over t.

    chi and phi share packets, so the same pairwise integrals appear with
    different amplitude weights; I_ba is the conjugate of I_ab.
    """
    i_aa, i_bb, i_ab = _position_half_line_pairs(chi, params, t, negative_axis)
    i_ba = np.conj(i_ab)
    a_c, t_c = chi.alpha, chi.theta
    a_p, t_p = phi.alpha, phi.theta
    value = (
        i_aa
        + a_p * np.exp(1j * t_p) * i_ab
        + a_c * np.exp(-1j * t_c) * i_ba
        + a_c * a_p * np.exp(1j * (t_p - t_c)) * i_bb
    )
    return chi.norm * phi.norm * value


def _quadrant_components(state: TwoParticleState, params: CKParams, t):
    """(pp, pn, nn) arrays over t from the factorized identity."""
    chi, phi, s = state.chi, state.phi, state.symmetry
    _check_shared_packets(chi, phi)
    n2 = state.norm_pm ** 2
    a_chi_p = _one_particle_half_line(chi, params, t, False)
    a_phi_p = _one_particle_half_line(phi, params, t, False)
    a_chi_n = _one_particle_half_line(chi, params, t, True)
    a_phi_n = _one_particle_half_line(phi, params, t, True)
    b_p = _cross_half_line(chi, phi, params, t, False)
    b_n = _cross_half_line(chi, phi, params, t, True)

    pp = n2 * (2.0 * a_chi_p * a_phi_p + s * 2.0 * np.abs(b_p) ** 2)
    nn = n2 * (2.0 * a_chi_n * a_phi_n + s * 2.0 * np.abs(b_n) ** 2)
    pn = n2 * (
        a_chi_p * a_phi_n
        + a_phi_p * a_chi_n
        + s * 2.0 * np.real(b_p * np.conj(b_n))
    )
    return pp, pn, nn


@dataclass(frozen=True)
class QuadrantProbabilities:
    """Probabilities of the four (sign(x1), sign(x2)) quadrants.

    pn == np exactly (exchange symmetry of |Psi|^2); the four sum to 1.
    """

    pp: float
    pn: float
    np: float
    nn: float


def quadrant_probabilities(
    state: TwoParticleState, params: CKParams, t
) -> QuadrantProbabilities:
    """Quadrant probabilities of the pair position measurement at time t."""
    _require_free(params, "quadrant_probabilities")
    t_arr = _check_time(t)
    if t_arr.ndim != 0:
        raise ValueError("quadrant_probabilities takes a scalar time")
    pp, pn, nn = _quadrant_components(state, params, t_arr)
    pp = float(np.clip(pp, 0.0, 1.0))
    pn = float(np.clip(pn, 0.0, 1.0))
    nn = float(np.clip(nn, 0.0, 1.0))
    return QuadrantProbabilities(pp=pp, pn=pn, np=pn, nn=nn)


def at_least_one_negative_probability(state: TwoParticleState, params: CKParams, t):
    """Probability that at least one particle sits in x < 0 at time t.

    1 - P_pp; equals nn + 2 pn by normalization.  Accepts array t.
    """
    _require_free(params, "at_least_one_negative_probability")
    t_arr = _check_time(t)
    pp, _, _ = _quadrant_components(state, params, t_arr)
    return _maybe_scalar(np.clip(1.0 - pp, 0.0, 1.0))


def momentum_quadrant_probability(state: TwoParticleState, t) -> float:
    """Probability of at least one negative outcome in a joint momentum
    measurement.

    Time-independent for free motion: the free kinetic phases cancel
    inside every pairwise product, so the canonical momentum density is
    frozen at its initial shape.  The time argument is validated and the
    initial-time value returned.
    """
    t_arr = _check_time(t)
    if t_arr.ndim != 0:
        raise ValueError("momentum_quadrant_probability takes a scalar time")
    chi, phi, s = state.chi, state.phi, state.symmetry
    _check_shared_packets(chi, phi)

    def half_line_pairs(st):
        out = {}
        for u, v in (("a", "a"), ("b", "b"), ("a", "b")):
            a, b, c0, pref = _momentum_pair_quadratic(st, u, v, False)
            out[u + v] = pref * gaussian_half_line_integral(a, b, c0)
        return out

    pairs = half_line_pairs(chi)

    def population(st):
        phase = st.alpha * np.exp(1j * st.theta)
        return st.norm ** 2 * (
            np.real(pairs["aa"])
            + st.alpha ** 2 * np.real(pairs["bb"])
            + 2.0 * np.real(phase * pairs["ab"])
        )

    a_chi = population(chi)
    a_phi = population(phi)
    a_c, t_c = chi.alpha, chi.theta
    a_p, t_p = phi.alpha, phi.theta
    b = chi.norm * phi.norm * (
        pairs["aa"]
        + a_p * np.exp(1j * t_p) * pairs["ab"]
        + a_c * np.exp(-1j * t_c) * np.conj(pairs["ab"])
        + a_c * a_p * np.exp(1j * (t_p - t_c)) * pairs["bb"]
    )
    pp = state.norm_pm ** 2 * (2.0 * a_chi * a_phi + s * 2.0 * abs(b) ** 2)
    return float(np.clip(1.0 - pp, 0.0, 1.0))


def boson_fermion_initial_slope(state: TwoParticleState, params: CKParams) -> float:
    """d P_pp/dt at t = 0 by one-sided finite differences.

    Second-order forward stencil with step 1e-4 plus one Richardson
    extrapolation level; negative for the boson state at the reference
    parameters (first backflow interval), positive for the fermion one.
    """
    _require_free(params, "boson_fermion_initial_slope")
    h = 1e-4

    def pp_at(ts: float) -> float:
        val, _, _ = _quadrant_components(state, params, np.asarray(ts, dtype=float))
        return float(val)

    p0 = pp_at(0.0)

    def forward(step: float) -> float:
        return (-3.0 * p0 + 4.0 * pp_at(step) - pp_at(2.0 * step)) / (2.0 * step)

    d_h = forward(h)
    d_h2 = forward(0.5 * h)
    return (4.0 * d_h2 - d_h) / 3.0


def two_particle_amplitude(state: TwoParticleState, params: CKParams, x1, x2, t):
    """Symmetrized pair amplitude Psi_pm(x1, x2, t); x1, x2 broadcast."""
    chi_1 = np.asarray(superposed_amplitude(state.chi, params, x1, t))
    chi_2 = np.asarray(superposed_amplitude(state.chi, params, x2, t))
    phi_1 = np.asarray(superposed_amplitude(state.phi, params, x1, t))
    phi_2 = np.asarray(superposed_amplitude(state.phi, params, x2, t))
    out = state.norm_pm * (chi_1 * phi_2 + state.symmetry * phi_1 * chi_2)
    return _maybe_scalar(out)
