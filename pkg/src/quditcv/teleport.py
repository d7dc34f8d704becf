"""Closed-form split/truncate/recombine teleportation of a bosonic mode.

A single-mode state is fanned out over N modes on a balanced splitter, each
mode is sent through an ideal (d+1)-dimensional teleporter (which keeps at
most d photons), the modes are recombined, and the auxiliary outputs are
post-selected on vacuum.  The surviving map is diagonal in the Fock basis:
amplitude c_k is multiplied by the gain

    g(k) = W(N, k, d) * k! / N^k

with W the restricted-composition weight from :mod:`quditcv.combinatorics`.
g(k) = 1 exactly for k <= d, and g(k) = 0 for k > N*d, so the pipeline acts
as a gentle photon-number filter whose distortion shrinks as N grows.

Success probability is the squared norm that survives the filter; fidelity
for the two-mode squeezed (EPR) input is reported as the plain state
overlap, with the squared variant exposed alongside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .combinatorics import restricted_weight, restricted_weight_log

__all__ = [
    "EprOutcome",
    "FockVector",
    "SchemeParams",
    "SqueezingParams",
    "TeleportOutcome",
    "coherent_fock",
    "conventional_cv_fidelity",
    "fock_gain",
    "squeezing_from_chi",
    "squeezing_from_r",
    "squeezing_from_vs",
    "state_fidelity",
    "teleport_coherent",
    "teleport_epr",
    "teleport_state",
]

_EXACT_GAIN_LIMIT = 60  # switch fock_gain to the log path past this many slots
_COHERENT_TAIL = 1e-12


@dataclass(frozen=True)
class SchemeParams:
    """Scheme geometry: N modes, at most d photons kept per mode."""

    num_modes: int
    photon_cutoff: int

    def __post_init__(self) -> None:
        if self.num_modes < 1:
            raise ValueError(f"num_modes must be >= 1, got {self.num_modes}")
        if self.photon_cutoff < 1:
            raise ValueError(f"photon_cutoff must be >= 1, got {self.photon_cutoff}")

    @property
    def max_photons(self) -> int:
        """Largest total photon number that can survive the pipeline (N*d)."""
        return self.num_modes * self.photon_cutoff


@dataclass(frozen=True, eq=False)
class FockVector:
    """Single-mode pure state: complex amplitudes over photon numbers 0..cutoff."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("amplitudes must form a non-empty 1-d sequence")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def cutoff(self) -> int:
        return len(self.amplitudes) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def normalized(self) -> "FockVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amplitudes / n)


@dataclass(frozen=True)
class TeleportOutcome:
    """Post-selected output state and the probability of reaching it."""

    state: FockVector
    success_probability: float

    def __post_init__(self) -> None:
        if not 0.0 < self.success_probability <= 1.0:
            raise ValueError(
                f"success probability must lie in (0, 1], got {self.success_probability}"
            )


@dataclass(frozen=True)
class SqueezingParams:
    """Two-mode squeezing strength in its three equivalent parameterizations.

    r is the squeezing parameter, chi = tanh(r), and v_s = (1+chi)/(1-chi)
    is the variance ratio.  The trio must be mutually consistent; use the
    squeezing_from_* constructors rather than filling fields by hand.
    """

    r: float
    chi: float
    v_s: float

    def __post_init__(self) -> None:
        if not (self.r >= 0.0 and 0.0 <= self.chi < 1.0 and self.v_s >= 1.0):
            raise ValueError(f"squeezing parameters out of range: {self}")
        if abs(math.tanh(self.r) - self.chi) > 1e-12:
            raise ValueError(f"chi is inconsistent with r: {self}")
        if abs((1.0 + self.chi) / (1.0 - self.chi) - self.v_s) > 1e-12 * max(1.0, self.v_s):
            raise ValueError(f"v_s is inconsistent with chi: {self}")


def squeezing_from_chi(chi: float) -> SqueezingParams:
    if not 0.0 <= chi < 1.0:
        raise ValueError(f"chi must lie in [0, 1), got {chi}")
    return SqueezingParams(r=math.atanh(chi), chi=chi, v_s=(1.0 + chi) / (1.0 - chi))


def squeezing_from_vs(v_s: float) -> SqueezingParams:
    if v_s < 1.0:
        raise ValueError(f"v_s must be >= 1, got {v_s}")
    return squeezing_from_chi((v_s - 1.0) / (v_s + 1.0))


def squeezing_from_r(r: float) -> SqueezingParams:
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    return squeezing_from_chi(math.tanh(r))


def fock_gain(k: int, params: SchemeParams) -> float:
    """Amplitude gain the pipeline applies to the Fock state |k>.

    Exactly 1 for k <= d, exactly 0 beyond N*d, and strictly between 0 and 1
    in the window where truncation bites.  Computed through the exact
    rational weight table when feasible, otherwise in log space.
    """
    if k < 0:
        raise ValueError(f"photon number cannot be negative, got {k}")
    n, d = params.num_modes, params.photon_cutoff
    if k > n * d:
        return 0.0
    if k <= d:
        return 1.0
    if n * d <= _EXACT_GAIN_LIMIT:
        weight = restricted_weight(n, k, d).value
        return float(weight * math.factorial(k) / Fraction(n) ** k)
    log_gain = restricted_weight_log(n, k, d) + math.lgamma(k + 1) - k * math.log(n)
    # exp can overshoot the exact bound g <= 1 by an ulp
    return min(1.0, math.exp(log_gain))


def teleport_state(state: FockVector, params: SchemeParams) -> TeleportOutcome:
    """Send an arbitrary (pre-truncated, normalized) Fock vector through.

    The output keeps amplitudes up to min(cutoff, N*d), scaled by the gain
    and renormalized; the success probability is sum_k |c_k|^2 g(k)^2.

    Raises:
        ValueError: "vanishing state" when no amplitude survives the filter.
    """
    if not state.is_normalized(1e-9):
        raise ValueError("teleport_state requires a normalized input")
    kmax = min(state.cutoff, params.max_photons)
    gains = np.array([fock_gain(k, params) for k in range(kmax + 1)])
    scaled = state.amplitudes[: kmax + 1] * gains
    p_suc = float(np.sum(np.abs(scaled) ** 2))
    if p_suc <= 0.0:
        raise ValueError("vanishing state: no amplitude survives the photon-number filter")
    return TeleportOutcome(FockVector(scaled / math.sqrt(p_suc)), min(p_suc, 1.0))


def _poisson_tail_bound(mean: float, cutoff: int) -> float:
    """Upper bound on the Poisson(mean) mass above `cutoff` (geometric-ratio bound)."""
    if mean <= 0.0:
        return 0.0
    if cutoff + 2 <= mean:
        return 1.0
    log_term = -mean + (cutoff + 1) * math.log(mean) - math.lgamma(cutoff + 2)
    return math.exp(log_term) / (1.0 - mean / (cutoff + 2))


def coherent_fock(alpha: complex, cutoff: int) -> FockVector:
    """Coherent-state amplitudes c_k = e^{-|a|^2/2} a^k / sqrt(k!) up to cutoff.

    Raises:
        ValueError: "cutoff too small" when the discarded photon-number tail
            is not provably below 1e-12.
    """
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    mean = abs(alpha) ** 2
    if _poisson_tail_bound(mean, cutoff) >= _COHERENT_TAIL:
        raise ValueError(
            f"cutoff too small: the photon-number tail beyond {cutoff} is not "
            f"below {_COHERENT_TAIL:g} for |alpha|^2 = {mean:.6g}"
        )
    if mean == 0.0:
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[0] = 1.0
        return FockVector(amps)
    k = np.arange(cutoff + 1)
    log_factorial = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, cutoff + 1)))))
    magnitude = np.exp(-0.5 * mean + 0.5 * (k * math.log(mean) - log_factorial))
    phase = alpha / abs(alpha)
    return FockVector(magnitude * phase**k)


def _coherent_cutoff(mean: float, floor: int) -> int:
    cutoff = max(floor, math.ceil(mean))
    while _poisson_tail_bound(mean, cutoff) >= _COHERENT_TAIL:
        cutoff += 1
    return cutoff


def teleport_coherent(alpha: complex, params: SchemeParams) -> TeleportOutcome:
    """Teleport a coherent state, choosing a cutoff that is safely past N*d."""
    cutoff = _coherent_cutoff(abs(alpha) ** 2, params.max_photons)
    return teleport_state(coherent_fock(alpha, cutoff), params)


class EprOutcome(NamedTuple):
    """Result of sending one arm of a two-mode squeezed vacuum through."""

    schmidt: np.ndarray
    success_probability: float
    fidelity: float

    @property
    def fidelity_squared(self) -> float:
        """Squared-overlap convention for callers who define fidelity that way."""
        return self.fidelity**2


def teleport_epr(squeeze: SqueezingParams, params: SchemeParams) -> EprOutcome:
    """One arm of sqrt(1-chi^2) sum_k chi^k |k,k> through the pipeline.

    Returns the Schmidt coefficients of the post-selected state (their
    squares sum to one), the success probability

        P = (1 - chi^2) * sum_k chi^{2k} g(k)^2,

    and the overlap fidelity with the untouched input,

        f = (1 - chi^2) / sqrt(P) * sum_k chi^{2k} g(k),

    both sums running over the surviving window k = 0..N*d.
    """
    chi = squeeze.chi
    k = np.arange(params.max_photons + 1)
    gains = np.array([fock_gain(int(kk), params) for kk in k])
    chi_pow = chi ** k.astype(float)
    p_suc = (1.0 - chi**2) * float(np.sum(chi_pow**2 * gains**2))
    fidelity = (1.0 - chi**2) / math.sqrt(p_suc) * float(np.sum(chi_pow**2 * gains))
    schmidt = math.sqrt(1.0 - chi**2) * chi_pow * gains / math.sqrt(p_suc)
    return EprOutcome(schmidt, min(p_suc, 1.0), min(fidelity, 1.0))


def conventional_cv_fidelity(r: float) -> float:
    """Coherent-state fidelity 1/(1 + e^{-2r}) of gain-matched CV teleportation."""
    if r < 0.0:
        raise ValueError(f"r must be >= 0, got {r}")
    return 1.0 / (1.0 + math.exp(-2.0 * r))


def state_fidelity(a: FockVector, b: FockVector) -> float:
    """|<a|b>| for normalized vectors; the shorter one is zero-padded."""
    size = max(len(a.amplitudes), len(b.amplitudes))
    pa = np.zeros(size, dtype=complex)
    pb = np.zeros(size, dtype=complex)
    pa[: len(a.amplitudes)] = a.amplitudes
    pb[: len(b.amplitudes)] = b.amplitudes
    return float(abs(np.vdot(pa, pb)))
