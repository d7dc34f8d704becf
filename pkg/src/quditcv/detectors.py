"""Imperfect photon counting and scheme-efficiency comparison.

A detector with efficiency eta and dark-count rate nu registers N_c clicks
on the Fock state |m> with probability

    w(N_c, m) = sum_{n=0}^{min(N_c, m)}  e^{-nu} nu^{N_c - n} / (N_c - n)!
                * C(m, n) eta^n (1 - eta)^{m - n}

(real detections n binomially thinned by eta, the remaining clicks dark
counts).  The operators are diagonal in the Fock basis, so POVM elements
are stored as per-level weight vectors.

The comparison half scores two teleportation strategies by detection
success: scheme one uses 2N single-photon detectors over N qubit channels,
scheme two uses N photon-number-resolving modules.  The matched-fidelity
benchmark pits N = 11 qubit channels against N = 3 quartit modules, each
quartit module succeeding with probability 0.18 and needing three
number-resolving detections of effective efficiency xi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DetectorModel",
    "INTERFEROMETER_SUCCESS",
    "PovmElement",
    "SchemeEfficiencies",
    "advantage_region",
    "apd_povm",
    "pnr_povm",
    "povm_completeness_defect",
    "povm_element",
    "scheme1_success",
    "scheme2_success",
]

# success probability of one linear-optics quartit teleportation module
INTERFEROMETER_SUCCESS = 0.18

# matched-fidelity channel counts: 11 qubit channels vs 3 quartit modules
_QUBIT_CHANNELS = 11
_QUARTIT_MODULES = 3

_SCHEME1_MODELS = ("deterministic", "linear-optics")
_SCHEME2_MODELS = ("generic", "quartit-interferometer")


@dataclass(frozen=True)
class DetectorModel:
    """Detection efficiency eta in [0, 1], mean dark counts nu >= 0 per gate."""

    eta: float
    nu: float = 0.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"efficiency must lie in [0, 1], got {self.eta}")
        if self.nu < 0.0:
            raise ValueError(f"dark-count rate must be >= 0, got {self.nu}")


@dataclass(frozen=True, eq=False)
class PovmElement:
    """Diagonal POVM element: weight per Fock level |m><m| up to a cutoff.

    ``clicks`` is the registered count; None marks the closure element that
    absorbs every unresolved count.
    """

    clicks: int | None
    weights: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.weights, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("weights must form a non-empty 1-d vector")
        if np.any(arr < -1e-12) or np.any(arr > 1.0 + 1e-12):
            raise ValueError("weights must lie in [0, 1]")
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)


@dataclass(frozen=True)
class SchemeEfficiencies:
    """Efficiency point for the comparison: single-photon eta, PNR xi."""

    eta: float
    xi: float
    interferometer_success: float = INTERFEROMETER_SUCCESS

    def __post_init__(self) -> None:
        for name in ("eta", "xi", "interferometer_success"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


def povm_element(clicks: int, det: DetectorModel, cutoff: int) -> PovmElement:
    """Weight vector of the N_c-click element over Fock levels 0..cutoff."""
    if clicks < 0:
        raise ValueError(f"click count must be >= 0, got {clicks}")
    if cutoff < 0:
        raise ValueError(f"cutoff must be >= 0, got {cutoff}")
    eta, nu = det.eta, det.nu
    dark_norm = math.exp(-nu)
    weights = np.zeros(cutoff + 1)
    for m in range(cutoff + 1):
        total = 0.0
        for n in range(0, min(clicks, m) + 1):
            dark = dark_norm * nu ** (clicks - n) / math.factorial(clicks - n)
            detected = math.comb(m, n) * eta**n * (1.0 - eta) ** (m - n)
            total += dark * detected
        weights[m] = min(total, 1.0)
    return PovmElement(clicks, weights)


def _closure(elements: list[PovmElement], cutoff: int) -> PovmElement:
    rest = 1.0 - sum(e.weights for e in elements)
    return PovmElement(None, np.clip(rest, 0.0, 1.0))


def apd_povm(det: DetectorModel, cutoff: int) -> tuple[PovmElement, PovmElement]:
    """Click/no-click pair {Pi_0, I - Pi_0} of an avalanche photodiode."""
    dark = povm_element(0, det, cutoff)
    return dark, _closure([dark], cutoff)


def pnr_povm(det: DetectorModel, max_resolved: int, cutoff: int) -> list[PovmElement]:
    """Number-resolving family {Pi_0, ..., Pi_K, I - sum} for K = max_resolved."""
    if max_resolved < 0:
        raise ValueError(f"max_resolved must be >= 0, got {max_resolved}")
    elements = [povm_element(c, det, cutoff) for c in range(max_resolved + 1)]
    elements.append(_closure(elements, cutoff))
    return elements


def povm_completeness_defect(det: DetectorModel, cutoff: int) -> float:
    """Max per-level deviation of sum over all click counts from identity.

    The click sum is truncated once the neglected dark-count tail is provably
    tiny: click counts above cutoff + j need at least j dark counts, so the
    truncation error at depth j is bounded by the Poisson(nu) mass above j.
    """
    depth = 0
    while _poisson_survival(det.nu, depth) > 1e-12:
        depth += 1
    total = np.zeros(cutoff + 1)
    for clicks in range(cutoff + depth + 1):
        total += povm_element(clicks, det, cutoff).weights
    return float(np.max(np.abs(total - 1.0)))


def _poisson_survival(mean: float, count: int) -> float:
    """P[Poisson(mean) > count], summed directly."""
    if mean <= 0.0:
        return 0.0
    term = math.exp(-mean)
    cumulative = term
    for j in range(1, count + 1):
        term *= mean / j
        cumulative += term
    return max(0.0, 1.0 - cumulative)


def scheme1_success(eta: float, num_channels: int, model: str = "deterministic") -> float:
    """Detection success of qubit-channel teleportation.

    "deterministic" assumes ideal Bell detection apart from efficiency,
    giving eta^(2N); "linear-optics" folds in the 1/2 success ceiling of a
    linear-optics Bell measurement, giving (1/2)^N eta^N.
    """
    _validate_unit("eta", eta)
    _validate_channels(num_channels)
    if model == "deterministic":
        return eta ** (2 * num_channels)
    if model == "linear-optics":
        return 0.5**num_channels * eta**num_channels
    raise ValueError(f"unknown scheme-1 model {model!r}; pick from {_SCHEME1_MODELS}")


def scheme2_success(xi: float, eta: float, num_channels: int, model: str = "generic") -> float:
    """Detection success of qudit-module teleportation.

    "generic" charges one PNR detection (xi) and one efficiency factor (eta)
    per module; "quartit-interferometer" uses the linear-optics quartit
    module, 0.18 success and three PNR detections per module, so eta is not
    consumed there.
    """
    _validate_unit("xi", xi)
    _validate_unit("eta", eta)
    _validate_channels(num_channels)
    if model == "generic":
        return xi**num_channels * eta**num_channels
    if model == "quartit-interferometer":
        return INTERFEROMETER_SUCCESS**num_channels * xi ** (3 * num_channels)
    raise ValueError(f"unknown scheme-2 model {model!r}; pick from {_SCHEME2_MODELS}")


def advantage_region(eta_grid, xi_grid) -> np.ndarray:
    """Where the quartit modules beat the qubit channels at matched fidelity.

    Entry [i, j] is True iff scheme two at (xi_grid[j], 3 quartit modules)
    outperforms scheme one at (eta_grid[i], 11 linear-optics qubit channels),
    i.e. 0.18^3 xi^9 > (1/2)^11 eta^11.
    """
    eta = np.asarray(eta_grid, dtype=float)
    xi = np.asarray(xi_grid, dtype=float)
    if np.any(eta < 0.0) or np.any(eta > 1.0) or np.any(xi < 0.0) or np.any(xi > 1.0):
        raise ValueError("grids must lie within [0, 1]")
    qubit = 0.5**_QUBIT_CHANNELS * eta**_QUBIT_CHANNELS
    quartit = INTERFEROMETER_SUCCESS**_QUARTIT_MODULES * xi ** (3 * _QUARTIT_MODULES)
    return quartit[None, :] > qubit[:, None]


def _validate_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


def _validate_channels(num_channels: int) -> None:
    if num_channels < 1:
        raise ValueError(f"need at least one channel, got {num_channels}")
