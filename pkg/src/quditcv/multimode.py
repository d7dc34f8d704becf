"""Dense truncated-Fock simulation of the split/truncate/recombine pipeline.

This is the slow, obviously-correct cross-check for the closed forms in
:mod:`quditcv.teleport`: states live on the full (cap+1)^N occupation grid,
mode mixing is lifted to Fock space by applying the transformed creation
operators photon by photon, and nothing here knows about the combinatorial
weights.  The pipeline is

    embed |psi> in mode 0 -> balanced split -> per-mode photon cutoff
    -> inverse split -> post-select vacuum on every auxiliary mode.

The splitter is realized as the discrete-Fourier-transform unitary; its
first column is uniform, which is the only property the pipeline relies on,
and its inverse is simply the conjugate transpose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .teleport import FockVector, SchemeParams, TeleportOutcome

__all__ = [
    "ModeMatrix",
    "MultimodeState",
    "apply_mode_unitary",
    "embed_input",
    "n_splitter",
    "oracle_teleport",
    "truncate_mode",
    "vacuum_postselect",
]

_AMPLITUDE_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class ModeMatrix:
    """Unitary acting on the mode operators (not on Fock amplitudes directly)."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError("entries must form a square matrix")
        identity = np.eye(arr.shape[0])
        if np.max(np.abs(arr @ arr.conj().T - identity)) > 1e-12:
            raise ValueError("matrix is not unitary to 1e-12")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def inverse(self) -> "ModeMatrix":
        return ModeMatrix(self.entries.conj().T)


@dataclass(frozen=True, eq=False)
class MultimodeState:
    """Dense amplitudes over occupation vectors, one tensor axis per mode.

    Norms are tracked by callers: truncation deliberately leaves the state
    unnormalized so probabilities stay legible through the pipeline.
    """

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim < 1:
            raise ValueError("amplitudes must carry at least one mode axis")
        if len(set(arr.shape)) != 1:
            raise ValueError("every mode must share one common photon cap")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def num_modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def per_mode_cap(self) -> int:
        """Largest occupation representable on each axis."""
        return self.amplitudes.shape[0] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def n_splitter(num_modes: int) -> ModeMatrix:
    """Balanced splitter: the N-point DFT unitary, first column 1/sqrt(N)."""
    if num_modes < 1:
        raise ValueError(f"need at least one mode, got {num_modes}")
    j = np.arange(num_modes)
    return ModeMatrix(np.exp(2j * np.pi * np.outer(j, j) / num_modes) / math.sqrt(num_modes))


def embed_input(state: FockVector, num_modes: int, cap: int | None = None) -> MultimodeState:
    """Place a single-mode state in mode 0 with vacuum everywhere else."""
    if num_modes < 1:
        raise ValueError(f"need at least one mode, got {num_modes}")
    cap = state.cutoff if cap is None else cap
    if cap < state.cutoff:
        raise ValueError(f"cap {cap} cannot hold the input cutoff {state.cutoff}")
    amps = np.zeros((cap + 1,) * num_modes, dtype=complex)
    amps[(slice(None),) + (0,) * (num_modes - 1)][: state.cutoff + 1] = state.amplitudes
    return MultimodeState(amps)


def _shifted_create(tensor: np.ndarray, weights: np.ndarray, axis: int) -> np.ndarray:
    """a_axis^dagger on a dense tensor; raises if a photon would pass the cap."""
    cap = tensor.shape[axis] - 1
    top = [slice(None)] * tensor.ndim
    top[axis] = cap
    if np.any(tensor[tuple(top)] != 0):
        raise ValueError(
            "cap exceeded: a creation operator pushed an occupation past the "
            f"per-mode cap {cap}"
        )
    out = np.zeros_like(tensor)
    dst = [slice(None)] * tensor.ndim
    dst[axis] = slice(1, cap + 1)
    src = [slice(None)] * tensor.ndim
    src[axis] = slice(0, cap)
    shape = [1] * tensor.ndim
    shape[axis] = cap
    out[tuple(dst)] = weights.reshape(shape) * tensor[tuple(src)]
    return out


@lru_cache(maxsize=8192)
def _lift_column(
    matrix_bytes: bytes, size: int, occupation: tuple[int, ...], cap: int
) -> np.ndarray:
    """Image of the basis state |occupation| under the lifted mode unitary.

    Built as prod_i (sum_j U[j, i] a_j^dagger)^{n_i} / sqrt(n_i!) acting on
    vacuum, one photon at a time.
    """
    matrix = np.frombuffer(matrix_bytes, dtype=complex).reshape(size, size)
    column = np.zeros((cap + 1,) * size, dtype=complex)
    column[(0,) * size] = 1.0
    sqrt_counts = np.sqrt(np.arange(1, cap + 1, dtype=float))
    for mode, count in enumerate(occupation):
        for _ in range(count):
            lifted = np.zeros_like(column)
            for j in range(size):
                coeff = matrix[j, mode]
                if coeff == 0:
                    continue
                lifted += coeff * _shifted_create(column, sqrt_counts, j)
            column = lifted
        if count > 1:
            column /= math.sqrt(math.factorial(count))
    column.setflags(write=False)
    return column


def apply_mode_unitary(state: MultimodeState, matrix: ModeMatrix) -> MultimodeState:
    """Lift a mode unitary to the truncated Fock space and apply it.

    Photon number is conserved sector by sector, so the action is unitary as
    long as no occupied sector can spill past the common cap.

    Raises:
        ValueError: "cap exceeded" when some occupied amplitude would need an
            occupation beyond the cap after mixing.
    """
    if matrix.size != state.num_modes:
        raise ValueError(
            f"matrix mixes {matrix.size} modes but the state carries {state.num_modes}"
        )
    amps = state.amplitudes
    out = np.zeros_like(amps)
    key = matrix.entries.tobytes()
    for raw in np.argwhere(amps != 0):
        occupation = tuple(int(x) for x in raw)
        out += amps[occupation] * _lift_column(key, matrix.size, occupation, state.per_mode_cap)
    return MultimodeState(out)


def truncate_mode(
    state: MultimodeState, mode_index: int, max_photons: int
) -> tuple[MultimodeState, float]:
    """Zero every amplitude whose occupation at one mode exceeds max_photons.

    Returns the (unnormalized) surviving state and the discarded squared norm.
    """
    if not 0 <= mode_index < state.num_modes:
        raise ValueError(f"mode index {mode_index} out of range")
    if max_photons < 0:
        raise ValueError(f"max_photons must be >= 0, got {max_photons}")
    if max_photons >= state.per_mode_cap:
        return state, 0.0
    amps = state.amplitudes.copy()
    sel = [slice(None)] * state.num_modes
    sel[mode_index] = slice(max_photons + 1, None)
    discarded = float(np.sum(np.abs(amps[tuple(sel)]) ** 2))
    amps[tuple(sel)] = 0.0
    return MultimodeState(amps), discarded


def vacuum_postselect(state: MultimodeState, kept_mode: int) -> tuple[FockVector, float]:
    """Project every mode except kept_mode onto vacuum.

    Returns the renormalized single-mode state and the conditional
    probability of the projection given the input state.

    Raises:
        ValueError: If fewer than two modes are present or the projection has
            zero probability.
    """
    if state.num_modes < 2:
        raise ValueError("need at least two modes to post-select")
    if not 0 <= kept_mode < state.num_modes:
        raise ValueError(f"mode index {kept_mode} out of range")
    index: list[object] = [0] * state.num_modes
    index[kept_mode] = slice(None)
    kept = state.amplitudes[tuple(index)]
    kept_mass = float(np.sum(np.abs(kept) ** 2))
    total = state.norm() ** 2
    if kept_mass == 0.0 or total == 0.0:
        raise ValueError("zero-probability projection: no amplitude has all other modes empty")
    return FockVector(kept / math.sqrt(kept_mass)), kept_mass / total


def oracle_teleport(state: FockVector, params: SchemeParams) -> TeleportOutcome:
    """Run the whole pipeline by brute force on the dense occupation grid.

    Must agree with :func:`quditcv.teleport.teleport_state` in output state
    and success probability; the test suite holds the two to 1e-10.

    Raises:
        ValueError: "budget exceeded" when the dense grid would need more
            than 10^7 amplitudes, and "vanishing state" when nothing survives
            the per-mode cutoffs.
    """
    n = params.num_modes
    cap = state.cutoff
    if (cap + 1) ** n > _AMPLITUDE_BUDGET:
        raise ValueError(
            f"budget exceeded: {(cap + 1)}^{n} amplitudes pass the "
            f"{_AMPLITUDE_BUDGET:.0e} dense-grid budget"
        )
    if not state.is_normalized(1e-9):
        raise ValueError("oracle_teleport requires a normalized input")
    splitter = n_splitter(n)
    psi = embed_input(state, n)
    psi = apply_mode_unitary(psi, splitter)
    for mode in range(n):
        psi, _ = truncate_mode(psi, mode, params.photon_cutoff)
    survived = psi.norm() ** 2
    if survived == 0.0:
        raise ValueError("vanishing state: nothing survives the per-mode photon cutoffs")
    psi = apply_mode_unitary(psi, splitter.inverse())
    if n == 1:
        kept = psi.amplitudes
        p_suc = survived
        output = FockVector(kept / math.sqrt(float(np.sum(np.abs(kept) ** 2))))
    else:
        output, p_vacuum = vacuum_postselect(psi, 0)
        p_suc = survived * p_vacuum
    return TeleportOutcome(output, min(p_suc, 1.0))
