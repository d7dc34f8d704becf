"""Exact state-vector simulation of D-dimensional teleportation.

Conventions, fixed once here:

* omega = exp(2*pi*i / D); Z|m> = omega^m |m>; X|m> = |m + 1 mod D>.
* The XOR gate maps |j>_target |i>_control to |i - j mod D>_target |i>_control.
* Tensor index order is (input, sender half, receiver half) = (0, 1, 2).
* A generalized Bell measurement projects systems (sys1, sys2) onto the
  product basis |k'> (x) |nu_l'> with |nu_l> the Fourier-phase states, after
  the sender's XOR has been applied.
* The correction for outcome (l', k') is Z^{l'} followed by X^{-k'}; with a
  maximally entangled resource this returns the input exactly, including the
  global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

__all__ = [
    "BellOutcome",
    "DepolarizedResource",
    "JointQuditState",
    "QuditKet",
    "bell_measure",
    "depolarized_fidelity",
    "enumerate_bell_outcomes",
    "fourier_state",
    "haar_random_ket",
    "maximally_entangled",
    "singlet_fraction_fidelity",
    "teleport_qudit",
    "teleport_qudit_branches",
    "x_op",
    "xor_gate",
    "z_op",
]

_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuditKet:
    """Normalized pure state of a single D-dimensional system."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("a qudit needs a 1-d amplitude vector of dimension >= 2")
        if abs(np.linalg.norm(arr) ** 2 - 1.0) > _NORM_TOL:
            raise ValueError("qudit amplitudes must be normalized")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True, eq=False)
class JointQuditState:
    """Normalized state of several qudits as a dense tensor, one axis each."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.amplitudes, dtype=complex)
        if arr.ndim < 1 or any(s < 2 for s in arr.shape):
            raise ValueError("each subsystem needs dimension >= 2")
        if abs(np.linalg.norm(arr) ** 2 - 1.0) > _NORM_TOL:
            raise ValueError("joint amplitudes must be normalized")
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @property
    def systems(self) -> tuple[int, ...]:
        return self.amplitudes.shape

    @property
    def num_systems(self) -> int:
        return self.amplitudes.ndim


@dataclass(frozen=True)
class BellOutcome:
    """One generalized-Bell result: Fourier index l', basis index k'."""

    ell: int
    kk: int
    probability: float


@dataclass(frozen=True)
class DepolarizedResource:
    """Resource p |phi><phi| + (1 - p) I / D^2 shared before teleporting."""

    p: float
    dim: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.p}")
        if self.dim < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dim}")


def maximally_entangled(dim: int) -> JointQuditState:
    """(1/sqrt(D)) sum_m |m>|m>."""
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    amps = np.zeros((dim, dim), dtype=complex)
    amps[np.arange(dim), np.arange(dim)] = 1.0 / math.sqrt(dim)
    return JointQuditState(amps)


def _matching_dim(state: JointQuditState, a: int, b: int) -> int:
    dims = state.systems
    if not (0 <= a < len(dims) and 0 <= b < len(dims)) or a == b:
        raise ValueError(f"need two distinct valid system indices, got {a}, {b}")
    if dims[a] != dims[b]:
        raise ValueError(f"dimension mismatch: system {a} has {dims[a]}, system {b} has {dims[b]}")
    return dims[a]


def xor_gate(state: JointQuditState, control: int, target: int) -> JointQuditState:
    """|j>_target |i>_control -> |i - j mod D>_target |i>_control."""
    dim = _matching_dim(state, control, target)
    moved = np.moveaxis(state.amplitudes, (target, control), (0, 1))
    t = np.arange(dim)[:, None]
    c = np.arange(dim)[None, :]
    # new amplitude at (target=t, control=c) comes from target index c - t
    shuffled = moved[(c - t) % dim, np.broadcast_to(c, (dim, dim)), ...]
    return JointQuditState(np.moveaxis(shuffled, (0, 1), (target, control)))


def z_op(state: JointQuditState, index: int, power: int = 1) -> JointQuditState:
    """Apply Z^power on one subsystem: |m> -> omega^{m * power} |m>."""
    dim = state.systems[index]
    phases = np.exp(2j * np.pi * (power % dim) * np.arange(dim) / dim)
    shape = [1] * state.num_systems
    shape[index] = dim
    return JointQuditState(state.amplitudes * phases.reshape(shape))


def x_op(state: JointQuditState, index: int, power: int = 1) -> JointQuditState:
    """Apply X^power on one subsystem: |m> -> |m + power mod D>."""
    return JointQuditState(np.roll(state.amplitudes, power % state.systems[index], axis=index))


def fourier_state(ell: int, dim: int) -> QuditKet:
    """|nu_l> = (1/sqrt(D)) sum_k omega^{l k} |k>; orthonormal over l."""
    if not 0 <= ell < dim:
        raise ValueError(f"ell must lie in 0..{dim - 1}, got {ell}")
    k = np.arange(dim)
    return QuditKet(np.exp(2j * np.pi * ell * k / dim) / math.sqrt(dim))


def _bell_branches(
    state: JointQuditState, sys1: int, sys2: int
) -> tuple[np.ndarray, np.ndarray]:
    """All unnormalized projections onto |k'>_{sys1} |nu_l'>_{sys2}.

    Returns (branch, probs): branch[l, k, ...] is the residual amplitude
    tensor over the unmeasured systems, probs[l, k] its squared norm.
    """
    dim = _matching_dim(state, sys1, sys2)
    moved = np.moveaxis(state.amplitudes, (sys1, sys2), (0, 1))
    grid = np.outer(np.arange(dim), np.arange(dim))
    conj_fourier = np.exp(-2j * np.pi * grid / dim) / math.sqrt(dim)  # [l, i]
    branch = np.tensordot(conj_fourier, moved, axes=([1], [1]))  # [l, k, rest...]
    probs = np.abs(branch.reshape(dim, dim, -1)) ** 2
    return branch, probs.sum(axis=2)


def _collapse(branch: np.ndarray, probability: float) -> JointQuditState | None:
    if branch.ndim == 0:
        return None
    return JointQuditState(branch / math.sqrt(probability))


def bell_measure(
    state: JointQuditState,
    sys1: int,
    sys2: int,
    *,
    rng: np.random.Generator | None = None,
    outcome: tuple[int, int] | None = None,
) -> tuple[BellOutcome, JointQuditState | None]:
    """Measure (sys1, sys2) in the generalized Bell product basis.

    Pass a seeded ``rng`` to sample an outcome, or ``outcome=(ell, kk)`` to
    project on a specific branch.  Returns the outcome with its exact
    probability and the renormalized state of the remaining systems (None
    when nothing remains).

    Raises:
        ValueError: If an explicitly requested outcome has zero probability,
            or if neither ``rng`` nor ``outcome`` is given.
    """
    branch, probs = _bell_branches(state, sys1, sys2)
    dim = probs.shape[0]
    if outcome is not None:
        ell, kk = outcome
        if not (0 <= ell < dim and 0 <= kk < dim):
            raise ValueError(f"outcome indices must lie in 0..{dim - 1}, got {outcome}")
        p = float(probs[ell, kk])
        if p == 0.0:
            raise ValueError(f"zero-probability outcome requested: (ell={ell}, kk={kk})")
    elif rng is not None:
        flat = probs.ravel()
        index = int(rng.choice(dim * dim, p=flat / flat.sum()))
        ell, kk = divmod(index, dim)
        p = float(probs[ell, kk])
    else:
        raise ValueError("provide a rng to sample or an explicit outcome to project")
    return BellOutcome(ell, kk, p), _collapse(branch[ell, kk], p)


def enumerate_bell_outcomes(
    state: JointQuditState, sys1: int, sys2: int
) -> Iterator[tuple[BellOutcome, JointQuditState | None]]:
    """Yield all D^2 branches; zero-probability branches carry no remainder."""
    branch, probs = _bell_branches(state, sys1, sys2)
    dim = probs.shape[0]
    for ell in range(dim):
        for kk in range(dim):
            p = float(probs[ell, kk])
            remainder = _collapse(branch[ell, kk], p) if p > 0.0 else None
            yield BellOutcome(ell, kk, p), remainder


def _entangled_with_resource(phi: QuditKet, resource: JointQuditState) -> JointQuditState:
    dim = phi.dim
    if resource.num_systems != 2 or resource.systems != (dim, dim):
        raise ValueError(
            f"resource must be a two-system state of dimension {dim} each, "
            f"got systems {resource.systems}"
        )
    joint = JointQuditState(np.multiply.outer(phi.amplitudes, resource.amplitudes))
    # the sender entangles the input (system 0) with their half (system 1)
    return xor_gate(joint, control=1, target=0)


def _correct(remainder: JointQuditState, outcome: BellOutcome) -> QuditKet:
    fixed = x_op(z_op(remainder, 0, outcome.ell), 0, -outcome.kk)
    return QuditKet(fixed.amplitudes)


def teleport_qudit(
    phi: QuditKet,
    resource: JointQuditState,
    *,
    rng: np.random.Generator | None = None,
    outcome: tuple[int, int] | None = None,
) -> tuple[QuditKet, BellOutcome]:
    """Run the full protocol for one (sampled or requested) outcome.

    With ``maximally_entangled(D)`` as the resource the returned ket equals
    ``phi`` exactly for every outcome; other resources degrade the output.
    """
    entangled = _entangled_with_resource(phi, resource)
    result, remainder = bell_measure(entangled, 0, 1, rng=rng, outcome=outcome)
    return _correct(remainder, result), result


def teleport_qudit_branches(
    phi: QuditKet, resource: JointQuditState
) -> Iterator[tuple[BellOutcome, QuditKet | None]]:
    """Enumerate every outcome branch with its corrected output state."""
    entangled = _entangled_with_resource(phi, resource)
    for result, remainder in enumerate_bell_outcomes(entangled, 0, 1):
        corrected = _correct(remainder, result) if remainder is not None else None
        yield result, corrected


def depolarized_fidelity(p: float, dim: int) -> float:
    """Channel fidelity p + (1 - p)/D of teleporting over DepolarizedResource."""
    DepolarizedResource(p, dim)  # range validation
    return p + (1.0 - p) / dim


def singlet_fraction_fidelity(singlet_fraction: float, dim: int) -> float:
    """Best teleportation fidelity (F*D + 1)/(D + 1) from singlet fraction F.

    F below 1/D describes a resource worse than classical exchange; values
    anywhere in [0, 1] are accepted so the depolarized consistency identity
    F(p) = p + (1 - p)/D^2 can be evaluated down to p = 0.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if not 0.0 <= singlet_fraction <= 1.0:
        raise ValueError(f"singlet fraction must lie in [0, 1], got {singlet_fraction}")
    return (singlet_fraction * dim + 1.0) / (dim + 1.0)


def haar_random_ket(dim: int, rng: np.random.Generator) -> QuditKet:
    """Draw a ket uniformly from the unit sphere in C^dim."""
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return QuditKet(z / np.linalg.norm(z))
