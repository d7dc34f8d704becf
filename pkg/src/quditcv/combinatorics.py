"""Weighted counting of bounded photon configurations.

Distributing k photons over N modes with at most d photons per mode gives
the weight

    W(N, k, d) = sum over all (r_1, ..., r_N), sum_j r_j = k, 0 <= r_j <= d,
                 of  prod_j 1 / r_j!

W is the combinatorial factor picked up by the Fock state |k> when a
single-mode state is fanned out over N modes, truncated mode-wise at d
photons, and recombined.  Everything downstream (gains, success
probabilities, fidelities) reduces to evaluating W, so this module keeps it
exact: values are `fractions.Fraction` over arbitrary-precision integers,
and floating point enters only through the explicit log-domain view.

Two exact identities pin the implementation down:

* d = 1 recovers binomial coefficients, W(N, k, 1) = C(N, k).
* k <= d removes the per-mode bound, so W(N, k, d) = N^k / k! by the
  multinomial theorem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterator

import numpy as np

__all__ = [
    "Composition",
    "RestrictedWeight",
    "enumerate_compositions",
    "restricted_weight",
    "restricted_weight_log",
]

# One way of placing the photons: an occupation number per mode.
Composition = tuple[int, ...]

# Beyond this many photon slots the factorials in the exact table get big
# enough that a float dynamic program is the better default for logs.
_EXACT_LOG_LIMIT = 60


@dataclass(frozen=True)
class RestrictedWeight:
    """Exact value of W(N, k, d) plus the parameters that produced it.

    Attributes:
        value: The weight as an exact rational; zero iff more photons were
            requested than the modes can hold.
        n_modes: Number of modes N.
        total_photons: Total photon number k.
        per_mode_cutoff: Largest occupation d allowed in a single mode.
    """

    value: Fraction
    n_modes: int
    total_photons: int
    per_mode_cutoff: int

    def __float__(self) -> float:
        return float(self.value)


def _require_valid(n_modes: int, total_photons: int, per_mode_cutoff: int) -> None:
    if n_modes < 1:
        raise ValueError(f"need at least one mode, got n_modes={n_modes}")
    if per_mode_cutoff < 1:
        raise ValueError(f"per-mode cutoff must be positive, got {per_mode_cutoff}")
    if total_photons < 0:
        raise ValueError(f"photon number cannot be negative, got {total_photons}")


@cache
def _weight_table(n_modes: int, per_mode_cutoff: int) -> tuple[Fraction, ...]:
    """All weights W(n_modes, k, per_mode_cutoff) for k = 0 .. n_modes * d.

    Dynamic program over modes: adding one mode convolves the table with the
    per-mode series (1/r!)_{r=0..d}, so the direct exponential sum over
    compositions is never formed.
    """
    inv_factorial = [Fraction(1, math.factorial(r)) for r in range(per_mode_cutoff + 1)]
    table = [Fraction(1)]
    for _ in range(n_modes):
        grown = [Fraction(0)] * (len(table) + per_mode_cutoff)
        for k, acc in enumerate(table):
            if not acc:
                continue
            for r, w in enumerate(inv_factorial):
                grown[k + r] += acc * w
        table = grown
    return tuple(table)


@cache
def _log_weight_table(n_modes: int, per_mode_cutoff: int) -> tuple[float, ...]:
    # Same recurrence as _weight_table, run in log space with logaddexp so
    # entries stay finite for hundreds of photons.
    log_inv_fact = [-math.lgamma(r + 1) for r in range(per_mode_cutoff + 1)]
    table = np.zeros(1)
    for _ in range(n_modes):
        grown = np.full(len(table) + per_mode_cutoff, -np.inf)
        for r, lw in enumerate(log_inv_fact):
            grown[r : r + len(table)] = np.logaddexp(grown[r : r + len(table)], table + lw)
        table = grown
    return tuple(table.tolist())


def restricted_weight(n_modes: int, total_photons: int, per_mode_cutoff: int) -> RestrictedWeight:
    """Exact W(N, k, d).

    Args:
        n_modes: Number of modes N >= 1.
        total_photons: Total photon number k >= 0.
        per_mode_cutoff: Per-mode occupation bound d >= 1.

    Returns:
        The weight as a :class:`RestrictedWeight`; its value is 0 exactly
        when ``total_photons > n_modes * per_mode_cutoff``.

    Raises:
        ValueError: If any argument is outside its domain.
    """
    _require_valid(n_modes, total_photons, per_mode_cutoff)
    if total_photons > n_modes * per_mode_cutoff:
        value = Fraction(0)
    else:
        value = _weight_table(n_modes, per_mode_cutoff)[total_photons]
    return RestrictedWeight(value, n_modes, total_photons, per_mode_cutoff)


def enumerate_compositions(
    n_modes: int, total_photons: int, per_mode_cutoff: int
) -> Iterator[Composition]:
    """Yield every admissible composition exactly once.

    The stream is ordered lexicographically descending (largest leading part
    first), which keeps golden tests stable.  It is empty when
    ``total_photons > n_modes * per_mode_cutoff``.  Summing 1 / prod(r_j!)
    over the stream reproduces :func:`restricted_weight`; the test suite
    uses that as an independent check on the dynamic program.
    """
    _require_valid(n_modes, total_photons, per_mode_cutoff)

    def walk(modes_left: int, photons_left: int, prefix: Composition) -> Iterator[Composition]:
        if modes_left == 0:
            if photons_left == 0:
                yield prefix
            return
        ceiling = min(per_mode_cutoff, photons_left)
        floor = max(0, photons_left - per_mode_cutoff * (modes_left - 1))
        for part in range(ceiling, floor - 1, -1):
            yield from walk(modes_left - 1, photons_left - part, prefix + (part,))

    return walk(n_modes, total_photons, ())


def restricted_weight_log(n_modes: int, total_photons: int, per_mode_cutoff: int) -> float:
    """Natural log of W(N, k, d), safe for photon numbers in the hundreds.

    For small tables (``n_modes * per_mode_cutoff <= 60``) the exact rational
    is computed and logged, so the result is faithful to within one rounding
    of the true value; beyond that a log-space dynamic program takes over.

    Raises:
        ValueError: With message ``"weight is zero"`` when the weight
            vanishes (``total_photons > n_modes * per_mode_cutoff``), since
            no finite log exists.
    """
    _require_valid(n_modes, total_photons, per_mode_cutoff)
    if total_photons > n_modes * per_mode_cutoff:
        raise ValueError(
            f"weight is zero: {total_photons} photons cannot fit in "
            f"{n_modes} modes holding at most {per_mode_cutoff} each"
        )
    if n_modes * per_mode_cutoff <= _EXACT_LOG_LIMIT:
        value = _weight_table(n_modes, per_mode_cutoff)[total_photons]
        return math.log(value.numerator) - math.log(value.denominator)
    return _log_weight_table(n_modes, per_mode_cutoff)[total_photons]
