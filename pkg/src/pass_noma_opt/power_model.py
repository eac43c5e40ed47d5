"""Coupling physics of the pinched waveguide.

Antenna m leaks the fraction delta_m^2 of whatever power reaches it, so the
fraction of the total guided power radiated by antenna m is

    beta_m = delta_m^2 * prod_{i<m} (1 - delta_i^2).

The coupling coefficient itself is set by the pinch spacing S_m from the
guide: delta_m = sin(kappa_m * L) with kappa_m = Omega_0 * exp(-decay * S_m).
These conversions let the optimizer work in beta/delta space and report the
physical spacings afterwards.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    CouplingOutOfRangeError,
    InfeasibleFractionsError,
    InvalidParameterError,
)

# denominators below this are treated as "no guided power left"
_RESIDUAL_FLOOR = 1e-15


def couplings_to_fractions(delta: np.ndarray) -> np.ndarray:
    """Per-antenna radiated power fractions for given coupling coefficients.

    beta_m = delta_m^2 * prod_{i<m}(1 - delta_i^2). The fractions telescope:
    sum(beta) = 1 - prod(1 - delta^2).
    """
    delta = np.asarray(delta, dtype=float)
    if np.any(delta < 0) or np.any(delta > 1):
        raise InvalidParameterError("coupling coefficients must lie in [0, 1]")
    d2 = delta**2
    residual_before = np.concatenate(([1.0], np.cumprod(1.0 - d2)[:-1]))
    return d2 * residual_before


def fractions_to_couplings(beta: np.ndarray) -> np.ndarray:
    """Coupling coefficients that realize the requested power fractions.

    Recursive inversion of couplings_to_fractions:
    delta_m = sqrt(beta_m / prod_{i<m}(1 - delta_i^2)).
    """
    beta = np.asarray(beta, dtype=float)
    if np.any(beta < 0) or np.any(beta > 1 + 1e-12):
        raise InvalidParameterError("power fractions must lie in [0, 1]")
    if beta.sum() > 1 + 1e-12:
        raise InvalidParameterError(f"power fractions sum to {beta.sum()} > 1")
    delta = np.zeros_like(beta)
    residual = 1.0
    for m, b in enumerate(beta):
        if residual < _RESIDUAL_FLOOR:
            if b > 0:
                raise InfeasibleFractionsError(
                    f"antenna {m} requests fraction {b} but no guided power remains"
                )
            continue
        ratio = b / residual
        if ratio > 1 + 1e-12:
            raise InfeasibleFractionsError(
                f"antenna {m} requests fraction {b} of total but only "
                f"{residual} remains in the guide"
            )
        delta[m] = math.sqrt(min(ratio, 1.0))
        residual *= 1.0 - delta[m] ** 2
    return delta


def epr_couplings(n_t: int, p_eq: float) -> np.ndarray:
    """Coupling coefficients forcing every antenna to radiate the fraction p_eq.

    delta_m = sqrt(p_eq / (1 - (m-1)*p_eq)); feasible iff (n_t-1)*p_eq < 1
    (or == 1 with the last antenna taking delta = 1).
    """
    if n_t < 1:
        raise InvalidParameterError(f"need at least one antenna, got {n_t}")
    if not 0 < p_eq <= 1:
        raise InvalidParameterError(f"equal fraction must be in (0, 1], got {p_eq}")
    delta = np.zeros(n_t)
    for m in range(1, n_t + 1):
        denom = 1.0 - (m - 1) * p_eq
        if denom < p_eq - 1e-12 or denom < _RESIDUAL_FLOOR:
            raise InfeasibleFractionsError(
                f"equal fraction {p_eq} infeasible for {n_t} antennas "
                f"(antenna {m} would need delta^2 = {p_eq}/{denom})"
            )
        delta[m - 1] = math.sqrt(min(p_eq / denom, 1.0))
    return delta


@dataclass(frozen=True)
class CouplingPhysicsParams:
    """Constants of the pinch-coupling model.

    omega0 is the coupling strength at zero spacing (1/m), gamma0 the field
    decay constant (1/m), n_clad the cladding index, coupling_length the
    interaction length L (m). Requires gamma0^2 > (2*pi*n_clad/lambda)^2 for
    a real decay exponent.
    """

    omega0: float = 1000.0
    gamma0: float = 1500.0
    n_clad: float = 1.0
    coupling_length: float = 0.01
    wavelength: float = 0.0107068735  # 28 GHz default

    def __post_init__(self):
        if min(self.omega0, self.gamma0, self.n_clad, self.coupling_length, self.wavelength) <= 0:
            raise InvalidParameterError("all coupling constants must be positive")
        if self.gamma0**2 <= (2.0 * math.pi * self.n_clad / self.wavelength) ** 2:
            raise InvalidParameterError(
                "gamma0^2 must exceed (2*pi*n_clad/lambda)^2 for a real decay rate"
            )

    @property
    def decay_rate(self) -> float:
        return math.sqrt(
            self.gamma0**2 - (2.0 * math.pi * self.n_clad / self.wavelength) ** 2
        )


def spacing_to_coupling(s_m: float, params: CouplingPhysicsParams) -> float:
    """Forward model: coupling coefficient at pinch spacing s_m >= 0."""
    if s_m < 0:
        raise InvalidParameterError(f"spacing must be nonnegative, got {s_m}")
    kappa_m = params.omega0 * math.exp(-params.decay_rate * s_m)
    return math.sin(kappa_m * params.coupling_length)


def coupling_to_spacing(delta_m: float, params: CouplingPhysicsParams) -> float:
    """Pinch spacing that realizes the coupling coefficient delta_m.

    Inverts delta = sin(Omega_0 * exp(-decay * S) * L) on the principal
    branch: S = -ln(arcsin(delta) / (Omega_0 * L)) / decay.
    """
    if not 0 < delta_m <= 1:
        raise InvalidParameterError(f"coupling must be in (0, 1], got {delta_m}")
    target = math.asin(delta_m)
    max_phase = params.omega0 * params.coupling_length
    if target > max_phase * (1 + 1e-12):
        raise CouplingOutOfRangeError(
            f"coupling {delta_m} needs phase {target} but zero spacing "
            f"only reaches {max_phase}"
        )
    return -math.log(min(target / max_phase, 1.0)) / params.decay_rate
