"""NOMA rates, SIC ordering and feasibility, and the closed-form power split.

Users share one superimposed signal; user k gets the power fraction alpha_k.
A decoding order assigns each user a SIC position: the user at position t
decodes (and cancels) the signals of positions < t and suffers interference
from positions > t. With gains ascending along the order, every SIC
cross-rate constraint holds automatically, and the sum-rate-optimal alpha
under per-user minimum rates has a closed form: each non-last user is pinned
exactly at its minimum rate and the last user takes the residual power.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError, QosInfeasibleError
from .geometry import ChannelMatrix, effective_gain

# slack used when checking SIC cross-rate constraints
SIC_MARGIN_TOL = 1e-9


@dataclass(frozen=True)
class DecodingOrder:
    """SIC permutation; positions[k] is user k's 0-based decoding slot."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=int)
        if sorted(pos.tolist()) != list(range(len(pos))):
            raise InvalidParameterError(f"not a permutation of 0..K-1: {pos}")
        object.__setattr__(self, "positions", pos)

    @classmethod
    def from_user_sequence(cls, users_in_order) -> "DecodingOrder":
        """Build from the list of user indices in decoding order."""
        seq = np.asarray(users_in_order, dtype=int)
        pos = np.empty_like(seq)
        pos[seq] = np.arange(len(seq))
        return cls(positions=pos)

    @property
    def users_in_order(self) -> np.ndarray:
        """User indices sorted by decoding position (weakest first)."""
        return np.argsort(self.positions)

    @property
    def n_users(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class QosParams:
    """Per-user minimum rates (bits/s/Hz) and their derived constants."""

    r_min: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.r_min, dtype=float))
        if np.any(r < 0):
            raise InvalidParameterError("minimum rates must be nonnegative")
        object.__setattr__(self, "r_min", r)

    @classmethod
    def uniform(cls, r_min: float, k: int) -> "QosParams":
        return cls(r_min=np.full(k, float(r_min)))

    @property
    def beta(self) -> np.ndarray:
        """(2^R - 1) / 2^R, the power-fraction coefficient per user."""
        two_r = 2.0**self.r_min
        return (two_r - 1.0) / two_r

    @property
    def a(self) -> np.ndarray:
        """2^R, the SINR-threshold-plus-one per user."""
        return 2.0**self.r_min


def effective_gains(channels: ChannelMatrix, p: np.ndarray) -> np.ndarray:
    """|h_k p^T|^2 for every user."""
    return np.abs(channels.h @ np.asarray(p)) ** 2


def order_by_effective_gain(channels: ChannelMatrix, p: np.ndarray) -> DecodingOrder:
    """Decoding order with effective gains ascending; ties broken by user index."""
    p = np.asarray(p)
    if not np.any(p != 0):
        raise InvalidParameterError("radiation vector is all-zero; gains undefined")
    g = effective_gains(channels, p)
    return DecodingOrder.from_user_sequence(np.argsort(g, kind="stable"))


def user_rates(
    g: np.ndarray, alpha: np.ndarray, order: DecodingOrder, sigma2: float
) -> np.ndarray:
    """Achieved rate per user (bits/s/Hz) assuming successful SIC.

    R_j = log2(1 + g_j*alpha_j / (g_j*T_j + sigma2)) with T_j the total
    fraction allocated to users decoded after j.
    """
    g = np.asarray(g, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    seq = order.users_in_order
    alpha_sorted = alpha[seq]
    # tail[t] = power fraction of users at positions > t
    tail_sorted = np.concatenate((np.cumsum(alpha_sorted[::-1])[::-1][1:], [0.0]))
    tail = np.empty_like(alpha)
    tail[seq] = tail_sorted
    return np.log2(1.0 + g * alpha / (g * tail + sigma2))


def cross_rate(
    j: int,
    m: int,
    g: np.ndarray,
    alpha: np.ndarray,
    order: DecodingOrder,
    sigma2: float,
) -> float:
    """Rate at which user j decodes the signal intended for user m.

    Defined for pairs with position(j) >= position(m); interference comes
    from the users decoded after m.
    """
    pos = order.positions
    if pos[j] < pos[m]:
        raise InvalidParameterError(
            f"user {j} (position {pos[j]}) is not scheduled to decode "
            f"user {m} (position {pos[m]})"
        )
    g = np.asarray(g, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    tail_m = float(alpha[pos > pos[m]].sum())
    return float(np.log2(1.0 + g[j] * alpha[m] / (g[j] * tail_m + sigma2)))


@dataclass(frozen=True)
class SicReport:
    feasible: bool
    min_margin: float


def check_sic_feasibility(
    g: np.ndarray, alpha: np.ndarray, order: DecodingOrder, sigma2: float
) -> SicReport:
    """Check R_{m->j} >= R_m for every ordered pair position(j) > position(m).

    Reports the minimum margin over all pairs; vacuously feasible for K = 1.
    """
    rates = user_rates(g, alpha, order, sigma2)
    pos = order.positions
    k = len(pos)
    min_margin = np.inf
    for m in range(k):
        for j in range(k):
            if pos[j] > pos[m]:
                margin = cross_rate(j, m, g, alpha, order, sigma2) - rates[m]
                min_margin = min(min_margin, margin)
    return SicReport(feasible=bool(min_margin >= -SIC_MARGIN_TOL), min_margin=float(min_margin))


def closed_form_alpha_sorted(hbar_sorted: np.ndarray, r_min_sorted: np.ndarray) -> np.ndarray:
    """Optimal power fractions in decoding-order indexing (weakest first).

    Each non-last user i is pinned at its minimum rate, which fixes
    alpha_i = beta_i * (T_i + 1/hbar_i) where T_i is the budget left for
    positions >= i; the last user takes the residual. Raises
    QosInfeasibleError when the demands exhaust the budget, when a pinned
    user's share degenerates to zero, or when the residual leaves the last
    user below its own minimum rate.
    """
    hbar = np.asarray(hbar_sorted, dtype=float)
    r_min = np.asarray(r_min_sorted, dtype=float)
    if np.any(hbar <= 0):
        raise InvalidParameterError("normalized gains must be positive")
    k = len(hbar)
    two_r = 2.0**r_min
    beta = (two_r - 1.0) / two_r
    alpha = np.zeros(k)
    remaining = 1.0
    for i in range(k - 1):
        share = beta[i] * (remaining + 1.0 / hbar[i])
        if share <= 0 and beta[i] > 0:
            raise QosInfeasibleError(
                f"user at position {i} cannot be served (share {share})"
            )
        alpha[i] = max(share, 0.0)
        remaining -= alpha[i]
    if remaining < -1e-12:
        raise QosInfeasibleError(
            f"minimum-rate demands need {1.0 - remaining:.6f} of the unit power budget"
        )
    alpha[k - 1] = max(remaining, 0.0)
    last_rate = np.log2(1.0 + hbar[k - 1] * alpha[k - 1])
    if last_rate < r_min[k - 1] - 1e-9:
        raise QosInfeasibleError(
            f"residual power leaves the last user at {last_rate:.6f} < "
            f"{r_min[k - 1]} bits/s/Hz"
        )
    return alpha


def closed_form_alpha(
    g: np.ndarray, sigma2: float, qos: QosParams, order: DecodingOrder
) -> np.ndarray:
    """User-indexed optimal power fractions for a given decoding order."""
    g = np.asarray(g, dtype=float)
    seq = order.users_in_order
    alpha_sorted = closed_form_alpha_sorted(g[seq] / sigma2, qos.r_min[seq])
    alpha = np.empty_like(alpha_sorted)
    alpha[seq] = alpha_sorted
    return alpha


def sum_rate(rates: np.ndarray) -> float:
    return float(np.sum(rates))
