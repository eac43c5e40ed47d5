"""Brute-force references for the optimizers.

Everything here re-implements the rate formula directly from the SINR
definition, on purpose: these routines must not share rate code with the
optimized paths they are used to check.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidParameterError
from .geometry import ChannelMatrix
from .noma import QosParams

_QOS_TOL = 1e-9


def oracle_user_rates(
    g: np.ndarray, alpha: np.ndarray, positions: np.ndarray, sigma2: float
) -> np.ndarray:
    """Plain-loop evaluation of the per-user SIC rates.

    R_j = log2(1 + g_j*alpha_j / (g_j * sum_{pos(i) > pos(j)} alpha_i + sigma2)).
    """
    k = len(g)
    rates = np.zeros(k)
    for j in range(k):
        interference = 0.0
        for i in range(k):
            if positions[i] > positions[j]:
                interference += g[j] * alpha[i]
        rates[j] = np.log2(1.0 + g[j] * alpha[j] / (interference + sigma2))
    return rates


@dataclass(frozen=True)
class GridOracleResult:
    feasible: bool
    alpha: np.ndarray | None
    sum_rate: float


def grid_alpha_oracle(
    g: np.ndarray,
    qos: QosParams,
    sigma2: float,
    resolution: float = 1e-3,
    full_grid: bool = False,
) -> GridOracleResult:
    """Best QoS-feasible power split on the simplex grid, gain-sorted order.

    Enumerates {alpha : alpha_i in {0, r, 2r, ...}, sum(alpha) <= 1} and keeps
    the feasible point with the largest sum rate. The first-decoded (weakest)
    user's signal is cancelled by everyone, so both the sum rate and every
    QoS margin are non-decreasing in its fraction; the grid optimum therefore
    lies on the sum(alpha) = 1 face, and by default only that face is
    enumerated (set full_grid=True to force the raw sum <= 1 enumeration,
    used to validate the reduction).
    """
    g = np.asarray(g, dtype=float)
    k = len(g)
    if k > 4:
        raise InvalidParameterError("grid oracle is limited to K <= 4")
    if resolution < 1e-3:
        raise InvalidParameterError("grid resolution below 1e-3 is not supported")
    steps = int(round(1.0 / resolution))
    order = np.argsort(g, kind="stable")
    g_sorted = g[order]
    a_thresh = qos.a[order]  # rate r feasible iff numerator >= 2^r * denominator

    best_ratio = -np.inf
    best_sorted = None

    for alpha_sorted in _grid_candidates(k, steps, full_grid):
        # tails[t] = fraction decoded at position >= t, tails[k] = 0
        tails = np.concatenate(
            (np.cumsum(alpha_sorted[..., ::-1], axis=-1)[..., ::-1], np.zeros(alpha_sorted.shape[:-1] + (1,))),
            axis=-1,
        )
        num = g_sorted * tails[..., :-1] + sigma2
        den = g_sorted * tails[..., 1:] + sigma2
        feasible = np.all(num >= a_thresh * den * (1.0 - 1e-12), axis=-1)
        ratio = np.prod(num / den, axis=-1)
        ratio = np.where(feasible, ratio, -np.inf)
        idx = int(np.argmax(ratio))
        if ratio.flat[idx] > best_ratio:
            best_ratio = float(ratio.flat[idx])
            best_sorted = alpha_sorted.reshape(-1, k)[idx].copy()

    if best_sorted is None or not np.isfinite(best_ratio):
        return GridOracleResult(feasible=False, alpha=None, sum_rate=-np.inf)
    alpha = np.empty(k)
    alpha[order] = best_sorted
    return GridOracleResult(
        feasible=True, alpha=alpha, sum_rate=float(np.log2(best_ratio))
    )


def _grid_candidates(k: int, steps: int, full_grid: bool):
    """Yield batches of sorted-index alpha vectors (last axis length k)."""
    r = 1.0 / steps
    if k == 1:
        yield np.array([[1.0]]) if not full_grid else np.arange(steps + 1)[:, None] * r
        return
    # enumerate the trailing k-1 coordinates; leading coordinate is either
    # the exact remainder (face) or every grid level below it (full grid)
    grids = np.meshgrid(*([np.arange(steps + 1)] * (k - 1)), indexing="ij")
    trailing = np.stack([a.ravel() for a in grids], axis=-1)
    trailing = trailing[trailing.sum(axis=1) <= steps]
    head_max = steps - trailing.sum(axis=1)
    if full_grid:
        for lvl in range(steps + 1):
            mask = head_max >= lvl
            if not np.any(mask):
                continue
            batch = np.concatenate(
                (np.full((mask.sum(), 1), lvl), trailing[mask]), axis=1
            )
            yield batch * r
    else:
        batch = np.concatenate((head_max[:, None], trailing), axis=1)
        yield batch * r


@dataclass(frozen=True)
class RandomPOracleResult:
    feasible: bool
    p: np.ndarray | None
    alpha: np.ndarray | None
    sum_rate: float
    n_feasible: int


def random_p_oracle(
    channels: ChannelMatrix,
    qos: QosParams,
    p_total: float,
    samples: int,
    seed: int,
    budget: str = "amplitude",
    chunk: int = 200_000,
) -> RandomPOracleResult:
    """Best sum rate over random radiation vectors, each with closed-form alpha.

    Draws p uniformly on the nonnegative power ball sum(p^2) <= P_T
    ("amplitude" budget) or the simplex sum(p) <= P_T ("linear" budget),
    orders users by the induced effective gains, applies the closed-form
    power split, and keeps the best QoS-feasible sample. Deterministic for
    a given seed; the best value is non-decreasing in the sample count.
    """
    if samples < 1:
        raise InvalidParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    h = channels.h
    sigma2 = channels.sigma2
    k, n_t = h.shape
    beta_user = qos.beta
    r_min_user = qos.r_min

    best = RandomPOracleResult(False, None, None, -np.inf, 0)
    n_feasible = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        done += m
        if budget == "amplitude":
            x = np.abs(rng.standard_normal((m, n_t)))
            x /= np.linalg.norm(x, axis=1, keepdims=True)
            radius = np.sqrt(p_total) * rng.uniform(0.0, 1.0, size=m) ** (1.0 / n_t)
            p_chunk = x * radius[:, None]
        elif budget == "linear":
            w = rng.dirichlet(np.ones(n_t + 1), size=m)[:, :n_t]
            p_chunk = p_total * w
        else:
            raise InvalidParameterError(f"unknown budget reading: {budget}")

        gains = np.abs(p_chunk @ h.T) ** 2  # (m, K)
        orders = np.argsort(gains, axis=1, kind="stable")
        g_sorted = np.take_along_axis(gains, orders, axis=1)
        hbar = g_sorted / sigma2
        beta_sorted = beta_user[orders]
        r_min_sorted = r_min_user[orders]

        # vectorized closed-form split along the sorted axis
        alpha_sorted = np.zeros((m, k))
        remaining = np.ones(m)
        bad = np.zeros(m, dtype=bool)
        for i in range(k - 1):
            with np.errstate(divide="ignore"):
                share = beta_sorted[:, i] * (remaining + 1.0 / hbar[:, i])
            bad |= (share <= 0) & (beta_sorted[:, i] > 0)
            bad |= ~np.isfinite(share)
            alpha_sorted[:, i] = np.clip(share, 0.0, None)
            remaining = remaining - alpha_sorted[:, i]
        bad |= remaining < -1e-12
        alpha_sorted[:, k - 1] = np.clip(remaining, 0.0, None)

        tails = np.concatenate(
            (np.cumsum(alpha_sorted[:, ::-1], axis=1)[:, ::-1], np.zeros((m, 1))),
            axis=1,
        )
        rates = np.log2(
            1.0 + g_sorted * alpha_sorted / (g_sorted * tails[:, 1:] + sigma2)
        )
        feasible = ~bad & np.all(rates >= r_min_sorted - _QOS_TOL, axis=1)
        n_feasible += int(feasible.sum())
        if not np.any(feasible):
            continue
        sums = np.where(feasible, rates.sum(axis=1), -np.inf)
        idx = int(np.argmax(sums))
        if sums[idx] > best.sum_rate:
            alpha = np.empty(k)
            alpha[orders[idx]] = alpha_sorted[idx]
            # re-evaluate the winner with the scalar reference path
            positions = np.empty(k, dtype=int)
            positions[orders[idx]] = np.arange(k)
            exact = oracle_user_rates(gains[idx], alpha, positions, sigma2)
            best = RandomPOracleResult(
                feasible=True,
                p=p_chunk[idx].copy(),
                alpha=alpha,
                sum_rate=float(exact.sum()),
                n_feasible=n_feasible,
            )
    if best.feasible:
        best = RandomPOracleResult(
            best.feasible, best.p, best.alpha, best.sum_rate, n_feasible
        )
    return best
