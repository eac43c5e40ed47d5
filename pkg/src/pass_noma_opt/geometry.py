"""System geometry and the BS -> user line-of-sight channel model.

A single dielectric waveguide at height h spans the x-axis of a D1 x D2
rectangular service region. The feed point (BS) sits at the waveguide
midpoint; N_t pinching antennas are equally spaced along the guide. The
channel to a user combines in-guide propagation (attenuation + guided-phase
rotation) with a spherical-wave free-space term from each antenna.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateGeometryError, InvalidParameterError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

# below this user-antenna separation the spherical-wave model is meaningless
MIN_USER_PA_DISTANCE = 1e-6


def place_antennas(d1: float, height: float, n_t: int) -> np.ndarray:
    """Equally spaced antenna positions along the waveguide.

    Cell-centered grid: x_n = (n - 1/2) * d1 / n_t, so a single antenna sits
    at the region midpoint and no antenna lands on a region edge.

    Returns an (n_t, 3) array of positions at y = 0, z = height.
    """
    if n_t < 1:
        raise InvalidParameterError(f"need at least one antenna, got n_t={n_t}")
    if d1 <= 0:
        raise InvalidParameterError(f"region extent must be positive, got D1={d1}")
    x = (np.arange(1, n_t + 1) - 0.5) * (d1 / n_t)
    pos = np.zeros((n_t, 3))
    pos[:, 0] = x
    pos[:, 2] = height
    return pos


def sample_users(k: int, d1: float, d2: float, seed: int) -> np.ndarray:
    """Draw K user positions i.i.d. uniform over the region, at z = 0.

    Deterministic for a given seed. Returns a (k, 3) array.
    """
    if k < 1:
        raise InvalidParameterError(f"need at least one user, got K={k}")
    if d1 <= 0 or d2 <= 0:
        raise InvalidParameterError(f"region extents must be positive, got {d1} x {d2}")
    rng = np.random.default_rng(seed)
    pos = np.zeros((k, 3))
    pos[:, 0] = rng.uniform(0.0, d1, size=k)
    pos[:, 1] = rng.uniform(0.0, d2, size=k)
    return pos


@dataclass(frozen=True)
class SystemLayout:
    """Geometry plus propagation constants for one deployment.

    The waveguide runs along the x-axis at y = 0, z = height; the BS feeds it
    at the midpoint of the D1 span. `kappa_db_per_m` is the in-guide
    attenuation. `include_free_space_phase` optionally adds the free-space
    phase rotation exp(-2j*pi*d/lambda) to the user channel (off by default;
    the baseline model carries only the in-guide phase).
    """

    d1: float = 10.0
    d2: float = 6.0
    height: float = 3.0
    n_t: int = 8
    carrier_frequency: float = 28e9
    n_eff: float = 1.4
    kappa_db_per_m: float = 0.08
    include_free_space_phase: bool = False
    pa_positions: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.carrier_frequency <= 0 or self.n_eff <= 0:
            raise InvalidParameterError("carrier frequency and n_eff must be positive")
        if self.height <= 0:
            raise InvalidParameterError("waveguide height must be positive")
        if self.kappa_db_per_m < 0:
            raise InvalidParameterError("attenuation must be nonnegative")
        object.__setattr__(
            self, "pa_positions", place_antennas(self.d1, self.height, self.n_t)
        )

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_frequency

    @property
    def guided_wavelength(self) -> float:
        return self.wavelength / self.n_eff

    @property
    def bs_position(self) -> np.ndarray:
        return np.array([self.d1 / 2.0, 0.0, self.height])


def waveguide_channel(
    bs: np.ndarray, pa: np.ndarray, kappa_db_per_m: float, lambda_g: float
) -> complex:
    """In-guide channel from the feed point to one antenna.

    10^(-kappa*d/10) * exp(-2j*pi*d/lambda_g) with d the along-guide
    separation |x_BS - x_PA|. Magnitude is 1 at d = 0 and non-increasing in d.
    """
    d = abs(float(bs[0]) - float(pa[0]))
    return 10.0 ** (-kappa_db_per_m * d / 10.0) * np.exp(-2j * np.pi * d / lambda_g)


def user_channel(user: np.ndarray, layout: SystemLayout) -> np.ndarray:
    """Complex channel row vector from the BS to one user over all antennas.

    Entry n is the in-guide channel to antenna n times the spherical-wave
    amplitude lambda / (4*pi*dist), with dist the 3-D user-antenna distance.
    """
    lam = layout.wavelength
    lam_g = layout.guided_wavelength
    bs = layout.bs_position
    diffs = user[None, :] - layout.pa_positions
    dists = np.linalg.norm(diffs, axis=1)
    if np.any(dists < MIN_USER_PA_DISTANCE):
        raise DegenerateGeometryError(
            f"user at {user} is within {MIN_USER_PA_DISTANCE} m of an antenna"
        )
    guide = np.array(
        [
            waveguide_channel(bs, pa, layout.kappa_db_per_m, lam_g)
            for pa in layout.pa_positions
        ]
    )
    h = guide * lam / (4.0 * np.pi * dists)
    if layout.include_free_space_phase:
        h = h * np.exp(-2j * np.pi * dists / lam)
    return h


@dataclass(frozen=True)
class ChannelMatrix:
    """Per-user channel row vectors (K x N_t) and the receiver noise power."""

    h: np.ndarray
    sigma2: float

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise InvalidParameterError("noise variance must be positive")
        if self.h.ndim != 2:
            raise InvalidParameterError("channel matrix must be 2-D (K x N_t)")

    @property
    def n_users(self) -> int:
        return self.h.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.h.shape[1]


def channel_matrix(
    users: np.ndarray, layout: SystemLayout, sigma2: float
) -> ChannelMatrix:
    """Stack user_channel rows for a set of user positions."""
    rows = np.array([user_channel(u, layout) for u in np.atleast_2d(users)])
    return ChannelMatrix(h=rows, sigma2=float(sigma2))


def effective_gain(h_k: np.ndarray, p: np.ndarray) -> float:
    """Received power coefficient |sum_n h_k[n] * p_n|^2."""
    h_k = np.asarray(h_k)
    p = np.asarray(p)
    if h_k.shape != p.shape:
        raise InvalidParameterError(
            f"channel and radiation vectors differ in length: {h_k.shape} vs {p.shape}"
        )
    return float(np.abs(np.dot(h_k, p)) ** 2)
