"""Orbit propagation, geomagnetic field, and per-episode randomization.

The orbit model is deliberately simple: Keplerian two-body motion feeding a
tilted-dipole field lookup.  Over the quarter-hour maneuvers simulated here
the perturbations ignored by this model change the field direction far less
than the sensor noise does.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import params
from .attmath import check_inertia

__all__ = [
    "OrbitElements",
    "RandomizationSpec",
    "EpisodeScenario",
    "base_randomization",
    "flight_randomization",
    "sample_scenario",
    "propagate_position",
    "magnetic_field",
]


@dataclass(frozen=True)
class OrbitElements:
    """Keplerian elements parameterized by perigee/apogee altitude.

    Eccentricity is derived from the two altitudes; angles are degrees.
    """

    perigee_alt_km: float = params.PERIGEE_ALT_KM
    apogee_alt_km: float = params.APOGEE_ALT_KM
    inclination_deg: float = params.INCLINATION_DEG
    raan_deg: float = 0.0
    arg_perigee_deg: float = 0.0
    true_anomaly_deg: float = 0.0
    validate: bool = True

    def __post_init__(self):
        if not self.validate:
            return
        if self.apogee_alt_km < self.perigee_alt_km:
            raise ValueError("apogee below perigee")
        for name in ("inclination_deg", "raan_deg", "arg_perigee_deg", "true_anomaly_deg"):
            v = getattr(self, name)
            if not (0.0 <= v < 360.0):
                raise ValueError(f"{name}={v} outside [0, 360)")
        if not (0.0 <= self.eccentricity < 0.05):
            raise ValueError(f"derived eccentricity {self.eccentricity:.4f} outside [0, 0.05)")

    @property
    def perigee_radius_km(self) -> float:
        return params.R_EARTH_KM + self.perigee_alt_km

    @property
    def apogee_radius_km(self) -> float:
        return params.R_EARTH_KM + self.apogee_alt_km

    @property
    def semi_major_axis_km(self) -> float:
        return 0.5 * (self.perigee_radius_km + self.apogee_radius_km)

    @property
    def eccentricity(self) -> float:
        rp, ra = self.perigee_radius_km, self.apogee_radius_km
        return (ra - rp) / (ra + rp)


@dataclass(frozen=True)
class RandomizationSpec:
    """Half-widths of the per-episode uniform parameter draws.

    ``ecc_offset`` documents the eccentricity variation interval for schema
    completeness; the sampled eccentricity itself follows from the perigee
    and apogee draws.  Sensor bias sigmas feed the once-per-episode Gaussian
    bias draws.
    """

    perigee_offset_km: float = 0.0
    apogee_offset_km: float = 0.0
    ecc_offset: tuple[float, float] = (0.0, 0.0)
    incl_offset_deg: float = 0.0
    inertia_scale: float = 0.0
    init_rate_range_degps: float = 0.0
    dipole_comp_error: float = 0.0
    init_rw_speed_rpm: float = 0.0
    gyro_bias_std_radps: np.ndarray = field(default_factory=lambda: np.zeros(3))
    mag_bias_std_ut: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        for name in (
            "perigee_offset_km",
            "apogee_offset_km",
            "incl_offset_deg",
            "inertia_scale",
            "init_rate_range_degps",
            "dipole_comp_error",
            "init_rw_speed_rpm",
        ):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be a nonnegative half-width")
        object.__setattr__(self, "gyro_bias_std_radps", np.asarray(self.gyro_bias_std_radps, dtype=float))
        object.__setattr__(self, "mag_bias_std_ut", np.asarray(self.mag_bias_std_ut, dtype=float))
        if np.any(self.gyro_bias_std_radps < 0) or np.any(self.mag_bias_std_ut < 0):
            raise ValueError("bias sigmas must be nonnegative")


def base_randomization() -> RandomizationSpec:
    """Randomization used for the general attitude-control training setup."""
    return RandomizationSpec(
        perigee_offset_km=5.0,
        apogee_offset_km=5.0,
        ecc_offset=(-1e-4, 3e-4),
        incl_offset_deg=0.03,
        inertia_scale=params.INERTIA_VARIATION,
        init_rate_range_degps=0.0,
        dipole_comp_error=0.10,
        init_rw_speed_rpm=500.0,
        gyro_bias_std_radps=params.GYRO_BIAS_STD_RADPS,
        mag_bias_std_ut=params.MAG_BIAS_STD_UT,
    )


def flight_randomization() -> RandomizationSpec:
    """Randomization matching the standalone wheel-controller profile."""
    return RandomizationSpec(
        perigee_offset_km=5.0,
        apogee_offset_km=5.0,
        ecc_offset=(-1e-4, 3e-4),
        incl_offset_deg=0.03,
        inertia_scale=params.INERTIA_VARIATION,
        init_rate_range_degps=5.0,
        dipole_comp_error=0.25,
        init_rw_speed_rpm=0.0,
        gyro_bias_std_radps=params.GYRO_BIAS_STD_RADPS,
        mag_bias_std_ut=params.MAG_BIAS_STD_UT,
    )


@dataclass(frozen=True)
class EpisodeScenario:
    """Everything an episode needs, fully determined by (spec, seed)."""

    elements: OrbitElements
    inertia: np.ndarray
    initial_q: np.ndarray
    initial_omega_degps: np.ndarray
    initial_rw_speeds_rpm: np.ndarray
    residual_mu: np.ndarray
    comp_error: np.ndarray
    gyro_bias_radps: np.ndarray
    mag_bias_ut: np.ndarray
    rng_seed: int


def sample_scenario(spec: RandomizationSpec, seed: int) -> EpisodeScenario:
    """Draw one episode scenario; identical (spec, seed) give identical output.

    Draw order is fixed and part of the determinism contract.
    """
    rng = np.random.default_rng(seed)
    perigee = params.PERIGEE_ALT_KM + rng.uniform(-spec.perigee_offset_km, spec.perigee_offset_km)
    apogee = params.APOGEE_ALT_KM + rng.uniform(-spec.apogee_offset_km, spec.apogee_offset_km)
    if apogee < perigee:
        perigee, apogee = apogee, perigee
    incl = params.INCLINATION_DEG + rng.uniform(-spec.incl_offset_deg, spec.incl_offset_deg)
    elements = OrbitElements(
        perigee_alt_km=perigee,
        apogee_alt_km=apogee,
        inclination_deg=incl,
        raan_deg=rng.uniform(0.0, 360.0),
        arg_perigee_deg=rng.uniform(0.0, 360.0),
        true_anomaly_deg=rng.uniform(0.0, 360.0),
    )
    # Independent per-axis scaling can produce non-realizable principal
    # moments; redraw until the triangle inequalities hold.
    while True:
        inertia = params.SAT_INERTIA * (1.0 + rng.uniform(-spec.inertia_scale, spec.inertia_scale, size=3))
        try:
            check_inertia(inertia)
            break
        except ValueError:
            continue

    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    omega0 = rng.uniform(-spec.init_rate_range_degps, spec.init_rate_range_degps, size=3)
    rw0 = spec.init_rw_speed_rpm * np.where(rng.uniform(size=3) < 0.5, -1.0, 1.0)
    if spec.init_rw_speed_rpm == 0.0:
        rw0 = np.zeros(3)
    comp_error = rng.uniform(-spec.dipole_comp_error, spec.dipole_comp_error, size=3)
    gyro_bias = rng.normal(size=3) * spec.gyro_bias_std_radps
    mag_bias = rng.normal(size=3) * spec.mag_bias_std_ut
    return EpisodeScenario(
        elements=elements,
        inertia=inertia,
        initial_q=q,
        initial_omega_degps=omega0,
        initial_rw_speeds_rpm=rw0,
        residual_mu=params.RESIDUAL_DIPOLE.copy(),
        comp_error=comp_error,
        gyro_bias_radps=gyro_bias,
        mag_bias_ut=mag_bias,
        rng_seed=int(seed),
    )


def _solve_kepler(mean_anomaly: float, ecc: float, tol: float = 1e-12) -> float:
    """Newton iteration for the eccentric anomaly, tol in radians."""
    m = np.mod(mean_anomaly, 2.0 * np.pi)
    e_anom = m if ecc < 0.8 else np.pi
    for _ in range(64):
        f = e_anom - ecc * np.sin(e_anom) - m
        e_anom -= f / (1.0 - ecc * np.cos(e_anom))
        if abs(f) < tol:
            break
    return e_anom


def _rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def propagate_position(elements: OrbitElements, t: float) -> np.ndarray:
    """Inertial position (km) of the satellite t seconds past the epoch.

    Two-body Keplerian motion; the epoch state is given by the elements'
    true anomaly.
    """
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    a_m = elements.semi_major_axis_km * 1e3
    ecc = elements.eccentricity
    nu0 = np.radians(elements.true_anomaly_deg)
    e0 = 2.0 * np.arctan2(np.sqrt(1.0 - ecc) * np.sin(nu0 / 2.0), np.sqrt(1.0 + ecc) * np.cos(nu0 / 2.0))
    m0 = e0 - ecc * np.sin(e0)
    n = np.sqrt(params.MU_EARTH / a_m**3)
    e_anom = _solve_kepler(m0 + n * t, ecc)
    nu = 2.0 * np.arctan2(np.sqrt(1.0 + ecc) * np.sin(e_anom / 2.0), np.sqrt(1.0 - ecc) * np.cos(e_anom / 2.0))
    r_km = elements.semi_major_axis_km * (1.0 - ecc * np.cos(e_anom))
    perifocal = r_km * np.array([np.cos(nu), np.sin(nu), 0.0])
    rot = (
        _rot_z(np.radians(elements.raan_deg))
        @ _rot_x(np.radians(elements.inclination_deg))
        @ _rot_z(np.radians(elements.arg_perigee_deg))
    )
    return rot @ perifocal


def _dipole_axis(t: float) -> np.ndarray:
    tilt = np.radians(params.DIPOLE_TILT_DEG)
    lon = params.OMEGA_EARTH * t
    return np.array([np.sin(tilt) * np.cos(lon), np.sin(tilt) * np.sin(lon), np.cos(tilt)])


def magnetic_field(position_km, t: float = 0.0) -> np.ndarray:
    """Geomagnetic field (T, inertial frame) of a tilted rotating dipole.

    Raises:
        ValueError: if the position is at or below the Earth's surface.
    """
    r_m = np.asarray(position_km, dtype=float) * 1e3
    r = np.linalg.norm(r_m)
    if r <= params.R_EARTH_MEAN_KM * 1e3:
        raise ValueError("position inside the Earth")
    # Geomagnetic convention: the dipole moment points toward the south pole.
    m_vec = -params.DIPOLE_MOMENT * _dipole_axis(t)
    r_hat = r_m / r
    return 1e-7 * (3.0 * np.dot(m_vec, r_hat) * r_hat - m_vec) / r**3
