"""Physical and mission parameters of the simulated 3U CubeSat.

All numbers are module-level constants so every subsystem pulls the same
values.  Units are annotated inline; angles in degrees unless noted.
"""

import numpy as np

# --- Earth / orbit ----------------------------------------------------------
MU_EARTH = 3.986004418e14          # [m^3/s^2] gravitational parameter
R_EARTH_KM = 6378.137              # [km] equatorial radius (altitude reference)
R_EARTH_MEAN_KM = 6371.2           # [km] mean radius (inside-Earth guard)
OMEGA_EARTH = 7.2921159e-5         # [rad/s] rotation rate

DIPOLE_MOMENT = 7.94e22            # [A m^2] geomagnetic dipole strength
DIPOLE_TILT_DEG = 11.5             # [deg] tilt from the rotation axis

# Nominal orbit (sun-synchronous, ~515 km)
PERIGEE_ALT_KM = 508.0
APOGEE_ALT_KM = 519.0
ECCENTRICITY = 7.630e-4
INCLINATION_DEG = 97.43

# --- Satellite body ---------------------------------------------------------
SAT_INERTIA = np.array([0.0428, 0.0422, 0.00985])   # [kg m^2] principal diagonal
INERTIA_VARIATION = 0.15                             # +/- fraction per axis per episode

# Residual magnetic dipole identified from in-orbit telemetry
RESIDUAL_DIPOLE = np.array([-0.459, -0.024, 0.069])  # [A m^2]
GYRO_BIAS_CALIB_DEGPS = np.array([-0.028, 0.761, -0.032])  # [deg/s]

# --- Reaction wheels --------------------------------------------------------
RW_INERTIA = 5.68e-5               # [kg m^2] per wheel
RW_MAX_SPEED_RPM = 16400.0         # [rpm]
RW_MIN_TORQUE = 1.5e-5             # [Nm] (corrected after hardware cross-check)
RW_MAX_TORQUE = 2.0e-3             # [Nm]
RW_DEADBAND_RPM = 350.0            # [rpm] unreliable speed range about zero
RW_DEAD_TIME_MAX_S = 20.0          # [s] power-on dead time upper bound
RW_JUMP_MAGNITUDE_RPM = 185.0      # [rpm] measured-speed jump artifact

RPM_TO_RADPS = 2.0 * np.pi / 60.0
RADPS_TO_RPM = 60.0 / (2.0 * np.pi)
# 2e-3 Nm on a 5.68e-5 kg m^2 wheel is 336.24 rpm/s
RW_MAX_ACCEL_RPMPS = RW_MAX_TORQUE / RW_INERTIA * RADPS_TO_RPM

# --- Magnetorquers ----------------------------------------------------------
MT_MAX_DIPOLE = 0.35               # [A m^2] per axis

# --- Sensor noise (effective simulation values, 1.2x margin included) -------
GYRO_BIAS_STD_RADPS = np.array([2.008e-2, 1.419e-2, 9.774e-2])
GYRO_WHITE_STD_RADPS = np.array([1.381e-2, 1.121e-2, 1.056e-2])
MAG_BIAS_STD_UT = np.array([5.477e-2, 8.479e-2, 7.578e-2])
MAG_WHITE_STD_UT = np.array([8.655e-3, 9.074e-3, 1.134e-2])
NOISE_DOMAIN_SCALE = 1.2           # margin factor already folded into the values above

# --- Controller -------------------------------------------------------------
PD_KP = 670.0
PD_KD = 2500.0
PD_Z_AXIS_SCALE = 0.2

# --- Safety cage ------------------------------------------------------------
CAGE_MAX_RW_SPEED_RPM = np.array([1500.0, 1500.0, 700.0])
CAGE_MAX_RW_ACCEL_RPMPS = np.array([100.0, 100.0, 100.0])
CAGE_MAX_BODY_RATE_DEGPS = np.array([20.0, 20.0, 20.0])

# --- Observation normalization ----------------------------------------------
WHEEL_SPEED_NORM_RPM = 16384.0     # [rpm] wheel-speed divisor in the agent interface
OMEGA_NORM_CAP_DEGPS = 20.0        # [deg/s] rate normalization cap (cage limit)
B_NORM_CAP_UT = 65.0               # [uT] LEO field maximum

# --- Episode / loop ---------------------------------------------------------
CONTROL_HZ = 1.0
DYNAMICS_HZ = 10.0
EXPERIMENT_CAP_S = 900.0           # 15 minute unsupervised experiment window
STEADY_STATE_THRESHOLD_DEG = 1.0
STEADY_STATE_HOLD_S = 15.0
