"""Quaternion and rigid-body math for the attitude simulator.

Conventions used throughout the package:

- Quaternions are scalar-first ``[w, x, y, z]`` numpy arrays and compose
  with the Hamilton product.  The attitude quaternion maps the inertial
  frame into the satellite body frame.
- Angular rates ``omega`` are body-frame vectors in rad/s.
- ``integrate_kinematics`` advances the attitude with the exact axis-angle
  exponential applied on the body side: ``q <- q (x) exp(0.5 * omega * dt)``,
  so quaternion norm is preserved by construction.
- Inertia tensors are principal-axis diagonals, stored as length-3 arrays
  of ``[ixx, iyy, izz]`` in kg m^2.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "quat_normalize",
    "quat_conjugate",
    "quat_multiply",
    "quat_to_matrix",
    "rotate_inertial_to_body",
    "rotate_body_to_inertial",
    "quat_exp",
    "error_quaternion",
    "integrate_kinematics",
    "euler_dynamics",
    "magnetic_torque",
    "check_inertia",
    "free_rotation_step",
    "IDENTITY_QUAT",
]

IDENTITY_QUAT = np.array([1.0, 0.0, 0.0, 0.0])

_UNIT_TOL = 1e-6


def quat_normalize(q) -> np.ndarray:
    """Return q scaled to unit norm.

    Raises:
        ValueError: if the norm is too small to normalize meaningfully.
    """
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < 1e-12:
        raise ValueError("cannot normalize near-zero quaternion")
    return q / n


def quat_conjugate(q) -> np.ndarray:
    """Conjugate (= inverse for unit quaternions)."""
    q = np.asarray(q, dtype=float)
    return np.array([q[0], -q[1], -q[2], -q[3]])


def quat_multiply(a, b) -> np.ndarray:
    """Hamilton product a (x) b, scalar-first."""
    w1, x1, y1, z1 = a
    w2, x2, y2, z2 = b
    return np.array(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ]
    )


def quat_to_matrix(q) -> np.ndarray:
    """3x3 rotation matrix R(q) of the standard scalar-first formula.

    With the package kinematics convention, R(q) carries body coordinates to
    inertial coordinates; its transpose maps inertial into body.
    """
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def rotate_inertial_to_body(q, v) -> np.ndarray:
    """Express an inertial-frame vector in body coordinates."""
    return quat_to_matrix(q).T @ np.asarray(v, dtype=float)


def rotate_body_to_inertial(q, v) -> np.ndarray:
    """Express a body-frame vector in inertial coordinates."""
    return quat_to_matrix(q) @ np.asarray(v, dtype=float)


def quat_exp(rotvec) -> np.ndarray:
    """Unit quaternion for a rotation vector (axis * angle, rad)."""
    rotvec = np.asarray(rotvec, dtype=float)
    angle = np.linalg.norm(rotvec)
    if angle < 1e-12:
        # First-order expansion; renormalized so it is exact to machine eps.
        return quat_normalize(np.array([1.0, 0.5 * rotvec[0], 0.5 * rotvec[1], 0.5 * rotvec[2]]))
    half = 0.5 * angle
    s = np.sin(half) / angle
    return np.array([np.cos(half), rotvec[0] * s, rotvec[1] * s, rotvec[2] * s])


def _require_unit(q, name: str) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if abs(np.linalg.norm(q) - 1.0) > _UNIT_TOL:
        raise ValueError(f"{name} is not unit-norm (|q| = {np.linalg.norm(q):.9f})")
    return q


def error_quaternion(q_t, q, canonicalize: bool = True) -> np.ndarray:
    """Attitude error quaternion ``dq = q_t^-1 (x) q``.

    The result is renormalized, and by default canonicalized to a
    non-negative scalar part (q and -q encode the same rotation).  Pass
    ``canonicalize=False`` for control laws that resolve the double cover
    through an explicit sign term.

    Raises:
        ValueError: if either input deviates from unit norm by more than 1e-6.
    """
    q_t = _require_unit(q_t, "q_t")
    q = _require_unit(q, "q")
    dq = quat_normalize(quat_multiply(quat_conjugate(q_t), q))
    if canonicalize and dq[0] < 0.0:
        dq = -dq
    return dq


def integrate_kinematics(q, omega_body, dt: float) -> np.ndarray:
    """Advance attitude by the exact rotation exp(0.5 * omega * dt).

    Args:
        q: current attitude quaternion (unit).
        omega_body: body rates, rad/s.
        dt: step, s (must be positive).

    Returns:
        Normalized propagated quaternion.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    omega_body = np.asarray(omega_body, dtype=float)
    dq = quat_exp(omega_body * dt)
    return quat_normalize(quat_multiply(q, dq))


def check_inertia(inertia) -> np.ndarray:
    """Validate a principal-axis diagonal inertia [ixx, iyy, izz].

    Enforces strictly positive moments and the rigid-body triangle
    inequalities (each moment no larger than the sum of the other two).
    """
    inertia = np.asarray(inertia, dtype=float)
    if inertia.shape != (3,):
        raise ValueError("inertia must be a length-3 principal diagonal")
    if np.any(inertia <= 0.0):
        raise ValueError("inertia moments must be strictly positive")
    ixx, iyy, izz = inertia
    if ixx + iyy < izz or iyy + izz < ixx or izz + ixx < iyy:
        raise ValueError("inertia violates the triangle inequalities")
    return inertia


def euler_dynamics(omega, inertia, h_wheels, tau_wheels, tau_ext) -> np.ndarray:
    """Body angular acceleration with reaction-wheel momentum exchange.

        I w_dot = tau_ext - tau_wheels - w x (I w + h)

    ``tau_wheels`` is the torque applied to the wheels (the body feels the
    opposite reaction), ``h_wheels`` the stored wheel momentum in Nms.
    """
    omega = np.asarray(omega, dtype=float)
    inertia = np.asarray(inertia, dtype=float)
    h_wheels = np.asarray(h_wheels, dtype=float)
    tau_wheels = np.asarray(tau_wheels, dtype=float)
    tau_ext = np.asarray(tau_ext, dtype=float)
    return (tau_ext - tau_wheels - np.cross(omega, inertia * omega + h_wheels)) / inertia


def magnetic_torque(mu, b_field) -> np.ndarray:
    """Torque of a magnetic dipole mu (Am^2) in field B (T): mu x B."""
    return np.cross(np.asarray(mu, dtype=float), np.asarray(b_field, dtype=float))


def _quat_derivative(q, omega) -> np.ndarray:
    # q_dot = 0.5 * q (x) (0, omega); body-side rates.
    return 0.5 * quat_multiply(q, np.array([0.0, omega[0], omega[1], omega[2]]))


def free_rotation_step(q, omega, inertia, dt: float, h_wheels=None, tau_wheels=None, tau_ext=None):
    """One classical RK4 step of the coupled attitude/rate dynamics.

    Wheel torque is held constant over the step and wheel momentum is
    advanced linearly inside the stages, so momentum bookkeeping between
    body and wheels stays consistent.  The quaternion is renormalized at
    the end of the step.

    Returns:
        (q_next, omega_next)
    """
    omega = np.asarray(omega, dtype=float)
    h0 = np.zeros(3) if h_wheels is None else np.asarray(h_wheels, dtype=float)
    tau_w = np.zeros(3) if tau_wheels is None else np.asarray(tau_wheels, dtype=float)
    tau_e = np.zeros(3) if tau_ext is None else np.asarray(tau_ext, dtype=float)

    def f(qk, wk, t):
        h = h0 + tau_w * t
        return _quat_derivative(qk, wk), euler_dynamics(wk, inertia, h, tau_w, tau_e)

    q = np.asarray(q, dtype=float)
    k1q, k1w = f(q, omega, 0.0)
    k2q, k2w = f(q + 0.5 * dt * k1q, omega + 0.5 * dt * k1w, 0.5 * dt)
    k3q, k3w = f(q + 0.5 * dt * k2q, omega + 0.5 * dt * k2w, 0.5 * dt)
    k4q, k4w = f(q + dt * k3q, omega + dt * k3w, dt)
    q_next = quat_normalize(q + dt / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q))
    omega_next = omega + dt / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w)
    return q_next, omega_next
