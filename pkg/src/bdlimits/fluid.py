"""The deterministic fluid-limit ODE d(gamma_x)/dt = e^{b(x)} - e^{d(x)}.

b(x) = (A_b gamma)_x and d(x) = (A_d gamma)_x come from the same
interaction matrices as the chain; the integrator is fixed-step classical
RK4 so runs land on a deterministic grid.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, ExponentOverflowError, ValidationError
from .paths import SamplePath

DEFAULT_DT = 1e-3

MAX_EXPONENT = 700.0


def _check_exponents(e: np.ndarray, time: float | None = None) -> np.ndarray:
    worst = int(np.abs(e).argmax())
    if abs(e[worst]) > MAX_EXPONENT:
        raise ExponentOverflowError(worst, float(e[worst]), time)
    return e


def vector_field(birth_matrix, death_matrix, gamma, time: float | None = None) -> np.ndarray:
    """Componentwise exp((A_b gamma)_x) - exp((A_d gamma)_x)."""
    ab = np.asarray(birth_matrix, dtype=float)
    ad = np.asarray(death_matrix, dtype=float)
    g = np.asarray(gamma, dtype=float).reshape(-1)
    if ab.shape != ad.shape or ab.ndim != 2 or ab.shape[0] != ab.shape[1]:
        raise DimensionMismatchError(
            f"matrix shapes {ab.shape} and {ad.shape} must be equal and square"
        )
    if g.shape[0] != ab.shape[0]:
        raise DimensionMismatchError(
            f"state length {g.shape[0]} does not match matrices of size {ab.shape[0]}"
        )
    return np.exp(_check_exponents(ab @ g, time)) - np.exp(
        _check_exponents(ad @ g, time)
    )


def _rk4(field, gamma0: np.ndarray, dt: float, t_end: float) -> SamplePath:
    # Integration core; `field` is injectable for closed-form validation in
    # the test suite but the public entry point always uses vector_field.
    if not 0 < dt <= t_end:
        raise ValidationError(f"need 0 < dt <= t_end, got dt={dt}, t_end={t_end}")
    steps = int(round(t_end / dt))
    states = np.empty((steps + 1, gamma0.shape[0]))
    states[0] = gamma0
    g = gamma0.astype(float).copy()
    for k in range(steps):
        t = k * dt
        k1 = field(g, t)
        k2 = field(g + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = field(g + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = field(g + dt * k3, t + dt)
        g = g + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        states[k + 1] = g
    return SamplePath(times=np.arange(steps + 1) * dt, states=states)


def rk4_integrate(
    birth_matrix,
    death_matrix,
    gamma0,
    dt: float = DEFAULT_DT,
    t_end: float = 1.0,
) -> SamplePath:
    """Classical fixed-step RK4 for the fluid ODE.

    With A_b = A_d the field vanishes identically and the path is constant.
    Overflowing exponents abort with the offending time and vertex; no
    global-existence claim is made for arbitrary matrices.
    """
    g0 = np.asarray(gamma0, dtype=float).reshape(-1)

    def field(g, t):
        return vector_field(birth_matrix, death_matrix, g, time=t)

    # validate dimensions once up front for a clean error
    vector_field(birth_matrix, death_matrix, g0, time=0.0)
    return _rk4(field, g0, dt, t_end)
