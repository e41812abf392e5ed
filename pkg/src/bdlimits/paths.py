"""Time-gridded vector paths shared by the diffusion and fluid integrators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class SamplePath:
    """States sampled on an increasing time grid starting at 0.

    times has shape (T,), states has shape (T, d); row k is the state at
    times[k].  The grid is uniform unless an integrator documents
    otherwise.
    """

    times: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if times.ndim != 1 or states.shape[0] != times.shape[0]:
            raise ValidationError(
                f"times {times.shape} and states {states.shape} do not line up"
            )
        if times.size == 0 or times[0] != 0.0:
            raise ValidationError("path must start at time 0")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValidationError("path times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    @property
    def terminal(self) -> np.ndarray:
        return self.states[-1]

    def at(self, sample_times) -> np.ndarray:
        """Linear interpolation of each component at the given times."""
        ts = np.atleast_1d(np.asarray(sample_times, dtype=float))
        if ts.size and (ts.min() < 0 or ts.max() > self.times[-1]):
            raise ValidationError("sample times outside the path's time range")
        out = np.empty((ts.shape[0], self.dimension))
        for j in range(self.dimension):
            out[:, j] = np.interp(ts, self.times, self.states[:, j])
        return out
