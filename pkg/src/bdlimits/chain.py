"""Truncated interacting birth-and-death chain on a finite graph.

Spins live in {-l, ..., r}, one per vertex.  A spin below r increases by 1
at rate exp((A_b xi)_x) and a spin above -l decreases by 1 at rate
exp((A_d xi)_x), where A_b and A_d are interaction matrices on the graph.

This module provides the event-driven simulator, the exact generator and
its stationary solve on small state spaces, the closed-form Gibbs measure
for symmetric A_b - A_d, and the detailed-balance residual check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.special import logsumexp

from .errors import (
    AsymmetricMatrixError,
    BudgetExceededError,
    NumericError,
    RateOverflowError,
    SingularSystemError,
    StateSpaceTooLargeError,
    ValidationError,
)
from .graphs import Graph, validate_interaction

DEFAULT_STATE_CAP = 200_000

# exp() is finite up to ~709.7; refuse anything past this well before that
MAX_EXPONENT = 700.0

_RNG_BUFFER = 8192


@dataclass(frozen=True, eq=False)
class ChainSpec:
    """Graph, interaction matrices, and truncation bounds of one chain.

    Spins take values in {-l, ..., r}; l >= 0 and r >= 1 so every spin has
    at least two values.  Matrices are validated against the graph's
    adjacency pattern at construction.  Immutable and safe to share.
    """

    graph: Graph
    birth_matrix: np.ndarray
    death_matrix: np.ndarray
    l: int
    r: int

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise ValidationError(f"l must be a nonnegative integer, got {self.l}")
        if int(self.r) != self.r or self.r < 1:
            raise ValidationError(f"r must be a positive integer, got {self.r}")
        object.__setattr__(self, "l", int(self.l))
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(
            self, "birth_matrix", validate_interaction(self.graph, self.birth_matrix)
        )
        object.__setattr__(
            self, "death_matrix", validate_interaction(self.graph, self.death_matrix)
        )

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    @property
    def drift_matrix(self) -> np.ndarray:
        """Net interaction A = A_b - A_d."""
        return self.birth_matrix - self.death_matrix

    @property
    def num_spin_values(self) -> int:
        return self.l + self.r + 1

    def num_states(self) -> int:
        """Total number of configurations, as an exact Python int."""
        return self.num_spin_values ** self.num_vertices

    def spin_values(self) -> np.ndarray:
        return np.arange(-self.l, self.r + 1)

    def validate_configuration(self, spins) -> np.ndarray:
        """Return spins as a fresh int64 vector, checked against the box."""
        xi = np.asarray(spins)
        if xi.shape != (self.num_vertices,):
            raise ValidationError(
                f"configuration shape {xi.shape} does not match "
                f"{self.num_vertices} vertices"
            )
        if not np.all(xi == np.floor(xi)):
            raise ValidationError("configuration must be integer-valued")
        xi = xi.astype(np.int64)
        if xi.min() < -self.l or xi.max() > self.r:
            raise ValidationError(
                f"configuration leaves the box [-{self.l}, {self.r}]: {xi.tolist()}"
            )
        return xi


def _checked_exponent(x: int, e: float) -> float:
    if abs(e) > MAX_EXPONENT:
        raise RateOverflowError(x, e)
    return e


def birth_rate(spec: ChainSpec, spins, x: int) -> float:
    """exp((A_b xi)_x) when xi_x < r, else 0 (birth blocked at the top)."""
    xi = spec.validate_configuration(spins)
    if xi[x] >= spec.r:
        return 0.0
    return math.exp(_checked_exponent(x, float(spec.birth_matrix[x] @ xi)))


def death_rate(spec: ChainSpec, spins, x: int) -> float:
    """exp((A_d xi)_x) when xi_x > -l, else 0 (death blocked at the bottom)."""
    xi = spec.validate_configuration(spins)
    if xi[x] <= -spec.l:
        return 0.0
    return math.exp(_checked_exponent(x, float(spec.death_matrix[x] @ xi)))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Event record of one simulated path on [0, t_end].

    Events are (time, vertex, sign) with strictly increasing times; the
    state just after event k is initial plus the first k signed unit jumps.
    """

    initial: np.ndarray
    times: np.ndarray
    vertices: np.ndarray
    signs: np.ndarray
    t_end: float

    @property
    def num_events(self) -> int:
        return len(self.times)

    def _cumulative_states(self) -> np.ndarray:
        """(num_events + 1, n) states: row k = state after k events."""
        n = len(self.initial)
        out = np.empty((self.num_events + 1, n), dtype=np.int64)
        out[0] = self.initial
        for v in range(n):
            hits = self.vertices == v
            out[1:, v] = self.initial[v] + np.cumsum(np.where(hits, self.signs, 0))
        return out

    def final_state(self) -> np.ndarray:
        n = len(self.initial)
        delta = np.bincount(
            self.vertices, weights=self.signs.astype(float), minlength=n
        )
        return self.initial + delta.astype(np.int64)

    def states_at(self, sample_times) -> np.ndarray:
        """States at the given times (right-continuous path), shape (T, n)."""
        ts = np.atleast_1d(np.asarray(sample_times, dtype=float))
        if ts.size and (ts.min() < 0 or ts.max() > self.t_end):
            raise ValidationError("sample times must lie in [0, t_end]")
        idx = np.searchsorted(self.times, ts, side="right")
        return self._cumulative_states()[idx]

    def boundary_hits(self, l: int, r: int) -> int:
        """Number of events that land a spin exactly on -l or r."""
        count = 0
        for v in np.unique(self.vertices):
            mask = self.vertices == v
            vals = self.initial[v] + np.cumsum(self.signs[mask])
            count += int(np.count_nonzero((vals == r) | (vals == -l)))
        return count


def simulate(
    spec: ChainSpec,
    initial,
    t_end: float,
    seed=None,
    max_events: int | None = None,
) -> Trajectory:
    """Statistically exact event-driven sample path on [0, t_end].

    Waiting times are exponential in the total rate and events are chosen
    proportionally to their rates; after a jump at x only the exponents of
    x and its neighbours change (a rank-one column update).  Deterministic
    given (spec, initial, seed).

    Raises RateOverflowError if any rate exponent can exceed magnitude 700
    inside the box, and BudgetExceededError past max_events.
    """
    xi0 = spec.validate_configuration(initial)
    if t_end < 0:
        raise ValidationError(f"t_end must be nonnegative, got {t_end}")
    rng = np.random.default_rng(seed)

    n = spec.num_vertices
    ab, ad = spec.birth_matrix, spec.death_matrix
    bexp = ab @ xi0.astype(float)
    dexp = ad @ xi0.astype(float)
    for e in (bexp, dexp):
        worst = int(np.abs(e).argmax())
        _checked_exponent(worst, float(e[worst]))

    # Worst-case exponent over the whole box; if safe, the per-event guard
    # can be skipped entirely.
    spin_bound = max(spec.l, spec.r)
    bound = max(
        float(np.abs(ab).sum(axis=1).max(initial=0.0)),
        float(np.abs(ad).sum(axis=1).max(initial=0.0)),
    ) * spin_bound
    guarded = bound > MAX_EXPONENT

    if n == 1:
        return _simulate_scalar(spec, xi0, t_end, rng, guarded, max_events)
    return _simulate_vector(spec, xi0, t_end, rng, guarded, max_events)


def _budget_hit(count: int, max_events) -> bool:
    return max_events is not None and count >= max_events


def _simulate_vector(spec, xi0, t_end, rng, guarded, max_events):
    n = spec.num_vertices
    l, r = spec.l, spec.r
    ab, ad = spec.birth_matrix, spec.death_matrix
    spins = xi0.copy()
    bexp = ab @ spins.astype(float)
    dexp = ad @ spins.astype(float)

    times: list[float] = []
    verts: list[int] = []
    signs: list[int] = []
    t = 0.0
    ebuf = rng.standard_exponential(_RNG_BUFFER)
    ubuf = rng.random(_RNG_BUFFER)
    k = 0
    while True:
        birth = np.exp(bexp)
        birth[spins >= r] = 0.0
        death = np.exp(dexp)
        death[spins <= -l] = 0.0
        bsum = float(birth.sum())
        total = bsum + float(death.sum())
        if not total > 0.0:  # unreachable: every vertex always has a move
            raise SingularSystemError("total rate vanished; this is a bug")
        if k == _RNG_BUFFER:
            ebuf = rng.standard_exponential(_RNG_BUFFER)
            ubuf = rng.random(_RNG_BUFFER)
            k = 0
        t_next = t + ebuf[k] / total
        if t_next > t_end:
            break
        u = ubuf[k] * total
        k += 1
        if u < bsum:
            x = int(np.searchsorted(np.cumsum(birth), u, side="right"))
            s = 1
        else:
            x = int(np.searchsorted(np.cumsum(death), u - bsum, side="right"))
            s = -1
        t = t_next
        spins[x] += s
        if s == 1:
            bexp += ab[:, x]
            dexp += ad[:, x]
        else:
            bexp -= ab[:, x]
            dexp -= ad[:, x]
        if guarded:
            for e in (bexp, dexp):
                w = int(np.abs(e).argmax())
                _checked_exponent(w, float(e[w]))
        times.append(t)
        verts.append(x)
        signs.append(s)
        if _budget_hit(len(times), max_events):
            raise BudgetExceededError(
                f"simulation exceeded max_events={max_events} before t_end"
            )
    return Trajectory(
        initial=xi0,
        times=np.asarray(times, dtype=float),
        vertices=np.asarray(verts, dtype=np.int64),
        signs=np.asarray(signs, dtype=np.int64),
        t_end=float(t_end),
    )


def _simulate_scalar(spec, xi0, t_end, rng, guarded, max_events):
    # Single-vertex fast path; consumes the same (exponential, uniform)
    # draws as the vector path so both produce identical trajectories.
    l, r = spec.l, spec.r
    b_coef = float(spec.birth_matrix[0, 0])
    d_coef = float(spec.death_matrix[0, 0])
    spin = int(xi0[0])

    times: list[float] = []
    signs: list[int] = []
    t = 0.0
    ebuf = rng.standard_exponential(_RNG_BUFFER)
    ubuf = rng.random(_RNG_BUFFER)
    k = 0
    while True:
        birth = math.exp(b_coef * spin) if spin < r else 0.0
        death = math.exp(d_coef * spin) if spin > -l else 0.0
        total = birth + death
        if k == _RNG_BUFFER:
            ebuf = rng.standard_exponential(_RNG_BUFFER)
            ubuf = rng.random(_RNG_BUFFER)
            k = 0
        t_next = t + ebuf[k] / total
        if t_next > t_end:
            break
        u = ubuf[k] * total
        k += 1
        s = 1 if u < birth else -1
        t = t_next
        spin += s
        if guarded:
            _checked_exponent(0, b_coef * spin)
            _checked_exponent(0, d_coef * spin)
        times.append(t)
        signs.append(s)
        if _budget_hit(len(times), max_events):
            raise BudgetExceededError(
                f"simulation exceeded max_events={max_events} before t_end"
            )
    m = len(times)
    return Trajectory(
        initial=xi0,
        times=np.asarray(times, dtype=float),
        vertices=np.zeros(m, dtype=np.int64),
        signs=np.asarray(signs, dtype=np.int64),
        t_end=float(t_end),
    )


def _check_cap(spec: ChainSpec, cap: int) -> int:
    count = spec.num_states()
    if count > cap:
        raise StateSpaceTooLargeError(
            f"{count} configurations exceed the cap of {cap}"
        )
    return count


def enumerate_states(spec: ChainSpec, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """All configurations, shape (N, n), in canonical order.

    Canonical order is the mixed-radix odometer with vertex 0 the fastest
    digit and spin value -l first; every vector indexed by states in this
    module uses it.
    """
    count = _check_cap(spec, cap)
    n = spec.num_vertices
    base = spec.num_spin_values
    idx = np.arange(count, dtype=np.int64)[:, None]
    digits = (idx // base ** np.arange(n, dtype=np.int64)) % base
    return digits - spec.l


def state_index(spec: ChainSpec, spins) -> int:
    """Canonical index of one configuration."""
    xi = spec.validate_configuration(spins)
    base = spec.num_spin_values
    weights = base ** np.arange(spec.num_vertices, dtype=np.int64)
    return int(((xi + spec.l) * weights).sum())


def _transition_blocks(spec: ChainSpec, states: np.ndarray):
    """Yield (x, up_rows, up_cols, up_rates, down_rows, down_cols, down_rates)."""
    base = spec.num_spin_values
    for x in range(spec.num_vertices):
        stride = base**x
        be = states @ spec.birth_matrix[x]
        de = states @ spec.death_matrix[x]
        for e in (be, de):
            w = int(np.abs(e).argmax())
            if abs(e[w]) > MAX_EXPONENT:
                raise RateOverflowError(x, float(e[w]))
        up = np.flatnonzero(states[:, x] < spec.r)
        down = np.flatnonzero(states[:, x] > -spec.l)
        yield x, up, up + stride, np.exp(be[up]), down, down - stride, np.exp(de[down])


def build_generator(spec: ChainSpec, cap: int = DEFAULT_STATE_CAP) -> sp.csr_matrix:
    """Sparse generator Q over all configurations in canonical order.

    Q[i, j] is the jump rate from state i to j; diagonal entries make the
    rows sum to zero.
    """
    states = enumerate_states(spec, cap)
    count = states.shape[0]
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for x, up, up_to, up_rate, down, down_to, down_rate in _transition_blocks(
        spec, states
    ):
        rows += [up, down]
        cols += [up_to, down_to]
        data += [up_rate, down_rate]
    rows_all = np.concatenate(rows)
    cols_all = np.concatenate(cols)
    data_all = np.concatenate(data)
    q = sp.coo_matrix(
        (data_all, (rows_all, cols_all)), shape=(count, count)
    ).tocsr()
    q = q - sp.diags(np.asarray(q.sum(axis=1)).ravel())
    return q.tocsr()


def stationary_solve(spec: ChainSpec, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """Stationary distribution from pi Q = 0, sum(pi) = 1, by dense LU.

    One balance equation is replaced by the normalization row.  Works for
    any (possibly asymmetric) interaction matrices; the chain is
    irreducible because all interior rates are positive.
    """
    q = build_generator(spec, cap).toarray()
    count = q.shape[0]
    m = q.T.copy()
    m[-1, :] = 1.0
    rhs = np.zeros(count)
    rhs[-1] = 1.0
    try:
        lu, piv = scipy.linalg.lu_factor(m)
        pi = scipy.linalg.lu_solve((lu, piv), rhs)
        # one step of iterative refinement sharpens ill-conditioned solves
        pi += scipy.linalg.lu_solve((lu, piv), rhs - m @ pi)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SingularSystemError(
            "balance system is singular; the chain should be irreducible"
        ) from exc
    residual = float(np.abs(pi @ q).max())
    if residual > 1e-10:
        raise SingularSystemError(
            f"stationary residual {residual:.3e} exceeds 1e-10; "
            "conditioning is off for this spec"
        )
    return pi


@dataclass(frozen=True, eq=False)
class GibbsDistribution:
    """Stationary law of a reversible spec, with its log partition value."""

    probabilities: np.ndarray
    log_partition: float


def _require_symmetric_drift(spec: ChainSpec) -> np.ndarray:
    a = spec.drift_matrix
    if np.abs(a - a.T).max(initial=0.0) > 1e-12:
        raise AsymmetricMatrixError(
            "A_b - A_d is not symmetric; the closed-form stationary "
            "distribution only applies to the reversible case"
        )
    return a


def gibbs_exponent(spec: ChainSpec, states: np.ndarray) -> np.ndarray:
    """(1/2)[(A xi, xi) - (alpha, xi)] rowwise; alpha is the diagonal of A."""
    a = spec.drift_matrix
    s = states.astype(float)
    quad = np.einsum("ij,ij->i", s @ a, s)
    lin = s @ np.diag(a)
    return 0.5 * (quad - lin)


def gibbs_measure(spec: ChainSpec, cap: int = DEFAULT_STATE_CAP) -> GibbsDistribution:
    """Closed-form reversible measure for symmetric A = A_b - A_d.

    Probabilities are proportional to exp((1/2)[(A xi, xi) - (alpha, xi)]);
    the log partition value is computed with the usual max-shift so large
    exponents cannot overflow.

    This is the chain's stationary distribution whenever the death matrix
    has a zero diagonal (downward rates then carry no self-term, and the
    up/down asymmetry at a vertex is exactly A's diagonal).  For a death
    diagonal delta != 0 the stationary law is this measure tilted by
    exp(-(delta, xi)); use stationary_solve for the general case.
    """
    _require_symmetric_drift(spec)
    states = enumerate_states(spec, cap)
    energy = gibbs_exponent(spec, states)
    log_z = float(logsumexp(energy))
    probs = np.exp(energy - log_z)
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-12:
        raise NumericError(
            f"gibbs probabilities sum to {total!r}; numeric trouble"
        )
    probs.setflags(write=False)
    return GibbsDistribution(probabilities=probs, log_partition=log_z)


def check_detailed_balance(spec: ChainSpec, cap: int = DEFAULT_STATE_CAP) -> float:
    """Max residual of the pairwise balance identities of the Gibbs law.

    Checks exp((A xi)_x) mu(xi) = mu(xi + e_x) over every configuration and
    vertex with xi_x < r, and cross-checks the equivalent two-sided form
    exp((A_b xi)_x) mu(xi) = exp((A_d xi)_x) mu(xi + e_x).
    """
    a = _require_symmetric_drift(spec)
    states = enumerate_states(spec, cap)
    mu = gibbs_measure(spec, cap).probabilities
    base = spec.num_spin_values
    worst = 0.0
    s = states.astype(float)
    for x in range(spec.num_vertices):
        stride = base**x
        up = np.flatnonzero(states[:, x] < spec.r)
        j = up + stride
        one_sided = np.exp(s[up] @ a[x]) * mu[up] - mu[j]
        two_sided = np.exp(s[up] @ spec.birth_matrix[x]) * mu[up] - np.exp(
            s[up] @ spec.death_matrix[x]
        ) * mu[j]
        worst = max(
            worst,
            float(np.abs(one_sided).max(initial=0.0)),
            float(np.abs(two_sided).max(initial=0.0)),
        )
    return worst
