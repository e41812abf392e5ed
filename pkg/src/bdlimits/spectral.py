"""Symmetric eigenvalue machinery and positive-recurrence classifiers.

For interaction matrices of the form A = alpha*E + beta*adjacency the
positive definiteness of -A decides whether the limit diffusion has a
stationary law.  Star and path graphs admit closed-form spectra; constant
degree graphs have an if-and-only-if Gershgorin criterion; everything else
falls back to the numeric eigensolver with diagonal dominance as the
recorded sufficient bound.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InconclusiveSpectrumError,
    NotSymmetricError,
    NumericError,
    ValidationError,
)
from .graphs import Graph, alpha_beta_matrix

PD_TOLERANCE = 1e-10

SYMMETRY_TOLERANCE = 1e-12

# past this size a non-symmetric spectrum is not certified here
GENERAL_SPECTRUM_DIM_CAP = 500


@functools.lru_cache(maxsize=None)
def _round_robin_pairs(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Tournament schedule: n-1 (or n) rounds of disjoint index pairs covering
    every unordered pair exactly once."""
    players = list(range(n))
    if n % 2:
        players.append(-1)  # bye
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        left = [players[i] for i in range(m // 2)]
        right = [players[m - 1 - i] for i in range(m // 2)]
        ps, qs = [], []
        for p, q in zip(left, right):
            if p < 0 or q < 0:
                continue
            ps.append(min(p, q))
            qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def eigen_sym(matrix, tol: float = 1e-12, max_sweeps: int = 30) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending, by Jacobi rotation sweeps.

    One sweep visits every off-diagonal pair once, in round-robin order so
    the disjoint rotations of a round apply as one vectorized orthogonal
    transform; pivots too small to affect the off-diagonal norm are left
    alone.  Sweeps stop once the off-diagonal Frobenius norm is below tol
    times the matrix norm.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    if np.abs(m - m.T).max(initial=0.0) > SYMMETRY_TOLERANCE:
        raise NotSymmetricError(
            f"matrix is not symmetric within {SYMMETRY_TOLERANCE}"
        )
    n = m.shape[0]
    if n == 1:
        return m.diagonal().copy()
    a = 0.5 * (m + m.T)
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return np.zeros(n)
    skip = tol * norm / (2.0 * n)
    rounds = _round_robin_pairs(n)
    with np.errstate(over="ignore"):
        for sweep in range(max_sweeps):
            strict = a.copy()
            np.fill_diagonal(strict, 0.0)
            off = float(np.linalg.norm(strict))
            if off <= tol * norm:
                return np.sort(a.diagonal().copy())
            # generous threshold for early sweeps: rotating near-zero pivots
            # before the large ones have been annihilated is wasted work
            thresh = max(0.2 * off * off / (n * n), skip) if sweep < 3 else skip
            for ps, qs in rounds:
                apq = a[ps, qs]
                live = np.abs(apq) > thresh
                if not live.any():
                    continue
                app = a[ps, ps]
                aqq = a[qs, qs]
                theta = (aqq - app) / np.where(live, 2.0 * apq, 1.0)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t[theta == 0.0] = 1.0
                t[~live] = 0.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, ps]
                col_q = a[:, qs]
                a[:, ps] = c * col_p - s * col_q
                a[:, qs] = s * col_p + c * col_q
                row_p = a[ps, :]
                row_q = a[qs, :]
                a[ps, :] = c[:, None] * row_p - s[:, None] * row_q
                a[qs, :] = s[:, None] * row_p + c[:, None] * row_q
                # the 2x2 blocks transform exactly; pin them against roundoff
                a[ps, ps] = app - t * apq
                a[qs, qs] = aqq + t * apq
                unrotated = np.where(live, 0.0, apq)
                a[ps, qs] = unrotated
                a[qs, ps] = unrotated
    raise NumericError(f"jacobi sweeps did not converge in {max_sweeps} passes")


def matrix_exp(matrix, t: float = 1.0) -> np.ndarray:
    """e^{Mt} by scaling and squaring of the truncated power series.

    The argument is halved until its 1-norm is at most 1/2, the series is
    summed to machine-level tail size, and the result squared back up.
    exp of the zero matrix is exactly the identity.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    b = m * float(t)
    n = b.shape[0]
    norm1 = float(np.abs(b).sum(axis=0).max(initial=0.0))
    squarings = 0 if norm1 <= 0.5 else int(math.ceil(math.log2(norm1 / 0.5)))
    x = b / (2.0**squarings)
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 60):
        term = term @ x / k
        result = result + term
        if float(np.abs(term).max()) <= 1e-18 * float(np.abs(result).max()):
            break
    else:
        raise NumericError("matrix exponential series did not converge")
    for _ in range(squarings):
        result = result @ result
    return result


@dataclass(frozen=True, eq=False)
class SpectralReport:
    """Eigenvalues of the negated interaction matrix and the PD verdict.

    positive_definite means the smallest eigenvalue clears PD_TOLERANCE;
    boundary marks verdicts within tolerance of zero (reported as not PD
    because the recurrence criteria are strict inequalities).  method
    records which route produced the eigenvalues.
    """

    eigenvalues: np.ndarray
    positive_definite: bool
    method: str
    boundary: bool = False

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])


def _report(eigenvalues: np.ndarray, method: str) -> SpectralReport:
    eigs = np.sort(np.asarray(eigenvalues, dtype=float))
    smallest = float(eigs[0])
    return SpectralReport(
        eigenvalues=eigs,
        positive_definite=smallest > PD_TOLERANCE,
        method=method,
        boundary=abs(smallest) <= PD_TOLERANCE,
    )


def star_spectrum(m: int, alpha: float, beta: float) -> SpectralReport:
    """Spectrum of -A for the star with m >= 2 leaves, A = alpha*E + beta*adj.

    -alpha with multiplicity m-1 plus the pair -alpha -+ beta*sqrt(m); the
    matrix is positive definite iff alpha < 0 and alpha + |beta|*sqrt(m) < 0.
    """
    if m < 2:
        raise ValidationError(f"star criterion needs m >= 2 leaves, got {m}")
    root = math.sqrt(m)
    eigs = np.concatenate(
        [
            [-alpha - beta * root],
            np.full(m - 1, -alpha, dtype=float),
            [-alpha + beta * root],
        ]
    )
    return _report(eigs, "closed_form_star")


def path_spectrum(n: int, alpha: float, beta: float) -> SpectralReport:
    """Spectrum of -A for the path on n+2 vertices (n >= 0 interior steps).

    -A is tridiagonal Toeplitz with diagonal -alpha and off-diagonal -beta,
    so the eigenvalues are -alpha - 2 beta cos(k pi / (n+3)), k = 1..n+2,
    all simple.  Positive definite iff alpha < 0 and
    alpha + 2|beta|cos(pi/(n+3)) < 0.
    """
    if n < 0:
        raise ValidationError(f"path parameter must be >= 0, got {n}")
    k = np.arange(1, n + 3, dtype=float)
    eigs = -alpha - 2.0 * beta * np.cos(k * math.pi / (n + 3))
    return _report(eigs, "closed_form_path")


def _degree_family(g: Graph) -> tuple[str, int]:
    """Structural family from the degree multiset: star, path, constant, general."""
    degs = np.sort(g.degrees)
    n = g.num_vertices
    if n >= 3 and degs[-1] == n - 1 and np.all(degs[:-1] == 1):
        return "star", int(degs[-1])
    ones = int((degs == 1).sum())
    twos = int((degs == 2).sum())
    if n >= 2 and ones == 2 and ones + twos == n:
        return "path", n - 2
    if degs[0] == degs[-1]:
        return "constant", int(degs[0])
    return "general", int(degs[-1])


def classify_pd(g: Graph, alpha: float, beta: float) -> SpectralReport:
    """PD verdict for -A, A = alpha*E + beta*adjacency, with auto dispatch.

    Stars and paths use their closed-form spectra; constant-degree graphs
    report numeric eigenvalues under the sharp Gershgorin criterion tag;
    other graphs get numeric eigenvalues, tagged gershgorin_bound when the
    diagonal-dominance sufficient condition already certifies PD.
    """
    family, value = _degree_family(g)
    if family == "star":
        return star_spectrum(value, alpha, beta)
    if family == "path":
        return path_spectrum(value, alpha, beta)
    neg_a = -alpha_beta_matrix(g, alpha, beta)
    eigs = eigen_sym(neg_a)
    if family == "constant":
        method = "gershgorin_bound"
    else:
        max_degree = value
        dominant = alpha < 0 and alpha + abs(beta) * max_degree < 0
        method = "gershgorin_bound" if dominant else "numeric"
    return _report(eigs, method)


def numeric_report(matrix) -> SpectralReport:
    """SpectralReport for an explicitly given symmetric matrix (numeric route)."""
    return _report(eigen_sym(matrix), "numeric")


def is_hurwitz(a, tol: float = PD_TOLERANCE) -> bool:
    """True iff every eigenvalue of A has real part below -tol.

    Symmetric matrices go through the Jacobi eigensolver.  Otherwise the
    symmetric part provides a certified sufficient check (its largest
    eigenvalue bounds every real part from above); if that is inconclusive
    the full spectrum comes from the real Schur iteration, with a dimension
    cap past which no verdict is attempted.
    """
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {m.shape}")
    if np.abs(m - m.T).max(initial=0.0) <= SYMMETRY_TOLERANCE:
        return float(eigen_sym(m)[-1]) < -tol
    sym_part = 0.5 * (m + m.T)
    if float(eigen_sym(sym_part)[-1]) < -tol:
        return True
    if m.shape[0] > GENERAL_SPECTRUM_DIM_CAP:
        raise InconclusiveSpectrumError(
            f"non-symmetric spectrum beyond dimension "
            f"{GENERAL_SPECTRUM_DIM_CAP} is not certified"
        )
    max_real = float(np.linalg.eigvals(m).real.max())
    return max_real < -tol
