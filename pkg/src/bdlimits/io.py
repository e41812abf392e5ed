"""CSV output and flat config-file input for the CLI and experiments.

All writers emit '\n' line endings and repr-formatted floats, so a rerun
with the same inputs produces byte-identical files.

Config files are flat key=value text.  The first meaningful line must be
the version header ``schema=1``; blank lines and '#' comments are ignored;
keys may not repeat.  The documented schema lives in docs/config-schema.md.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .chain import ChainSpec, Trajectory, enumerate_states
from .errors import ConfigError
from .experiments import ConvergenceTable
from .graphs import Graph, alpha_beta_matrix, load_graph, validate_interaction
from .paths import SamplePath
from .spectral import SpectralReport

SCHEMA_VERSION = 1


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_trajectory_csv(path, trajectory: Trajectory) -> None:
    """Event list as 't,vertex,sign' rows."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["t", "vertex", "sign"])
        for t, v, s in zip(trajectory.times, trajectory.vertices, trajectory.signs):
            w.writerow([_fmt(t), _fmt(v), _fmt(s)])


def write_distribution_csv(path, spec: ChainSpec, probabilities) -> None:
    """'state_index,spin_0..spin_{n-1},probability' rows in canonical order."""
    states = enumerate_states(spec)
    probs = np.asarray(probabilities, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(
            ["state_index"]
            + [f"spin_{x}" for x in range(spec.num_vertices)]
            + ["probability"]
        )
        for i in range(states.shape[0]):
            w.writerow([_fmt(i)] + [_fmt(s) for s in states[i]] + [_fmt(probs[i])])


def write_path_csv(path, sample_path: SamplePath) -> None:
    """'t,x_0..x_{d-1}' rows, one per grid time."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["t"] + [f"x_{j}" for j in range(sample_path.dimension)])
        for t, row in zip(sample_path.times, sample_path.states):
            w.writerow([_fmt(t)] + [_fmt(v) for v in row])


def write_gaussian_csv(path, mean, covariance) -> None:
    """Mean then row-major covariance rows, tagged in the first column."""
    m = np.asarray(mean, dtype=float)
    c = np.asarray(covariance, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["component"] + [f"x_{j}" for j in range(m.shape[0])])
        w.writerow(["mean"] + [_fmt(v) for v in m])
        for i in range(c.shape[0]):
            w.writerow([f"cov_{i}"] + [_fmt(v) for v in c[i]])


def write_spectral_report_csv(path, report: SpectralReport) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["method", "pd", "min_eig", "max_eig"])
        w.writerow(
            [
                report.method,
                _fmt(report.positive_definite),
                _fmt(report.min_eigenvalue),
                _fmt(report.max_eigenvalue),
            ]
        )


def write_eigenvalues_csv(path, eigenvalues) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(["eigenvalue"])
        for v in np.asarray(eigenvalues, dtype=float):
            w.writerow([_fmt(v)])


def write_table_csv(path, table: ConvergenceTable) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(
            ["level", "epsilon", "statistic", "empirical", "limit", "abs_error", "mc_stderr"]
        )
        for row in table.rows:
            w.writerow(
                [
                    _fmt(row.level),
                    _fmt(row.epsilon),
                    row.statistic,
                    _fmt(row.empirical),
                    _fmt(row.limit),
                    _fmt(row.abs_error),
                    _fmt(row.mc_stderr),
                ]
            )


def write_scalar_csv(path, name: str, value: float) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow([name])
        w.writerow([_fmt(value)])


def read_config(path) -> dict[str, str]:
    """Parse a flat key=value config file with the schema=1 header."""
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    entries: dict[str, str] = {}
    saw_header = False
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not saw_header:
            if key != "schema" or value != str(SCHEMA_VERSION):
                raise ConfigError(
                    f"line {lineno}: first entry must be schema={SCHEMA_VERSION}"
                )
            saw_header = True
            continue
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value
    if not saw_header:
        raise ConfigError(f"missing schema={SCHEMA_VERSION} header in {path}")
    return entries


class ConfigView:
    """Typed accessors over one config dict; tracks which keys were read."""

    def __init__(self, entries: dict[str, str], base_dir: str = "."):
        self.entries = dict(entries)
        self.base_dir = base_dir
        self.used: set[str] = set()

    def _raw(self, key: str, default=None, required: bool = False) -> str | None:
        if key in self.entries:
            self.used.add(key)
            return self.entries[key]
        if required:
            raise ConfigError(f"missing required field {key!r}")
        return default

    def get_str(self, key, default=None, required=False):
        return self._raw(key, default, required)

    def get_int(self, key, default=None, required=False):
        raw = self._raw(key, None, required)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"field {key!r} must be an integer, got {raw!r}") from exc

    def get_float(self, key, default=None, required=False):
        raw = self._raw(key, None, required)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"field {key!r} must be a number, got {raw!r}") from exc

    def get_vector(self, key, default=None, required=False) -> np.ndarray | None:
        raw = self._raw(key, None, required)
        if raw is None:
            return default
        try:
            return np.array([float(tok) for tok in raw.split(",") if tok.strip() != ""])
        except ValueError as exc:
            raise ConfigError(
                f"field {key!r} must be comma-separated numbers, got {raw!r}"
            ) from exc

    def get_path(self, key, default=None, required=False):
        raw = self._raw(key, default, required)
        if raw is None:
            return None
        return raw if os.path.isabs(raw) else os.path.join(self.base_dir, raw)

    def reject_unknown(self) -> None:
        unknown = set(self.entries) - self.used
        if unknown:
            raise ConfigError(f"unknown field(s): {', '.join(sorted(unknown))}")


def parse_matrix(view: ConfigView, key: str, graph: Graph) -> np.ndarray:
    """Interaction matrix from a config field.

    Accepted forms: 'zero', 'alpha_beta:a,b' for a*E + b*adjacency,
    'diag:v0,...,v{n-1}', and 'dense:r00,r01;r10,r11' with ';' between rows.
    """
    raw = view.get_str(key, required=True)
    n = graph.num_vertices
    kind, _, rest = raw.partition(":")
    kind = kind.strip()
    try:
        if kind == "zero":
            matrix = np.zeros((n, n))
        elif kind == "alpha_beta":
            alpha, beta = (float(tok) for tok in rest.split(","))
            matrix = alpha_beta_matrix(graph, alpha, beta)
        elif kind == "diag":
            vals = [float(tok) for tok in rest.split(",")]
            if len(vals) != n:
                raise ConfigError(
                    f"field {key!r}: diag needs {n} entries, got {len(vals)}"
                )
            matrix = np.diag(vals)
        elif kind == "dense":
            rows = [
                [float(tok) for tok in row.split(",")] for row in rest.split(";")
            ]
            matrix = np.array(rows, dtype=float)
        else:
            raise ConfigError(
                f"field {key!r}: unknown matrix form {kind!r} "
                "(expected zero, alpha_beta, diag, or dense)"
            )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"field {key!r}: could not parse {raw!r}") from exc
    return validate_interaction(graph, matrix)


def load_chain_spec(view: ConfigView) -> ChainSpec:
    """ChainSpec from the fields graph, ab, ad, l, r."""
    graph = load_graph(view.get_path("graph", required=True))
    ab = parse_matrix(view, "ab", graph)
    ad = parse_matrix(view, "ad", graph)
    l = view.get_int("l", required=True)
    r = view.get_int("r", required=True)
    return ChainSpec(graph=graph, birth_matrix=ab, death_matrix=ad, l=l, r=r)
