import os

import numpy as np
import pytest

import bdlimits as bd
from bdlimits import io as bio
from bdlimits.cli import cli_main

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "demos", "configs")


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_read_config_happy_path(tmp_path):
    path = write(tmp_path, "a.cfg", "# hi\nschema=1\nfoo = 3\nbar = x,y\n")
    assert bio.read_config(path) == {"foo": "3", "bar": "x,y"}


def test_read_config_requires_schema_header(tmp_path):
    with pytest.raises(bd.ConfigError):
        bio.read_config(write(tmp_path, "a.cfg", "foo = 3\n"))
    with pytest.raises(bd.ConfigError):
        bio.read_config(write(tmp_path, "b.cfg", "schema=2\nfoo=3\n"))
    with pytest.raises(bd.ConfigError):
        bio.read_config(write(tmp_path, "c.cfg", "# nothing\n"))


def test_read_config_rejects_duplicates_and_garbage(tmp_path):
    with pytest.raises(bd.ConfigError, match="duplicate"):
        bio.read_config(write(tmp_path, "a.cfg", "schema=1\nx=1\nx=2\n"))
    with pytest.raises(bd.ConfigError, match="key=value"):
        bio.read_config(write(tmp_path, "b.cfg", "schema=1\nnonsense\n"))
    with pytest.raises(bd.ConfigError, match="not found"):
        bio.read_config(str(tmp_path / "missing.cfg"))


def test_config_view_typing_and_unknown_fields():
    view = bio.ConfigView({"n": "3", "x": "0.5", "v": "1,2,3", "junk": "1"})
    assert view.get_int("n") == 3
    assert view.get_float("x") == 0.5
    assert np.array_equal(view.get_vector("v"), [1.0, 2.0, 3.0])
    with pytest.raises(bd.ConfigError, match="junk"):
        view.reject_unknown()
    with pytest.raises(bd.ConfigError, match="missing"):
        view.get_str("absent", required=True)
    bad = bio.ConfigView({"n": "three"})
    with pytest.raises(bd.ConfigError, match="integer"):
        bad.get_int("n")


def test_parse_matrix_forms():
    g = bd.path_graph(2)
    view = bio.ConfigView(
        {
            "z": "zero",
            "abm": "alpha_beta:-2,0.5",
            "d": "diag:1,2",
            "dense": "dense:0,0.3;0.3,0",
            "bad": "sparse:1",
            "badpattern": "dense:0,0;0,0;0,0",
        }
    )
    assert np.array_equal(bio.parse_matrix(view, "z", g), np.zeros((2, 2)))
    m = bio.parse_matrix(view, "abm", g)
    assert m[0, 0] == -2.0 and m[0, 1] == 0.5
    assert np.array_equal(np.diag(bio.parse_matrix(view, "d", g)), [1.0, 2.0])
    assert bio.parse_matrix(view, "dense", g)[1, 0] == 0.3
    with pytest.raises(bd.ConfigError, match="unknown matrix form"):
        bio.parse_matrix(view, "bad", g)
    with pytest.raises(bd.DimensionMismatchError):
        bio.parse_matrix(view, "badpattern", g)


def test_csv_float_formatting_is_repr(tmp_path):
    out = tmp_path / "g.csv"
    bio.write_gaussian_csv(out, [1 / 3], [[2 / 3]])
    text = out.read_text()
    assert repr(1 / 3) in text
    assert text.endswith("\n") and "\r" not in text


def run_cli(args):
    return cli_main([str(a) for a in args])


def test_classify_star_summary(tmp_path, capsys):
    code = run_cli(
        ["classify", "--graph", os.path.join(CONFIG_DIR, "star5.g"),
         "--alpha", "-3", "--beta", "1", "--out", tmp_path / "out"]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "classify ok pd=true min_eig=1.0 method=closed_form_star" in captured.out
    report = (tmp_path / "out" / "spectral_report.csv").read_text().splitlines()
    assert report[0] == "method,pd,min_eig,max_eig"
    assert report[1].startswith("closed_form_star,true,1.0,")
    eigs = (tmp_path / "out" / "eigenvalues.csv").read_text().splitlines()
    assert eigs == ["eigenvalue", "1.0", "3.0", "3.0", "3.0", "5.0"]


def test_spectrum_subcommand(tmp_path, capsys):
    code = run_cli(
        ["spectrum", "--graph", os.path.join(CONFIG_DIR, "cycle3.g"),
         "--alpha", "-3", "--beta", "1", "--out", tmp_path / "out"]
    )
    assert code == 0
    assert "spectrum ok pd=true" in capsys.readouterr().out


def test_gibbs_subcommand_two_site(tmp_path, capsys):
    code = run_cli(
        ["gibbs", "--spec", os.path.join(CONFIG_DIR, "two_site.cfg"),
         "--out", tmp_path / "out"]
    )
    assert code == 0
    assert "gibbs ok states=4" in capsys.readouterr().out
    lines = (tmp_path / "out" / "gibbs.csv").read_text().splitlines()
    assert lines[0] == "state_index,spin_0,spin_1,probability"
    assert len(lines) == 5
    probs = [float(line.split(",")[-1]) for line in lines[1:]]
    assert abs(sum(probs) - 1.0) < 1e-12


def test_stationary_and_balance_subcommands(tmp_path, capsys):
    spec_path = os.path.join(CONFIG_DIR, "two_site.cfg")
    assert run_cli(["stationary", "--config", spec_path, "--out", tmp_path / "s"]) == 0
    assert run_cli(["balance-check", "--config", spec_path, "--out", tmp_path / "b"]) == 0
    out = capsys.readouterr().out
    assert "stationary ok states=4" in out
    assert "balance-check ok residual=" in out
    assert (tmp_path / "s" / "stationary.csv").exists()
    assert (tmp_path / "b" / "balance.csv").exists()


def test_missing_config_exits_one(capsys):
    assert run_cli(["gibbs", "--config", "/nonexistent/x.cfg"]) == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exits_one(capsys):
    assert run_cli(["no-such-command"]) == 1
    assert run_cli([]) == 1


def test_seed_must_be_unsigned_64_bit(capsys):
    cfg = os.path.join(CONFIG_DIR, "sim_two_site.cfg")
    assert run_cli(["simulate", "--config", cfg, "--seed", "-1"]) == 1
    assert run_cli(["simulate", "--config", cfg, "--seed", str(2**64)]) == 1
    err = capsys.readouterr().err
    assert "seed" in err


def test_unknown_config_field_exits_one(tmp_path, capsys):
    cfg = write(
        tmp_path, "bad.cfg",
        "schema=1\ngraph = g.g\nab = zero\nad = zero\nl = 0\nr = 1\nwhoops = 1\n",
    )
    (tmp_path / "g.g").write_text("n 1\n")
    assert run_cli(["gibbs", "--config", cfg]) == 1
    assert "whoops" in capsys.readouterr().err


def test_asymmetric_gibbs_exits_one(tmp_path, capsys):
    cfg = write(
        tmp_path, "asym.cfg",
        "schema=1\ngraph = p2.g\nab = dense:0,0.4;0.1,0\nad = zero\nl = 0\nr = 1\n",
    )
    (tmp_path / "p2.g").write_text("n 2\ne 0 1\n")
    assert run_cli(["gibbs", "--config", cfg]) == 1


def test_rate_overflow_exits_two(tmp_path, capsys):
    cfg = write(
        tmp_path, "hot.cfg",
        "schema=1\ngraph = s.g\nab = diag:800\nad = zero\nl = 0\nr = 2\n"
        "t_end = 1.0\ninitial = 1\nseed = 0\n",
    )
    (tmp_path / "s.g").write_text("n 1\n")
    assert run_cli(["simulate", "--config", cfg]) == 2
    assert "numeric failure" in capsys.readouterr().err


def test_simulate_deterministic_csv(tmp_path, capsys):
    cfg = os.path.join(CONFIG_DIR, "sim_two_site.cfg")
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "a"]) == 0
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "b"]) == 0
    a = (tmp_path / "a" / "trajectory.csv").read_bytes()
    b = (tmp_path / "b" / "trajectory.csv").read_bytes()
    assert a == b
    assert a.splitlines()[0] == b"t,vertex,sign"


def test_simulate_seed_flag_overrides_config(tmp_path, capsys):
    cfg = os.path.join(CONFIG_DIR, "sim_two_site.cfg")
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "a",
                    "--seed", "99"]) == 0
    assert run_cli(["simulate", "--config", cfg, "--out", tmp_path / "b"]) == 0
    assert (tmp_path / "a" / "trajectory.csv").read_bytes() != (
        tmp_path / "b" / "trajectory.csv"
    ).read_bytes()
    out = capsys.readouterr().out
    assert "seed=99" in out and "seed=7" in out


def test_experiment_subcommands_run(tmp_path, capsys):
    assert run_cli(
        ["exp-fluid", "--config", os.path.join(CONFIG_DIR, "fluid_small.cfg"),
         "--out", tmp_path / "f"]
    ) == 0
    assert run_cli(
        ["gen-check", "--config", os.path.join(CONFIG_DIR, "gencheck.cfg"),
         "--out", tmp_path / "g"]
    ) == 0
    out = capsys.readouterr().out
    assert "exp-fluid ok" in out and "gen-check ok" in out
    table = (tmp_path / "f" / "fluid_table.csv").read_text().splitlines()
    assert table[0] == "level,epsilon,statistic,empirical,limit,abs_error,mc_stderr"


def test_exp_diffusion_deterministic(tmp_path):
    cfg_text = (
        "schema=1\ngraph = single.g\nab = zero\nad = diag:1\nu = 1.0\nt = 0.5\n"
        "levels = 2\nreplicas = 60\nseed = 4\n"
    )
    cfg = write(tmp_path, "d.cfg", cfg_text)
    (tmp_path / "single.g").write_text("n 1\n")
    assert run_cli(["exp-diffusion", "--config", cfg, "--out", tmp_path / "a"]) == 0
    assert run_cli(["exp-diffusion", "--config", cfg, "--out", tmp_path / "b"]) == 0
    assert (tmp_path / "a" / "diffusion_table.csv").read_bytes() == (
        tmp_path / "b" / "diffusion_table.csv"
    ).read_bytes()


def test_trajectory_and_path_csv_formats(tmp_path):
    spec = bd.ChainSpec(bd.single_vertex(), [[0.0]], [[0.0]], l=0, r=1)
    traj = bd.simulate(spec, [0], 5.0, seed=1)
    bio.write_trajectory_csv(tmp_path / "t.csv", traj)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "t,vertex,sign"
    assert len(lines) == traj.num_events + 1

    path = bd.rk4_integrate([[0.0]], [[1.0]], [1.0], dt=0.25, t_end=1.0)
    bio.write_path_csv(tmp_path / "p.csv", path)
    lines = (tmp_path / "p.csv").read_text().splitlines()
    assert lines[0] == "t,x_0"
    assert len(lines) == 6


def test_scalar_and_table_csv(tmp_path):
    bio.write_scalar_csv(tmp_path / "s.csv", "max_residual", 1e-13)
    assert (tmp_path / "s.csv").read_text() == "max_residual\n1e-13\n"
    table = bd.ConvergenceTable()
    table.add(0, 0.25, "sup_error", 0.5, 0.0, 0.5, None)
    bio.write_table_csv(tmp_path / "t.csv", table)
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[1] == "0,0.25,sup_error,0.5,0.0,0.5,"
