import json

import pytest

from pd7kit import ohyama
from pd7kit.cli import complex_arg, dispatch, dumps, to_jsonable
from pd7kit.config import Config, load_config, parse_config_text


@pytest.fixture(autouse=True)
def restore_default_table():
    saved = ohyama._DEFAULT
    yield
    ohyama._DEFAULT = saved


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- configuration ----------------------------------------------------------

def test_config_defaults_and_validation():
    cfg = Config()
    assert cfg.output_format == "json" and cfg.parallelism == 1
    with pytest.raises(ValueError):
        Config(quadrature_tol=0)
    with pytest.raises(ValueError):
        Config(output_format="xml")
    with pytest.raises(ValueError):
        Config(parallelism=0)


def test_parse_config_text():
    vals = parse_config_text("# tolerances\nquad-tol = 1e-10\nnewton_tol=1e-9  # tighter\n\nparallelism = 2\n"
                             .replace("quad-tol", "quadrature-tol"))
    assert vals == {"quadrature_tol": 1e-10, "newton_tol": 1e-9, "parallelism": 2}
    with pytest.raises(ValueError):
        parse_config_text("colour = blue")
    with pytest.raises(ValueError):
        parse_config_text("just words")


def test_overrides_win(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("output_format = pretty\ntrace_tol = 1e-7\n")
    cfg = load_config(str(path), trace_tol=1e-5, newton_tol=None)
    assert cfg.output_format == "pretty" and cfg.trace_tol == 1e-5
    assert cfg.newton_tol == Config().newton_tol


# -- helpers ----------------------------------------------------------------

def test_complex_arg_and_jsonable():
    assert complex_arg("0.1") == 0.1 + 0j
    assert complex_arg("-0.15,0.02") == complex(-0.15, 0.02)
    assert to_jsonable({"a": 1 + 2j, "b": float("nan"), "c": [float("inf")]}) == \
        {"a": {"re": 1.0, "im": 2.0}, "b": "nan", "c": ["inf"]}
    assert json.loads(dumps({"x": 1}))["schema"] == "pd7kit/1"


# -- subcommands ------------------------------------------------------------

def test_ohyama_json(capsys):
    code, out, _ = run(capsys, "ohyama", "--n", "3")
    data = json.loads(out)
    assert code == 0 and data["degree"] == 9 and data["valuation"] == 5
    assert {(r["exp"], r["num"]) for r in data["coefficients"]} == {(5, "5"), (7, "-4"), (9, "1")}


def test_ohyama_pretty(capsys):
    code, out, _ = run(capsys, "ohyama", "--n", "2", "--emit", "pretty")
    assert code == 0 and out.startswith("R_2(zeta) = ")


def test_eval_x_and_y(capsys):
    code, out, _ = run(capsys, "eval", "--n", "0", "--x", "8")
    assert code == 0 and json.loads(out)["u"]["re"] == pytest.approx(1.0)
    code, out, _ = run(capsys, "eval", "--n", "4", "--y", "0.3", "--z", "0.1,0.1")
    data = json.loads(out)
    assert code == 0 and set(data) >= {"W", "dW_dz", "d2W_dz2"}


def test_pole_hit_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--n", "2", "--x", "0")
    assert code == 1 and "PoleHit" in err


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--n", "2")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "boutroux", "--y", "a,b,c")[0] == 2


def test_bad_config_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("unknown_key = 1\n")
    code, _, err = run(capsys, "equilibrium", "--y", "0.5", "--config", str(path))
    assert code == 2 and "configuration error" in err


def test_boutroux_deterministic(capsys):
    a = run(capsys, "boutroux", "--y", "0.15")[1]
    b = run(capsys, "boutroux", "--y", "0.15")[1]
    assert a == b
    data = json.loads(a)
    assert data["c1"]["re"] == pytest.approx(-0.120574005651317, abs=1e-12)


def test_equilibrium_and_invariants(capsys):
    code, out, _ = run(capsys, "equilibrium", "--y", "0.6")
    assert code == 0 and json.loads(out)["U"]["re"] == pytest.approx(0.24276835584707113)
    code, out, _ = run(capsys, "invariants", "--y", "0.5", "--E", "3")
    assert code == 0 and json.loads(out)["g2"]["re"] == pytest.approx(67.0)


def test_grid_csv(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "grid", "--n", "3", "--res", "4,3", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0].split(",")[:2] == ["Y_re", "Y_im"] and len(lines) == 13


def test_signchart_and_levelset(capsys):
    code, out, _ = run(capsys, "levelset", "--y", "0.15")
    assert code == 0 and json.loads(out)["case"] == "case-i"
    code, out, _ = run(capsys, "signchart", "--y", "0.15", "--res", "9,7")
    sign = json.loads(out)["sign"]
    assert code == 0 and len(sign) == 7 and len(sign[0]) == 9


def test_toy_rhp(capsys):
    code, out, _ = run(capsys, "toy-rhp", "--z", "1,1")
    data = json.loads(out)
    assert code == 0 and data["N1"][0][1]["im"] == pytest.approx(0.5)


def test_cache_file_written(capsys, tmp_path):
    path = tmp_path / "cache.json"
    code, _, _ = run(capsys, "ohyama", "--n", "6", "--cache", str(path))
    assert code == 0 and json.loads(path.read_text())["entries"]["6"]


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", "12")
    assert code == 0 and "criterion 12 PASS" in out
