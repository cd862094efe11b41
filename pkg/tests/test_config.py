import json

import pytest

from diracl2.config import (
    RunConfig,
    apply_dotted,
    load_config,
    parse_domain,
    parse_grid,
    parse_rhs,
    read_flat_file,
    resolve_run_config,
)
from diracl2.errors import ConfigError


def test_flag_grammar():
    assert parse_grid("129,129") == (129, 129)
    assert parse_domain("-1:1, -2.5:-0.5") == ((-1.0, 1.0), (-2.5, -0.5))
    assert parse_rhs("bump:e12") == ("bump", "e12")
    assert parse_rhs("zero") == ("zero", "e0")
    for bad in ("1,x",):
        with pytest.raises(ConfigError):
            parse_grid(bad)
    with pytest.raises(ConfigError):
        parse_domain("1-2")
    with pytest.raises(ConfigError):
        parse_rhs("gauss:e1")


def test_flat_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# comment\nn = 2\n\nsolver.bound_slack=0.01  # inline\nmax-iter=50\n")
    assert read_flat_file(path) == {"n": "2", "solver.bound_slack": "0.01", "max_iter": "50"}
    path.write_text("no equals sign\n")
    with pytest.raises(ConfigError):
        read_flat_file(path)


def test_apply_dotted():
    settings = load_config()
    apply_dotted(settings, "solver.bound_slack", "0.01")
    assert settings["solver"]["bound_slack"] == 0.01
    apply_dotted(settings, "sweep.levels", "4")
    assert settings["sweep"]["levels"] == 4
    with pytest.raises(ConfigError):
        apply_dotted(settings, "solver.nope", "1")
    with pytest.raises(ConfigError):
        apply_dotted(settings, "solver.max_iter", "many")
    with pytest.raises(ConfigError):
        apply_dotted(settings, "grid.desk_caps", "1")


def test_defaults_are_filled_and_capped():
    cfg = RunConfig.from_mapping("solve", {"n": 3})
    assert cfg.grid == (17, 17, 17, 17)
    assert cfg.domain == ((-1.0, 1.0),) * 4
    assert cfg.tol == 1e-10


@pytest.mark.parametrize("command,values", [
    ("verify", {"n": 99}),
    ("verify", {"n": 7}),
    ("verify", {"n": 2, "trials": 0}),
    ("solve", {"n": 4}),
    ("solve", {"n": 1, "grid": "9"}),
    ("solve", {"n": 1, "grid": "2,9"}),
    ("solve", {"n": 2, "grid": "65,65,65"}),
    ("solve", {"n": 1, "domain": "1:-1,0:1"}),
    ("solve", {"n": 1, "margin": 0.5}),
    ("solve", {"n": 1, "tol": 0}),
    ("solve", {"n": 1, "rhs": "spike"}),
    ("solve", {"n": 1, "rhs_center": "0"}),
    ("sweep", {"n": 1, "levels": 1}),
    ("sweep", {"n": 1, "radii": "1,-2"}),
    ("plot", {"n": 1}),
])
def test_validation(command, values):
    with pytest.raises(ConfigError):
        RunConfig.from_mapping(command, values)


def test_merge_order(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("n=2\nweight=aniso_quadratic\nsolver.bound_slack=0.5\n")
    cfg = resolve_run_config("solve", {"n": 1, "weight": None}, str(path))
    assert cfg.n == 1
    assert cfg.weight == "aniso_quadratic"
    assert cfg.settings["solver"]["bound_slack"] == 0.5
    json.dumps(cfg.to_dict())
    path.write_text("colour=blue\n")
    with pytest.raises(ConfigError):
        resolve_run_config("solve", {}, str(path))


def test_missing_config_file_is_an_io_error(tmp_path):
    with pytest.raises(OSError):
        resolve_run_config("solve", {}, str(tmp_path / "absent.cfg"))
