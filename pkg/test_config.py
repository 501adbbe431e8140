import json
from fractions import Fraction

import pytest

from config import Config, load_config
from errors import (
    BudgetExceeded, CapExceeded, ConfigError, DomainTooLarge, EvasiLabError, NoPrimeInWindow,
    TooLarge,
)


def test_defaults_validate():
    cfg = load_config(environ={})
    assert cfg == Config()
    assert cfg.seed == 20240601
    assert cfg.pqr_constant == Fraction(1, 32)


def test_dotenv_file_then_environment(tmp_path):
    path = tmp_path / "evlab.env"
    path.write_text("EVLAB_SEED=7\nEVLAB_DTC_BUDGET=1_000\nmax_orbits=30\n")
    cfg = load_config(str(path), environ={"EVLAB_SEED": "99"})
    assert cfg.seed == 99
    assert cfg.dtc_budget == 1000
    assert cfg.max_orbits == 30


def test_json_file(tmp_path):
    path = tmp_path / "evlab.json"
    path.write_text(json.dumps({"output_format": "tsv", "pqr_constant": "1/16"}))
    cfg = load_config(str(path), environ={})
    assert cfg.output_format == "tsv"
    assert cfg.pqr_constant == Fraction(1, 16)


@pytest.mark.parametrize("environ", [
    {"EVLAB_DTC_BUDGET": "0"},
    {"EVLAB_OUTPUT_FORMAT": "yaml"},
    {"EVLAB_MEMO_KEY": "hash"},
    {"EVLAB_SEED": "seven"},
])
def test_bad_values_raise(environ):
    with pytest.raises(ConfigError):
        load_config(environ=environ)


def test_unknown_key_and_missing_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"colour": "red"}')
    with pytest.raises(ConfigError):
        load_config(str(path), environ={})
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.env"), environ={})


def test_to_dict_is_json_ready():
    data = Config().to_dict()
    assert data["erh_eps"] == "1/20"
    json.dumps(data)


def test_error_hierarchy():
    assert issubclass(DomainTooLarge, TooLarge)
    assert issubclass(CapExceeded, EvasiLabError)
    e = BudgetExceeded(3, 6)
    assert (e.lo, e.hi) == (3, 6)
    assert "[3, 6]" in str(e)
    w = NoPrimeInWindow(10, 20)
    assert (w.lo, w.hi) == (10, 20)


def test_ark_vertex_count_from_environment():
    assert load_config(environ={"EVLAB_ARK_N": "5"}).ark_n == 5
    with pytest.raises(ConfigError):
        load_config(environ={"EVLAB_ARK_N": "0"})
