import json
import math

import pytest

from qnbudget import (ConfigError, FreqTable, InternalSqueeze,
                      config_from_dict, config_hash, config_template,
                      config_to_dict, default_config, load_config, value_at)
from qnbudget.config import coverage_check


class TestFreqTable:
    def test_interpolates_in_log_frequency(self):
        t = FreqTable(f_hz=(10.0, 1000.0), values=(0.0, 2.0))
        assert t.at(10.0) == pytest.approx(0.0, abs=1e-15)
        assert t.at(1000.0) == pytest.approx(2.0, rel=1e-12)
        assert t.at(100.0) == pytest.approx(1.0, rel=1e-12)  # log midpoint

    def test_extrapolation_forbidden(self):
        t = FreqTable(f_hz=(10.0, 1000.0), values=(1.0, 2.0))
        with pytest.raises(ConfigError):
            t.at(5.0)
        with pytest.raises(ConfigError):
            t.at(2000.0)

    def test_validation(self):
        with pytest.raises(ConfigError):
            FreqTable(f_hz=(10.0,), values=(1.0,))
        with pytest.raises(ConfigError):
            FreqTable(f_hz=(10.0, 5.0), values=(1.0, 2.0))
        with pytest.raises(ConfigError):
            FreqTable(f_hz=(-1.0, 5.0), values=(1.0, 2.0))
        with pytest.raises(ConfigError):
            FreqTable(f_hz=(1.0, 5.0), values=(1.0, math.inf))

    def test_value_at_passthrough(self):
        assert value_at(0.25, 123.0) == 0.25


class TestIfoConfigValidation:
    def test_default_is_valid(self):
        cfg = default_config()
        assert cfg.T_itm == 0.014 and cfg.T_src == 0.14
        assert cfg.omega0 == pytest.approx(1.7703492173955385e15, rel=1e-12)

    @pytest.mark.parametrize("field,value,fragment", [
        ("T_src", 1.5, "T_src"),
        ("T_src", 0.0, "T_src"),
        ("T_itm", 1.0, "T_itm"),
        ("eps_arm", 1.0, "eps_arm"),
        ("eps_ext", -0.1, "eps_ext"),
        ("L", -4000.0, "L"),
        ("r_input", 25.0, "r_input"),
    ])
    def test_rejects_out_of_range(self, field, value, fragment):
        doc = config_to_dict(default_config())
        doc[field] = value
        with pytest.raises(ConfigError, match=fragment):
            config_from_dict(doc)

    def test_empty_channel_list_rejected(self):
        doc = config_to_dict(default_config())
        doc["eps_src_channels"] = []
        with pytest.raises(ConfigError, match="eps_src_channels"):
            config_from_dict(doc)

    def test_unknown_key_rejected(self):
        doc = config_to_dict(default_config())
        doc["chirp_mass"] = 30.0
        with pytest.raises(ConfigError, match="chirp_mass"):
            config_from_dict(doc)

    def test_internal_sqz_modes(self):
        with pytest.raises(ConfigError, match="mode"):
            InternalSqueeze(mode="extreme")
        with pytest.raises(ConfigError):
            InternalSqueeze(mode="none", r=0.5)
        sqz = InternalSqueeze(mode="fixed", r=0.5, theta=0.1)
        assert sqz.r == 0.5


class TestSerialization:
    def test_round_trip(self):
        cfg = default_config()
        again = config_from_dict(config_to_dict(cfg))
        assert again == cfg
        assert config_hash(again) == config_hash(cfg)

    def test_lambda0_alternative(self):
        doc = config_to_dict(default_config())
        del doc["omega0"]
        doc["lambda0"] = 1.064e-6
        cfg = config_from_dict(doc)
        assert cfg.omega0 == pytest.approx(default_config().omega0, rel=1e-15)

    def test_template_is_loadable(self):
        cfg = config_from_dict(config_template())
        assert cfg == default_config()

    def test_tables_round_trip(self):
        doc = config_to_dict(default_config())
        doc["Theta"] = {"f_hz": [1.0, 10000.0], "values": [0.0, 0.02]}
        doc["eps_src_channels"] = [1e-4, {"f_hz": [1.0, 10000.0],
                                          "values": [1e-4, 1e-3]}]
        cfg = config_from_dict(doc)
        assert isinstance(cfg.Theta, FreqTable)
        again = config_from_dict(config_to_dict(cfg))
        assert again == cfg

    def test_load_config(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(config_to_dict(default_config())))
        assert load_config(path) == default_config()
        bad = tmp_path / "bad.json"
        bad.write_text("{not valid json")
        with pytest.raises(ConfigError):
            load_config(bad)
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.json")


class TestCoverage:
    def test_coverage_check(self):
        doc = config_to_dict(default_config())
        doc["Theta"] = {"f_hz": [10.0, 100.0], "values": [0.0, 0.0]}
        cfg = config_from_dict(doc)
        coverage_check(cfg, 10.0, 100.0)
        with pytest.raises(ConfigError, match="Theta"):
            coverage_check(cfg, 5.0, 5000.0)
