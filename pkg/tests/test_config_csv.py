import math

import pytest

from ws_spectra import csvio
from ws_spectra.config import PRESETS, RunConfig, build_config, parse_config_text
from ws_spectra.errors import ConfigError


class TestParse:
    def test_keys_comments_and_lists(self):
        text = """
        # nuclear proton well
        preset = fig3
        V0 = 43.1   # MeV
        methods = closed, exact
        l_values = 1-3, 5
        equation = kg
        """
        values = parse_config_text(text)
        assert values == {
            "preset": "fig3", "V0": 43.1, "methods": ("closed", "exact"),
            "l_values": (1, 2, 3, 5), "equation": "KG",
        }

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key 'depth'"):
            parse_config_text("depth = 3")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match=":2:"):
            parse_config_text("V0 = 1\nr0 7")

    def test_bad_number(self):
        with pytest.raises(ConfigError):
            parse_config_text("nmax = six")


class TestBuild:
    def test_default_is_benchmark(self):
        cfg = build_config()
        assert cfg == PRESETS["table1"]
        assert (cfg.V0, cfg.r0, cfg.a, cfg.units) == (50.0, 7.0, 0.6, "dimensionless")

    def test_file_then_overrides(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("preset = fig3\nnmax = 3\nname = mine\n", encoding="utf-8")
        cfg = build_config(path=path, nmax=2, out_dir=None)
        assert cfg.equation == "KG" and cfg.nmax == 2 and cfg.name == "mine"

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            build_config("table9")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            build_config(path=tmp_path / "absent.conf")

    @pytest.mark.parametrize("change", [
        {"V0": -1.0}, {"a": 0.0}, {"units": "si"}, {"equation": "dirac"},
        {"branch": "both"}, {"methods": ("closed", "fit")}, {"methods": ()},
        {"nmax": 0}, {"l_values": (-1,)}, {"grid_count": 10}, {"grid_r_max": 1e-7},
    ])
    def test_validation(self, change):
        with pytest.raises(ConfigError):
            PRESETS["table1"].updated(**change)

    def test_states_filtered_by_l(self):
        cfg = PRESETS["fig3"].updated(nmax=4)
        labels = [s.label for s in cfg.states()]
        assert labels == ["2p", "3p", "4p", "3d", "4d", "4f"]
        assert len(PRESETS["table1"].states()) == 21

    def test_grid_override(self):
        cfg = PRESETS["table1"].updated(grid_r_max=30.0, grid_count=3001)
        assert cfg.grid.r_max == 30.0 and cfg.grid.count == 3001
        assert PRESETS["table1"].grid.r_max == pytest.approx(19.0)

    def test_presets_are_valid(self):
        assert all(isinstance(c, RunConfig) for c in PRESETS.values())
        assert PRESETS["fig4"].branch == "antiparticle"


class TestCsv:
    def test_formatting(self):
        assert csvio.fmt(1 / 3) == "0.333333333333"
        assert csvio.fmt(-49.17) == "-49.17"
        assert csvio.fmt(math.nan) == "nan"
        assert csvio.fmt(True) == "true"
        assert csvio.fmt(7) == "7"
        assert csvio.fmt(None) == ""

    def test_text_layout(self):
        text = csvio.to_text(("a", "b"), [(1, 2.5), ("x,y", 1e-20)])
        assert text == 'a,b\n1,2.5\n"x,y",1e-20\n'

    def test_round_trip_is_byte_identical(self, tmp_path):
        rows = [("2p", 2, 1, 0, -49.1666713, math.nan, -1 / 7, "exact:unbound;closed:complex"),
                ("1s", 1, 0, 0, 1e-300, 123456789012345.0, 0.0, "")]
        header = ("label", "N", "l", "n_r", "x", "y", "z", "flags")
        first = csvio.write_csv(tmp_path / "a.csv", header, rows)
        head, body = csvio.read_csv(first)
        second = csvio.write_csv(tmp_path / "b.csv", head,
                                 [[csvio.parse_cell(c) for c in r] for r in body])
        assert first.read_bytes() == second.read_bytes()
        assert b"\r" not in first.read_bytes()

    def test_parse_cell(self):
        assert csvio.parse_cell("3") == 3
        assert csvio.parse_cell("-2.5") == -2.5
        assert math.isnan(csvio.parse_cell("nan"))
        assert csvio.parse_cell("2p") == "2p"
