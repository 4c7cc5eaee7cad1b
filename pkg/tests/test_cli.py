import math
import shutil
import subprocess

import numpy as np
import pytest

from ws_spectra import csvio, reference
from ws_spectra.cli import EXIT_CONFORMANCE, EXIT_OK, EXIT_SOLVER, EXIT_USAGE, SPECTRUM_HEADER, main
from ws_spectra.closed_form import QuantumState


def rows_of(path):
    header, body = csvio.read_csv(path)
    return header, [dict(zip(header, (csvio.parse_cell(c) for c in r))) for r in body]


@pytest.fixture(scope="module")
def table1_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("table1")
    code = main(["spectrum", "--preset", "table1", "--out", str(out), "--quiet"])
    return code, out / "spectrum_table1.csv"


@pytest.fixture(scope="module")
def conformance_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("conf")
    code = main(["conformance", "--out", str(out), "--quiet"])
    return code, out / "conformance_table1.csv"


class TestSpectrum:
    def test_table1(self, table1_run):
        code, path = table1_run
        assert code == EXIT_OK
        header, rows = rows_of(path)
        assert tuple(header) == SPECTRUM_HEADER
        assert len(rows) == 21
        close = 0
        for row in rows:
            st = QuantumState.from_label(row["label"])
            assert (row["N"], row["l"], row["n_r"]) == (st.N, st.l, st.n_r)
            ok = all(abs(row[f"E_oracle_{v}"] - reference.reference_level(st, v)) <= reference.TOLERANCE
                     for v in ("exact", "pekeris"))
            close += ok
        assert close == 19  # the two mislabelled s rows are the exceptions

    def test_table1_closed_form_column(self, table1_run):
        _, rows = rows_of(table1_run[1])
        first = rows[0]
        assert first["label"] == "1s"
        assert first["E_closed_form"] == pytest.approx(-250.694444444, abs=1e-6)
        assert "closed:below-well" in first["flags"]

    def test_single_row(self, tmp_path):
        assert main(["spectrum", "--nmax", "1", "--out", str(tmp_path), "--quiet",
                     "--no-convergence-check"]) == EXIT_OK
        _, rows = rows_of(tmp_path / "spectrum_table1.csv")
        assert [r["label"] for r in rows] == ["1s"]

    def test_deterministic_bytes(self, tmp_path):
        for d in ("a", "b"):
            assert main(["spectrum", "--nmax", "3", "--out", str(tmp_path / d), "--quiet"]) == EXIT_OK
        assert (tmp_path / "a" / "spectrum_table1.csv").read_bytes() == \
            (tmp_path / "b" / "spectrum_table1.csv").read_bytes()

    def test_kg_preset(self, tmp_path):
        assert main(["spectrum", "--preset", "fig3", "--nmax", "4", "--out", str(tmp_path),
                     "--quiet", "--no-convergence-check"]) == EXIT_OK
        _, rows = rows_of(tmp_path / "spectrum_fig3.csv")
        assert [r["label"] for r in rows] == ["2p", "3p", "4p", "3d", "4d", "4f"]
        assert all(r["l"] in (1, 2, 3, 4) for r in rows)
        mc2 = 1.007825 * 931.49410242
        assert mc2 - 43.1 < rows[0]["E_oracle_exact"] < mc2

    def test_antiparticle_preset_has_no_oracle(self, tmp_path):
        assert main(["spectrum", "--preset", "fig4", "--nmax", "3", "--out", str(tmp_path),
                     "--quiet"]) == EXIT_OK
        _, rows = rows_of(tmp_path / "spectrum_fig4.csv")
        assert all(math.isnan(r["E_oracle_exact"]) for r in rows)
        assert all(math.isfinite(r["E_closed_form"]) for r in rows)

    def test_unbound_rows_are_flagged(self, tmp_path):
        conf = tmp_path / "shallow.conf"
        conf.write_text("V0 = 0.5\nnmax = 3\nmethods = exact\n", encoding="utf-8")
        assert main(["spectrum", "--config", str(conf), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
        _, rows = rows_of(tmp_path / "spectrum_table1.csv")
        flagged = [r for r in rows if "exact:unbound" in r["flags"]]
        assert flagged and all(math.isnan(r["E_oracle_exact"]) for r in flagged)
        assert rows[0]["flags"] == ""

    def test_stdout_table(self, tmp_path, capsys):
        main(["spectrum", "--nmax", "1", "--out", str(tmp_path), "--no-convergence-check"])
        out = capsys.readouterr().out
        assert out.splitlines()[0].split() == list(SPECTRUM_HEADER)


class TestPotential:
    def test_columns_and_swave_identity(self, tmp_path):
        assert main(["potential", "--l", "0,1,5", "--out", str(tmp_path)]) == EXIT_OK
        header, rows = rows_of(tmp_path / "potential_table1.csv")
        assert header == ["l", "beta_x", "r", "V_eff_exact", "V_eff_approx"]
        assert len(rows) == 3 * 201
        s = [r for r in rows if r["l"] == 0]
        assert all(r["V_eff_exact"] == r["V_eff_approx"] for r in s)

    def test_high_l_diverges_past_surface(self, tmp_path):
        main(["potential", "--l", "1,5", "--out", str(tmp_path)])
        _, rows = rows_of(tmp_path / "potential_table1.csv")

        def gap(l, lo, hi):
            return max(abs(r["V_eff_exact"] - r["V_eff_approx"]) for r in rows
                       if r["l"] == l and lo <= r["beta_x"] <= hi)

        assert gap(5, 2.5, 6.0) > gap(5, -0.5, 0.5)
        assert gap(5, 2.5, 6.0) > gap(1, 2.5, 6.0)

    def test_invalid_range(self, tmp_path):
        assert main(["potential", "--beta-x-min", "-20", "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["potential", "--beta-x-max", "-5", "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["potential", "--l", "a", "--out", str(tmp_path)]) == EXIT_USAGE


class TestWavefunction:
    def test_swave_columns_agree(self, tmp_path):
        assert main(["wavefunction", "--state", "2s", "--out", str(tmp_path)]) == EXIT_OK
        header, body = csvio.read_csv(tmp_path / "wavefunction_table1_2s.csv")
        assert header == ["r", "u_exact", "u_pekeris", "u_closed_form"]
        data = np.array([[float(c) for c in r] for r in body])
        assert np.max(np.abs(data[:, 1] - data[:, 2])) < 1e-8
        assert np.all(np.isfinite(data[:, 3]))

    def test_overlay_sidecar(self, tmp_path):
        assert main(["wavefunction", "--n", "1", "--l", "1", "--out", str(tmp_path)]) == EXIT_OK
        text = (tmp_path / "wavefunction_table1_3p.report.txt").read_text(encoding="utf-8")
        fields = dict(line.split(" = ", 1) for line in text.splitlines())
        assert float(fields["l2_difference"]) > 0
        assert float(fields["peak_shift"]) == pytest.approx(
            float(fields["peak_exact"]) - float(fields["peak_pekeris"]), abs=1e-9)
        # the closed form is evaluated at its own energy, far below the numerical one
        assert float(fields["energy_closed_form"]) == pytest.approx(-83.6462, abs=1e-4)
        _, body = csvio.read_csv(tmp_path / "wavefunction_table1_3p.csv")
        assert all(math.isfinite(float(r[3])) for r in body)

    def test_unbound_state(self, tmp_path):
        conf = tmp_path / "shallow.conf"
        conf.write_text("V0 = 0.5\n", encoding="utf-8")
        assert main(["wavefunction", "--config", str(conf), "--state", "6s",
                     "--out", str(tmp_path)]) == EXIT_SOLVER

    def test_state_required(self, tmp_path):
        assert main(["wavefunction", "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["wavefunction", "--state", "2s2", "--out", str(tmp_path)]) == EXIT_USAGE


class TestConformance:
    def test_default_run(self, conformance_run):
        code, path = conformance_run
        header, rows = rows_of(path)
        assert header == ["criterion", "computed", "reference", "delta", "status"]
        failed = {r["criterion"] for r in rows if r["status"] == "FAIL"}
        assert failed == {
            "levels.exact.5s", "levels.exact.6s", "levels.pekeris.5s", "levels.pekeris.6s",
            "surrogate.barrier_deviation.l=1", "surrogate.barrier_deviation.l=2",
            "overlay.peak_shift_grows",
        }
        assert code == EXIT_CONFORMANCE

    def test_reports_swave_closed_form(self, conformance_run):
        _, rows = rows_of(conformance_run[1])
        entry = next(r for r in rows if r["criterion"] == "closed.se_swave.n0")
        assert entry["computed"] == pytest.approx(-250.694, abs=1e-3)
        assert entry["status"] == "report"
        assert any(r["criterion"].startswith("closed.se.n=N-1.") for r in rows)
        assert [r["computed"] for r in rows if r["criterion"].startswith("kg.reality_boundary")] == [6, 6, 7, 7]

    def test_tampered_depth_fails_levels(self, conformance_run, tmp_path):
        conf = tmp_path / "tampered.conf"
        conf.write_text("V0 = 50.5\n", encoding="utf-8")
        code = main(["conformance", "--config", str(conf), "--out", str(tmp_path), "--quiet"])
        assert code == EXIT_CONFORMANCE
        _, rows = rows_of(tmp_path / "conformance_table1.csv")
        failed = [r["criterion"] for r in rows if r["status"] == "FAIL"]
        _, clean = rows_of(conformance_run[1])
        assert len(failed) > sum(r["status"] == "FAIL" for r in clean)
        assert "levels.exact.2p" in failed


class TestUsage:
    def test_config_errors(self, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("depth = 3\n", encoding="utf-8")
        assert main(["spectrum", "--config", str(bad), "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["spectrum", "--preset", "nope", "--out", str(tmp_path)]) == EXIT_USAGE
        assert main(["spectrum", "--nmax", "0", "--out", str(tmp_path)]) == EXIT_USAGE

    def test_argparse_errors_exit_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == EXIT_USAGE

    @pytest.mark.skipif(shutil.which("ws-spectra") is None, reason="console script not installed")
    def test_console_script(self, tmp_path):
        proc = subprocess.run(["ws-spectra", "spectrum", "--nmax", "1", "--quiet",
                               "--no-convergence-check", "--out", str(tmp_path)],
                              capture_output=True, text=True, timeout=120)
        assert proc.returncode == EXIT_OK, proc.stderr
        assert (tmp_path / "spectrum_table1.csv").exists()
