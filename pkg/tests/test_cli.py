import csv
import json
import math

import numpy as np
import pytest

from pathamp import cli


def run(args):
    return cli.main([str(a) for a in args])


def write_config(tmp_path, body, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body), encoding="utf-8")
    return path


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


NETWORK = {"num_sources": 1, "mass": 1.0, "spring": 1.0, "dt": 1.0,
           "steps": 2, "source": [0.3, -0.2]}

TWINSLIT = {"mass": 1.0, "spring": 2.0, "omega0": 1.0,
            "gamma1": 1.0, "gamma2": 1.0, "gamma4": 1.0,
            "j2": 0.5, "j3": 1.0, "j4": 0.5,
            "k12": 0.3, "k14": 0.3, "k23": 0.4, "k43": 0.4,
            "schedule": {"points": 21}}

SCHRODINGER = {"exchange_mass": 1.0, "interaction_time": 1.0,
               "x12": 8.0, "x23": 2.0, "x43": 2.0}


class TestAmplitudeCommand:
    def test_basic_run(self, tmp_path):
        cfg = write_config(tmp_path, {"network": NETWORK})
        out = tmp_path / "amp.csv"
        assert run(["amplitude", "--config", cfg, "--out", out]) == 0
        row = read_rows(out)[0]
        # dense reference: A = [[-2, 1], [1, -2]], J = (0.3, -0.2)
        a = np.array([[-2.0, 1.0], [1.0, -2.0]])
        j = np.array([0.3, -0.2])
        assert float(row["jaj_re"]) == pytest.approx(j @ np.linalg.solve(a, j),
                                                     rel=1e-12)

    def test_zero_source_zero_exponent(self, tmp_path):
        net = dict(NETWORK)
        net.pop("source")
        cfg = write_config(tmp_path, {"network": net})
        out = tmp_path / "amp.csv"
        assert run(["amplitude", "--config", cfg, "--out", out]) == 0
        row = read_rows(out)[0]
        assert row["jaj_re"] == "0"
        assert row["jaj_im"] == "0"

    def test_oracle_agreement_column(self, tmp_path):
        cfg = write_config(tmp_path, {
            "network": NETWORK,
            "quadrature": {"points_per_axis": 801, "epsilon": 0.1},
            "output": {"oracle_rtol": 0.01},
        })
        out = tmp_path / "amp.csv"
        assert run(["amplitude", "--config", cfg, "--out", out, "--oracle"]) == 0
        row = read_rows(out)[0]
        assert row["oracle_ok"] == "1"
        assert float(row["oracle_rel_diff"]) <= 0.01

    def test_zero_coupling_factorizes_across_runs(self, tmp_path):
        j1, j2 = [0.1, -0.2, 0.3], [0.05, 0.15, -0.25]
        pair_cfg = write_config(tmp_path, {"network": {
            "num_sources": 2, "mass": 1.0, "spring": 2.0, "coupling": 0.0,
            "dt": 0.5, "steps": 3, "source": j1 + j2}}, "pair.json")
        out = tmp_path / "pair.csv"
        assert run(["amplitude", "--config", pair_cfg, "--out", out]) == 0
        total = read_rows(out)[0]
        parts = []
        for tag, j in (("a", j1), ("b", j2)):
            cfg = write_config(tmp_path, {"network": {
                "num_sources": 1, "mass": 1.0, "spring": 2.0,
                "dt": 0.5, "steps": 3, "source": j}}, f"single_{tag}.json")
            single_out = tmp_path / f"single_{tag}.csv"
            assert run(["amplitude", "--config", cfg, "--out", single_out]) == 0
            parts.append(read_rows(single_out)[0])
        log_sum = sum(float(p["log_magnitude"]) for p in parts)
        phase_sum = sum(float(p["phase"]) for p in parts)
        assert float(total["log_magnitude"]) == pytest.approx(log_sum, rel=1e-12)
        delta = float(total["phase"]) - phase_sum
        assert math.cos(delta) == pytest.approx(1.0, abs=1e-12)

    def test_singular_action_exit_code(self, tmp_path):
        cfg = write_config(tmp_path, {"network": {
            "num_sources": 1, "mass": 1.0, "spring": 0.0, "dt": 1.0, "steps": 2}})
        assert run(["amplitude", "--config", cfg]) == 3


class TestValidation:
    def test_unknown_group_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"network": NETWORK, "nonsense": {}})
        assert run(["amplitude", "--config", cfg]) == 2
        assert "nonsense" in capsys.readouterr().err

    def test_unknown_key_rejected_with_name(self, tmp_path, capsys):
        net = dict(NETWORK, typo_key=1)
        cfg = write_config(tmp_path, {"network": net})
        assert run(["amplitude", "--config", cfg]) == 2
        assert "network.typo_key" in capsys.readouterr().err

    def test_invalid_mass_names_field(self, tmp_path, capsys):
        net = dict(NETWORK, mass=-2.0)
        cfg = write_config(tmp_path, {"network": net})
        assert run(["amplitude", "--config", cfg]) == 2
        assert "network.mass" in capsys.readouterr().err

    def test_asymmetric_coupling_names_field(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"network": {
            "num_sources": 2, "mass": 1.0, "spring": 1.0,
            "coupling": [[0.0, 0.1], [0.2, 0.0]], "dt": 0.1, "steps": 4}})
        assert run(["amplitude", "--config", cfg]) == 2
        assert "network.coupling" in capsys.readouterr().err

    def test_wrong_source_length(self, tmp_path, capsys):
        net = dict(NETWORK, source=[1.0])
        cfg = write_config(tmp_path, {"network": net})
        assert run(["amplitude", "--config", cfg]) == 2
        assert "network.source" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path):
        assert run(["amplitude", "--config", tmp_path / "absent.json"]) == 2

    def test_bad_schedule_rejected(self, tmp_path, capsys):
        ts = dict(TWINSLIT, schedule={"bogus": 1})
        cfg = write_config(tmp_path, {"twinslit": ts, "schrodinger": SCHRODINGER})
        assert run(["twinslit", "--config", cfg]) == 2
        assert "schedule" in capsys.readouterr().err


class TestTwinslitCommand:
    def test_pattern_intensity_columns_agree(self, tmp_path):
        cfg = write_config(tmp_path,
                           {"twinslit": TWINSLIT, "schrodinger": SCHRODINGER})
        out = tmp_path / "scan.csv"
        assert run(["twinslit", "--config", cfg, "--out", out]) == 0
        rows = read_rows(out)
        assert len(rows) == 21
        for row in rows:
            assert float(row["intensity_discrete"]) == pytest.approx(
                float(row["intensity_schrodinger"]), abs=1e-12)

    def test_dark_fringe_row_present(self, tmp_path):
        cfg = write_config(tmp_path,
                           {"twinslit": TWINSLIT, "schrodinger": SCHRODINGER})
        out = tmp_path / "scan.csv"
        assert run(["twinslit", "--config", cfg, "--out", out]) == 0
        ints = [float(r["intensity_discrete"]) for r in read_rows(out)]
        assert min(ints) <= 1e-20
        assert max(ints) == pytest.approx(4.0)

    def test_explicit_pairs_schedule(self, tmp_path):
        ts = dict(TWINSLIT, schedule={"pairs": [[0.4, 0.4], [0.45, 0.4]]})
        cfg = write_config(tmp_path, {"twinslit": ts, "schrodinger": SCHRODINGER})
        out = tmp_path / "scan.csv"
        assert run(["twinslit", "--config", cfg, "--out", out]) == 0
        rows = read_rows(out)
        assert float(rows[0]["intensity_discrete"]) == pytest.approx(4.0)

    def test_all_resonant_exit_code(self, tmp_path, capsys):
        # k = 2, w0 = 1, m = 1 puts the pole at |k_im| = 1
        ts = dict(TWINSLIT, schedule={"pairs": [[1.0, 0.4], [-1.0, 0.4]]})
        cfg = write_config(tmp_path, {"twinslit": ts, "schrodinger": SCHRODINGER})
        assert run(["twinslit", "--config", cfg]) == 4
        assert "resonant" in capsys.readouterr().err

    def test_partially_resonant_warns_and_succeeds(self, tmp_path, capsys):
        ts = dict(TWINSLIT, schedule={"pairs": [[0.4, 0.4], [1.0, 0.4]]})
        cfg = write_config(tmp_path, {"twinslit": ts, "schrodinger": SCHRODINGER})
        out = tmp_path / "scan.csv"
        assert run(["twinslit", "--config", cfg, "--out", out]) == 0
        assert "skipped 1" in capsys.readouterr().err
        rows = read_rows(out)
        assert rows[1]["resonant"] == "1"


class TestConvergeCommand:
    CFG = {"network": {"num_sources": 2, "mass": 1.0, "spring": 2.0,
                       "coupling": 0.5, "dt": 0.1, "steps": 21},
           "quadrature": {"dt_list": [0.1, 0.05, 0.025], "mode": "plus"}}

    def test_orders_near_two(self, tmp_path):
        cfg = write_config(tmp_path, self.CFG)
        out = tmp_path / "conv.csv"
        assert run(["converge", "--config", cfg, "--out", out]) == 0
        rows = read_rows(out)
        assert rows[0]["observed_order"] == "nan"
        for row in rows[1:]:
            assert 1.6 <= float(row["observed_order"]) <= 2.4
            assert row["order_ok"] == "1"

    def test_requires_three_spacings(self, tmp_path, capsys):
        body = {"network": self.CFG["network"],
                "quadrature": {"dt_list": [0.1, 0.05]}}
        cfg = write_config(tmp_path, body)
        assert run(["converge", "--config", cfg]) == 2
        assert "dt_list" in capsys.readouterr().err

    def test_single_matches_decoupled_pair_byte_for_byte(self, tmp_path):
        decoupled = {"network": dict(self.CFG["network"], coupling=0.0),
                     "quadrature": self.CFG["quadrature"]}
        single = {"network": {"num_sources": 1, "mass": 1.0, "spring": 2.0,
                              "dt": 0.1, "steps": 21},
                  "quadrature": self.CFG["quadrature"]}
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(["converge", "--config", write_config(tmp_path, decoupled, "d.json"),
                    "--out", out1]) == 0
        assert run(["converge", "--config", write_config(tmp_path, single, "s.json"),
                    "--out", out2]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_constant_mode_zero_residual(self, tmp_path):
        body = {"network": {"num_sources": 1, "mass": 1.0, "spring": 0.0,
                            "dt": 0.1, "steps": 21},
                "quadrature": {"dt_list": [0.1, 0.05, 0.025]}}
        cfg = write_config(tmp_path, body)
        out = tmp_path / "conv.csv"
        assert run(["converge", "--config", cfg, "--out", out]) == 0
        for row in read_rows(out):
            assert float(row["max_residual"]) == 0.0
            assert row["order_ok"] == "1"


class TestMetricCommand:
    def test_round_trip_columns_agree(self, tmp_path):
        cfg = write_config(tmp_path,
                           {"twinslit": TWINSLIT, "schrodinger": SCHRODINGER})
        out = tmp_path / "metric.csv"
        assert run(["metric", "--config", cfg, "--out", out, "--round-trip"]) == 0
        rows = read_rows(out)
        assert len(rows) == 4
        for row in rows:
            assert float(row["phase_discrete"]) == pytest.approx(
                float(row["phase_schrodinger"]), abs=1e-12)

    def test_zero_sentinel_row(self, tmp_path):
        cfg = write_config(tmp_path, {
            "twinslit": TWINSLIT, "schrodinger": SCHRODINGER,
            "output": {"include_zero_sentinel": True}})
        out = tmp_path / "metric.csv"
        assert run(["metric", "--config", cfg, "--out", out]) == 0
        rows = read_rows(out)
        assert rows[-1]["link"] == "zero"
        assert float(rows[-1]["x_im"]) == 0.0
        assert float(rows[-1]["d_im"]) == 0.0

    def test_doubled_gamma_doubles_distance(self, tmp_path):
        cfg1 = write_config(tmp_path, {"twinslit": TWINSLIT,
                                       "schrodinger": SCHRODINGER}, "m1.json")
        doubled = dict(TWINSLIT, gamma1=2.0)
        cfg2 = write_config(tmp_path, {"twinslit": doubled,
                                       "schrodinger": SCHRODINGER}, "m2.json")
        out1, out2 = tmp_path / "m1.csv", tmp_path / "m2.csv"
        assert run(["metric", "--config", cfg1, "--out", out1]) == 0
        assert run(["metric", "--config", cfg2, "--out", out2]) == 0
        r1, r2 = read_rows(out1), read_rows(out2)
        for a, b in zip(r1[:2], r2[:2]):  # links 1-2 and 1-4 carry gamma1
            assert float(b["x_im"]) == pytest.approx(2 * float(a["x_im"]), rel=1e-14)

    def test_resonant_link_flagged_exit_zero(self, tmp_path, capsys):
        ts = dict(TWINSLIT, k23=1.0)
        cfg = write_config(tmp_path, {"twinslit": ts, "schrodinger": SCHRODINGER})
        out = tmp_path / "metric.csv"
        assert run(["metric", "--config", cfg, "--out", out]) == 0
        assert "resonant" in capsys.readouterr().err
        rows = read_rows(out)
        assert rows[2]["resonant"] == "1"

    def test_self_terms_change_link_phase(self, tmp_path):
        cfg = write_config(tmp_path,
                           {"twinslit": TWINSLIT, "schrodinger": SCHRODINGER})
        out1, out2 = tmp_path / "p.csv", tmp_path / "q.csv"
        assert run(["metric", "--config", cfg, "--out", out1]) == 0
        assert run(["metric", "--config", cfg, "--out", out2,
                    "--include-self-terms"]) == 0
        a = float(read_rows(out1)[0]["link_phase"])
        b = float(read_rows(out2)[0]["link_phase"])
        assert a != b


class TestDeterminism:
    def _configs(self, tmp_path):
        return {
            "amplitude": ({"network": NETWORK,
                           "quadrature": {"points_per_axis": 101, "epsilon": 0.1}},
                          ["--oracle"]),
            "twinslit": ({"twinslit": TWINSLIT, "schrodinger": SCHRODINGER}, []),
            "converge": (TestConvergeCommand.CFG, []),
            "metric": ({"twinslit": TWINSLIT, "schrodinger": SCHRODINGER},
                       ["--round-trip"]),
        }

    @pytest.mark.parametrize("command", ["amplitude", "twinslit", "converge",
                                         "metric"])
    def test_double_run_byte_identical(self, tmp_path, command):
        body, extra = self._configs(tmp_path)[command]
        cfg = write_config(tmp_path, body)
        out1, out2 = tmp_path / "run1.csv", tmp_path / "run2.csv"
        assert run([command, "--config", cfg, "--out", out1, "--seedless"]
                   + extra) == 0
        assert run([command, "--config", cfg, "--out", out2, "--seedless"]
                   + extra) == 0
        data = out1.read_bytes()
        assert data == out2.read_bytes()
        assert b"\r" not in data

    def test_stdout_mode(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"network": NETWORK})
        assert run(["amplitude", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert out.startswith("log_magnitude,")
