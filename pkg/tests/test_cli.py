import csv
import json
import math

import pytest

from embroidery_actuator.cli import main

MARKER_HEADER = (
    ["t"] + [f"p{a}{i}" for i in range(1, 15) for a in ("x", "y", "z")] + ["pressure_kpa"]
)


def write_staircase_marker_csv(path, levels, dwell=5.0, rate_hz=10.0):
    """Collinear markers under a pressure staircase (mm / kPa units)."""
    rows = [MARKER_HEADER]
    t = 0.0
    for level in levels:
        for _ in range(int(dwell * rate_hz)):
            row = [f"{t:.3f}"]
            for i in range(7):
                row += [f"{i * 10.0}", "0", "0"]
            for i in range(7):
                row += [f"{i * 10.0}", "5", "0"]
            row.append(f"{level:.3f}")
            rows.append(row)
            t += 1.0 / rate_hz
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


class TestPredict:
    def test_reference_zigzag_curve(self, tmp_path):
        out = tmp_path / "curve.csv"
        rc = main([
            "predict", "--pattern", "zigzag", "--w-mm", "7", "--g-mpa", "2.7",
            "--p0-kpa", "85", "--p-max-kpa", "300", "--step-kpa", "10",
            "--out", str(out),
        ])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0] == ["pressure_kpa", "theta_deg", "l_mm", "r_mm", "status"]
        assert len(rows) == 1 + 31
        for row in rows[1:]:
            p, theta = float(row[0]), float(row[1])
            assert row[4] == "ok"
            if p <= 85.0:
                assert theta == 0.0
            else:
                assert theta > 0.0
        sidecar = json.loads((tmp_path / "curve.json").read_text())
        assert sidecar["pattern"] == "zigzag"
        assert sidecar["g_mpa"] == pytest.approx(2.7)
        assert "fitted placeholders" in sidecar["tube_geometry_source"]

    def test_zero_pressure_sweep_single_row(self, tmp_path):
        out = tmp_path / "zero.csv"
        rc = main([
            "predict", "--pattern", "zigzag", "--w-mm", "7", "--g-mpa", "1.0",
            "--p-max-kpa", "0", "--out", str(out),
        ])
        assert rc == 0
        rows = read_csv(out)
        assert len(rows) == 2
        assert float(rows[1][0]) == 0.0
        assert float(rows[1][1]) == 0.0

    def test_byte_identical_reruns(self, tmp_path):
        args = [
            "predict", "--pattern", "cross", "--w-mm", "7", "--alpha-deg", "60",
            "--g-mpa", "2.9", "--p0-kpa", "200", "--p-max-kpa", "250",
            "--step-kpa", "25",
        ]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()

    def test_usage_error_exits_one(self, tmp_path, capsys):
        rc = main(["predict", "--pattern", "spiral", "--p-max-kpa", "100",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 1

    def test_flags_override_config(self, tmp_path):
        conf = tmp_path / "a.ini"
        conf.write_text(
            "[design]\npattern = zigzag\nw_mm = 5.0\n\n[model]\ng_mpa = 1.0\np0_kpa = 40\n"
        )
        out = tmp_path / "c.csv"
        rc = main([
            "predict", "--config", str(conf), "--w-mm", "7", "--p-max-kpa", "50",
            "--step-kpa", "50", "--out", str(out),
        ])
        assert rc == 0
        meta = json.loads((tmp_path / "c.json").read_text())
        assert meta["w_mm"] == pytest.approx(7.0)   # flag wins
        assert meta["g_mpa"] == pytest.approx(1.0)  # config survives
        assert meta["p0_kpa"] == pytest.approx(40.0)

    def test_unknown_config_key_exits_one(self, tmp_path, capsys):
        conf = tmp_path / "bad.ini"
        conf.write_text("[design]\npattern = zigzag\nwembroidery = 7\n")
        rc = main(["predict", "--config", str(conf), "--p-max-kpa", "10",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 1
        assert "wembroidery" in capsys.readouterr().err


class TestTransition:
    def run(self, argv, capsys):
        rc = main(argv)
        out = capsys.readouterr().out
        payload = json.loads(out.split("\n\n")[0])
        return rc, payload, out

    def test_degenerate_width(self, capsys):
        # w = 0: the cavity circumference equals twice the tube diameter
        rc, payload, _ = self.run(
            ["transition", "--w-mm", "0", "--rf-mm", "1.0"], capsys
        )
        assert rc == 0
        assert payload["r0_mm"] == pytest.approx(2.0 / math.pi, rel=1e-12)
        assert payload["p0_kpa"] == 0.0

    def test_table_is_printed(self, capsys):
        rc, _, out = self.run(["transition", "--w-mm", "7"], capsys)
        assert rc == 0
        assert "quantity" in out
        assert "r0_mm" in out

    def test_monotone_in_width(self, capsys):
        p0s = []
        for w in ("5", "7", "9"):
            _, payload, _ = self.run(["transition", "--w-mm", w], capsys)
            p0s.append(payload["p0_kpa"])
        assert p0s[0] <= p0s[1] <= p0s[2]


class TestMarkers:
    def test_collinear_staircase_gives_zero_angles(self, tmp_path):
        src = tmp_path / "mocap.csv"
        write_staircase_marker_csv(src, [0.0, 10.0, 20.0, 10.0, 0.0])
        out = tmp_path / "pairs.csv"
        rc = main(["markers", "--input", str(src), "--out", str(out)])
        assert rc == 0
        rows = read_csv(out)
        assert rows[0] == ["pressure_kpa", "theta_deg", "branch"]
        assert len(rows) == 1 + 5
        for row in rows[1:]:
            assert float(row[1]) == pytest.approx(0.0, abs=1e-9)
        branches = [r[2] for r in rows[1:]]
        assert branches == ["up", "up", "up", "down", "down"]

    def test_schema_error_exits_one(self, tmp_path, capsys):
        src = tmp_path / "bad.csv"
        src.write_text("t,stuff\n0,1\n")
        rc = main(["markers", "--input", str(src), "--out", str(tmp_path / "o.csv")])
        assert rc == 1
        assert "header" in capsys.readouterr().err


class TestFitCli:
    def test_fit_round_trip_from_predicted_curve(self, tmp_path, capsys):
        curve = tmp_path / "truth.csv"
        assert main([
            "predict", "--pattern", "zigzag", "--w-mm", "7", "--g-mpa", "2.7",
            "--p0-kpa", "85", "--p-max-kpa", "185", "--step-kpa", "10",
            "--out", str(curve),
        ]) == 0
        pairs = tmp_path / "pairs.csv"
        with open(curve, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        with open(pairs, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pressure_kpa", "theta_deg", "branch"])
            for row in rows:
                if float(row[0]) >= 85.0:
                    w.writerow([row[0], row[1], "up"])
        out = tmp_path / "fit.json"
        rc = main([
            "fit", "--input", str(pairs), "--pattern", "zigzag", "--w-mm", "7",
            "--g-mpa", "1.5", "--p0-kpa", "60", "--out", str(out),
        ])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert payload["fitted"]["g_mpa"] == pytest.approx(2.7, rel=1e-3)
        assert payload["fitted"]["p0_kpa"] == pytest.approx(85.0, rel=1e-3)
        assert payload["converged"]

    def test_fit_schema_error_exits_one(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.csv"
        pairs.write_text("pressure_kpa,theta_deg,branch\n50,badnumber,up\n")
        rc = main(["fit", "--input", str(pairs)])
        assert rc == 1
        assert "row 2" in capsys.readouterr().err


class TestFitTubeCli:
    def test_published_targets(self, tmp_path, capsys):
        targets = tmp_path / "targets.csv"
        targets.write_text("w_mm,p0_kpa\n5,25\n7,85\n9,180\n")
        out = tmp_path / "tube.json"
        rc = main(["fit-tube", "--input", str(targets), "--out", str(out)])
        assert rc == 0
        payload = json.loads(out.read_text())
        assert 0.3 <= payload["rf_mm"] <= 3.0
        assert payload["rmse_kpa"] < 10.0

    def test_bad_header_exits_one(self, tmp_path, capsys):
        targets = tmp_path / "targets.csv"
        targets.write_text("width,p0\n5,25\n")
        rc = main(["fit-tube", "--input", str(targets)])
        assert rc == 1


class TestSweepCli:
    def test_cross_angle_sweep_sign_flip(self, tmp_path):
        out_dir = tmp_path / "sweep"
        rc = main([
            "sweep", "--param", "alpha0", "--values", "15,30,45,60",
            "--g-mpa-list", "2.9,12.0,1.3,2.9", "--p0-kpa-list", "150,160,170,200",
            "--w-mm", "7", "--p-max-kpa", "300", "--step-kpa", "10",
            "--out-dir", str(out_dir),
        ])
        assert rc == 0
        rows = read_csv(out_dir / "summary.csv")
        assert rows[0] == ["design_param", "theta_at_pmax_deg", "p0_kpa"]
        theta = {float(r[0]): float(r[1]) for r in rows[1:]}
        assert theta[15.0] > 0.0 and theta[30.0] > 0.0
        assert theta[45.0] < 0.0 and theta[60.0] < 0.0
        for a in (15, 30, 45, 60):
            assert (out_dir / f"curve_alpha0_{a}.csv").exists()

    def test_width_sweep_transition_monotone(self, tmp_path):
        out_dir = tmp_path / "wsweep"
        rc = main([
            "sweep", "--param", "w", "--values", "5,7,9", "--g-mpa-list", "1.0",
            "--p-max-kpa", "50", "--step-kpa", "25", "--out-dir", str(out_dir),
        ])
        assert rc == 0
        rows = read_csv(out_dir / "summary.csv")
        p0s = [float(r[2]) for r in rows[1:]]
        assert p0s[0] <= p0s[1] <= p0s[2]

    def test_mismatched_list_length_exits_one(self, tmp_path, capsys):
        rc = main([
            "sweep", "--param", "w", "--values", "5,7,9", "--g-mpa-list", "1.0,2.0",
            "--p-max-kpa", "50", "--out-dir", str(tmp_path / "x"),
        ])
        assert rc == 1


class TestHelp:
    @pytest.mark.parametrize(
        "cmd", ["predict", "transition", "fit", "fit-tube", "markers", "sweep"]
    )
    def test_help_documents_units(self, cmd, capsys):
        rc = main([cmd, "--help"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "kPa" in out or "kpa" in out

    def test_no_command_exits_one(self, capsys):
        assert main([]) == 1
