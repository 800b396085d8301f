import io
import json
import math

import pytest

from boxprec import cli
from boxprec.cli import emit_csv, main, run, verify_file
from boxprec.config import parse_config


def write_config(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return str(p)


def base_config(mode="theory", **extra):
    data = {
        "schema_version": 1,
        "mode": mode,
        "params": {
            "user_ratio": 0.2,
            "reg": 1.0,
            "amp": 1.0,
            "noise_var": 0.09,
        },
    }
    data.update(extra)
    return data


SIM = base_config(
    "simulate",
    trials=3,
    base_seed=17,
    sweep={"parameter": "amp", "values": [0.8, 1.6]},
)
SIM["params"]["n_antennas"] = 120


def test_saddle_json_to_stdout(tmp_path, capsys):
    path = write_config(tmp_path, base_config("saddle"))
    assert main(["run", "--config", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema_version"] == 1
    for col in ("tau", "beta", "alpha", "phi"):
        assert col in doc["columns"]
    row = doc["rows"][0]
    assert row["tau"] > 0.0 and row["beta"] > 0.0
    assert abs(row["residual_power"]) < 1e-9
    # Theory-only pipeline columns stay out of a saddle table.
    assert "box_ber" not in doc["columns"]


def test_emit_csv_shapes():
    buf = io.StringIO()
    emit_csv([], ("a", "b"), buf)
    assert buf.getvalue() == "a,b\n"
    buf = io.StringIO()
    emit_csv([{"a": 1.5, "b": None}], ("a", "b"), buf)
    assert buf.getvalue() == "a,b\n1.5,\n"


def test_csv_cells_round_trip_floats(tmp_path):
    path = write_config(tmp_path, base_config())
    out = tmp_path / "t.csv"
    assert main(["run", "--config", path, "--out", str(out)]) == 0
    header, line = out.read_text().splitlines()
    cells = dict(zip(header.split(","), line.split(",")))
    cfg = parse_config(base_config())
    got = run(cfg).rows[0]
    assert float(cells["box_ber"]) == got["box_ber"]
    assert float(cells["tau"]) == got["tau"]


def test_rerun_is_byte_identical(tmp_path):
    path = write_config(tmp_path, SIM)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", "--config", path, "--out", str(a)]) == 0
    assert main(["run", "--config", path, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # Sidecars agree except for the destination path they record.
    ma = json.loads((tmp_path / "a.csv.meta.json").read_text())
    mb = json.loads((tmp_path / "b.csv.meta.json").read_text())
    ma["config"].pop("output"), mb["config"].pop("output")
    assert ma == mb


def test_sidecar_meta_contents(tmp_path):
    path = write_config(tmp_path, SIM)
    out = tmp_path / "r.csv"
    assert main(["run", "--config", path, "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
    assert meta["generator"].startswith("boxprec ")
    assert meta["config"]["mode"] == "simulate"
    assert meta["n_rows"] == 2
    assert "emp_ber_box" in meta["column_semantics"]
    # Reproducible output: no clocks or hostnames in the sidecar.
    assert not any("time" in k or "host" in k for k in meta)


def test_seed_flag_moves_empirics_not_theory(tmp_path):
    path = write_config(tmp_path, SIM)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "--config", path, "--out", str(a),
                 "--format", "json"]) == 0
    assert main(["run", "--config", path, "--out", str(b),
                 "--format", "json", "--seed", "99"]) == 0
    ra = json.loads(a.read_text())["rows"]
    rb = json.loads(b.read_text())["rows"]
    for x, y in zip(ra, rb):
        assert x["box_ber"] == y["box_ber"]
        assert x["tau"] == y["tau"]
        assert x["emp_base_seed"] != y["emp_base_seed"]
    assert any(x["emp_ber_box"] != y["emp_ber_box"] for x, y in zip(ra, rb))


def test_quant_columns_gated_on_unit_power(tmp_path, capsys):
    rho2 = base_config()
    rho2["params"]["target_power"] = 2.0
    path = write_config(tmp_path, rho2)
    assert main(["run", "--config", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert "box_ber" in doc["columns"]
    assert "quant_ber" not in doc["columns"]
    assert "buss_ber" not in doc["columns"]


def test_json_encodes_infinite_amp(tmp_path, capsys):
    free = base_config()
    free["params"]["amp"] = "inf"
    path = write_config(tmp_path, free)
    assert main(["run", "--config", path, "--format", "json"]) == 0
    raw = capsys.readouterr().out
    doc = json.loads(raw)  # would fail on a bare Infinity literal
    assert doc["rows"][0]["amp"] == "inf"


def test_tune_quant_smoke(tmp_path, capsys):
    cfg = base_config(
        "tune-quant",
        target_snr_db=5.0,
        reg_grid=[0.001, 1.0],
        amp_grid=[0.47287080450158786],
    )
    path = write_config(tmp_path, cfg)
    assert main(["run", "--config", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    row = doc["rows"][0]
    assert row["pipeline"] == "quantized"
    assert row["reg"] == 0.001
    assert row["objective_ber"] == pytest.approx(0.0063948395462749318, rel=1e-9)
    assert len(doc["meta"]["grid_trace"]) == 2
    (key, ber) = doc["meta"]["grid_trace"][0]
    assert key == [0.001, 0.47287080450158786] and math.isfinite(ber)


def test_tuned_sweep_emits_pipeline_rows(tmp_path, capsys):
    cfg = base_config(
        "sweep",
        sweep={"parameter": "noise_var", "values": [0.05, 0.2]},
        tuned="both",
        target_snr_db=5.0,
        reg_grid=[1.0],
        amp_grid=[0.5],
    )
    cfg["params"]["amp"] = 2.0
    path = write_config(tmp_path, cfg)
    assert main(["run", "--config", path, "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["pipeline"] for r in doc["rows"]] == [
        "box", "quantized", "box", "quantized",
    ]
    for r in doc["rows"]:
        if r["pipeline"] == "quantized":
            assert r["target_power"] == 1.0 and "quant_ber" in r


def test_preset_overlay_merges(tmp_path):
    overlay = {
        "params": {"n_antennas": 100},
        "sweep": {"parameter": "amp", "values": [0.5]},
        "trials": 2,
    }
    path = write_config(tmp_path, overlay)
    out = tmp_path / "o.csv"
    assert main(["run", "--preset", "fig3", "--config", path,
                 "--out", str(out)]) == 0
    meta = json.loads((tmp_path / "o.csv.meta.json").read_text())
    cfg = meta["config"]
    assert meta["preset"] == "fig3"
    assert cfg["trials"] == 2
    assert cfg["params"]["n_antennas"] == 100
    assert cfg["params"]["reg"] == 0.001  # kept from the preset
    assert cfg["sweep"]["values"] == [0.5]


def test_verify_round_trip_and_corruption(tmp_path):
    path = write_config(tmp_path, SIM)
    out = tmp_path / "v.csv"
    assert main(["run", "--config", path, "--out", str(out)]) == 0
    assert verify_file(str(out)) == []
    assert main(["verify", "--in", str(out)]) == 0
    text = out.read_text()
    header = text.splitlines()[0].split(",")
    col = header.index("box_ber")
    lines = text.splitlines()
    cells = lines[1].split(",")
    cells[col] = repr(float(cells[col]) * 1.001)
    lines[1] = ",".join(cells)
    out.write_text("\n".join(lines) + "\n")
    problems = verify_file(str(out))
    assert len(problems) == 1 and "box_ber" in problems[0]
    assert main(["verify", "--in", str(out)]) == 1


def test_verify_honors_tolerance(tmp_path):
    path = write_config(tmp_path, base_config())
    out = tmp_path / "w.csv"
    assert main(["run", "--config", path, "--out", str(out)]) == 0
    text = out.read_text()
    header, line = text.splitlines()
    cols = header.split(",")
    cells = line.split(",")
    i = cols.index("tau")
    cells[i] = repr(float(cells[i]) * (1.0 + 1e-9))
    out.write_text(header + "\n" + ",".join(cells) + "\n")
    assert main(["verify", "--in", str(out)]) == 1
    assert main(["verify", "--in", str(out), "--tol", "1e-6"]) == 0


def test_verify_reads_json_documents(tmp_path):
    path = write_config(tmp_path, base_config())
    out = tmp_path / "d.json"
    assert main(["run", "--config", path, "--out", str(out),
                 "--format", "json"]) == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_exit_2_on_config_problems(tmp_path, capsys):
    assert main(["run"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema_version": 1,', encoding="utf-8")
    assert main(["run", "--config", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["run", "--preset", "fig9"])
    assert exc.value.code == 2


def test_exit_3_on_infeasible_tuning(tmp_path, capsys):
    cfg = base_config("tune-box", target_snr_db=5.0, reg_grid=[1.0])
    cfg["params"]["amp"] = 0.5  # 5 dB needs power 0.285 > amp^2
    path = write_config(tmp_path, cfg)
    assert main(["run", "--config", path]) == 3
    assert "solver error" in capsys.readouterr().err


def test_exit_4_on_unwritable_output(tmp_path, capsys):
    path = write_config(tmp_path, base_config())
    missing = tmp_path / "no_such_dir" / "out.csv"
    assert main(["run", "--config", path, "--out", str(missing)]) == 4
    assert "io error" in capsys.readouterr().err
    assert main(["verify", "--in", str(tmp_path / "absent.csv")]) == 4


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "boxprec", "run"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    assert "config error" in proc.stderr
