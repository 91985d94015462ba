import subprocess
import sys

import numpy as np
import pytest

from ardpca import synthdata
from ardpca.cli import read_config, run


@pytest.fixture(scope="module")
def cylinder_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "d.csv"
    assert run(["generate", "--dataset", "cylinder", "--seed", "7", "--out", str(path)]) == 0
    return path


def test_generate_then_select_ard(cylinder_csv, tmp_path):
    out = tmp_path / "s.csv"
    assert run(["select", "--method", "ard", "--k", "10", "--in", str(cylinder_csv),
                "--out", str(out)]) == 0
    ds = synthdata.load_csv(out)
    assert ds.inputs.shape == (264, 10)
    assert ds.labels.shape == (264, 3)


def test_select_pca_with_model(cylinder_csv, tmp_path):
    out, model = tmp_path / "p.csv", tmp_path / "pca.csv"
    assert run(["select", "--method", "pca", "--k", "4", "--route", "sof", "--in",
                str(cylinder_csv), "--out", str(out), "--model-out", str(model)]) == 0
    assert synthdata.load_csv(out).d == 4
    manifest = (tmp_path / "manifest.txt").read_text()
    assert "p.csv\t" in manifest and "pca.csv\t" in manifest


def test_missing_output_directory_is_created(tmp_path):
    out = tmp_path / "a" / "b" / "d.csv"
    assert run(["generate", "--dataset", "cylinder", "--out", str(out)]) == 0
    assert out.exists() and (out.parent / "manifest.txt").exists()


def test_invalid_k_exit(cylinder_csv, tmp_path, capsys):
    code = run(["select", "--method", "ard", "--k", "0", "--in", str(cylinder_csv),
                "--out", str(tmp_path / "x.csv")])
    err = capsys.readouterr().err
    assert code != 0
    assert "invalid k" in err and err.count("\n") == 1


def test_unknown_flag_exit():
    assert run(["pipeline", "--no-such-flag"]) != 0


def test_missing_input_file(tmp_path, capsys):
    code = run(["select", "--method", "pca", "--k", "2", "--in", str(tmp_path / "nope.csv"),
                "--out", str(tmp_path / "o.csv")])
    assert code != 0 and capsys.readouterr().err.strip()


def test_train_and_evaluate(cylinder_csv, tmp_path):
    sel, net, rep = tmp_path / "s.csv", tmp_path / "net.csv", tmp_path / "e.csv"
    assert run(["select", "--method", "pca", "--k", "5", "--route", "sof",
                "--in", str(cylinder_csv), "--out", str(sel)]) == 0
    assert run(["train", "--in", str(sel), "--out", str(net), "--seed", "2"]) == 0
    assert run(["evaluate", "--net", str(net), "--in", str(sel), "--out", str(rep)]) == 0
    header, row = rep.read_text().splitlines()
    assert header.startswith("accuracy,")
    assert float(row.split(",")[0]) > 80


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cylinder run\ndataset = cylinder\nroute=sof\nseeds=1\nk=3,5\n")
    assert read_config(cfg)["dataset"] == "cylinder"
    out = tmp_path / "out"
    assert run(["pipeline", "--config", str(cfg), "--k", "3", "--out-dir", str(out)]) == 0
    table = (out / "table_cylinder_sof.csv").read_text().splitlines()
    assert len(table) == 2 and table[1].startswith("3,")
    assert (out / "trend_cylinder_sof.svg").exists()
    manifest = (out / "manifest.txt").read_text().splitlines()
    assert len(manifest) == 3
    assert all('"k_list": [3]' in line for line in manifest)


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    assert run(["pipeline", "--config", str(cfg)]) != 0


def test_pipeline_bit_identical(tmp_path):
    args = ["pipeline", "--dataset", "cylinder", "--seeds", "1,2", "--k", "3,10"]
    assert run(args + ["--out-dir", str(tmp_path / "a")]) == 0
    assert run(args + ["--out-dir", str(tmp_path / "b")]) == 0
    for name in ("table_cylinder_sof.csv", "reports_cylinder_sof.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_module_entry_point(tmp_path):
    out = tmp_path / "g.csv"
    proc = subprocess.run([sys.executable, "-m", "ardpca", "generate", "--dataset", "gear",
                           "--revs-per-class", "2", "--out", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    ds = synthdata.load_csv(out)
    assert ds.inputs.shape == (6, 1024)
    np.testing.assert_array_equal(np.unique(ds.labels), [0, 0.5, 1])

    proc = subprocess.run([sys.executable, "-m", "ardpca", "pipeline", "--k", "0"],
                          capture_output=True, text=True)
    assert proc.returncode != 0 and "invalid k" in proc.stderr
