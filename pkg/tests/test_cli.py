import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from shamap import cli, ingest

DATA = Path(__file__).parent / "data"


def run(*argv):
    return cli.main([str(a) for a in argv])


def csv_rows(path):
    return Path(path).read_text().splitlines()


def test_angle_value_parser():
    assert cli.angle_value("10pi") == 10 * math.pi
    assert cli.angle_value("0.05pi") == 0.05 * math.pi
    assert cli.angle_value("1.5") == 1.5
    with pytest.raises(Exception):
        cli.angle_value("tenpi")


def test_gen_counts(tmp_path):
    assert run("gen", "helix", "-o", tmp_path / "h.csv") == 0
    rows = csv_rows(tmp_path / "h.csv")
    assert rows[0] == "dim0,dim1,dim2" and len(rows) == 202
    assert run("gen", "double-helix", "-o", tmp_path / "d.csv") == 0
    rows = csv_rows(tmp_path / "d.csv")
    assert rows[0].endswith(",label") and len(rows) == 403
    assert run("gen", "protein", "-o", tmp_path / "p.csv", "--samples", 20) == 0
    assert len(csv_rows(tmp_path / "p.csv")) == 61


def test_gen_plane_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run("gen", "plane", "--n", 200, "--ambient", 5, "--seed", 7,
                   "-o", tmp_path / f"{name}.csv", "--truth", tmp_path / f"{name}_t.csv") == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a_t.csv").read_bytes() == (tmp_path / "b_t.csv").read_bytes()


def test_isomap_helix_spectral_ratio(tmp_path, capsys):
    run("gen", "helix", "-o", tmp_path / "h.csv")
    assert run("embed", tmp_path / "h.csv", "--method", "isomap", "--k", 2, "--dim", 2,
               "-o", tmp_path / "e.csv", "--spectrum", tmp_path / "s.txt") == 0
    capsys.readouterr()
    assert run("eval", tmp_path / "e.csv", "--metric", "spectral-ratio",
               "--spectrum", tmp_path / "s.txt", "--csv", tmp_path / "m.csv") == 0
    value = float(capsys.readouterr().out.split()[-1])
    assert value < 1e-3
    assert csv_rows(tmp_path / "m.csv")[0] == "metric,value"


def test_eval_winding_on_circle(tmp_path, capsys):
    t = np.arange(100) * 2 * math.pi / 100
    ingest.write_csv(tmp_path / "c.csv", np.c_[np.cos(t), np.sin(t)])
    assert run("eval", tmp_path / "c.csv", "--metric", "winding", "--center", "0,0") == 0
    assert float(capsys.readouterr().out.split()[-1]) == pytest.approx(1.0, abs=0.011)
    # a closed loop sampled with both endpoints reaches exactly one turn
    t = np.linspace(0, 2 * math.pi, 100)
    ingest.write_csv(tmp_path / "c.csv", np.c_[np.cos(t), np.sin(t)])
    assert run("eval", tmp_path / "c.csv", "--metric", "winding") == 0
    assert float(capsys.readouterr().out.split()[-1]) == pytest.approx(1.0, abs=1e-6)


def test_eval_nn_accuracy_and_separation(tmp_path, capsys, rng):
    a = rng.standard_normal((20, 2))
    ingest.write_csv(tmp_path / "e.csv", np.r_[a, a + 50], [0] * 20 + [1] * 20)
    assert run("eval", tmp_path / "e.csv", "--metric", "nn-accuracy",
               "--metric", "separation") == 0
    out = dict(line.split() for line in capsys.readouterr().out.splitlines())
    assert float(out["nn_accuracy"]) == 1.0
    assert float(out["min_cross_distance"]) > 0


def test_eval_procrustes_plane(tmp_path, capsys):
    run("gen", "plane", "--n", 200, "--ambient", 5, "--seed", 7, "-o", tmp_path / "p.csv",
        "--truth", tmp_path / "t.csv")
    assert run("embed", tmp_path / "p.csv", "--method", "isomap", "--complete",
               "-o", tmp_path / "e.csv") == 0
    capsys.readouterr()
    assert run("eval", tmp_path / "e.csv", "--metric", "procrustes",
               "--truth", tmp_path / "t.csv") == 0
    assert float(capsys.readouterr().out.split()[-1]) < 1e-8


def test_sammon_and_stress(tmp_path, capsys, rng):
    ingest.write_csv(tmp_path / "x.csv", rng.standard_normal((15, 4)))
    assert run("embed", tmp_path / "x.csv", "--method", "sammon", "--max-iters", 50,
               "-o", tmp_path / "e.csv") == 0
    capsys.readouterr()
    assert run("eval", tmp_path / "e.csv", "--metric", "stress", "--high", tmp_path / "x.csv") == 0
    assert 0 < float(capsys.readouterr().out.split()[-1]) < 1


def test_plot_command(tmp_path, rng):
    ingest.write_csv(tmp_path / "e.csv", rng.standard_normal((12, 2)), [0, 1] * 6)
    assert run("plot", tmp_path / "e.csv", "-o", tmp_path / "a.svg") == 0
    assert run("plot", tmp_path / "e.csv", "-o", tmp_path / "b.svg") == 0
    svg = (tmp_path / "a.svg").read_text()
    assert svg.count('class="marker"') == 12
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    ingest.write_csv(tmp_path / "e3.csv", rng.standard_normal((5, 3)))
    assert run("plot", tmp_path / "e3.csv", "-o", tmp_path / "c.svg") == 3


def test_exit_codes(tmp_path, capsys):
    run("gen", "helix", "-o", tmp_path / "h.csv")
    # disconnected graph is an algorithmic precondition failure
    assert run("embed", tmp_path / "h.csv", "--k", 1, "-o", tmp_path / "e.csv") == 4
    assert "connected components" in capsys.readouterr().err
    # reference on a data point
    assert run("embed", tmp_path / "h.csv", "--k", 2, "--ref", "1,0,0",
               "-o", tmp_path / "e.csv") == 4
    # missing file and malformed CSV are data errors
    assert run("embed", tmp_path / "nope.csv", "--k", 2, "-o", tmp_path / "e.csv") == 3
    (tmp_path / "bad.csv").write_text("dim0,dim1\n1,2\n3\n")
    assert run("embed", tmp_path / "bad.csv", "--k", 1, "-o", tmp_path / "e.csv") == 3
    # usage errors come from argparse
    with pytest.raises(SystemExit) as info:
        run("eval", tmp_path / "h.csv", "--metric", "bogus")
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        run("embed", tmp_path / "h.csv", "--k", 2, "--eps", 1.0, "-o", tmp_path / "e.csv")
    assert info.value.code == 2


def test_largest_component_flag(tmp_path, capsys):
    pts = np.r_[np.c_[np.arange(6.0) + 1, np.ones(6)], [[100.0, 100.0], [101.0, 100.0]]]
    ingest.write_csv(tmp_path / "x.csv", pts, [0] * 6 + [1] * 2)
    assert run("embed", tmp_path / "x.csv", "--k", 1, "--dim", 1, "--clamp-negative",
               "-o", tmp_path / "e.csv") == 4
    assert run("embed", tmp_path / "x.csv", "--k", 1, "--dim", 1, "--largest-component",
               "-o", tmp_path / "e.csv") == 0
    assert "dropped 2 point(s)" in capsys.readouterr().err
    emb, labels = ingest.read_csv(tmp_path / "e.csv")
    assert emb.n == 6 and labels.labels.tolist() == [0] * 6


def test_idx_input_with_selection(tmp_path):
    assert run("embed", DATA / "mnist01-images-idx3-ubyte.gz",
               "--labels", DATA / "mnist01-labels-idx1-ubyte.gz",
               "--select", "0:30", "--select", "1:30", "--k", 8,
               "-o", tmp_path / "e.csv", "--dump-angles", tmp_path / "dbg") == 0
    emb, labels = ingest.read_csv(tmp_path / "e.csv")
    assert emb.n == 60 and labels.labels.tolist() == [0] * 30 + [1] * 30
    theta, _ = ingest.read_csv(tmp_path / "dbg_theta.csv")
    assert theta.points.shape == (60, 60)


def test_pgm_directory_input(tmp_path, rng):
    d = tmp_path / "coil"
    d.mkdir()
    for obj in (1, 2):
        for view in range(6):
            img = ingest.GrayImage(4, 4, rng.integers(1, 256, 16, dtype=np.uint8))
            (d / f"obj{obj}__{view}.pgm").write_bytes(ingest.serialize_pgm(img))
    assert run("embed", d, "--k", 4, "--dim", 2, "--clamp-negative", "-o", tmp_path / "e.csv") == 0
    _, labels = ingest.read_csv(tmp_path / "e.csv")
    assert sorted(labels.labels.tolist()) == [1] * 6 + [2] * 6


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "shamap", "gen", "helix", "-o",
                           str(tmp_path / "h.csv")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "201" in proc.stdout
