import json
import struct
import subprocess
import sys

import numpy as np
import pytest

from ghostedge import Image, JigiConfig, generate_patterns, measure, psnr, reconstruct_jigi, snr
from ghostedge.cli import main
from ghostedge.formats import (
    load_measurements,
    read_pgm,
    save_measurements,
    save_patterns,
    write_pgm,
)
from ghostedge.metrics import ground_truth_edge
from ghostedge.phantoms import aircraft
from ghostedge.sensing import one_hot_patterns


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def scene(tmp_path):
    """A 16x16 aircraft, 60 patterns and their measurements on disk."""
    obj = tmp_path / "obj.pgm"
    assert run("phantom", "--size", 16, "--out", obj) == 0
    pat = tmp_path / "p.gipt"
    assert run("gen-patterns", "--rows", 16, "--cols", 16, "--M", 60, "--seed", 3, "--out", pat) == 0
    meas = tmp_path / "y.gims"
    assert run("measure", "--patterns", pat, "--object", obj, "--out", meas) == 0
    return tmp_path, obj, pat, meas


def test_gen_patterns_header_and_stdout(tmp_path, capsys):
    out = tmp_path / "p.gipt"
    assert run("gen-patterns", "--rows", 8, "--cols", 8, "--M", 4, "--seed", 7, "--out", out) == 0
    data = out.read_bytes()
    assert data[:4] == b"GIPT" and struct.unpack_from("<III", data, 6) == (4, 8, 8)
    assert "M=4 rows=8 cols=8 density=0.5" in capsys.readouterr().out


def test_gen_patterns_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.gipt", tmp_path / "b.gipt"
    for out in (a, b):
        run("gen-patterns", "--rows", 8, "--cols", 8, "--M", 4, "--seed", 7, "--out", out)
    assert a.read_bytes() == b.read_bytes()


def test_gen_patterns_bad_density(tmp_path):
    assert run("gen-patterns", "--rows", 8, "--cols", 8, "--M", 4, "--density", 1.5,
               "--out", tmp_path / "p.gipt") == 2


def test_measure_matches_library(scene):
    _, obj, pat, meas = scene
    stack = generate_patterns(16, 16, 60, 0.5, 3)
    expected = measure(stack, read_pgm(obj))
    assert load_measurements(meas).values.tobytes() == expected.values.tobytes()


def test_measure_zero_object_and_single_pattern(tmp_path):
    obj = tmp_path / "zero.pgm"
    write_pgm(obj, np.zeros((4, 4)))
    pat = tmp_path / "p.gipt"
    save_patterns(pat, generate_patterns(4, 4, 5, 0.5, 0))
    run("measure", "--patterns", pat, "--object", obj, "--out", tmp_path / "y.gims")
    assert np.all(load_measurements(tmp_path / "y.gims").values == 0)

    from ghostedge import PatternStack
    from ghostedge.formats import encode_pgm
    # maxval 4 keeps every pixel a multiple of 1/4, so the sum is exact in any order
    raster = (np.arange(16, dtype=np.uint8) % 5).reshape(4, 4)
    obj2 = tmp_path / "ramp.pgm"
    obj2.write_bytes(encode_pgm(raster, 4))
    save_patterns(pat, PatternStack(np.ones((1, 4, 4), dtype=np.uint8)))
    run("measure", "--patterns", pat, "--object", obj2, "--out", tmp_path / "s.gims")
    assert load_measurements(tmp_path / "s.gims").values.tolist() == [raster.sum() / 4]


def test_measure_shape_mismatch(tmp_path, capsys):
    obj = tmp_path / "o.pgm"
    write_pgm(obj, np.zeros((5, 5)))
    pat = tmp_path / "p.gipt"
    save_patterns(pat, generate_patterns(4, 4, 2, 0.5, 0))
    assert run("measure", "--patterns", pat, "--object", obj, "--out", tmp_path / "y.gims") == 2
    err = capsys.readouterr().err
    assert "5x5" in err and "4x4" in err


def test_missing_file_is_io_error(tmp_path):
    assert run("measure", "--patterns", tmp_path / "nope.gipt", "--object", tmp_path / "o.pgm",
               "--out", tmp_path / "y.gims") == 3


def test_reconstruct_identity_fixture(tmp_path):
    obj = tmp_path / "obj.pgm"
    write_pgm(obj, aircraft(16))
    pat, meas = tmp_path / "p.gipt", tmp_path / "y.gims"
    stack = one_hot_patterns(16, 16)
    save_patterns(pat, stack)
    save_measurements(meas, measure(stack, read_pgm(obj)))
    out = tmp_path / "img.pgm"
    assert run("reconstruct", "--method", "jigi", "--patterns", pat, "--measurements", meas,
               "--omega", 1.0, "--epsilon", 1e-8, "--out-image", out) == 0
    from ghostedge.formats import decode_pgm
    got, _ = decode_pgm(out.read_bytes())
    want, _ = decode_pgm(obj.read_bytes())
    assert np.abs(got.astype(int) - want.astype(int)).max() <= 1


def test_reconstruct_outputs_and_determinism(scene):
    tmp, _, pat, meas = scene
    outputs = []
    for tag in ("a", "b"):
        files = [tmp / f"{tag}_img.pgm", tmp / f"{tag}_edge.pgm", tmp / f"{tag}.json"]
        assert run("reconstruct", "--patterns", pat, "--measurements", meas, "--max-iters", 20,
                   "--out-image", files[0], "--out-edge", files[1], "--out-log", files[2]) == 0
        outputs.append([f.read_bytes() for f in files])
    assert outputs[0] == outputs[1]
    log = json.loads(outputs[0][2])
    assert log["iterations"] == len(log["residual_history"]) <= 20
    assert log["parameters"]["max_iters"] == 20 and log["parameters"]["clamp"] is True
    assert set(log["edge_scale"]) == {"min", "max", "bits"}
    assert "wall_time_s" not in log


def test_reconstruct_matches_library(scene):
    tmp, _, pat, meas = scene
    out, edge, log = tmp / "i.pgm", tmp / "e.pgm", tmp / "l.json"
    run("reconstruct", "--patterns", pat, "--measurements", meas, "--max-iters", 15,
        "--out-image", out, "--out-edge", edge, "--out-log", log)
    res = reconstruct_jigi(generate_patterns(16, 16, 60, 0.5, 3), load_measurements(meas),
                           JigiConfig(max_iterations=15))
    assert json.loads(log.read_text())["residual_history"] == list(res.residual_history)
    lib = tmp / "lib.pgm"
    from ghostedge.core import minmax_normalize
    write_pgm(lib, minmax_normalize(res.edge.coefficients))
    assert lib.read_bytes() == edge.read_bytes()


def test_reconstruct_timing_flag(scene):
    tmp, _, pat, meas = scene
    run("reconstruct", "--patterns", pat, "--measurements", meas, "--max-iters", 2,
        "--out-image", tmp / "i.pgm", "--out-log", tmp / "l.json", "--timing")
    assert json.loads((tmp / "l.json").read_text())["wall_time_s"] >= 0


def test_reconstruct_cgi_warns_about_iterative_flags(scene, capsys):
    tmp, _, pat, meas = scene
    assert run("reconstruct", "--method", "cgi", "--patterns", pat, "--measurements", meas,
               "--radius", 3, "--out-image", tmp / "c.pgm", "--out-edge", tmp / "ce.pgm",
               "--out-log", tmp / "c.json") == 0
    assert "--radius" in capsys.readouterr().err
    assert not (tmp / "ce.pgm").exists()
    assert json.loads((tmp / "c.json").read_text())["parameters"] == {}


def test_reconstruct_cgi_single_pattern_fails(tmp_path):
    pat, meas = tmp_path / "p.gipt", tmp_path / "y.gims"
    stack = generate_patterns(4, 4, 1, 0.5, 0)
    save_patterns(pat, stack)
    save_measurements(meas, measure(stack, np.ones((4, 4))))
    assert run("reconstruct", "--method", "cgi", "--patterns", pat, "--measurements", meas,
               "--out-image", tmp_path / "c.pgm") == 2


def test_reconstruct_degenerate_patterns_is_numerical_error(tmp_path):
    from ghostedge import PatternStack
    pat, meas = tmp_path / "p.gipt", tmp_path / "y.gims"
    save_patterns(pat, PatternStack(np.zeros((3, 4, 4), dtype=np.uint8)))
    save_measurements(meas, measure(PatternStack(np.zeros((3, 4, 4))), np.ones((4, 4))))
    assert run("reconstruct", "--patterns", pat, "--measurements", meas,
               "--out-image", tmp_path / "i.pgm") == 4


def test_metrics_identical_and_closed_form(tmp_path, capsys):
    ref = tmp_path / "r.pgm"
    base = np.zeros((8, 8))
    base[:, 4:] = 0.5
    write_pgm(ref, base, 8)
    assert run("metrics", "--reference", ref, "--candidate", ref, "--out", tmp_path / "m.json") == 0
    assert "PSNR: inf" in capsys.readouterr().out
    assert json.loads((tmp_path / "m.json").read_text())["psnr"] == "inf"

    # 8-bit codes: 0.4 and 0.9 differ from 0.3/0.8 by exactly 0.1 only in exact arithmetic,
    # so write explicit rasters with a uniform 0.1 offset on a 0..10 scale
    from ghostedge.formats import encode_pgm
    a = np.zeros((4, 4), dtype=np.uint8)
    a[:, 2:] = 5
    (tmp_path / "a.pgm").write_bytes(encode_pgm(a, 10))
    (tmp_path / "b.pgm").write_bytes(encode_pgm(a + 1, 10))
    run("metrics", "--reference", tmp_path / "a.pgm", "--candidate", tmp_path / "b.pgm")
    assert "PSNR: 20.0000" in capsys.readouterr().out


def test_metrics_undefined_snr(tmp_path, capsys):
    ref, cand = tmp_path / "r.pgm", tmp_path / "c.pgm"
    step = np.zeros((8, 8))
    step[:, 4:] = 1.0
    write_pgm(ref, step, 8)
    write_pgm(cand, np.full((8, 8), 0.5), 8)
    assert run("metrics", "--reference", ref, "--candidate", cand, "--out", tmp_path / "m.json") == 0
    assert "SNR: null" in capsys.readouterr().out
    report = json.loads((tmp_path / "m.json").read_text())
    assert report["snr"] is None and report["snr_note"]


def test_metrics_match_library(tmp_path, capsys, rng):
    ref, cand = tmp_path / "r.pgm", tmp_path / "c.pgm"
    write_pgm(ref, aircraft(16))
    write_pgm(cand, rng.random((16, 16)))
    run("metrics", "--reference", ref, "--candidate", cand, "--out", tmp_path / "m.json")
    out = capsys.readouterr().out
    r, c = read_pgm(ref), read_pgm(cand)
    mask, _ = ground_truth_edge(r)
    assert f"SNR: {snr(c, mask):.4f}" in out
    assert f"PSNR: {psnr(r, c):.4f}" in out
    report = json.loads((tmp_path / "m.json").read_text())
    assert report["psnr"] == psnr(r, c) and report["snr"] == snr(c, mask)


def test_metrics_edge_target_and_mask_file(tmp_path, capsys):
    ref, edge = tmp_path / "r.pgm", tmp_path / "e.pgm"
    write_pgm(ref, aircraft(16))
    _, truth = ground_truth_edge(aircraft(16))
    write_pgm(edge, truth)
    run("metrics", "--reference", ref, "--candidate", edge, "--target", "edge")
    assert "PSNR: inf" in capsys.readouterr().out
    run("metrics", "--reference", ref, "--candidate", edge, "--target", "edge", "--mask-source", edge)
    assert "PSNR: inf" in capsys.readouterr().out


def test_sweep_table_and_determinism(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("size = 16\nm_values = [20, 30, 40]\n[loop]\nmax_iterations = 30\n")
    for tag in ("a", "b"):
        assert run("sweep", "--config", cfg, "--out-dir", tmp_path / tag) == 0
    table = (tmp_path / "a" / "summary.tsv").read_text().splitlines()
    assert table[0].split("\t") == ["M", "image_psnr", "edge_psnr", "edge_snr", "iterations",
                                    "seconds", "status"]
    assert len(table) == 4 and all(line.endswith("\tok") for line in table[1:])
    for name in ("summary.tsv", "psnr_vs_m.pgm", "config.json", "M00020/image.pgm", "M00040/edge.pgm"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_records_failed_point(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("size = 16\nm_values = [0, 20]\n[loop]\nmax_iterations = 5\n")
    assert run("sweep", "--config", cfg, "--out-dir", tmp_path / "s") == 0
    rows = (tmp_path / "s" / "summary.tsv").read_text().splitlines()
    assert "ParameterError" in rows[1] and rows[2].endswith("\tok")


def test_sweep_needs_out_dir():
    assert run("sweep") == 2


def test_sweep_rejects_unknown_config_key(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text("bogus = 1\n")
    assert run("sweep", "--config", cfg, "--out-dir", tmp_path / "s") == 2


def test_console_script_runs(tmp_path):
    out = tmp_path / "p.gipt"
    proc = subprocess.run([sys.executable, "-m", "ghostedge.cli", "gen-patterns", "--rows", "2",
                           "--cols", "2", "--M", "1", "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and out.exists()
