import subprocess
import sys

import numpy as np
import pytest

from entrofuse.cli import build_config, load_config_file, run_cli
from entrofuse.errors import ConfigError
from entrofuse.fileio import read_image, write_image


@pytest.fixture
def stack_files(tmp_path, rng):
    paths = []
    for k in range(3):
        p = tmp_path / f"e{k}.ppm"
        write_image(rng.integers(0, 256, (40, 48, 3)) / 255.0, p)
        paths.append(str(p))
    return paths


def test_fuse_happy_path(tmp_path, stack_files):
    out = tmp_path / "out.ppm"
    assert run_cli(["fuse", *stack_files, "-o", str(out)]) == 0
    assert read_image(out).shape == (40, 48, 3)


def test_fuse_without_inputs_is_usage_error(tmp_path):
    assert run_cli(["fuse", "-o", str(tmp_path / "o.ppm")]) == 1


def test_unknown_flag_is_usage_error(stack_files):
    assert run_cli(["fuse", *stack_files, "-o", "x.ppm", "--bogus"]) == 1


def test_missing_file_is_io_error(tmp_path):
    assert run_cli(["fuse", str(tmp_path / "nope.ppm"), "-o", str(tmp_path / "o.ppm")]) == 2


def test_mismatched_dimensions(tmp_path, stack_files):
    odd = tmp_path / "odd.ppm"
    write_image(np.zeros((10, 10, 3)), odd)
    assert run_cli(["fuse", stack_files[0], str(odd), "-o", str(tmp_path / "o.ppm")]) == 3


def test_bad_config_value(tmp_path, stack_files):
    assert run_cli(["fuse", *stack_files, "-o", str(tmp_path / "o.ppm"), "--window", "4"]) == 3


def test_baseline_mean(tmp_path, stack_files):
    out = tmp_path / "mean.ppm"
    assert run_cli(["fuse", *stack_files, "-o", str(out), "--baseline", "mean"]) == 0
    expected = np.mean([read_image(p) for p in stack_files], axis=0)
    assert np.max(np.abs(read_image(out) - expected)) <= 0.5 / 255 + 1e-12


def test_weights_subcommand(tmp_path, stack_files):
    outdir = tmp_path / "w"
    assert run_cli(["weights", *stack_files, "-o", str(outdir)]) == 0
    maps = [read_image(outdir / f"e{k}.weight.pgm") for k in range(3)]
    assert all(m.shape == (40, 48) for m in maps)
    assert np.allclose(np.sum(maps, axis=0), 1.0, atol=3 * 0.5 / 255)


def test_synth_then_metrics(tmp_path, capsys):
    assert run_cli(["synth", "--size", "32x24", "--times", "0.001,0.01", "-o", str(tmp_path)]) == 0
    files = sorted(str(p) for p in tmp_path.glob("exposure_*.pgm"))
    assert len(files) == 2 and read_image(files[0]).shape == (24, 32)
    capsys.readouterr()
    assert run_cli(["metrics", *files, "--kv"]) == 0
    out = capsys.readouterr().out
    assert "entropy" in out.splitlines()[0]
    assert f"{files[0]}.saturation_fraction=" in out


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "fuse.cfg"
    cfg.write_text("# tuned\nalpha = 0.5\ntiles = 4x2\nclip-limit = 2\nlevels = 3\nclahe = off\n")
    values = load_config_file(cfg)
    config = build_config({**values, "alpha": 0.3})
    assert config.clahe.alpha == 0.3
    assert (config.clahe.tile_rows, config.clahe.tile_cols) == (4, 2)
    assert config.clahe.clip_limit == 2.0
    assert config.pyramid.n_levels == 3
    assert config.enable_clahe is False


def test_config_file_rejects_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gain = 2\n")
    with pytest.raises(ConfigError):
        load_config_file(cfg)


def test_cli_flag_overrides_file(tmp_path, stack_files):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("window = 4\n")
    out = tmp_path / "o.ppm"
    assert run_cli(["fuse", *stack_files, "-o", str(out), "--config", str(cfg)]) == 3
    assert run_cli(["fuse", *stack_files, "-o", str(out), "--config", str(cfg), "--window", "5"]) == 0


def test_output_bytes_deterministic(tmp_path, stack_files):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    assert run_cli(["fuse", *stack_files, "-o", str(a)]) == 0
    assert run_cli(["fuse", *stack_files, "-o", str(b), "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path, stack_files):
    out = tmp_path / "m.ppm"
    proc = subprocess.run([sys.executable, "-m", "entrofuse", "fuse", *stack_files, "-o", str(out)],
                          capture_output=True)
    assert proc.returncode == 0 and out.exists()
