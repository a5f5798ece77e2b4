import numpy as np
import pytest

from beamdenoise import cli
from beamdenoise.beamspace import antenna, dft, read_vector_csv, write_vector_csv
from beamdenoise.bussgang import compute_params
from beamdenoise.channel import add_noise, generate_channel, quantize_1bit, stream
from beamdenoise.denoisers import sand
from beamdenoise.harness import CSV_HEADER


@pytest.fixture
def onebit_csv(tmp_path):
    h = generate_channel(64, 2, stream(1)).h
    r = quantize_1bit(add_noise(h, 0.1, stream(2)))
    path = tmp_path / "r.csv"
    write_vector_csv(path, r)
    return path, r


def test_denoise_writes_vector_and_summary(onebit_csv, tmp_path, capsys):
    path, r = onebit_csv
    out = tmp_path / "h.csv"
    assert cli.main(["denoise", "--alg", "sand", "--eh", "1", "--n0", "0.1", "--in", str(path), "--out", str(out)]) == 0
    line = capsys.readouterr().out.strip()
    ref = sand(r, compute_params(1.0, 0.1))
    assert line == f"tau_star={ref.tau_star!r} gamma_star={ref.gamma_star!r} sure_min={ref.sure_min!r}"
    np.testing.assert_array_equal(read_vector_csv(out).data, ref.h_star_ant.data)


@pytest.mark.parametrize("alg", ["sand", "alpha-beaches", "one-beaches", "beaches", "ml", "blmmse"])
def test_denoise_all_algorithms(onebit_csv, alg, capsys):
    path, _ = onebit_csv
    assert cli.main(["denoise", "--alg", alg, "--n0", "0.1", "--in", str(path)]) == 0
    assert capsys.readouterr().out.startswith("tau_star=")


def test_denoise_bad_input(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1;2\n")
    assert cli.main(["denoise", "--alg", "ml", "--n0", "1", "--in", str(bad)]) == 2
    assert "error" in capsys.readouterr().err


def test_simulate_to_stdout_and_file(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[sweep]\nB = 16\nL = 1\nsnr_db = 0, 10\ntrials = 2\nalgorithms = ml, sand\n")
    assert cli.main(["simulate", "--config", str(cfg)]) == 0
    stdout = capsys.readouterr().out
    assert stdout.splitlines()[0] == ",".join(CSV_HEADER)
    out = tmp_path / "o.csv"
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
    assert out.read_text() == stdout


def test_simulate_missing_config(tmp_path, capsys):
    assert cli.main(["simulate", "--config", str(tmp_path / "nope.ini")]) == 2
    assert "No such file" in capsys.readouterr().err
