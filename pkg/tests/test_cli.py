"""CLI commands and exit codes."""

from nfbsm.cli import main
from nfbsm.experiment import CSV_HEADER, load_csv
from nfbsm.hrtf import load_hrtf

FAST_CFG = """
distances_m = [0.3, 3.2]
freq_count = 5
design_grid_size = 32
order = 15
"""


def write_cfg(tmp_path, text=FAST_CFG):
    path = tmp_path / "sweep.cfg"
    path.write_text(text)
    return str(path)


def test_validate_ok(tmp_path, capsys):
    assert main(["validate", "--config", write_cfg(tmp_path)]) == 0
    assert "config ok" in capsys.readouterr().out


def test_validate_default_config(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "4 mics" in out and "6 distances" in out


def test_validate_bad_config(tmp_path, capsys):
    cfg = write_cfg(tmp_path, "distances_m = [-1]\n")
    assert main(["validate", "--config", cfg]) == 1
    assert "distances_m" in capsys.readouterr().err


def test_run_writes_csv(tmp_path):
    out = tmp_path / "errors.csv"
    assert main(["run", "--config", write_cfg(tmp_path), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2 * 5 * 2 * 2 + 1
    assert len(load_csv(out).records) == 40


def test_run_missing_config_is_io_error(tmp_path, capsys):
    code = main(["run", "--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "x.csv")])
    assert code == 3
    assert "i/o error" in capsys.readouterr().err


def test_run_unwritable_out_is_io_error(tmp_path):
    cfg = write_cfg(tmp_path)
    out = tmp_path / "missing_dir" / "x.csv"
    assert main(["run", "--config", cfg, "--out", str(out)]) == 3


def test_gen_hrtf_round_trips(tmp_path):
    out = tmp_path / "ref.hrtf"
    assert main(["gen-hrtf", "--config", write_cfg(tmp_path), "--out", str(out)]) == 0
    hset = load_hrtf(out)
    assert hset.num_directions == 32
    assert hset.num_frequencies == 5
    assert hset.reference_distance_m == 3.2


def test_gen_hrtf_requires_analytic_source(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path, "hrtf_source = file\nhrtf_path = whatever.hrtf\n"
    )
    assert main(["gen-hrtf", "--config", cfg, "--out", str(tmp_path / "o.hrtf")]) == 1
