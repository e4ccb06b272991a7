import json

import pytest

from mdcavity.cli import main, parse_config
from mdcavity.errors import ConfigError


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def data_lines(text):
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


def test_bands_csv(capsys):
    code, out, _ = run(["bands", "--omega-r", "0.1", "--n", "4", "--no-timestamp"], capsys)
    assert code == 0
    rows = data_lines(out)
    assert rows[0].split(",")[0] == "K" and len(rows) == 5
    assert "0.1118033988749895" in rows[1]
    assert any(ln.startswith("# parameters:") for ln in out.splitlines())


def test_output_is_deterministic(tmp_path, capsys):
    path = tmp_path / "a.csv"
    argv = ["dispersion", "--omega-r", "1", "--n", "40", "--labels", "p+", "-o", str(path), "--no-timestamp"]
    assert main(argv) == 0
    first = path.read_bytes()
    assert main(argv) == 0
    assert path.read_bytes() == first


def test_omega_p_rejected(capsys):
    code, _, err = run(["energy", "--omega-p", "2.0"], capsys)
    assert code == 2
    msg = json.loads(err)
    assert msg["error"] == "config" and "omega_p" in msg["message"]


def test_usage_error_category(capsys):
    code, _, err = run(["bands", "--bogus"], capsys)
    assert code == 2 and json.loads(err)["error"] == "usage"


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"chi_eps": 0.3, "omega_r": 0.2}))
    c = parse_config(["bands", "--config", str(cfg), "--omega-r", "0.5"])
    assert c.chi_eps == 0.3 and c.omega_r == 0.5
    cfg.write_text(json.dumps({"chi_eps": 0.3, "colour": "red"}))
    with pytest.raises(ConfigError, match="colour"):
        parse_config(["bands", "--config", str(cfg)])


def test_invalid_combination_names_field():
    with pytest.raises(ConfigError, match="omega_r"):
        parse_config(["energy", "--omega-r", "1", "--omega-r-min", "0.1", "--omega-r-max", "1", "--count", "3"])
    with pytest.raises(ConfigError, match="count"):
        parse_config(["energy", "--omega-r-min", "0.1", "--omega-r-max", "1"])


def test_threads_env(monkeypatch):
    monkeypatch.setenv("MDCAVITY_THREADS", "3")
    assert parse_config(["bands"]).n_threads() == 3
    assert parse_config(["bands", "--threads", "1"]).n_threads() == 1
    monkeypatch.setenv("MDCAVITY_THREADS", "many")
    with pytest.raises(ConfigError):
        parse_config(["bands"]).n_threads()


def test_json_format_and_length_column(capsys):
    code, out, _ = run(["force", "--omega-r", "2.0", "--format", "json", "--lambda-r-nm", "500", "--no-timestamp"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["columns"][-1] == "a_nm"
    row = dict(zip(doc["columns"], doc["rows"][0]))
    assert row["a_nm"] == pytest.approx(2.0 * 500 / (2 * 3.141592653589793))
    assert "sign_changes" in doc["summary"]


def test_figure_prefix_and_defaults():
    c = parse_config(["figure", "fig3b"])
    assert c.figure == "fig3b_dispersion" and c.omega_r == 0.1
    c = parse_config(["figure", "fig_force", "--count", "5"])
    assert c.count == 5 and c.omega_r_min == 0.5
    c = parse_config(["figure", "fig4_eta", "--omega-r", "0.3"])
    assert list(c.grid()) == [0.3]
    with pytest.raises(ConfigError):
        parse_config(["figure", "fig9"])


@pytest.mark.parametrize("fig", ["fig2_index", "fig3b_dispersion"])
def test_fast_figures(fig, capsys):
    code, out, _ = run(["figure", fig, "--n", "30", "--no-timestamp"], capsys)
    assert code == 0
    rows = data_lines(out)
    assert len(rows) > 20


def test_fig3b_contains_six_modes_and_two_limits(capsys):
    code, out, _ = run(["figure", "fig3b_dispersion", "--n", "60", "--no-timestamp"], capsys)
    rows = [r.split(",") for r in data_lines(out)[1:]]
    labels = {(r[0], r[1]) for r in rows}
    modes = {lab for kind, lab in labels if kind == "mode"}
    bands = {lab for kind, lab in labels if kind == "band"}
    assert modes == {"s0+", "p0+", "p0-", "s+", "p+", "p-"}
    assert bands == {"plus", "minus_evanescent"}


def test_zones_and_dos(capsys):
    code, out, _ = run(["zones", "--n", "6", "--no-timestamp"], capsys)
    assert code == 0 and len(data_lines(out)) == 37
    code, out, _ = run(["dos", "--n", "5", "--omega-r", "0.1", "--no-timestamp"], capsys)
    assert code == 0 and data_lines(out)[0] == "K,omega,D_s,D_p,zone"


def test_seventeen_digits(capsys):
    _, out, _ = run(["bands", "--omega-r", "0.3", "--n", "3", "--no-timestamp"], capsys)
    val = data_lines(out)[2].split(",")[1]
    assert len(val.replace(".", "").lstrip("0")) >= 16
