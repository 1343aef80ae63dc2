import json

import pytest

from livatom.cli import RunConfig, UsageError, render, run
from livatom.constants import HARTREE_EV

FAST = ["--mc-samples", "200000"]


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def json_run(capsys, *argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_shift_hydrogen(capsys):
    rep = json_run(capsys, "shift", "hydrogen", "--n", "1", "--l", "0", "--m", "0", "--uniform-k", "1e-6")
    assert rep["value_hartree"] == pytest.approx(1e-6, rel=1e-14)
    assert rep["value_eV"] == pytest.approx(1e-6 * HARTREE_EV, rel=1e-14)
    assert rep["discrepancy_flag"] is False
    assert rep["constants"]["hartree_eV"] == HARTREE_EV
    assert len(rep["tensor"]["components"]) == 6


def test_shift_stark_flags_discrepancy(capsys):
    rep = json_run(capsys, "shift", "stark", "--uniform-k", "1e-6")
    assert rep["value_hartree"] == pytest.approx(-1e-6, rel=1e-14)
    assert rep["paper_formula_value_hartree"] == pytest.approx(-7e-6, rel=1e-14)
    assert rep["discrepancy_flag"] is True


def test_shift_spin_orbit(capsys):
    rep = json_run(capsys, "shift", "spin-orbit", "--n", "2", "--l", "1", "--j", "1.5", "--uniform-k", "1e-6")
    assert rep["value_hartree"] == pytest.approx(-7e-6 / 96, rel=1e-9)


def test_shift_helium(capsys):
    rep = json_run(capsys, "shift", "helium", "--uniform-k", "1e-6", *FAST)
    assert rep["terms"]["mc_samples"] == 200000
    assert abs(rep["value_hartree"] - 6.75e-6) <= 4 * rep["error_estimate"]
    assert rep["discrepancy_flag"] is True


def test_default_tensor_is_zero(capsys):
    rep = json_run(capsys, "shift", "hydrogen")
    assert rep["value_hartree"] == 0.0 and rep["tensor"] == {"components": []}


def test_kf_file(tmp_path, capsys):
    path = tmp_path / "kappa.json"
    path.write_text(json.dumps({"kappa": [[1e-6, 0, 0], [0, 1e-6, 0], [0, 0, 1e-6]]}))
    rep = json_run(capsys, "shift", "hydrogen", "--n", "2", "--l", "1", "--kf-file", str(path))
    assert rep["value_hartree"] == pytest.approx(2.5e-7, rel=1e-14)


def test_missing_kf_file(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code, out, err = invoke(capsys, "shift", "hydrogen", "--kf-file", str(missing))
    assert code == 2 and out == ""
    assert str(missing) in err


def test_malformed_kf_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = invoke(capsys, "shift", "hydrogen", "--kf-file", str(path))
    assert code == 2 and "bad.json" in err


def test_exclusive_tensor_flags(tmp_path, capsys):
    code, _, _ = invoke(capsys, "shift", "hydrogen", "--uniform-k", "1e-6", "--kf-file", "x.json")
    assert code == 2


def test_unknown_command(capsys):
    code, _, err = invoke(capsys, "frobnicate")
    assert code == 2 and "invalid choice" in err


def test_computation_error(capsys):
    code, out, err = invoke(capsys, "shift", "hydrogen", "--uniform-k", "0.5")
    assert code == 1 and out == ""
    assert err.startswith("livatom: livatom.kf_tensor: MagnitudeTooLarge:")


def test_invalid_state(capsys):
    code, _, err = invoke(capsys, "shift", "hydrogen", "--n", "1", "--l", "1")
    assert code == 1 and "InvalidQuantumNumbers" in err


def test_zero_slope(capsys):
    code, _, err = invoke(capsys, "bound", "single", "--system", "spin-orbit", "--n", "2", "--l", "0", "--j", "0.5")
    assert code == 1 and "ZeroSlope" in err


def test_manifold(capsys):
    rep = json_run(capsys, "manifold", "--n", "2", "--uniform-k", "1e-6")
    assert len(rep["eigenvalues_hartree"]) == 4
    assert rep["eigenvalues_hartree"] == sorted(rep["eigenvalues_hartree"])
    rep = json_run(capsys, "manifold", "--n", "2", "--spin", "--uniform-k", "1e-6")
    assert len(rep["eigenvalues_hartree"]) == 8


def test_field(capsys):
    rep = json_run(capsys, "field", "--charge", "1", "--at", "0,0,1", "--uniform-k", "0.01")
    four_pi = 4 * 3.141592653589793
    assert rep["A0"] == pytest.approx(0.99 / four_pi, rel=1e-14)
    assert rep["A"] == [0.0, 0.0, 0.0]
    assert rep["A0_green_minus_closed_form"] == pytest.approx(0.03 / four_pi, rel=1e-10)


def test_field_source_file(tmp_path, capsys):
    path = tmp_path / "src.json"
    path.write_text(json.dumps({"samples": [{"pos": [0, 0, 0], "j": [1, 0, 0, 0], "w": 1.0}]}))
    rep = json_run(capsys, "field", "--at", "0,0,1", "--source-file", str(path))
    assert rep["A_source"] == rep["A_green"]


def test_field_bad_vector(capsys):
    code, _, _ = invoke(capsys, "field", "--at", "0,1")
    assert code == 2


def test_check_consistency(capsys):
    rep = json_run(capsys, "check", "consistency", "--uniform-k", "1e-6")
    assert rep["trace_0j0j"] == pytest.approx(3e-6, rel=1e-15)
    assert rep["consistent"] is False


def test_bound_single(capsys):
    rep = json_run(capsys, "bound", "single", "--system", "hydrogen", "--accuracy-ev", "2e-12")
    row = rep["rows"][0]
    assert row["bound"] == pytest.approx(2e-12 / HARTREE_EV, rel=1e-14)
    assert row["paper_bound"] == 2.8e-17


def test_bound_table_text(capsys):
    code, out, _ = invoke(capsys, "bound", "table", "--format", "text", *FAST)
    assert code == 0
    for published in ("2.8e-17", "3.8e-17", "4.1e-18", "8.7e-13"):
        assert published in out


def test_bound_table_closed_form_model(capsys):
    rep = json_run(capsys, "bound", "table", "--model", "paper")
    assert [r["model"] for r in rep["rows"]] == ["paper_formula"] * 4


def test_csv(capsys):
    code, out, _ = invoke(capsys, "bound", "table", "--format", "csv", *FAST)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0].startswith("system,label,model")


def test_config_file(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"constants": {"hartree_eV": 27.0}, "default_accuracy_eV": 5e-12}))
    rep = json_run(capsys, "bound", "single", "--system", "hydrogen", "--config", str(path))
    assert rep["accuracy_eV"] == 5e-12
    assert rep["rows"][0]["slope_eV_per_K"] == pytest.approx(27.0, rel=1e-14)
    assert rep["constants"]["hartree_eV"] == 27.0


def test_config_unknown_key(tmp_path, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"bogus": 1}))
    code, _, err = invoke(capsys, "shift", "hydrogen", "--config", str(path))
    assert code == 2 and "bogus" in err


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig(output_format="xml")
    with pytest.raises(UsageError):
        RunConfig(constants={"hartree_eV": -1})


def test_invalid_mc_samples(capsys):
    code, _, _ = invoke(capsys, "shift", "helium", "--uniform-k", "1e-6", "--mc-samples", "0")
    assert code == 2


def test_repeatable_output(capsys):
    argv = ("shift", "helium", "--uniform-k", "1e-6", "--seed", "5", *FAST)
    _, a, _ = invoke(capsys, *argv)
    _, b, _ = invoke(capsys, *argv)
    assert a == b


def test_json_round_trip(capsys):
    rep = json_run(capsys, "shift", "spin-orbit", "--n", "3", "--l", "2", "--j", "2.5", "--uniform-k", "1e-7")
    assert json.loads(render(rep, "json")) == rep


def test_version(capsys):
    code, out, _ = invoke(capsys, "--version")
    assert code == 0 and out.strip() == "0.1.0"
