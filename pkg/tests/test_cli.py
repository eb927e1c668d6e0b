import json
import shutil

import pytest

from fglops.cli import DEFAULT_TRUNCATION, main
from fglops.golden import ENV_GOLDEN_DIR, golden_dir
from fglops.render import parse_series, series_from_obj



def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_log_command(capsys):
    code, out, _ = run(capsys, "log", "-p", "2", "-k", "7")
    assert code == 0
    assert out.strip() == "xi + l1*xi^2 + l2*xi^4 + O(xi)^8"


def test_exp_command_json_text_agree(capsys):
    code, text_out, _ = run(capsys, "exp", "-p", "2", "-k", "7")
    assert code == 0
    code, json_out, _ = run(capsys, "exp", "-p", "2", "-k", "7", "--format", "json")
    assert code == 0
    from_text = parse_series(text_out.strip(), 2, "l")
    from_json = series_from_obj(json.loads(json_out))
    assert from_text.coeffs == from_json.coeffs
    assert from_text.validity == from_json.validity


def test_pseries_factorization(capsys):
    code, out, _ = run(capsys, "pseries", "-p", "2", "-k", "7", "--basis", "l")
    assert code == 0
    ser = parse_series(out.strip(), 2, "l")
    assert ser.coefficient(0) == 0  # [2]xi = 2 xi - 2 l1 xi^2 + ... starts at xi
    assert ser.coefficient(1).constant_term() == 2
    assert ser.val() == 1


def test_reduced_pseries_mod_ideal(capsys):
    code, out, _ = run(capsys, "reduced-pseries", "-p", "2", "-k", "7",
                       "--basis", "v", "--ideal", "v2,v3")
    assert code == 0
    want = "2 - v1*xi + 2*v1^2*xi^2 - 8*v1^3*xi^3 + 26*v1^4*xi^4 - 84*v1^5*xi^5 + 300*v1^6*xi^6 + O(xi)^7"
    assert out.strip() == want


def test_ideal_validation(capsys):
    with pytest.raises(SystemExit):
        run(capsys, "reduced-pseries", "-p", "2", "-k", "7", "--ideal", "bogus")


def test_power_op_coeffs_reduced(capsys):
    code, out, _ = run(capsys, "power-op-coeffs", "-p", "2", "-k", "7",
                       "--max-i", "2", "--reduced", "--ideal", "v2,v3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "a_0 = xi + O(xi)^8"
    assert lines[1] == "a_1 = 1 + v1*xi + v1^4*xi^4 + v1^5*xi^5 + v1^6*xi^6 + O(xi)^7"
    assert lines[2] == "a_2 = v1^2*xi + v1^5*xi^4 + O(xi)^6"


def test_mc_command_text(capsys):
    code, out, _ = run(capsys, "mc", "-p", "2", "-k", "7", "--n", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "MC_2(xi) mod <2>xi = (v1^6 + v2^2)*xi^6 + O(xi)^7"
    assert lines[1] == "certificate: xi^6 -> v1^6 + v2^2"
    assert lines[2] == "annotation: obstruction index"


def test_mc_command_json(capsys):
    code, out, _ = run(capsys, "mc", "-p", "3", "-k", "13", "--n", "3", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["sparseness_shortcut"] is True
    assert obj["raw"] is None
    assert obj["certificate"] is None
    assert series_from_obj(obj["reduced"]).coeffs == {}


def test_mc_rejects_bad_n(capsys):
    assert main(["mc", "-p", "2", "-k", "7", "--n", "0"]) == 1


def test_mc_rejects_unreachable_n(capsys):
    # truncation too small to carry any meaningful a_i that far
    assert main(["mc", "-p", "2", "-k", "3", "--n", "5"]) == 1


def test_non_prime_rejected(capsys):
    with pytest.raises(SystemExit):
        run(capsys, "log", "-p", "6", "-k", "5")


def test_default_truncations():
    assert DEFAULT_TRUNCATION[2] == 14
    assert DEFAULT_TRUNCATION[3] == 25
    assert DEFAULT_TRUNCATION[5] == 76
    assert DEFAULT_TRUNCATION[7] == 162
    assert DEFAULT_TRUNCATION[11] == 370
    assert DEFAULT_TRUNCATION[13] == 504


def test_verify_suite_ok(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "p2")
    assert code == 0
    assert out.strip() == "suite p2: ok"


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suite", "p99"]) == 1


def test_verify_detects_mismatch(tmp_path, monkeypatch, capsys):
    src = golden_dir() / "p2.json"
    data = json.loads(src.read_text())
    # corrupt one published coefficient
    table = data["tables"][0]["series"]["terms"]
    table[3]["poly"][0]["coef"] = "999"
    (tmp_path / "p2.json").write_text(json.dumps(data))
    monkeypatch.setenv(ENV_GOLDEN_DIR, str(tmp_path))
    code, out, _ = run(capsys, "verify", "--suite", "p2")
    assert code == 2
    assert "MISMATCH" in out and "first mismatch at xi^3" in out


def test_golden_dir_env_override(tmp_path, monkeypatch, capsys):
    shutil.copy(golden_dir() / "p3.json", tmp_path / "p3.json")
    monkeypatch.setenv(ENV_GOLDEN_DIR, str(tmp_path))
    code, out, _ = run(capsys, "verify", "--suite", "p3")
    assert code == 0


def test_progress_goes_to_stderr_only(capsys):
    code, quiet_out, quiet_err = run(capsys, "mc", "-p", "3", "-k", "13", "--n", "2")
    code2, loud_out, loud_err = run(capsys, "mc", "-p", "3", "-k", "13", "--n", "2",
                                    "--progress")
    assert code == code2 == 0
    assert quiet_out == loud_out
    assert "progress:" in loud_err and "progress:" not in quiet_err


def test_threads_do_not_change_output(capsys):
    base = None
    for t in ("1", "4"):
        code, out, _ = run(capsys, "mc", "-p", "2", "-k", "9", "--n", "2",
                           "--threads", t, "--format", "json")
        assert code == 0
        base = out if base is None else base
        assert out == base
