import pytest

from psquares.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--c", "3/2", "--N", "10", "--s", "2")
    assert code == 0 and kv(out)["exact_count"] == "3"
    code, out, _ = run(capsys, "count", "--c", "3/2", "--N", "10", "--S", "2")
    assert code == 0 and kv(out)["exact_count"] == "4" and kv(out)["kind"] == "Qfrak"


def test_precondition_exit_code(capsys):
    code, _, err = run(capsys, "count", "--c", "5/2", "--N", "10", "--s", "1")
    assert code == 2 and "error" in err
    assert run(capsys, "count", "--c", "3/2", "--N", "10")[0] == 2


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "decompose", "--c", "3/2", "--N", "100000", "--S", "100", "--budget", "10")
    assert code == 3 and "budget" in err


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--c", "3/2", "--N", "10", "--S", "2")
    d = kv(out)
    assert code == 0 and d["Qfrak_exact"] == "4" and abs(float(d["residual"])) < 1e-9


def test_pairs(capsys):
    code, out, _ = run(capsys, "pairs", "--pair", "BABAAB")
    d = kv(out)
    assert code == 0 and d["kappa"] == "2/9" and d["lambda"] == "11/18" and d["hypothesis"] == "True"
    code, out, _ = run(capsys, "pairs", "--search", "--constraint", "half", "--max-len", "6")
    assert kv(out)["word"] == "BABAAB"
    code, out, _ = run(capsys, "pairs", "--pair", "13/84,55/84")
    assert code == 0 and "caveat" not in kv(out)
    assert run(capsys, "pairs", "--search", "--constraint", "half", "--max-len", "0")[0] == 2


def test_psi(capsys):
    code, out, _ = run(capsys, "psi", "--H", "1,5", "--grid", "100")
    assert code == 0 and out.strip().endswith("ok=True")


def test_expsum(capsys):
    code, out, _ = run(capsys, "expsum", "--X", "1", "--M", "4,4,4")
    d = kv(out)
    assert code == 0 and 0 < float(d["triple_sum"]) <= 64 and d["alpha2_near_2"] == "False"
    assert run(capsys, "expsum", "--alphas", "1,1.5,1.5")[0] == 2


def test_scan_fit_tau(capsys, tmp_path):
    csv = tmp_path / "scan.csv"
    code, _, _ = run(capsys, "scan", "--c", "3/2", "--grid", "2:4", "--S-rule", "N^1/2", "--out", str(csv))
    assert code == 0 and len(csv.read_text().splitlines()) == 4
    code, out, _ = run(capsys, "fit", str(csv), "--S-rule", "N^1/2")
    assert code == 0 and kv(out)["points"] == "3"
    code, out, _ = run(capsys, "scan", "--c", "3/2", "--N", "10,100", "--S", "2")
    assert code == 0 and out.splitlines()[1].startswith("3,2,10,2,4,")
    code, out, _ = run(capsys, "tau")
    assert code == 0 and len([l for l in out.splitlines() if not l.startswith("#")]) == 99
