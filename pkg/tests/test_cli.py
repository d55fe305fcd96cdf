import csv
import json
import subprocess
import sys

from lieaut.catalog import default_catalog_path
from lieaut.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def toy_catalog(tmp_path, coeff="1"):
    entry = {"name": "toy", "family": "table3", "dim": 3, "params": [],
             "brackets": [{"i": 1, "j": 2, "k": 3, "coeff": coeff}]}
    path = tmp_path / "toy.json"
    path.write_text(json.dumps({"version": 1, "entries": [entry]}))
    return str(path)


def test_list_table3(capsys):
    code, out, _ = run(capsys, "list", "--family", "table3")
    names = [l for l in out.splitlines() if l and not l.startswith("#")]
    assert code == 0 and len(names) == 22
    assert "# table3: 22 algebras, 22 rows" in out


def test_list_all_counts(capsys):
    code, out, _ = run(capsys, "list")
    assert "# table1: 99 algebras, 119 rows" in out
    assert "# table2: 40 algebras, 43 rows" in out


def test_metric_basis_json(capsys):
    code, out, _ = run(capsys, "metric-basis", "g_6_91", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["dim"] == 2


def test_verify_aut_passes_and_is_deterministic(capsys):
    first = run(capsys, "verify-aut", "g_6_1", "--trials", "100", "--seed", "7")
    second = run(capsys, "verify-aut", "g_6_1", "--trials", "100", "--seed", "7")
    assert first[0] == 0
    assert first == second


def test_failures_exit_one(capsys):
    assert run(capsys, "jacobi", "N_6_25")[0] == 1
    assert run(capsys, "jacobi", "g_6_91")[0] == 0


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, "show", "g-6-91")
    assert code == 2 and "g_6_91" in err
    assert run(capsys, "verify-aut", "g_6_1", "--trials", "-3")[0] == 2
    assert run(capsys, "list", "--family", "table7")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "jacobi", "g_6_1", "--sample", "9")[0] == 2


def test_bad_catalog_exits_two(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("")
    assert run(capsys, "--catalog", str(bad), "list")[0] == 2


def test_validate_all_on_toy_catalogs(capsys, tmp_path):
    code, out, _ = run(capsys, "--catalog", toy_catalog(tmp_path), "validate-all", "--json")
    # a 3-dimensional Heisenberg algebra is not a table3 algebra, so validation flags it
    doc = json.loads(out)
    assert code == 1
    assert doc["flagged"] == ["toy"]


def test_export_json_matches_bundled_file(capsys, tmp_path):
    out = tmp_path / "cat.json"
    assert run(capsys, "export", "--format", "json", "--out", str(out))[0] == 0
    with open(default_catalog_path(), encoding="utf-8") as fh:
        assert out.read_text() == fh.read()


def test_export_csv(capsys, tmp_path):
    out = tmp_path / "cat.csv"
    assert run(capsys, "export", "--format", "csv", "--out", str(out))[0] == 0
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    kinds = {r["kind"] for r in rows}
    assert kinds <= {"automorphism", "killing", "metric_basis"}
    assert "automorphism" in kinds and "r6c6" in rows[0]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "lieaut", "list", "--family", "table3"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "A_6_3" in r.stdout.split()
