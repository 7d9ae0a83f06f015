import csv
import io
import json

import pytest

from ekd.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_vertices_csv(capsys):
    code, out, _ = run(capsys, "vertices", "-k", "2", "-d", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))[1:]
    assert {tuple(r[1:]) for r in rows} == {("0", "0"), ("4", "0"), ("1", "3"), ("0", "3/2")}


def test_vertices_json_and_cross_check(capsys):
    code, out, _ = run(capsys, "vertices", "-k", "1", "-d", "7")
    assert code == 0 and json.loads(out) == [{"J": [], "v": ["0"]}, {"J": [1], "v": ["6"]}]
    code, out, _ = run(capsys, "vertices", "-k", "3", "-d", "10", "--cross-check")
    assert code == 0 and len(json.loads(out)) == 8
    code, _, err = run(capsys, "vertices", "-k", "3", "-d", "3")
    assert code == 2 and "d > k" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "-d", "10", "-k", "1")
    assert code == 0 and json.loads(out)["branch"] == "TWO_FACTOR" and json.loads(out)["calE"] == "144"
    code, out, _ = run(capsys, "bounds", "--table", "20")
    rows = json.loads(out)
    assert sorted((r["d"], r["k"]) for r in rows if r["exceptional"]) == [(4, 1), (5, 1), (6, 1), (10, 1)]
    code, _, err = run(capsys, "bounds", "-d", "9", "-k", "3")
    assert code == 2 and "d > 3k" in err


def test_member_and_irreducible(capsys):
    code, out, _ = run(capsys, "member", "--poly", "x^3 - x - 1", "--point", "3")
    assert code == 0 and json.loads(out)["verdict"] == "NEGATIVE"
    code, out, _ = run(capsys, "member", "--poly", "1,0,-10,0,0,1", "--point", "4,0")
    assert json.loads(out)["verdict"] == "POSITIVE"
    code, _, err = run(capsys, "member", "--poly", "x^2 - 1", "--point", "1")
    assert code == 2
    code, out, _ = run(capsys, "irreducible", "--poly", "x^4 - 3x^2 + 1")
    assert code == 0 and json.loads(out)["status"] == "REDUCIBLE"


def test_verify_and_separation(capsys):
    code, out, _ = run(capsys, "verify", "--poly", "x^6 - x^2 - 1")
    data = json.loads(out)
    assert code == 0 and data["unitGap"]["holds"] and all(r["holds"] for r in data["marginIdentity"])
    code, out, _ = run(capsys, "separation", "--poly", "x^3 - x - 1")
    assert code == 0 and json.loads(out)["caseClass"] == "REAL_COMPLEX"


def test_tightness(capsys):
    code, out, _ = run(capsys, "tightness", "--kmax", "2")
    rows = json.loads(out)
    assert code == 0 and [r["verdict"] for r in rows] == ["INDETERMINATE"] * 2
    code, _, _ = run(capsys, "tightness", "--kmax", "5")
    assert code == 2


def test_scan_examples(tmp_path, capsys):
    out = tmp_path / "a.json"
    code, _, _ = run(capsys, "scan", "--d", "5", "--j", "2", "--h", "3..40", "--checks", "ANNULI",
                     "--output", str(out))
    recs = json.loads(out.read_text())
    assert code == 0 and len(recs) == 38
    for r in recs:
        if r["irreducibility"] == "IRREDUCIBLE":
            half = [e for e in r["checks"]["ANNULI"]["epsilons"] if e["eps"] == "1/2"][0]
            assert (half["inner"], half["outer"]) == (2, 3)

    code, out, _ = run(capsys, "scan", "--d", "6", "--j", "2", "--h", "3..10", "--k", "1",
                       "--checks", "MEMBERSHIP")
    recs = json.loads(out)
    assert code == 0
    for r in recs:
        m = r["checks"]["MEMBERSHIP"]
        assert m["status"] == "SKIP" or m["verdicts"]["POSITIVE"] == 2


def test_scan_sz_small(capsys):
    code, out, _ = run(capsys, "scan", "--d", "4..5", "--j", "last", "--h", "3..60", "--checks", "SZ_REMARK")
    recs = json.loads(out)
    assert code == 0 and len(recs) == 2 * 58
    assert all(r["checks"]["SZ_REMARK"]["status"] in ("PASS", "SKIP") for r in recs)


def test_scan_deterministic_and_parallel(tmp_path, capsys):
    args = ["scan", "--d", "4..6", "--h=-5..-3,3..5", "--checks", "ANNULI,UNIT_GAP,SEPARATION,MARGIN_IDENTITY"]
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert main(args + ["--jobs", "2", "--output", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    recs = json.loads(a.read_text())
    assert len(recs) == (3 + 4 + 5) * 6
    assert [(r["d"], r["j"], r["h"]) for r in recs] == sorted((r["d"], r["j"], r["h"]) for r in recs)


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--d", "4", "--h", "3", "--checks", "ANNULI,UNIT_GAP", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["d", "j", "h", "poly", "irreducibility", "ANNULI_status", "UNIT_GAP_status"]
    assert len(rows) == 4


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "scan.cfg"
    cfg.write_text("# small scan\nd = 4\nh = 3..4\nchecks = ANNULI\nformat = csv\n")
    code, out, _ = run(capsys, "scan", "--config", str(cfg))
    assert code == 0 and out.startswith("d,j,h") and len(out.splitlines()) == 1 + 3 * 2
    # command-line flags win over the file
    code, out, _ = run(capsys, "scan", "--config", str(cfg), "--format", "json", "--h", "3")
    assert len(json.loads(out)) == 3
    code, out, _ = run(capsys, "--format", "json", "scan", "--d", "4", "--h", "3")
    assert len(json.loads(out)) == 3


def test_bad_input_exit_codes(capsys):
    assert run(capsys, "scan", "--d", "4", "--h", "3", "--precision-cap", "10")[0] == 2
    assert run(capsys, "scan", "--d", "4", "--h", "3", "--checks", "NOPE")[0] == 2
    assert run(capsys, "member", "--poly", "x^2 + y", "--point", "1")[0] == 2
    assert run(capsys, "scan", "--h", "3")[0] == 2


def test_low_precision_cap(capsys):
    # the plastic-number vertex sits exactly on the boundary, so a 53-bit cap stays undecided
    code, out, _ = run(capsys, "member", "--poly", "x^3 - x - 1", "--point", "2", "--precision-cap", "53")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "INDETERMINATE" and data["value"]["bits"] == 53


def test_parse_range():
    assert parse_range("3..5") == (3, 4, 5)
    assert parse_range("-4..-3,3..4") == (-4, -3, 3, 4)
    assert parse_range("7") == (7,)
