import json

from fatpoints.cli import EXIT_BUDGET, EXIT_OK, EXIT_REJECT, EXIT_USAGE, SWEEP_CSV_HEADER, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dim_special_quartic(capsys):
    code, out, _ = run(capsys, "dim", "L(r=2,d=4; 2^5)")
    assert code == EXIT_OK
    assert "dim:      0" in out and "special:  yes" in out


def test_dim_empty_cubic(capsys):
    code, out, _ = run(capsys, "dim", "L(r=3,d=3; 2^5)")
    assert code == EXIT_OK and "dim:      -1" in out


def test_dim_subspace_system(capsys):
    code, out, _ = run(capsys, "dim", "L(r=7,d=2; {L1:codim3, 2^3 on L1}, 2)")
    assert code == EXIT_OK and "dim:      6" in out


def test_dim_json(capsys):
    code, out, _ = run(capsys, "dim", "--format", "json", "L(r=2,d=2; 2^2)")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["dim"] == 0 and data["special"] is True


def test_dim_parse_error(capsys):
    code, _, err = run(capsys, "dim", "L(r=2,d=2; zz)")
    assert code == EXIT_USAGE and "parse error" in err


def test_dim_budget_error(capsys):
    code, _, err = run(capsys, "dim", "--max-cols", "10", "L(r=3,d=4; 2^3)")
    assert code == EXIT_BUDGET and "budget" in err


def test_dim_cross_prime(capsys):
    code, out, _ = run(capsys, "dim", "--cross-prime", "2147483629", "L(r=3,d=4; 2^9)")
    assert code == EXIT_OK and out.count("dim:      0") == 2


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == EXIT_USAGE
    assert run(capsys, "prove", "3")[0] == EXIT_USAGE


def test_prove_verify_roundtrip(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, _, _ = run(capsys, "prove", "3", "5", "14", "-o", str(cert))
    assert code == EXIT_OK and cert.exists()
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == EXIT_OK and out.startswith("Accept")


def test_prove_table_row(capsys):
    code, out, _ = run(capsys, "prove", "4", "3", "7")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["rule"] == "TABLE" and data["claim"]["value"] == 0


def test_prove_explain(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "prove", "5", "3", "9", "-o", str(cert), "--explain")
    assert code == EXIT_OK and "CUBIC_BASE" in out


def test_verify_tampered_exit_one(tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(capsys, "prove", "3", "5", "14", "-o", str(cert))
    data = json.loads(cert.read_text())
    data["side_conditions"][0]["value"] = 1
    tampered = tmp_path / "tampered.json"
    tampered.write_text(json.dumps(data))
    code, _, err = run(capsys, "verify", str(tampered))
    assert code == EXIT_REJECT and "Reject" in err


def test_verify_malformed_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "rule": "TABLE"}')
    code, _, err = run(capsys, "verify", str(bad))
    assert code == EXIT_REJECT and "malformed" in err


def test_sweep_flags_exceptions(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--r-max", "4", "--d-max", "6", "--out", str(out_file))
    assert code == EXIT_OK
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == SWEEP_CSV_HEADER
    rows = {}
    for line in lines[1:]:
        r, d, n, virtual, expected, dim, special, rule, ms = line.split(",")
        rows[(int(r), int(d), int(n))] = (dim, special, rule)
    # every Theorem row in range is present and flagged special
    for key in [(2, 4, 5), (3, 4, 9), (4, 4, 14), (4, 3, 7), (3, 2, 2), (4, 2, 4)]:
        dim, special, rule = rows[key]
        assert special == "true" and rule == "TABLE", key
    # and nothing else is special
    for key, (dim, special, rule) in rows.items():
        if special == "true":
            assert key[1] == 2 or key in {(2, 4, 5), (3, 4, 9), (4, 4, 14), (4, 3, 7)}


def test_sweep_planar_has_single_exception(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--r-max", "2", "--d-max", "8", "--out", str(out_file))
    assert code == EXIT_OK
    special = [
        line for line in out_file.read_text().strip().split("\n")[1:]
        if line.split(",")[6] == "true"
    ]
    assert len(special) == 2  # (2,2,2) and (2,4,5)


def test_sweep_empty_range(capsys):
    code, out, _ = run(capsys, "sweep", "--r-max", "2", "--d-max", "2", "--r-min", "3")
    assert code == EXIT_OK
    assert out.strip() == SWEEP_CSV_HEADER


def test_sweep_deterministic_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", "--r-max", "3", "--d-max", "4", "--seed", "5", "--out", str(a))
    run(capsys, "sweep", "--r-max", "3", "--d-max", "4", "--seed", "5", "--jobs", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_sweep_budget_rows_skipped(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys, "sweep", "--r-max", "3", "--d-max", "4", "--max-cols", "20",
        "--out", str(out_file),
    )
    assert code == EXIT_OK
    body = out_file.read_text()
    assert "SKIPPED" in body
    # rows are marked, never dropped
    assert len(body.strip().split("\n")) > 1


def test_sweep_json_mirrors_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--r-max", "2", "--d-max", "3", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert all(
        set(row) == {"r", "d", "n", "virtual", "expected", "oracle_dim", "special", "rule", "ms"}
        for row in rows
    )
