import io
import json
import math
import subprocess
import sys

import pytest

from sqpart import cli, exactcount, twosquares


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_members():
    assert run("members", "--limit", "10") == (0, "1\n2\n4\n5\n8\n9\n10\n")
    assert run("members", "--limit", "1") == (0, "1\n")


def test_members_zero_is_usage_error():
    assert run("members", "--limit", "0")[0] == cli.EXIT_USAGE


def test_members_over_cap():
    assert run("members", "--limit", "100", "--cap", "50")[0] == cli.EXIT_CAP


@pytest.mark.parametrize("argv, expected", [
    (["count", "4"], "4\n"),
    (["count", "0"], "1\n"),
    (["count", "100", "--set", "all"], "190569292\n"),
])
def test_count(argv, expected):
    assert run(*argv) == (0, expected)


def test_count_cap():
    assert run("count", "1000", "--cap", "999")[0] == cli.EXIT_CAP


def test_count_with_member_file_and_bitset(tmp_path):
    table = twosquares.sieve_membership(500)
    text = tmp_path / "s.txt"
    bits = tmp_path / "s.bits"
    twosquares.write_member_list(table, text)
    twosquares.write_bitset(table, bits)
    expected = run("count", "500")
    assert run("count", "500", "--set", f"file:{text}") == expected
    assert run("count", "500", "--set", f"file:{bits}") == expected


def test_count_with_prime_parts(tmp_path):
    path = tmp_path / "primes.txt"
    path.write_text("".join(f"{p}\n" for p in twosquares.primes_up_to(100)))
    # partitions of 10 into primes: 7+3, 5+5, 5+3+2, 3+3+2+2, 2*5
    assert run("count", "10", "--set", f"file:{path}") == (0, "5\n")


def test_count_bad_set():
    assert run("count", "10", "--set", "bogus")[0] == cli.EXIT_USAGE


@pytest.mark.parametrize("suffix", [".csv", ".bin"])
def test_count_save_and_compare_reuse(tmp_path, suffix):
    path = tmp_path / f"table{suffix}"
    assert run("count", "2001", "--save", str(path))[0] == 0
    table = exactcount.read_csv(path) if suffix == ".csv" else exactcount.read_binary(path)
    assert table.n_max == 2001
    fresh = run("compare", "--n", "1000", "2000")
    reused = run("compare", "--n", "1000", "2000", "--table", str(path))
    assert fresh == reused
    assert run("compare", "--n", "2001", "--table", str(path))[0] == cli.EXIT_USAGE


def test_estimate_main_record():
    code, text = run("estimate", "10000", "--method", "main")
    assert code == 0
    rec = json.loads(text)
    assert list(rec) == ["n", "method", "log_value", "rho", "X", "residual"]
    assert abs(rec["residual"]) <= 1e-12 * 10000


def test_estimate_small_n(capsys):
    assert run("estimate", "50")[0] == cli.EXIT_USAGE
    assert "n below asymptotic regime" in capsys.readouterr().err


def test_estimate_difference_identity():
    main = json.loads(run("estimate", "10000")[1])
    diff = json.loads(run("estimate", "10000", "--method", "difference")[1])
    assert diff["log_value"] == pytest.approx(main["log_value"] - math.log(main["X"]), abs=1e-12)


def test_estimate_simple():
    rec = json.loads(run("estimate", "1000", "--method", "simple")[1])
    assert rec["method"] == "simple"


def test_saddle_command():
    rec = json.loads(run("saddle", "1e6")[1])
    assert abs(rec["residual"]) <= 1e-12 * 1e6
    assert rec["rho"] == pytest.approx(math.exp(-1 / rec["X"]), rel=1e-15)
    assert run("saddle", "5")[0] == cli.EXIT_USAGE


def test_compare_geometric_range():
    code, text = run("compare", "--range", "1000", "20000", "--factor", "2")
    assert code == 0
    rows = cli.read_rows(text, "csv")
    assert [r.n for r in rows] == [1000, 2000, 4000, 8000, 16000]
    dev = [abs(r.ratio_main - 1) for r in rows]
    assert all(a > b for a, b in zip(dev, dev[1:]))
    assert text.splitlines()[0] == ",".join(cli.CSV_COLUMNS)


def test_compare_single_and_deterministic():
    a = run("compare", "--n", "1000")
    b = run("compare", "--n", "1000")
    assert a == b
    assert len(a[1].splitlines()) == 2


def test_compare_json_round_trip():
    code, text = run("compare", "--n", "1000", "1500", "--out", "json")
    rows = cli.read_rows(text, "json")
    buf = io.StringIO()
    cli.write_rows(rows, "json", buf)
    assert buf.getvalue() == text
    csv_buf = io.StringIO()
    cli.write_rows(rows, "csv", csv_buf)
    assert cli.read_rows(csv_buf.getvalue(), "csv") == rows


def test_compare_rows_consistent():
    rows = cli.read_rows(run("compare", "--n", "3000", "--out", "json")[1], "json")
    r = rows[0]
    assert r.ratio_main == pytest.approx(math.exp(r.exact_log - r.main_log), rel=1e-15)
    assert r.ratio_main > 0


def test_compare_errors():
    assert run("compare", "--n", "60000")[0] == cli.EXIT_CAP
    assert run("compare", "--n", "50")[0] == cli.EXIT_USAGE
    assert run("compare", "--range", "2000", "1000")[0] == cli.EXIT_USAGE


def test_constant():
    assert run("constant", "--digits", "9") == (0, "0.764223653\n")
    assert run("constant", "--digits", "15") == (0, "0.764223653589220\n")
    assert run("constant", "--digits", "16")[0] == cli.EXIT_USAGE
    rec = json.loads(run("constant", "--digits", "9", "--out", "json")[1])
    assert rec["digits"] == "0.764223653"
    assert rec["abs_error_bound"] <= 1e-10


def test_landau():
    rec = json.loads(run("landau", "10000000")[1])
    assert rec["count"] == twosquares.count_members_up_to(twosquares.sieve_membership(10**7), 10**7)
    assert 0.9 <= rec["ratio"] <= 1.1
    assert run("landau", "2")[0] == cli.EXIT_USAGE


def test_json_round_trip_records():
    for argv in (["estimate", "2000"], ["saddle", "12345"], ["landau", "1000"]):
        text = run(*argv)[1]
        assert json.dumps(json.loads(text)) + "\n" == text


def test_argparse_usage_exit_code():
    proc = subprocess.run([sys.executable, "-m", "sqpart", "estimate"],
                          capture_output=True, text=True)
    assert proc.returncode == 2


def test_module_entry_point_and_determinism():
    argv = [sys.executable, "-m", "sqpart", "compare", "--n", "1000", "1250"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a.startswith(b"n,exact_log")
