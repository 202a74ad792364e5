import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from symbidisc import leaf_index
from symbidisc.cli import (
    EXIT_BOUNDARY,
    EXIT_DATA,
    EXIT_FAIL,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    ORBIT_HEADER,
    UsageError,
    contract_failures,
    main,
    parse_complex,
    parse_point,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_json(out):
    return json.loads(out)


@pytest.mark.parametrize(
    "token, z",
    [("0", 0), ("i", 1j), ("-i", -1j), ("2.5", 2.5), ("0.3+0.4i", 0.3 + 0.4j), ("-1e-3-2j", -1e-3 - 2j), ("-.5i", -0.5j)],
)
def test_parse_complex(token, z):
    assert parse_complex(token) == z


@pytest.mark.parametrize("token", ["", "abc", "1+", "nan", "inf", "1..2"])
def test_parse_complex_rejects(token):
    with pytest.raises(UsageError):
        parse_complex(token)


def test_parse_point_paired_reals():
    assert parse_point(["0.1", "0.2", "0.3", "0.4"], 2) == [0.1 + 0.2j, 0.3 + 0.4j]
    with pytest.raises(UsageError):
        parse_point(["1", "2", "3"], 2)
    with pytest.raises(UsageError):
        parse_point(["i", "2", "3", "4"], 2)


def test_member_examples(capsys):
    code, out, _ = run(capsys, "member", "G", "0", "0")
    assert code == EXIT_OK and "INSIDE" in out
    assert all(f"conditions_{k}: INSIDE" in out for k in range(1, 10))
    code, out, _ = run(capsys, "member", "D1", "i", "0")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "member", "Gc", "0", "0", "--c", "2")
    assert code == EXIT_OK


@pytest.mark.parametrize(
    "argv, code",
    [
        (["member", "G", "3", "0"], EXIT_FAIL),
        (["member", "G", "2", "1"], EXIT_BOUNDARY),
        (["member", "G", "0", "0", "--condition", "7"], EXIT_OK),
        (["member", "G", "0", "0", "--condition", "12"], EXIT_DATA),
        (["member", "Gc", "0", "0", "--c", "0.5"], EXIT_DATA),
        (["member", "G", "0"], EXIT_USAGE),
        (["member", "G", "x", "0"], EXIT_USAGE),
        (["member", "Nowhere", "0", "0"], EXIT_USAGE),
        (["member", "Omega1", "0.8", "0"], EXIT_OK),
        (["member", "D21", "1", "1.25", "0.75i", "0"], EXIT_OK),
        (["member", "D21", "1", "0", "2", "1"], EXIT_FAIL),
        (["member", "Ds", "i", "-0.5i", "--s", "8"], EXIT_FAIL),
        (["member", "Dst", "i", "-0.5i", "--s", "1", "--t", "inf"], EXIT_OK),
        (["member", "Dc", "i", "0", "--c", "1.5"], EXIT_OK),
        (["map", "Finv", "-i", "0"], EXIT_DATA),
        (["map", "F", "0"], EXIT_USAGE),
        (["levi", "--a", "1.5"], EXIT_DATA),
        (["levi", "--a", "0.5", "--alpha", "2"], EXIT_DATA),
        (["orbit", "--a", "1.2", "--n", "3"], EXIT_DATA),
        (["orbit", "--a", "0.5", "--n", "3", "--out", "/nonexistent/dir/x.csv"], EXIT_IO),
        (["verify", "no-such-suite"], EXIT_USAGE),
        ([], EXIT_USAGE),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_map_examples(capsys):
    code, out, _ = run(capsys, "map", "F", "0", "0", "--format", "json")
    rec = as_json(out)
    assert code == EXIT_OK and complex(rec["y0_re"], rec["y0_im"]) == 1j and rec["y1_re"] == 0
    code, out, _ = run(capsys, "map", "H", "0.5", "-0.5", "--roundtrip", "--format", "json")
    rec = as_json(out)
    assert abs(rec["y0_re"] - 0.8) < 1e-15 and rec["roundtrip_residual"] < 1e-12
    code, out, _ = run(capsys, "map", "symOmega1", "0.8", "0", "--format", "json")
    rec = as_json(out)
    assert abs(complex(rec["y0_re"], rec["y0_im"]) - 0.6j) < 1e-15


@pytest.mark.parametrize("name, coords", [("F", ["0.4+0.4i", "0.03+0.04i"]), ("J", ["0.5", "-0.5"]), ("sym", ["0.3", "0.1i"])])
def test_map_roundtrip_flag(capsys, name, coords):
    code, out, _ = run(capsys, "map", name, *coords, "--roundtrip", "--format", "json")
    assert code == EXIT_OK and as_json(out)["roundtrip_residual"] < 1e-12


def test_csv_and_plain_formats(capsys):
    _, out, _ = run(capsys, "map", "H", "0.5", "-0.5", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2 and rows[0][0] == "map" and rows[1][0] == "H"
    y0 = float(rows[1][rows[0].index("y0_re")])
    assert y0 == pytest.approx(0.8, abs=1e-16)
    _, out, _ = run(capsys, "map", "H", "0.5", "-0.5")
    assert "y0_re: 0.80000000000000004" in out


def test_levi_examples(capsys):
    code, out, _ = run(capsys, "levi", "--a", "0.5", "--format", "json")
    rec = as_json(out)
    assert code == EXIT_OK
    assert rec["levi_value"] == pytest.approx(0.375, abs=1e-12)
    assert abs(rec["levi_value"] - rec["closed_form_value"]) < 1e-9
    code, out, _ = run(capsys, "levi", "--a", "0.3", "--theta", "1.2", "--alpha", "0.4-0.7i", "--format", "json")
    assert code == EXIT_OK and as_json(out)["levi_value"] > 0


@pytest.mark.parametrize("a, n", [(0.0, 100), (0.5, 1000)])
def test_orbit_rows_on_leaf(tmp_path, capsys, a, n):
    path = tmp_path / "orbit.csv"
    code, _, _ = run(capsys, "orbit", "--a", str(a), "--n", str(n), "--seed", "4", "--out", str(path))
    assert code == EXIT_OK
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == ORBIT_HEADER and len(rows) == n + 1
    data = np.array(rows[1:], dtype=float)
    s, p = data[:, 0] + 1j * data[:, 1], data[:, 2] + 1j * data[:, 3]
    assert np.all(data[:, 4] == a)
    assert np.max(np.abs(leaf_index(s, p, check=False) - a)) < 1e-9
    if a == 0:
        assert np.array_equal(s * s, 4 * p)


def test_orbit_reproducible_and_stdout(tmp_path, capsys):
    paths = [tmp_path / f"o{k}.csv" for k in range(2)]
    for path in paths:
        run(capsys, "orbit", "--a", "0.5", "--n", "200", "--seed", "9", "--out", str(path))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    code, out, err = run(capsys, "orbit", "--a", "0.5", "--n", "200", "--seed", "9")
    assert code == EXIT_OK and out.encode() == paths[0].read_bytes() and "rows" in err


def test_verify_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "levi-closed-form", "--seed", "42", "--n", "2000")
    rec = as_json(out)
    assert code == EXIT_OK and rec["pass"] is True and rec["seed"] == 42 and "elapsed" not in rec
    path = tmp_path / "cert.jsonl"
    code, _, err = run(capsys, "verify", "slit-plane", "--n", "100", "--out", str(path), "--timing")
    assert code == EXIT_OK and "elapsed" in json.loads(path.read_text()) and "pass" in err


def test_verify_all_smoke(capsys):
    code, out, _ = run(capsys, "verify", "all", "--scale", "0.01", "--seed", "42")
    assert code == EXIT_OK
    assert all(json.loads(line)["pass"] for line in out.splitlines())


def test_contract_self_check():
    assert contract_failures(3) == []


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "symbidisc", "member", "G", "2", "1"], capture_output=True, text=True
    )
    assert proc.returncode == EXIT_BOUNDARY and "BOUNDARY" in proc.stdout
