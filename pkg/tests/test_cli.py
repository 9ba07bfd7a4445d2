import json
import pathlib

import pytest

from quivercount.arith import parse_polynomial
from quivercount.cli import (
    EXIT_BUDGET,
    EXIT_INPUT,
    EXIT_OK,
    InputError,
    main,
    parse_assignment,
    parse_quiver_file,
    parse_range,
)
from quivercount.quiver import Quiver

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"


def write(tmp_path, text, name="q.json"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_quiver_file_defaults(tmp_path):
    quiver, theta, d = parse_quiver_file(write(tmp_path, '{"vertices": ["a", "b"], "arrows": [["a", "b"]], "dim": {"a": 1}}'))
    assert quiver.arrows == (("a", "b"),)
    assert theta == (0, 0) and d == (1, 0)


@pytest.mark.parametrize(
    "text,needle",
    [
        ('{"vertices": ["a"], "arrows": [["a", "b"]]}', "b"),
        ('{"vertices": ["a"], "arrows": [], "colour": 1}', "colour"),
        ('{"vertices": ["a"], "arrows": [], "dim": {"a": -1}}', "dim"),
        ('{"vertices": ["a"],\n "arrows": [}', "2:"),
    ],
)
def test_parse_quiver_file_errors(tmp_path, text, needle):
    with pytest.raises(InputError) as info:
        parse_quiver_file(write(tmp_path, text))
    assert needle in str(info.value)


def test_parse_helpers():
    q = Quiver.kronecker(2)
    assert parse_assignment(q, "i=1,j=0") == (1, 0)
    assert parse_assignment(q, "j=-2", nonnegative=False) == (0, -2)
    with pytest.raises(InputError):
        parse_assignment(q, "k=1")
    with pytest.raises(InputError):
        parse_assignment(q, "i=-1")
    assert parse_range("2..4") == range(2, 5)
    assert parse_range("3") == range(3, 4)
    with pytest.raises(InputError):
        parse_range("a..b")


def test_compute_text(capsys):
    code, out, _ = run(capsys, "compute", "--quiver", str(DATA / "kronecker3.json"))
    assert code == EXIT_OK
    assert "A(t) = t^2 + t + 1" in out
    assert "euler_characteristic: 3" in out


def test_compute_json_schema(capsys):
    code, out, _ = run(capsys, "compute", "--quiver", str(DATA / "loop2.json"), "--format", "json", "--method", "both")
    assert code == EXIT_OK
    report = json.loads(out)
    assert set(report) == {"dim", "slope", "polynomial", "euler_characteristic"}
    assert report["dim"] == {"i": 3} and report["slope"] == "0/1"
    poly = parse_polynomial(report["polynomial"]["string"])
    assert [int(c) for c in poly.coeffs] == report["polynomial"]["coeffs"]
    assert report["euler_characteristic"] == int(poly(1))


def test_compute_overrides(capsys):
    code, out, _ = run(capsys, "compute", "--quiver", str(DATA / "kronecker3.json"), "--dim", "i=2,j=2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["polynomial"]["string"] == "t^5 - t^2"


def test_star5_value(capsys):
    code, out, _ = run(capsys, "compute", "--quiver", str(DATA / "star5.json"), "--format", "json")
    assert code == EXIT_OK
    assert parse_polynomial(json.loads(out)["polynomial"]["string"])(2) == 15


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--quiver", str(DATA / "kronecker3.json"), "--dim", "i=1,j=2", "--primes", "2,3")
    assert code == EXIT_OK
    assert out.count("pass") == 4 and "FAIL" not in out


def test_verify_moebius_rows(capsys):
    code, out, _ = run(capsys, "verify", "--quiver", str(DATA / "loop2.json"), "--dim", "i=2", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert [r["quantity"] for r in rows] == ["absolutely_stable", "semistable_points", "s_r2"]
    assert all(r["ok"] for r in rows)


@pytest.mark.parametrize(
    "argv,code",
    [
        (["compute", "--quiver", "/nonexistent.json"], EXIT_INPUT),
        (["compute", "--quiver", str(DATA / "kronecker3.json"), "--method", "loop"], EXIT_INPUT),
        (["compute", "--quiver", str(DATA / "kronecker3.json"), "--dim", "i=0,j=0"], EXIT_INPUT),
        (["verify", "--quiver", str(DATA / "kronecker3.json"), "--primes", "4"], EXIT_INPUT),
        (["verify", "--quiver", str(DATA / "loop2.json"), "--max-points", "1000"], EXIT_BUDGET),
        (["frobnicate"], EXIT_INPUT),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_sweep_loop_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "loop", "--m", "1..3", "--d", "1..4", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    assert len(rows) == 12
    for row in rows:
        if "kac_euler_prediction" in row:
            assert row["derivative_at_1"] == row["kac_euler_prediction"]


def test_sweep_empty_and_kronecker(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "loop", "--m", "2..1", "--format", "json")
    assert code == EXIT_OK and json.loads(out) == []
    code, out, _ = run(capsys, "sweep", "--family", "kronecker", "--m", "2", "--d", "2", "--format", "json")
    assert code == EXIT_OK
    assert [r["cell"] for r in json.loads(out)] == [
        "kronecker m=2 d=(2,0)", "kronecker m=2 d=(1,1)", "kronecker m=2 d=(0,2)"
    ]


def test_sweep_file_family(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "file", "--quiver", str(DATA / "kronecker3.json"), "--d", "1..2")
    assert code == EXIT_OK
    assert "t^5 - t^2" in out


def test_euler(capsys):
    code, out, _ = run(capsys, "euler", "--quiver", str(DATA / "loop2.json"), "--dim", "i=2", "--format", "json")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["euler_characteristic"] == 0
    assert report["derivative_at_1"] == report["kac_euler_prediction"] == "1"
