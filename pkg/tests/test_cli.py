import json
from pathlib import Path

import pytest

from quiverdt.cli import Report, emit_report, format_input, main, parse_input
from quiverdt.errors import ParseError
from quiverdt.ncalg import Potential
from quiverdt.quiver import doubled_a2, one_loop

FIXTURES = Path(__file__).parent / "fixtures"
LOOP = str(FIXTURES / "one_loop_d2.txt")
A2 = str(FIXTURES / "a2_d1.txt")


def run(capsysbinary, *argv):
    code = main(list(argv))
    out = capsysbinary.readouterr()
    return code, out.out.decode(), out.err.decode()


def test_parse_examples():
    Q, W = parse_input((FIXTURES / "one_loop_d2.txt").read_text())
    assert Q == one_loop() and W == Potential.from_named(Q, {"x x x": 1})
    Q, W = parse_input((FIXTURES / "a2_d1.txt").read_text())
    assert Q == doubled_a2() and W == Potential.from_named(Q, {"x y x y": 1})


def test_parse_concatenated_names():
    Q, W = parse_input("[quiver]\nvertices = 2\narrow x 0 1\narrow y 1 0\n[potential]\nterm 1/2 xyxy\n")
    assert W.named() == {"x y x y": 0.5}


@pytest.mark.parametrize("text,line,col,fragment", [
    ("[quiver]\nvertices = 2\narrow x 0 1\narrow y 1 0\n[potential]\nterm 1 x x\n", 6, 8, "not composable"),
    ("[quiver]\nvertices = 1\narrow x 0 0\n[potential]\nterm 1 x z\n", 5, 8, "unknown arrow"),
    ("[quiver]\nvertices = 2\narrow x 0 1\narrow y 1 0\n[potential]\nterm 1 x\n", 6, 8, "not closed"),
    ("[quiver]\nvertices = 1\narrow x 0 0\narrow x 0 0\n", 4, 7, "duplicate"),
    ("[quiver]\nvertices = 1\narrow x 0 0\n[potential]\nterm 1/0 x\n", 5, 6, "zero denominator"),
    ("[quiver]\nvertices = 1\narrow x 0 0\n[potential]\nterm 1.5 x x\n", 5, 6, "malformed rational"),
    ("[quiver]\nvertices = 1\narrow x 0 3\n", 3, 11, "out of range"),
    ("[graph]\n", 1, 1, "unknown section"),
])
def test_parse_errors_locate_problem(text, line, col, fragment):
    with pytest.raises(ParseError) as info:
        parse_input(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert fragment in str(info.value)


@pytest.mark.parametrize("path", [LOOP, A2])
def test_round_trip(path):
    Q, W = parse_input(Path(path).read_text())
    assert parse_input(format_input(Q, W)) == (Q, W)


def test_bps_json(capsysbinary):
    code, out, _ = run(capsysbinary, "bps", LOOP, "-G", "2", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert '"gamma":[1]' in out and '"omega":"2"' in out
    assert [r["omega_num"] for r in rows] == [2, 0]


def test_gv_table(capsysbinary):
    code, out, _ = run(capsysbinary, "gv", LOOP, "--format", "json")
    rows = json.loads(out)
    assert code == 0 and rows[0]["gv_num"] == 2 and rows[1]["gv_num"] == 0
    assert rows[0]["gv_bivariate"] == "1*z1^(-1/6)*z2^(1/6) + 1*z1^(1/6)*z2^(-1/6)"


def test_verify_and_self_test(capsysbinary):
    assert run(capsysbinary, "verify", A2, "-G", "3")[0] == 0
    code, out, _ = run(capsysbinary, "verify", A2, "-G", "3", "--self-test", "--format", "csv")
    assert code == 1
    assert "dimension sum rule,false" in out


def test_spectrum_text(capsysbinary):
    assert run(capsysbinary, "spectrum", "x^3")[1] == "1/3, 2/3\n"
    assert run(capsysbinary, "spectrum", "--weights", "1", "--degree", "4")[1] == "1/4, 1/2, 3/4\n"


def test_milnor_and_jacobi(capsysbinary):
    code, out, _ = run(capsysbinary, "milnor", "x^4*(1+x)", "--format", "json")
    assert code == 0 and json.loads(out) == [{"certified": True, "mu": 3, "polynomial": "x^4*(1+x)"}]
    code, out, _ = run(capsysbinary, "jacobi", A2, "--format", "json")
    assert json.loads(out)[0]["dim"] == 6


def test_count_command(capsysbinary):
    code, out, _ = run(capsysbinary, "count", LOOP, "--dim", "1", "--fields", "7,13", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "gamma,q,N0,N1,E,elapsed_ms"
    assert lines[1].startswith("[1],7,1,3,-2,")


@pytest.mark.parametrize("argv,code", [
    (["bps", LOOP, "--fields", "7,13"], 3),
    (["count", LOOP, "--dim", "1", "--fields", "5"], 3),
    (["bps", "/nonexistent/file.txt"], 2),
    (["bps", LOOP, "--jobs", "0"], 2),
    (["frobnicate", LOOP], 2),
    (["count", LOOP, "--fields", "7"], 2),
    (["framed-check", LOOP, "-G", "2", "--framing", "2"], 0),
])
def test_exit_codes(capsysbinary, argv, code):
    assert run(capsysbinary, *argv)[0] == code


def test_non_symmetric_quiver_rejected(tmp_path, capsysbinary):
    f = tmp_path / "oriented.txt"
    f.write_text("[quiver]\nvertices = 2\narrow x 0 1\narrow y 0 1\narrow z 1 0\n[potential]\nterm 1 x z x z\n")
    code, _, err = run(capsysbinary, "bps", str(f))
    assert code == 2 and "symmetric" in err


def test_malformed_input_file_exit_code(tmp_path, capsysbinary):
    f = tmp_path / "bad.txt"
    f.write_text("[quiver]\nvertices = 2\narrow x 0 1\narrow y 1 0\n[potential]\nterm 1 x x\n")
    code, _, err = run(capsysbinary, "jacobi", str(f))
    assert code == 2 and "line 6" in err


def test_empty_report():
    empty = Report(["gamma", "omega"], [])
    assert emit_report(empty, "json") == b"[]\n"
    assert emit_report(empty, "csv") == b"gamma,omega\n"


def test_json_output_is_repeatable(capsysbinary):
    first = run(capsysbinary, "bps", A2, "-G", "2", "--format", "json")[1]
    second = run(capsysbinary, "bps", A2, "-G", "2", "--format", "json")[1]
    assert first == second
