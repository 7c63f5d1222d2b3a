import pytest

from rtile.cli import main, run
from rtile.formula import parse_dimacs
from rtile.instance import parse_instance, parse_tiling, validate_tiling


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_reduce_and_roundtrip(files, tmp_path):
    cnf = files("one.cnf", "p cnf 3 1\n1 -2 3 0\n")
    inst, cert = str(tmp_path / "one.inst"), str(tmp_path / "one.cert")
    out = run(["reduce", cnf, "-o", inst, "--cert", cert])
    assert out.exit_code == 0 and "p_F" in out.report
    assert parse_instance(open(inst).read()).W == 3
    out = run(["roundtrip", cnf])
    assert out.exit_code == 0 and "sat ⇔ tileable: agree" in out.report


def test_roundtrip_unsat(files):
    text = "p cnf 6 8\n1 2 3 0\n1 2 -3 0\n1 -2 4 0\n1 -2 -4 0\n-1 2 5 0\n-1 2 -5 0\n-1 -2 6 0\n-1 -2 -6 0\n"
    out = run(["roundtrip", files("u.cnf", text)])
    assert out.exit_code == 0 and "unsat ⇔ untileable: agree" in out.report


def test_roundtrip_oversized(files):
    clauses = "".join(f"{i} {i + 1} {i + 2} 0\n" for i in range(1, 24))
    out = run(["roundtrip", files("big.cnf", f"p cnf 25 23\n{clauses}")])
    assert out.exit_code == 2


def test_reduce_errors(files, tmp_path):
    k33 = "p cnf 6 6\n1 4 2 0\n1 5 2 0\n1 6 2 0\n3 4 5 0\n3 4 6 0\n3 5 6 0\n"
    out = run(["reduce", files("k.cnf", k33), "-o", str(tmp_path / "x")])
    assert out.exit_code == 2 and "not planar" in out.report
    assert run(["reduce", str(tmp_path / "missing.cnf"), "-o", "x"]).exit_code == 2


def test_solve(files, tmp_path):
    assert run(["solve", files("a.inst", "rtile 1 1 3\n3\n"), "--decide", "1", "3"]).exit_code == 0
    b = files("b.inst", "rtile 2 3 3\n3 3\n3 3\n")
    assert run(["solve", b, "--decide", "3", "3"]).exit_code == 1
    assert run(["solve", files("g.inst", "garbage\n"), "--decide", "1", "3"]).exit_code == 2
    c = files("c.inst", "rtile 2 2 3\n1 1\n1 1\n")
    til = str(tmp_path / "c.til")
    out = run(["solve", c, "--optimize", "2", "--out", til])
    assert out.exit_code == 0 and "W* = 2" in out.report
    assert validate_tiling(((1, 1), (1, 1)), parse_tiling(open(til).read()), 2, 2).ok
    assert run(["verify", c, til, "--W", "2"]).exit_code == 0
    assert run(["verify", c, til, "--W", "1"]).exit_code == 1


def test_render(files, tmp_path):
    inst = files("b.inst", "rtile 2 4 3\n3 3\n3 3\n")
    out = str(tmp_path / "b.txt")
    assert run(["render", inst, "--format", "ascii", "-o", out]).exit_code == 0
    assert open(out).read() == "3 3\n3 3\n"
    bad = files("bad.til", "0 0 2 2\n")
    assert run(["render", inst, "--tiling", bad, "-o", out]).exit_code == 2
    good = files("ok.til", "0 0 0 0\n0 1 0 1\n1 0 1 0\n1 1 1 1\n")
    svg = str(tmp_path / "b.svg")
    assert run(["render", inst, "--tiling", good, "--format", "svg", "-o", svg]).exit_code == 0
    assert open(svg).read().count('class="tile"') == 4


def test_certify_and_gen(tmp_path):
    assert run(["certify-gadget"]).exit_code == 0
    out = str(tmp_path / "g.cnf")
    assert run(["gen", "--vars", "3", "--clauses", "1", "--seed", "4", "-o", out]).exit_code == 0
    assert parse_dimacs(open(out).read()).k == 1
    assert run(["gen", "--vars", "0", "--clauses", "1", "-o", out]).exit_code == 2


def test_usage_error(capsys):
    assert main(["solve"]) == 2
