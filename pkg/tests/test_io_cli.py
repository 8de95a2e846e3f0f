import io
import subprocess
import sys

import pytest

from coxnl import cli
from coxnl.cox_ring import CoxRing
from coxnl.fan import projective_space, weighted_projective_plane_112
from coxnl.graded_ideal import GradedIdeal
from coxnl.io import (
    FormatError,
    fixture,
    format_fan,
    format_ideal,
    format_poly,
    parse_fan,
    parse_ideal,
    parse_poly,
    read_fan,
)


def run(*argv):
    out = io.StringIO()
    ns = cli.build_parser().parse_args(list(argv))
    code = cli.run(cli.config_from_args(ns), out)
    return code, out.getvalue().splitlines()


# -- formats ---------------------------------------------------------------------------


def test_fan_round_trip():
    fan = weighted_projective_plane_112()
    again = parse_fan(format_fan(fan))
    assert again.rays == fan.rays and list(map(tuple, again.cones)) == list(map(tuple, fan.cones))


def test_poly_round_trip():
    S = CoxRing(projective_space(3))
    f = S.parse("3/2*x1*x2^3 - x3^4 + x0^4")
    text = format_poly(f)
    assert text.splitlines()[0] == "poly class=4"
    assert parse_poly(text, S) == f and format_poly(parse_poly(text, S)) == text


def test_ideal_round_trip():
    S = CoxRing(projective_space(2))
    I = GradedIdeal(S, [S.parse("x0^2"), S.parse("x1*x2 - x0*x1")])
    again = parse_ideal(format_ideal(I), S)
    assert list(again.generators) == list(I.generators)


@pytest.mark.parametrize("text,line", [
    ("fan d=2\n", 1),
    ("fan d=2 r=3\nray 0 1 0\nray 1 0 1\nray 2 -1\n", 4),
    ("fan d=2 r=3\nray 0 1 0\nbogus 1 2\n", 3),
])
def test_fan_format_errors(text, line):
    with pytest.raises(FormatError) as e:
        parse_fan(text)
    assert e.value.line == line


def test_poly_format_errors():
    S = CoxRing(projective_space(2))
    with pytest.raises(FormatError):
        parse_poly("poly class=2\n1/0 : 2 0 0\n", S)
    with pytest.raises(FormatError):
        parse_poly("poly class=2\n1 : 2 0\n", S)
    with pytest.raises(FormatError):
        parse_poly("poly deg=2\n", S)
    with pytest.raises(FormatError):
        parse_ideal("ideal n=2\npoly class=1\n1 : 1 0 0\n", S)


def test_fixtures_present():
    for name in ("p2.fan", "p3.fan", "p1xp1.fan", "p1xp2.fan", "p112.fan"):
        assert read_fan(fixture(name)).validate().valid
    with pytest.raises(FileNotFoundError):
        fixture("nope.fan")


# -- command line ----------------------------------------------------------------------


def test_cli_basis_counts():
    code, lines = run("basis", "--fan", "p3.fan", "--class", "4")
    assert code == 0 and len(lines) == 35 and lines[-1] == "x0^4"


def test_cli_gorenstein_fermat():
    code, lines = run("gorenstein", "--fan", "p3.fan", "--jacobian-of", "fermat4.poly")
    assert code == 0 and lines[0] == "N=12" and lines[-1] == "verdict=PASS"


def test_cli_gorenstein_fail_exit_code(tmp_path):
    S = CoxRing(projective_space(3))
    p = tmp_path / "hyper.ideal"
    p.write_text(format_ideal(GradedIdeal(S, [S.variable(0)])))
    code, lines = run("gorenstein", "--fan", "p3.fan", "--ideal", str(p),
                      "--socle-degree", "2", "--m-max", "4")
    assert code == 2 and lines[-1] == "verdict=FAIL"


def test_cli_nl_line_in_quartic():
    code, lines = run("nl", "--fan", "p3.fan", "--beta", "4", "--A", "x0.poly,x1.poly",
                      "--seed", "7")
    assert code == 0 and "codim=1" in lines
    assert "estimate_dim_image=34" in lines


def test_cli_nl_tangent_general_line():
    code, lines = run("nl", "--fan", "p3.fan", "--beta", "4", "--A", "gline0.poly,gline1.poly",
                      "--tangent")
    assert code == 0
    assert "t_equals_i=true" in lines and "transporter_identity=true" in lines


def test_cli_degree():
    code, lines = run("degree", "--fan", "p1xp2.fan", "--eta", "1,1", "--beta", "2,3",
                      "--w", "1,0")
    assert code == 0 and lines[0] == "q=2" and "deg=3" in lines and lines[-1] == "bound=OK"
    code, lines = run("degree", "--fan", "p3.fan", "--eta", "1", "--beta", "4", "--w", "0")
    assert code == 1


def test_cli_fan_and_euler():
    code, lines = run("fan", "--fan", "p1xp2.fan", "--ample", "1,0")
    assert code == 2 and "anticanonical=2,3" in lines and lines[-1] == "ample(1,0)=false"
    code, lines = run("euler", "--fan", "p2.fan")
    assert code == 0 and lines == ["iota=0,1 det=1", "iota=0,2 det=-1", "iota=1,2 det=1"]


def test_cli_nondegenerate_strict():
    code, lines = run("nondegenerate", "--fan", "p3.fan", "--poly", "fermat4.poly")
    assert code == 0 and lines[-1] == "verdict=certified-nondegenerate"
    code, lines = run("nondegenerate", "--fan", "p2.fan", "--poly", "x0^3+x1^3+x2^3",
                      "--m-max", "2", "--strict")
    assert code == 3 and "certificate=INCONCLUSIVE" in lines
    code, lines = run("nondegenerate", "--fan", "p3.fan", "--poly", "x0^2*x1^2")
    assert code == 2 and "nonempty_witness=zero_on_rays(0)" in lines


def test_cli_usage_errors():
    assert run("basis", "--fan", "missing.fan", "--class", "1")[0] == 1
    assert run("jacobian", "--fan", "p3.fan", "--poly", "x0^2+x1")[0] == 1
    assert cli.main(["bogus"]) == 1


def test_cli_is_deterministic():
    argv = ["nl", "--fan", "p3.fan", "--beta", "5", "--A", "x0.poly,x1.poly", "--seed", "3"]
    assert run(*argv) == run(*argv)


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "coxnl.cli", "basis", "--fan", "p2.fan",
                          "--class", "2"], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.splitlines()) == 6
