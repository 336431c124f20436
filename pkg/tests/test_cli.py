import csv
import io
import json
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from subfield_calc.cli import run
from subfield_calc.exactfield import DigitPrefix, DomainError, FieldElement, extract_digits
from subfield_calc.plcalc import PiecewisePoly, from_json, identity, Piece
from subfield_calc.propp import truncation
from subfield_calc.render import RenderOptions, render_svg
from subfield_calc.riemann import rational_fn_right_sum

C_SPEC = "0+1/3*sqrt(2)"
C = FieldElement(0, Fraction(1, 3), 2)


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_integrate(capsys):
    code, out, _ = call(capsys, "integrate", "--c", C_SPEC, "--depth", "3")
    assert code == 0
    last = rows(out)[-1]
    assert last["N"] == "3"
    assert Fraction(int(last["integral_num"]), int(last["integral_den"])) == Fraction(961, 2048)
    assert last["bound"] == "1/256"


def test_counterexample_et(capsys):
    code, out, _ = call(capsys, "counterexample", "et", "--c", C_SPEC)
    assert code == 0
    assert "∫f = 0, F(1)−F(0) = 1, FTC2 violated" in out


def test_counterexample_step(capsys):
    code, out, _ = call(capsys, "counterexample", "step", "--c", C_SPEC, "--n", "5")
    assert code == 0
    table = rows(out)
    assert [Fraction(r["quotient"]) for r in table] == [4**n for n in range(1, 6)]


def test_demo_arctan(capsys):
    code, out, _ = call(capsys, "demo", "arctan", "--points", "1")
    assert code == 0
    assert "right_sum = 1/2\n" in out


def test_digits(capsys):
    code, out, _ = call(capsys, "digits", "--c", C_SPEC, "--count", "5")
    assert code == 0
    assert [int(r["digit"]) for r in rows(out)] == [0, 1, 2, 0, 2]


def test_riemann(capsys):
    code, out, _ = call(capsys, "riemann", "--c", C_SPEC, "--depth", "6", "--points", "10,100")
    assert code == 0
    table = rows(out)
    assert [r["n"] for r in table] == ["10", "100"]
    assert all(r["certificate"].startswith("target not in Q") for r in table)
    assert list(table[0]) == ["n", "value", "value_decimal", "error_decimal", "certificate"]


def test_probe_modulus(capsys):
    code, out, _ = call(capsys, "probe", "modulus", "--c", C_SPEC, "--depth", "6",
                        "--delta", "1/32", "--grid", "64")
    assert code == 0
    (row,) = rows(out)
    assert row["within_bound"] == "true"
    assert Fraction(row["worst_value"]) <= 4 * Fraction(1, 32)


def test_construct_json_round_trip(capsys):
    code, out, _ = call(capsys, "construct", "--c", C_SPEC, "--depth", "7", "--format", "json")
    assert code == 0
    f = from_json(json.loads(out))
    assert f == truncation(extract_digits(C, 9), 7)


def test_construct_digits_and_fill(capsys):
    code, out, _ = call(capsys, "construct", "--digits", "0,1,0,2,3", "--depth", "3",
                        "--continuous-fill", "--format", "json")
    assert code == 0
    f = from_json(json.loads(out))
    assert f.is_continuous
    assert f == truncation(DigitPrefix.from_digits([0, 1, 0, 2, 3]), 3, continuous_fill=True)


def test_construct_csv(capsys):
    code, out, _ = call(capsys, "construct", "--digits", "0,1", "--depth", "0",
                        "--format", "csv", "--resolution", "4")
    assert code == 0
    table = rows(out)
    assert [r["fx"] for r in table] == ["0", "0", "1/2", "1/2", "1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["integrate", "--c", C_SPEC, "--depth", "12"],
        ["riemann", "--c", C_SPEC, "--depth", "5", "--points", "3,9"],
        ["construct", "--c", C_SPEC, "--depth", "4", "--format", "svg"],
        ["construct", "--c", C_SPEC, "--depth", "4", "--format", "csv"],
        ["counterexample", "step", "--c", C_SPEC, "--n", "6"],
    ],
)
def test_output_is_deterministic(capsys, argv):
    _, first, _ = call(capsys, *argv)
    _, second, _ = call(capsys, *argv)
    assert first == second
    assert "," in first.splitlines()[0] or first.startswith("<?xml")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.csv"
    code, out, _ = call(capsys, "integrate", "--c", C_SPEC, "--depth", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("N,integral_num,integral_den")


def test_exit_codes(capsys):
    assert call(capsys, "nonsense")[0] == 2
    assert call(capsys, "integrate", "--c", C_SPEC)[0] == 2
    code, _, err = call(capsys, "integrate", "--c", "1/x", "--depth", "2")
    assert code == 2 and "byte offset 2" in err
    code, _, err = call(capsys, "integrate", "--c", "7/16", "--depth", "2")
    assert code == 1 and "rational" in err
    code, _, err = call(capsys, "digits", "--c", "3/4", "--count", "2")
    assert code == 1 and "outside" in err
    assert call(capsys, "--help")[0] == 0


def test_max_depth_env(monkeypatch, capsys):
    monkeypatch.setenv("SUBFIELD_CALC_MAX_DEPTH", "5")
    code, _, err = call(capsys, "integrate", "--c", C_SPEC, "--depth", "6")
    assert code == 2 and "SUBFIELD_CALC_MAX_DEPTH" in err
    assert call(capsys, "integrate", "--c", C_SPEC, "--depth", "5")[0] == 0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "subfield_calc", "demo", "arctan", "--points", "2"],
        capture_output=True, text=True, check=True,
    )
    assert "right_sum = 13/20" in proc.stdout


# -- SVG -------------------------------------------------------------------


def polylines(svg):
    return re.findall(r'<polyline [^>]*points="([^"]*)" data-exact="([^"]*)"', svg)


def test_render_identity():
    (coords, exact), = polylines(render_svg(identity()))
    assert len(coords.split()) == 2
    assert exact == "0,0 1,1"


def test_render_breaks_at_jumps():
    t2 = truncation(DigitPrefix.from_digits([0, 1, 0, 2]), 2)
    lines = polylines(render_svg(t2))
    assert len(lines) == 2
    assert lines[0][1] == "0,0 1/8,0"
    first = lines[1][1].split()
    assert first[0] == "1/8,1/8" and first[-1] == "1,1"


def test_render_coordinates_are_scaled_exact_points():
    opts = RenderOptions(width=200, height=100, margin=10)
    t = truncation(extract_digits(C, 5), 3)
    for coords, exact in polylines(render_svg(t, opts)):
        for c, e in zip(coords.split(), exact.split()):
            px, py = map(float, c.split(","))
            x, y = (Fraction(v) for v in e.split(","))
            assert px == pytest.approx(10 + float(x) * 180, abs=5e-4)
            assert py == pytest.approx(90 - float(y) * 80, abs=5e-4)


def test_render_samples_quadratics():
    F = PiecewisePoly([Piece(0, 1, 0, 0, Fraction(1, 2))])
    (coords, _), = polylines(render_svg(F, RenderOptions(samples_per_piece=5)))
    assert len(coords.split()) == 5


def test_render_options_validation():
    with pytest.raises(DomainError):
        RenderOptions(width=0)
    with pytest.raises(DomainError):
        RenderOptions(samples_per_piece=1)


def test_demo_arctan_large_exact_output(capsys):
    limit = sys.get_int_max_str_digits() if hasattr(sys, "get_int_max_str_digits") else None
    code, out, _ = call(capsys, "demo", "arctan", "--points", "10000")
    assert code == 0
    if limit is not None:
        assert sys.get_int_max_str_digits() == limit
    line = next(l for l in out.splitlines() if l.startswith("right_sum = "))
    num, den = line.split(" = ")[1].split("/")
    if limit is not None:
        sys.set_int_max_str_digits(0)
    try:
        value = Fraction(int(num), int(den))
    finally:
        if limit is not None:
            sys.set_int_max_str_digits(limit)
    assert value == rational_fn_right_sum("recip_one_plus_x_sq", 10000)
