import csv
import io
import json

import pytest

from ltorsion import cli
from ltorsion.checks import CheckResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_sweep_three_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--sign", "imaginary", "--x-max", "1000", "--ell", "3", "--k", "1,2,3")
    assert code == 0
    assert out.splitlines()[0] == "X,count,ell,k,moment_sum,ratio"
    r = rows(out)
    assert [x["k"] for x in r] == ["1", "2", "3"]
    assert r[0]["count"] == "305" and r[0]["moment_sum"] == "473"


def test_sweep_rerun_identical(capsys):
    a = run(capsys, "sweep", "--x-max", "2000", "--k", "1,2")[1]
    b = run(capsys, "sweep", "--x-max", "2000", "--k", "1,2")[1]
    assert a == b


@pytest.mark.parametrize("argv", [["sweep", "--x-max", "0"], ["sweep", "--delta", "-1/2"], ["nope"], ["sweep", "--format", "xml"], []])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_invalid_discriminant_is_usage_error(capsys):
    code, _, err = run(capsys, "classgroup", "--", "-12")
    assert code == 1 and "fundamental" in err


def test_resource_limit_exit(capsys):
    assert run(capsys, "hasse-check", "--x-max", "20000")[0] == 2


def test_verification_failure_exit(capsys, monkeypatch):
    import ltorsion.checks as checks

    monkeypatch.setattr(checks, "run_all", lambda *a: [CheckResult("x", False, "forced")])
    code, out, _ = run(capsys, "verify")
    assert code == 3 and "FAIL" in out


def test_classgroup_json_integers_are_strings(capsys):
    code, out, _ = run(capsys, "classgroup", "--format", "json", "--", "-3299")
    data = json.loads(out)
    assert code == 0
    assert data["h"] == "27" and data["divisors"] == "3,9" and data["torsion_3"] == "9"


def test_density_json_interval(capsys):
    code, out, _ = run(capsys, "density", "--x-max", "1000", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data[-1]["lower"] <= data[-1]["upper"]
    assert data[-1]["lower"].startswith("0.56012607")


def test_census_csv_schema(capsys):
    code, out, _ = run(capsys, "ec-census", "--q-max", "15")
    assert code == 0
    assert out.splitlines()[0] == "q,count,H,a1,a2,a3,a4,a6"
    assert "11,1,100000000,0,-1,1,0,0" in out.splitlines()


def test_out_writes_report_and_figure(tmp_path, capsys):
    target = tmp_path / "r" / "sweep.csv"
    code, out, _ = run(capsys, "sweep", "--x-max", "3000", "--checkpoints", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("X,count")
    png = target.with_suffix(".png")
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_unwritable_out(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "sweep", "--out", str(blocker / "x.csv"))[0] == 1


def test_config_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# sweep settings\nx-max = 500\nsign=real\nk=1,2\n")
    r = rows(run(capsys, "sweep", "--config", str(cfg))[1])
    assert [x["X"] for x in r] == ["500", "500"]
    r = rows(run(capsys, "sweep", "--config", str(cfg), "--x-max", "300")[1])
    assert r[0]["X"] == "300" and r[0]["count"] == "90"
    cfg.write_text("colour=blue\n")
    assert run(capsys, "sweep", "--config", str(cfg))[0] == 1
    assert run(capsys, "sweep", "--config", str(tmp_path / "missing"))[0] == 1


def test_cache_flag(tmp_path, capsys):
    path = tmp_path / "cache.tsv"
    first = run(capsys, "sweep", "--x-max", "400", "--cache", str(path))[1]
    assert path.read_text().startswith("#ctl-cache v1\n")
    second = run(capsys, "sweep", "--x-max", "400", "--cache", str(path))[1]
    assert first == second


def test_other_subcommands(capsys):
    assert run(capsys, "d4-bound", "144")[1].splitlines()[-1] == "144,total,24,20"
    code, out, _ = run(capsys, "malle", "--gens", "(1,2,3)")
    assert code == 0 and rows(out)[0]["a_G"] == "1/2"
    code, out, _ = run(capsys, "moments", "--x-max", "2000", "--ell", "3", "--k", "1", "--delta", "0,1/4")
    assert code == 0 and all(r["holds"] == "True" for r in rows(out))
    code, out, _ = run(capsys, "fk-moments", "--x-max", "100", "--k", "2")
    assert rows(out)[0]["moment_sum"] == "46"
    code, out, _ = run(capsys, "hasse-check", "--x-max", "60")
    assert code == 0 and rows(out)[0]["polys"] == "x^3 - x + 1"
    code, out, _ = run(capsys, "split-bound", "--samples", "3", "--seed", "5")
    assert code == 0 and len(rows(out)) == 3
    code, out, _ = run(capsys, "ec-moments", "--q-max", "40", "--k", "1,2", "--format", "json")
    assert code == 0 and [r["k"] for r in json.loads(out)] == ["1", "2"]


def test_defaults_do_not_leak_between_subcommands(tmp_path):
    assert cli.parse_args(["split-bound"]).x_max == 10**6
    assert cli.parse_args(["sweep"]).x_max == 1000
    cfg = tmp_path / "c.cfg"
    cfg.write_text("x-max=777\n")
    assert cli.parse_args(["sweep", "--config", str(cfg)]).x_max == 777
    assert cli.parse_args(["sweep"]).x_max == 1000
