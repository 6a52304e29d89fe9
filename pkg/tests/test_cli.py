import io
import json

import pytest

from tausurvey.cli import dispatch


def run(argv, env=None, monkeypatch=None):
    if env:
        for key, value in env.items():
            monkeypatch.setenv(key, value)
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


# ------------------------- golden outputs per subcommand -------------------------


def test_golden_tau_lehmer():
    code, out, _ = run(["tau", "--n", "251", "--square", "--N", "300"])
    assert code == 0
    assert out == "-80561663527802406257321747\n"


def test_golden_tau_table_export():
    code, out, _ = run(["tau", "--max", "4"])
    assert code == 0
    assert out == (
        '{"n":1,"tau":"1"}\n'
        '{"n":2,"tau":"-24"}\n'
        '{"n":3,"tau":"252"}\n'
        '{"n":4,"tau":"-1472"}\n'
    )


def test_golden_parity():
    code, out, _ = run(["parity", "--n", "9"])
    assert code == 0 and out == '{"n":9,"odd":true}\n'
    code, out, _ = run(["parity", "--n", "16", "--format", "csv"])
    assert code == 0 and out == "n,odd\n16,false\n"


def test_golden_near_points():
    code, out, _ = run(
        ["near-points", "--kind", "deg11", "--X", "100", "--x-min", "3", "--x-max", "10"]
    )
    assert code == 0
    assert out == (
        '{"kind":"deg11","x":3,"y":"-421","k":"94"}\n'
        '{"kind":"deg11","x":3,"y":"421","k":"94"}\n'
    )


def test_golden_near_points_csv_empty():
    code, out, _ = run(
        ["near-points", "--kind", "deg11", "--X", "1", "--x-min", "2", "--x-max", "5",
         "--format", "csv"]
    )
    assert code == 0
    assert out == "kind,x,y,k\n"


def test_golden_count():
    code, out, _ = run(["count", "--kind", "deg11", "--X", "10", "--x-max", "2"])
    assert code == 0
    assert out == (
        '{"kind":"deg11","X":"10","x_max":2,"small":5,"mid":0,"subunit":0,"total":5}\n'
    )


def test_golden_survey_csv():
    code, out, _ = run(["survey", "--X", "1e26", "--N", "300", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "ell,p,m,sign,verdict,ordinary"
    assert "80561663527802406257321747,251,1,-1,probable_prime," in out


def test_golden_survey_json():
    code, out, _ = run(["survey", "--X", "1e6", "--N", "300"])
    assert code == 0
    payload = json.loads(out)
    assert payload["X"] == "1000000"
    assert payload["count"] == 0
    assert payload["windowed"] is True
    assert payload["m_max"] == 2
    assert [layer["m"] for layer in payload["layers"]] == [1, 2]


def test_golden_abc():
    code, out, _ = run(
        ["abc", "--kind", "deg11", "--X", "100", "--x-min", "3", "--x-max", "10"]
    )
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 2  # the +-421 pair
    for record in lines:
        assert record["a"] == "177147"
        assert record["b"] == "94"
        assert record["c"] == "177241"
        assert record["d"] == "1"
        assert record["rad"] == "118722"
        assert record["rad_complete"] is True
        assert abs(record["quality"] - 1.0343) < 1e-3


def test_golden_abc_check_column():
    code, out, _ = run(
        ["abc", "--kind", "deg11", "--X", "100", "--x-min", "3", "--x-max", "3",
         "--epsilon", "0.1", "--C", "1", "--format", "csv"]
    )
    assert code == 0
    header, *rows = out.splitlines()
    assert header == "a,b,c,d,rad,rad_complete,quality,abc_ok"
    assert all(row.endswith("true") for row in rows)


def test_golden_sato_tate():
    code, out, _ = run(["sato-tate", "--N", "10000", "--bins", "8"])
    assert code == 0
    payload = json.loads(out)
    assert payload["bins"] == 8
    assert payload["samples"] == 1229
    assert sum(payload["observed"]) == 1229
    assert payload["p_value"] > 0.001
    code, out, _ = run(["sato-tate", "--N", "1000", "--bins", "4", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0] == "bin_lo,bin_hi,observed,expected"
    assert len(out.splitlines()) == 5


def test_golden_predict():
    code, out, _ = run(["predict", "--X", "1e22", "--m-max", "3", "--C", "1"])
    assert code == 0
    payload = json.loads(out)
    layers = {entry["m"]: entry["estimate"] for entry in payload["layers"]}
    assert abs(layers[1] - 0.038969) < 1e-5
    assert layers[1] > layers[2] > layers[3]


def test_golden_report():
    code, out, _ = run(["report", "--X", "1e6", "--N", "2000", "--x-max", "5"])
    assert code == 0  # no violations on an honest table
    payload = json.loads(out)
    assert payload["deligne_violations"] == []
    assert payload["omitted_violations"] == []
    assert payload["parity_mismatches"] == []
    assert payload["count"] == 0
    assert abs(payload["terms"]["x_13_22"] - 3511.19173422) < 1e-6
    assert payload["terms"]["e2_windowed"] == 0
    assert payload["terms"]["e4_windowed"] == 2
    assert payload["windowed"] is True


def test_golden_self_test():
    out = io.StringIO()
    code = dispatch(["--self-test"], out, io.StringIO())
    assert code == 0
    assert out.getvalue().strip().endswith("self-test OK")
    assert all(line.startswith("PASS") for line in out.getvalue().splitlines()[:-1])


# ------------------------------- exit codes -------------------------------


def test_usage_errors():
    code, _, err = run(["no-such-command"])
    assert code == 2
    code, _, err = run([])
    assert code == 2
    code, _, err = run(["sato-tate", "--N", "100", "--bins", "1"])
    assert code == 2
    assert "usage" in err
    code, _, _ = run(["tau"])
    assert code == 2
    code, _, _ = run(["sato-tate", "--N", "100", "--u-layer", "1"])
    assert code == 2


def test_help_exits_zero():
    code, out, _ = run(["--help"])
    assert code == 0
    assert "tausurvey" in out


def test_resource_limit_exit():
    code, _, err = run(
        ["near-points", "--kind", "deg11", "--X", "1e30", "--x-min", "1", "--x-max", "1"]
    )
    assert code == 3
    assert "resource limit" in err


def test_out_of_range_exit():
    code, _, err = run(["tau", "--n", "10007", "--N", "100"])
    assert code == 3
    assert "out of range" in err


def test_violation_exit(monkeypatch):
    import tausurvey.cli as cli_mod

    monkeypatch.setattr(
        cli_mod.survey_mod, "omitted_values_check", lambda table: [(50, 691)]
    )
    code, out, _ = run(["report", "--X", "1e6", "--N", "200", "--x-max", "3"])
    assert code == 1
    assert json.loads(out)["omitted_violations"] == [[50, "691"]]


def test_report_csv_row():
    code, out, _ = run(
        ["report", "--X", "1e6", "--N", "500", "--x-max", "3", "--format", "csv"]
    )
    assert code == 0
    header, row = out.splitlines()
    assert header.startswith("X,N,x_max,count,")
    assert row.startswith("1000000,500,3,0,")


# --------------------------- configuration layers ---------------------------


def test_env_override(monkeypatch):
    code, out, _ = run(
        ["count", "--kind", "deg11", "--x-max", "2"],
        env={"TAUSURVEY_X": "10"},
        monkeypatch=monkeypatch,
    )
    assert code == 0
    assert json.loads(out)["X"] == "10"


def test_flag_beats_env(monkeypatch):
    code, out, _ = run(
        ["count", "--kind", "deg11", "--X", "10", "--x-max", "2"],
        env={"TAUSURVEY_X": "9999"},
        monkeypatch=monkeypatch,
    )
    assert code == 0
    assert json.loads(out)["X"] == "10"


def test_config_file_lowest(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("x_max = 2\nX = 77\n")
    code, out, _ = run(
        ["count", "--kind", "deg11", "--config", str(cfg)],
        env={"TAUSURVEY_X": "10"},
        monkeypatch=monkeypatch,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["X"] == "10"  # env beats file
    assert payload["x_max"] == 2  # file beats default


def test_scientific_notation_x():
    code, out, _ = run(["count", "--kind", "deg11", "--X", "1e2", "--x-max", "3"])
    assert code == 0
    assert json.loads(out)["X"] == "100"


# ------------------------------- determinism -------------------------------

DETERMINISM_CASES = [
    ["tau", "--n", "251", "--square", "--N", "300"],
    ["tau", "--max", "50"],
    ["parity", "--n", "9"],
    ["survey", "--X", "1e26", "--N", "300"],
    ["near-points", "--kind", "deg22", "--X", "10000", "--x-min", "1", "--x-max", "12"],
    ["count", "--kind", "deg11", "--X", "1000", "--x-max", "20"],
    ["abc", "--kind", "deg11", "--X", "1000", "--x-min", "1", "--x-max", "6",
     "--epsilon", "0.5", "--C", "1"],
    ["sato-tate", "--N", "2000", "--bins", "8"],
    ["predict", "--X", "1e22", "--m-max", "3", "--C", "1"],
    ["report", "--X", "1e6", "--N", "1000", "--x-max", "5"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: a[0])
def test_repeat_runs_byte_identical(argv):
    first = run(argv)
    second = run(argv)
    assert first == second


def test_worker_count_does_not_change_bytes():
    base = ["near-points", "--kind", "deg11", "--X", "10000", "--x-min", "1",
            "--x-max", "40"]
    runs = {
        workers: run(base + ["--workers", str(workers)])
        for workers in (1, 8)
    }
    assert runs[1][0] == runs[8][0] == 0
    assert runs[1][1] == runs[8][1]
    assert runs[1][1] != ""
