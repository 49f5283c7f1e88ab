import csv
import io
import json
import math
import shutil
import subprocess

import pytest

from rankorder.cli import OutputTable, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestTransition:
    def test_uniform_at_zero(self, capsys):
        code, out, _ = run(capsys, "transition", "--n", "3", "--x", "0", "--method", "analytic")
        assert code == 0
        rows = parse(out)
        assert len(rows) == 6
        assert all(r["probability"] == "0.166666666667" for r in rows)
        assert [r["label"] for r in rows] == ["ABC", "ACB", "BAC", "BCA", "CAB", "CBA"]
        assert [int(r["index"]) for r in rows] == list(range(6))

    def test_acb_at_one(self, capsys):
        _, out, _ = run(capsys, "transition", "--n", "3", "--x", "1")
        acb = next(r for r in parse(out) if r["label"] == "ACB")
        value = float(acb["probability"])
        # oracle: nested scipy tplquad, 0.16734403106
        assert value == pytest.approx(0.1673440311297665, abs=1e-12)

    def test_capability_error(self, capsys):
        code, _, err = run(capsys, "transition", "--n", "7", "--x", "1", "--method", "analytic")
        assert code == 3
        assert "mc_row" in err

    def test_quadrature_matches_analytic(self, capsys):
        _, a, _ = run(capsys, "transition", "--n", "3", "--x", "0.7")
        _, q, _ = run(capsys, "transition", "--n", "3", "--x", "0.7", "--method", "quadrature")
        for ra, rq in zip(parse(a), parse(q)):
            assert float(ra["probability"]) == pytest.approx(float(rq["probability"]), abs=1e-11)

    def test_mc_has_std_error(self, capsys):
        code, out, _ = run(capsys, "transition", "--n", "2", "--x", "1", "--method", "mc",
                           "--samples", "200000", "--seed", "3")
        assert code == 0
        rows = parse(out)
        assert set(rows[0]) == {"label", "index", "probability", "std_error"}
        ba = rows[1]
        assert abs(float(ba["probability"]) - 0.5 * math.exp(-1)) < 4 * float(ba["std_error"])

    def test_lambda_alpha_pair(self, capsys):
        _, a, _ = run(capsys, "transition", "--n", "3", "--lambda", "2", "--alpha", "0.5")
        _, b, _ = run(capsys, "transition", "--n", "3", "--x", "1")
        assert a == b


class TestSweep:
    def test_first_row(self, capsys):
        code, out, _ = run(capsys, "sweep", "--n", "2", "--x-min", "0", "--x-max", "6", "--steps", "3")
        assert code == 0
        rows = parse(out)
        assert list(rows[0]) == ["x", "C_bits_per_symbol", "gamma_bits_per_neuron", "lambdaTbar", "R_over_lambda"]
        assert [float(v) for v in rows[0].values()] == [0, 0, 0, 1.0, 0]
        assert len(rows) == 3

    def test_n3_at_one(self, capsys):
        _, out, _ = run(capsys, "sweep", "--n", "3", "--x-min", "0", "--x-max", "2", "--steps", "3")
        assert float(parse(out)[1]["C_bits_per_symbol"]) == pytest.approx(1.0334, abs=1e-3)

    def test_n4_last_gamma_bound(self, capsys):
        _, out, _ = run(capsys, "sweep", "--n", "4", "--x-min", "0", "--x-max", "6", "--steps", "7")
        last = parse(out)[-1]
        assert float(last["x"]) == 6.0
        assert float(last["gamma_bits_per_neuron"]) <= 1.1462406

    def test_capability(self, capsys):
        code, _, _ = run(capsys, "sweep", "--n", "5", "--x-min", "0", "--x-max", "1", "--steps", "3")
        assert code == 3

    @pytest.mark.parametrize("args", [
        ("--x-min", "2", "--x-max", "1", "--steps", "3"),
        ("--x-min", "0", "--x-max", "1", "--steps", "1"),
    ])
    def test_bad_grid(self, capsys, args):
        code, _, _ = run(capsys, "sweep", "--n", "3", *args)
        assert code == 2

    def test_mc_method(self, capsys):
        code, out, _ = run(capsys, "sweep", "--n", "5", "--x-min", "0.5", "--x-max", "1.5", "--steps", "2",
                           "--method", "mc", "--samples", "50000")
        assert code == 0 and len(parse(out)) == 2


def test_tradeoff(capsys):
    code, out, _ = run(capsys, "tradeoff", "--n", "3", "--x-min", "0", "--x-max", "40", "--steps", "5")
    assert code == 0
    rows = parse(out)
    assert float(rows[0]["gamma_bits_per_neuron"]) == 0 and float(rows[0]["R_over_lambda"]) == 0
    assert float(rows[-1]["gamma_bits_per_neuron"]) == pytest.approx(math.log2(6) / 3, abs=1e-11)


class TestAtypical:
    def test_three(self, capsys):
        code, out, _ = run(capsys, "atypical", "--n", "3")
        assert code == 0
        (row,) = parse(out)
        assert row["label"] == "ACB"
        assert f"{float(row['peak_x']):.6f}" == "0.346574"
        assert f"{float(row['peak_value']):.6f}" == "0.235702"

    def test_two_is_empty(self, capsys):
        code, out, _ = run(capsys, "atypical", "--n", "2")
        assert code == 0
        assert out.strip().splitlines() == ["label,index,peak_x,peak_value,rise_start,rise_end"]

    def test_four_json(self, capsys):
        _, out, _ = run(capsys, "atypical", "--n", "4", "--format", "json")
        assert len(json.loads(out)) == 11


class TestDuration:
    def test_both(self, capsys):
        code, out, _ = run(capsys, "duration", "--n", "3", "--x", "1", "--method", "both",
                           "--samples", "1000000", "--seed", "7")
        assert code == 0
        analytic, mc = parse(out)
        assert f"{float(analytic['mean_duration_sec']):.6f}" == "2.435547"
        se = float(mc["std_error"])
        assert int(mc["samples"]) == 1_000_000
        assert abs(float(mc["mean_duration_sec"]) - 2.4355470827897487) < 4 * se

    def test_seconds_scale_with_lambda(self, capsys):
        _, out, _ = run(capsys, "duration", "--n", "2", "--lambda", "4", "--alpha", "0.25",
                        "--method", "analytic")
        assert float(parse(out)[0]["mean_duration_sec"]) == pytest.approx((1 + math.exp(-1)) / 4)

    def test_x_and_pair_rejected(self, capsys):
        code, _, err = run(capsys, "duration", "--n", "2", "--x", "1", "--lambda", "2")
        assert code == 2 and "not both" in err

    def test_missing_point(self, capsys):
        code, _, _ = run(capsys, "duration", "--n", "2", "--alpha", "1")
        assert code == 2

    def test_analytic_capability(self, capsys):
        code, _, _ = run(capsys, "duration", "--n", "6", "--x", "1", "--method", "analytic")
        assert code == 3


def test_gaussian(capsys):
    code, out, _ = run(capsys, "gaussian", "--n", "2", "--sigma", "1", "--alpha-min", "0", "--alpha-max", "1",
                       "--steps", "2", "--samples", "400000", "--seed", "11")
    assert code == 0
    rows = parse(out)
    assert len(rows) == 4
    ba = rows[3]
    assert ba["label"] == "BA" and float(ba["alpha_over_sigma"]) == 1.0
    assert abs(float(ba["probability"]) - 0.23975006109347669) < 4 * float(ba["std_error"])


class TestOutput:
    def test_repeat_is_byte_identical(self, capsys):
        argv = ["transition", "--n", "4", "--x", "0.5", "--method", "mc", "--samples", "300000", "--seed", "5",
                "--chunk-size", "65536"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv, "--workers", "4")
        assert a == b

    def test_csv_round_trip(self, capsys):
        _, out, _ = run(capsys, "sweep", "--n", "4", "--x-min", "0.1", "--x-max", "3", "--steps", "9")
        for row in parse(out):
            for text in row.values():
                assert format(float(text), ".12g") == text

    def test_json_matches_csv(self, capsys):
        argv = ["transition", "--n", "3", "--x", "1.3"]
        _, c, _ = run(capsys, *argv)
        _, j, _ = run(capsys, *argv, "--format", "json")
        records = json.loads(j)
        for rc, rj in zip(parse(c), records):
            assert rj["label"] == rc["label"] and rj["index"] == int(rc["index"])
            assert rj["probability"] == float(rc["probability"])

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "row.csv"
        code, out, _ = run(capsys, "transition", "--n", "2", "--x", "1", "--out", str(target))
        assert code == 0 and out == ""
        assert target.read_text().startswith("label,index,probability\n")

    def test_env_default_samples(self, capsys, monkeypatch):
        monkeypatch.setenv("ROC_DEFAULT_SAMPLES", "1234")
        _, out, _ = run(capsys, "duration", "--n", "2", "--x", "1", "--method", "mc")
        assert parse(out)[0]["samples"] == "1234"

    def test_table_shape_checked(self):
        with pytest.raises(ValueError):
            OutputTable(["a", "b"], [[1]])


@pytest.mark.parametrize("argv,code", [
    ([], 2),
    (["transition", "--x", "1"], 2),
    (["transition", "--n", "3", "--x", "1", "--format", "xml"], 2),
    (["transition", "--n", "3", "--x", "-1"], 4),
    (["transition", "--n", "3", "--x", "1", "--method", "quadrature", "--tol", "1e-20"], 4),
    (["duration", "--n", "3", "--x", "1", "--method", "mc", "--samples", "0"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


@pytest.mark.skipif(shutil.which("rankorder") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["rankorder", "transition", "--n", "2", "--x", "0"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == "label,index,probability\nAB,0,0.5\nBA,1,0.5\n"
