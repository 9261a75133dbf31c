import io
import json

import pytest

from ychl.cli import run
from ychl.deterministic import DycParams
from ychl.regions import build_outer_region_d, contains


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_check_examples():
    code, text = call("check", "--levels", "5,4,3", "--rates", "0,2,2,1,0,2")
    assert code == 0 and text.startswith("inside")
    code, _ = call("check", "--levels", "4,3,2", "--rates", "2,2,0,0,0,0")
    assert code == 1


def test_simulate_exhaustive_toy():
    code, text = call("simulate", "--levels", "5,4,3", "--rates", "0,2,2,1,0,2", "--exhaustive")
    assert code == 0 and "128/128 payloads decoded" in text


def test_simulate_trials_and_rational():
    code, text = call("simulate", "--levels", "1,1,1", "--rates", "1/2,0,1/2,0,0,0", "--trials", "20", "--seed", "3")
    assert code == 0 and text.strip() == "20/20 payloads decoded"
    code, _ = call("simulate", "--levels", "4,3,2", "--rates", "2,2,0,0,0,0", "--exhaustive")
    assert code == 1


def test_plan_json():
    code, text = call("plan", "--levels", "5,4,3", "--rates", "0,2,2,1,0,2", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["feasible"]
    assert {s["kind"] for s in data["streams"]} == {"bidir", "cyc132", "uni"}
    assert all(len(p) == 2 for p in data["relay_map"])
    code, text = call("plan", "--levels", "4,3,2", "--rates", "2,2,0,0,0,0", "--format", "json")
    assert code == 1 and json.loads(text)["feasible"] is False


def test_plan_csv():
    code, text = call("plan", "--levels", "4,3,2", "--rates", "1,1,1,1,1,1", "--format", "csv")
    lines = text.splitlines()
    assert code == 0 and lines[0].startswith("id,kind,users,rate")


@pytest.mark.parametrize("rates", ["1,0,1,0,1,0", "2,0,0,2,2,0", "1,1,1,1,1,1", "0,0,0,0,0,0"])
def test_region_json_round_trip(tmp_path, rates):
    code, text = call("region", "dyc", "--levels", "2,2,2", "--format", "json")
    assert code == 0
    path = tmp_path / "r.json"
    path.write_text(text)
    code, _ = call("check", "--region", str(path), "--rates", rates)
    expected = contains(build_outer_region_d(DycParams(2, 2, 2)), [int(v) for v in rates.split(",")])
    assert (code == 0) == expected


def test_region_gyc_and_cutset():
    code, text = call("region", "gyc", "--gains", "8,4,2", "--power", "1", "--format", "json")
    assert code == 0 and len(json.loads(text)["inequalities"]) == 14
    code, text = call("region", "gyc", "--gains", "8,4,2", "--power", "1", "--bound", "inner-target")
    assert code == 0 and len(text.splitlines()) == 9
    code, text = call("region", "dyc", "--levels", "3,2,1", "--bound", "cutset", "--format", "csv")
    assert code == 0 and len(text.splitlines()) == 13
    code, _ = call("region", "dyc", "--levels", "3,2,1", "--bound", "inner-target")
    assert code == 2


def test_verify():
    gains = f"{(2**20 - 1) ** 0.5},{(2**16 - 1) ** 0.5},{(2**12 - 1) ** 0.5}"
    code, text = call("verify", "--gains", gains, "--power", "1", "--rates", "1,1,1,1,1,1")
    assert code == 0 and text.startswith("pass")
    code, text = call("verify", "--gains", gains, "--power", "1", "--rates", "8,0,0,0,0,0", "--format", "json")
    assert code == 1 and json.loads(text)["verdict"] == "fail"


def test_verify_relabels_unordered_gains():
    code, text = call("verify", "--gains", "64,1024,256", "--power", "1", "--rates", "1,0,0,0,0,0", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["normalized_order"] == [2, 3, 1]
    # caller R12 is sent from normalized user 3 to normalized user 1
    assert data["rates"] == [0, 0, 0, 0, 1, 0]


def test_sweep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert call("sweep-gap", "--samples", "15", "--seed", "4", "--out", str(a))[0] == 0
    assert call("sweep-gap", "--samples", "15", "--seed", "4", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "seed,h1,h2,h3,P,R12,R13,R21,R23,R31,R32,min_slack,verdict"
    code, text = call("sweep-gap", "--samples", "0", "--seed", "1", "--format", "csv")
    assert code == 0 and text.count("\n") == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--levels", "1,2,3", "--rates", "0,0,0,0,0,0"],
        ["check", "--levels", "3,2,1", "--rates", "0,0,0"],
        ["check", "--levels", "3,2,1", "--rates", "x,0,0,0,0,0"],
        ["plan", "--levels", "3,2"],
        ["sweep-gap", "--hp-range", "5,1"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors(argv):
    assert call(*argv)[0] == 2
