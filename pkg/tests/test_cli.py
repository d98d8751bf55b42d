import io
import json
import subprocess
import sys

import numpy as np
import pytest

from flatpair import cli
from flatpair.cli import fmt, main, parse_instance


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def as_dict(text):
    return dict(line.split(" ", 1) for line in text.strip().splitlines())


def test_pair_skew_lines(fixtures_dir):
    code, out, err = run("pair", str(fixtures_dir / "skew_lines.json"))
    assert code == 0 and err == ""
    fields = as_dict(out)
    assert fields["distance"] == "1.000000000000"
    assert fields["path"] == "full_rank_cramer"
    assert fields["b_star"] == "[0.000000000000, 0.000000000000, 0.000000000000]"
    assert fields["c_star"] == "[0.000000000000, 0.000000000000, 1.000000000000]"
    assert fields["unique"] == "true"
    assert fields["gram_det"] == "1.000000000000"


@pytest.mark.parametrize(
    "name, dist, dist_sq",
    [
        ("identical_points.json", "0.000000000000", "0.000000000000"),
        ("point_plane.json", "5.000000000000", "25.000000000000"),
        ("parallel_planes.json", "2.000000000000", "4.000000000000"),
        ("crossing_lines.json", "0.000000000000", "0.000000000000"),
    ],
)
def test_distance_fixtures(fixtures_dir, name, dist, dist_sq):
    code, out, _ = run("distance", str(fixtures_dir / name))
    assert code == 0
    assert as_dict(out) == {"distance": dist, "distance_sq_gram": dist_sq}


def test_gram_command(fixtures_dir):
    code, out, _ = run("gram", str(fixtures_dir / "parallel_planes.json"))
    fields = as_dict(out)
    assert code == 0
    assert fields["gram_det"] == "0.000000000000"
    assert fields["gram_det_with_d"] == "0.000000000000"
    assert fields["G"].startswith("[[1.000000000000, 0.000000000000, 1.000000000000,")


def test_gram_command_json(fixtures_dir):
    code, out, _ = run("gram", "--json", str(fixtures_dir / "skew_lines.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["G"] == [[1.0, 0.0], [0.0, 1.0]]
    assert doc["gram_det"] == 1.0 and doc["gram_det_with_d"] == 1.0


def test_check_rank_deficient_agrees(fixtures_dir):
    code, out, _ = run("check", str(fixtures_dir / "parallel_lines.json"))
    fields = as_dict(out)
    assert code == 0
    assert fields["unique"] == "false" and fields["path"] == "reduced_columns"
    assert fields["agreement"] == "true"
    assert fields["distance"] == "1.000000000000"


def test_check_disagreement_exit_code(fixtures_dir):
    code, out, _ = run("check", "--max-iter", "1", str(fixtures_dir / "slow_skew_lines.json"))
    assert code == 3
    assert as_dict(out)["agreement"] == "false"


def test_check_converges_with_default_budget(fixtures_dir):
    code, out, _ = run("check", str(fixtures_dir / "slow_skew_lines.json"))
    assert code == 0 and as_dict(out)["ap_converged"] == "true"


def test_tolerance_from_file_and_flag(fixtures_dir):
    path = str(fixtures_dir / "loose_tol.json")
    _, out, _ = run("pair", path)
    assert as_dict(out)["path"] == "reduced_columns"
    _, out, _ = run("pair", "--tol", "1e-9", path)
    assert as_dict(out)["path"] == "full_rank_cramer"


@pytest.mark.parametrize(
    "name",
    [
        "truncated.json",
        "nan.json",
        "infinity.json",
        "short_column.json",
        "short_base.json",
        "missing_field.json",
        "non_numeric.json",
        "not_object.json",
        "zero_dim.json",
        "negative_tol.json",
        "does_not_exist.json",
    ],
)
@pytest.mark.parametrize("command", ["distance", "pair", "gram", "check"])
def test_bad_input_exits_2(fixtures_dir, command, name):
    code, out, err = run(command, str(fixtures_dir / "bad" / name))
    assert code == 2
    assert out == ""
    assert err.startswith("flatpair: ") and err.count("\n") == 1


def test_nonpositive_tol_flag_exits_2(fixtures_dir):
    code, _, err = run("distance", "--tol", "0", str(fixtures_dir / "skew_lines.json"))
    assert code == 2 and "tol" in err


def test_usage_error_exits_2():
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2


def test_invariant_violation_exits_4(fixtures_dir, monkeypatch):
    real = cli.optimal_pair

    def broken(Vb, Vc, tol):
        sol = real(Vb, Vc, tol)
        object.__setattr__(sol, "b_star", sol.b_star + 1.0)
        return sol

    monkeypatch.setattr(cli, "optimal_pair", broken)
    code, out, err = run("pair", str(fixtures_dir / "skew_lines.json"))
    assert code == 4 and out == "" and "invariant" in err


def test_json_mirrors_pair_solution_fields(fixtures_dir):
    code, out, _ = run("pair", "--json", str(fixtures_dir / "skew_lines.json"))
    doc = json.loads(out)
    assert code == 0
    assert set(doc["solution"]) == {
        "b_star", "c_star", "u_star", "v_star", "distance", "distance_sq_gram", "diagnostics"
    }
    assert {"gram_det", "rank_used", "dropped_columns", "unique", "tolerances_used", "path"} <= set(
        doc["solution"]["diagnostics"])


def test_json_round_trip(tmp_path):
    rng = np.random.default_rng(99)
    for i in range(20):
        m = int(rng.integers(2, 7))
        inst = {
            "m": m,
            "b": rng.uniform(-3, 3, m).tolist(),
            "B": [rng.uniform(-3, 3, m).tolist() for _ in range(int(rng.integers(0, m)))],
            "c": rng.uniform(-3, 3, m).tolist(),
            "C": [rng.uniform(-3, 3, m).tolist() for _ in range(int(rng.integers(0, 2)))],
        }
        src = tmp_path / f"inst{i}.json"
        src.write_text(json.dumps(inst))
        _, first, _ = run("pair", "--json", str(src))
        emitted = tmp_path / f"out{i}.json"
        emitted.write_text(first)
        _, second, _ = run("pair", "--json", str(emitted))
        assert json.loads(second)["solution"]["distance"] == json.loads(first)["solution"]["distance"]
        _, text1, _ = run("distance", str(src))
        _, text2, _ = run("distance", str(emitted))
        assert text1 == text2


def test_fmt():
    assert fmt(1.0) == "1.000000000000"
    assert fmt(-0.0) == "0.000000000000"
    assert fmt(-1e-15) == "0.000000000000"
    assert fmt(-2.5) == "-2.500000000000"
    assert fmt(float("nan")) == "nan"


def test_parse_instance_widens_integers():
    inst = parse_instance({"m": 1, "b": [1], "B": [[2]], "c": [3], "C": []})
    assert inst["b"] == [1.0] and isinstance(inst["B"][0][0], float)


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "flatpair", "distance", str(fixtures_dir / "skew_lines.json")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "distance 1.000000000000"
