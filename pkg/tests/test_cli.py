import json
import subprocess
import sys

import pytest

from wgk.cache import TableCache, content_key, revalidate, tables_from_json, tables_to_json
from wgk.cli import main
from wgk.pipeline import compute_tables, make_instance


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_compute_p_table(capsys):
    code, out, _ = run(capsys, "compute", "--instance", "regular", "--group", "A2",
                       "--weights", "equal", "--out", "P")
    assert code == 0
    data = json.loads(out)
    assert data["kind"] == "P"
    assert {e["x"] for e in data["entries"]} >= {"1", "s1.s2.s1"}


def test_compute_dot(capsys):
    code, out, _ = run(capsys, "compute", "--instance", "deodhar:psi:J=s2", "--group", "A2",
                       "--export", "dot", "--out", "wgraph")
    assert code == 0
    assert out.startswith("graph wgraph {")


def test_cache_hit_gives_identical_bytes(tmp_path, capsys):
    args = ["export", "--instance", "B2-regular-12", "--cache-dir", str(tmp_path / "c"),
            "--export", "json,csv,dot"]
    assert run(capsys, *args, "--dir", str(tmp_path / "a"))[0] == 0
    first_err = capsys.readouterr()
    assert run(capsys, *args, "--dir", str(tmp_path / "b"))[0] == 0
    a = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "P.csv" in a and "wgraph.dot" in a and "inversion_report.json" in a
    for name in a:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert len(list((tmp_path / "c").glob("*.json"))) == 1


def test_second_run_is_served_from_cache(tmp_path, capsys):
    args = ["compute", "--instance", "A2-regular", "--cache-dir", str(tmp_path)]
    assert run(capsys, *args)[2].strip().endswith("computed")
    assert run(capsys, *args)[2].strip().endswith("cached")


def test_cache_round_trip():
    inst = make_instance("B2", "1,2", "deodhar:phi:J=s2")
    t = compute_tables(inst)
    from wgk.pipeline import wgraph
    wgraph(t)
    cfg = {"group": "B2", "weights": "1,2", "instance": inst.name}
    back = tables_from_json(json.loads(json.dumps(tables_to_json(t, cfg))), t.W)
    for k, M in t.matrices().items():
        assert back[k].diff(M) is None
    assert back["mu"] == t.mu


def test_content_key_changes_with_config():
    a = content_key({"group": "A2", "weights": "equal", "instance": "regular"})
    b = content_key({"group": "A2", "weights": "equal", "instance": "deodhar:psi:J=s2"})
    assert a != b and len(a) == 64


def _corrupt_P(cache_dir):
    (path,) = list(cache_dir.glob("*.json"))
    data = json.loads(path.read_text())
    entry = next(e for e in data["tables"]["P"]["entries"] if e["x"] != e["y"])
    entry["poly"][0][1] = str(int(entry["poly"][0][1]) + 7)
    path.write_text(json.dumps(data))
    return entry["x"], entry["y"]


def test_fault_injection_detected_by_verify(tmp_path, capsys):
    base = ["--instance", "regular", "--group", "A2", "--cache-dir", str(tmp_path)]
    assert run(capsys, "compute", *base)[0] == 0
    x, y = _corrupt_P(tmp_path)
    code, out, _ = run(capsys, "verify", *base, "--json")
    assert code == 1
    rep = json.loads(out)
    assert rep["info"]["source"] == "stale" or rep["info"]["revalidation"]["ok"]
    pq = next(c for c in rep["checks"] if c["name"] == "P Q = I")
    assert not pq["passed"]
    assert pq["counterexample"]["at"] == [x, y]


def test_revalidation_catches_corruption():
    t = compute_tables(make_instance("A2", "equal", "regular"))
    m = dict(t.matrices())
    bad_cols = {y: dict(col) for y, col in m["P"].cols.items()}
    e, s = t.W.identity, t.W.parse_word("s1")
    bad_cols[s][e] = bad_cols[s][e] * 3
    from wgk.klpoly import PolyMatrix
    m["P"] = PolyMatrix("P", m["P"].index, m["P"].rank, bad_cols)
    import random
    seen = {revalidate(m, random.Random(i))[0]: revalidate(m, random.Random(i))[1] for i in range(40)}
    assert seen["P Q = I"] is not None
    assert seen["bar(R) R = I"] is None


def test_verify_examples(capsys):
    assert run(capsys, "verify", "--instance", "regular", "--group", "B2", "--weights", "1,2")[0] == 0
    code, out, _ = run(capsys, "verify", "--instance", "solomon:J=s2", "--group", "A2", "--json")
    assert code == 0
    assert "r_cones" in json.loads(out)["info"]


def test_config_errors_exit_2(capsys):
    assert run(capsys, "compute", "--instance", "bogus", "--group", "A2")[0] == 2
    assert run(capsys, "compute", "--instance", "regular", "--group", "Q7")[0] == 2
    assert run(capsys, "compute", "--instance", "regular", "--group", "A2", "--weights", "1,2")[0] == 2
    assert run(capsys, "compute", "--instance", "regular", "--group", "A2", "--out", "Z")[0] == 2
    assert run(capsys, "verify", "--instance", "regular", "--group", "{bad json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_json_group_and_weights(capsys):
    code, out, _ = run(capsys, "compute", "--instance", "regular",
                       "--group", '{"type": "named", "name": "B2"}',
                       "--weights", '{"gamma_rank": 2, "L": {"s1": [1, 0], "s2": [0, 1]}}',
                       "--out", "Q", "--export", "csv")
    assert code == 0
    assert out.splitlines()[0] == "x,y,poly"


def test_list_instances(capsys):
    code, out, _ = run(capsys, "list-instances", "--json")
    assert code == 0
    assert any(r["name"] == "A2-regular" for r in json.loads(out))


def test_parallel_jobs(tmp_path, capsys):
    code, out, _ = run(capsys, "verify", "--instance", "A2-regular", "--instance", "A2-solomon-s2",
                       "--jobs", "2", "--json", "--dir", str(tmp_path))
    assert code == 0
    assert len(list(tmp_path.glob("*.report.json"))) == 2


def test_console_script_entry():
    out = subprocess.run([sys.executable, "-m", "wgk.cli", "list-instances"], capture_output=True,
                         text=True, check=True)
    assert "A2-regular" in out.stdout


def test_realization_failure_exits_1(capsys):
    code, out, _ = run(capsys, "compute", "--instance", "solomon:J=s2:K=complement", "--group", "A2")
    assert code == 1
    assert json.loads(out)["error"]["type"] == "PatternMismatch"
