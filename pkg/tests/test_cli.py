from __future__ import annotations

import json

import pytest

import cellspace as cs
from cellspace.cli import main
from cellspace.commands import dump_commands, load_commands
from cellspace.fixtures import canonical_trace, task1_script
from cellspace.gestures import dump_trace

from conftest import code_ids


@pytest.fixture()
def nb_path(tmp_path, notebook_bytes):
    path = tmp_path / "fixture50.ipynb"
    path.write_bytes(notebook_bytes)
    return path


@pytest.fixture()
def scene_path(tmp_path, nb_path):
    out = tmp_path / "scene.json"
    assert main(["import", str(nb_path), "--out", str(out)]) == 0
    return out


def test_import_produces_semicircle_scene(scene_path, capsys):
    w = cs.load_scene(str(scene_path))
    # In the scene document a code cell carrying an image output is typed
    # by its effective format, so "code cells" here spans both kinds.
    code = [c for c in w.cells.values() if c.kind.value in ("code", "output_visualization")]
    assert len(code) == 50
    visible = [e for e in w.edges.values() if e.visible]
    assert len(visible) == 49
    assert cs.validate_workspace(w).ok()


def test_validate_subcommand(scene_path):
    assert main(["validate", str(scene_path)]) == 0


def test_apply_single_cell_loop_fails_with_exit_1(scene_path, tmp_path, capsys):
    w = cs.load_scene(str(scene_path))
    cid = code_ids(w)[0]
    out = tmp_path / "x.json"
    rc = main(["apply", str(scene_path), "--select", cid, "--structure", "loop-circle", "--out", str(out)])
    assert rc == 1
    assert "loop" in capsys.readouterr().err
    assert not out.exists()


def test_unknown_subcommand_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["bogus"])
    assert err.value.code == 2


def test_unknown_flag_exits_2(scene_path):
    with pytest.raises(SystemExit) as err:
        main(["validate", str(scene_path), "--frobnicate"])
    assert err.value.code == 2


def test_missing_file_exits_1(tmp_path, capsys):
    rc = main(["validate", str(tmp_path / "missing.json")])
    assert rc == 1


def test_apply_and_edit_roundtrip(scene_path, tmp_path):
    grid = tmp_path / "grid.json"
    assert main(["apply", str(scene_path), "--select", "all", "--structure", "multi-row-grid",
                 "--rows", "5", "--out", str(grid)]) == 0
    assert main(["validate", str(grid)]) == 0
    col = tmp_path / "col.json"
    back = tmp_path / "back.json"
    assert main(["edit", str(grid), "--op", "orient", "--structure", "s0", "--out", str(col)]) == 0
    assert main(["edit", str(col), "--op", "orient", "--structure", "s0", "--out", str(back)]) == 0
    assert grid.read_bytes() == back.read_bytes()


def test_replay_matches_direct_apply(scene_path, tmp_path):
    w = cs.load_scene(str(scene_path))
    sel = code_ids(w)[:6]
    trace_path = tmp_path / "trace.jsonl"
    trace_path.write_text(dump_trace(canonical_trace("linear", w, sel)))
    replayed = tmp_path / "replayed.json"
    log_path = tmp_path / "commands.jsonl"
    assert main(["replay", str(scene_path), str(trace_path), "--out", str(replayed),
                 "--log", str(log_path)]) == 0

    direct = tmp_path / "direct.json"
    assert main(["apply", str(scene_path), "--select", ",".join(sel), "--structure", "linear-linear",
                 "--out", str(direct)]) == 0
    assert replayed.read_bytes() == direct.read_bytes()

    # The logged commands replay to the same scene again.
    from_log = tmp_path / "fromlog.json"
    assert main(["replay", str(scene_path), str(log_path), "--commands", "--out", str(from_log)]) == 0
    assert from_log.read_bytes() == direct.read_bytes()


def test_replay_twice_is_byte_identical(scene_path, tmp_path):
    w = cs.load_scene(str(scene_path))
    sel = code_ids(w)[:6]
    trace_path = tmp_path / "trace.jsonl"
    trace_path.write_text(dump_trace(canonical_trace("loop", w, sel)))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["replay", str(scene_path), str(trace_path), "--out", str(out1)]) == 0
    assert main(["replay", str(scene_path), str(trace_path), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_metrics_subcommand(tmp_path, capsys):
    positions = tmp_path / "positions.jsonl"
    lines = [json.dumps({"t": i * 100, "pos": [float(i), 0.0, 0.0]}) for i in range(11)]
    positions.write_text("\n".join(lines) + "\n")
    assert main(["metrics", str(positions)]) == 0
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert report["travel_m"] == 10.0
    assert report["movements"] == 10


def test_compare_subcommand(scene_path, tmp_path, capsys):
    w = cs.load_scene(str(scene_path))
    script = tmp_path / "task1.jsonl"
    script.write_text(dump_commands(task1_script(w)))
    assert main(["compare", str(scene_path), str(script)]) == 0
    report = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert report["op_count_compositional"] < report["op_count_manual"]
    assert report["ratio"] > 1.5


def test_edit_merge_and_dims(scene_path, tmp_path):
    w = cs.load_scene(str(scene_path))
    code = code_ids(w)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    assert main(["apply", str(scene_path), "--select", ",".join(code[:3]),
                 "--structure", "linear-linear", "--out", str(a)]) == 0
    assert main(["apply", str(a), "--select", ",".join(code[3:7]),
                 "--structure", "loop-circle", "--out", str(b)]) == 0
    assert main(["edit", str(b), "--op", "merge", "--src", "s0", "--dst", "s1", "--out", str(c)]) == 0
    merged = cs.load_scene(str(c))
    assert len(merged.structures["s1"].members) == 7


def test_fixture_subcommand(tmp_path):
    out = tmp_path / "nb.ipynb"
    assert main(["fixture", "--out", str(out), "--cells", "12", "--task-scripts"]) == 0
    data = json.loads(out.read_text())
    assert sum(1 for c in data["cells"] if c["cell_type"] == "code") == 12
    assert (tmp_path / "nb.task1.jsonl").exists()
    assert (tmp_path / "nb.task2.jsonl").exists()


def test_config_override(tmp_path, nb_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"layout": {"initial_radius": 4.0}, "gestures": {"sweep_min": 200.0}}))
    out = tmp_path / "scene.json"
    assert main(["import", str(nb_path), "--out", str(out), "--config", str(config)]) == 0
    w = cs.load_scene(str(out))
    assert w.config.initial_radius == 4.0
