"""Command-line runner tests: flags, exit codes, wire mode."""

import json
import subprocess
import sys

import conftest
from loide.protocol import OptionEntry, Settings, Tab, Workspace
from loide.workspace import export_workspace

CLI = [sys.executable, "-m", "loide.cli"]


def run_cli(*args, env=None, timeout=30):
    return subprocess.run(
        CLI + list(args),
        capture_output=True,
        text=True,
        timeout=timeout,
        env=env,
    )


def write_program(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_single_file_run(tmp_path):
    prog = write_program(tmp_path, "p.lp", "a.")
    got = run_cli("run", prog)
    assert got.returncode == 0
    assert got.stdout == "Answer set 1\n{a}\n"
    assert got.stderr == ""


def test_files_concatenate_in_argument_order(tmp_path):
    first = write_program(tmp_path, "1.lp", "a.")
    second = write_program(tmp_path, "2.lp", "b :- a.")
    got = run_cli("run", first, second)
    assert got.returncode == 0
    assert got.stdout == "Answer set 1\n{a, b}\n"


def test_workspace_run_equals_composed_sources(tmp_path):
    ws = Workspace(
        tabs=[
            Tab("one", "a.", run_selected=True),
            Tab("skip", "zzz.", run_selected=False),
            Tab("two", "b :- a.", run_selected=True),
        ],
        settings=Settings(language="asp", engine="builtin"),
    )
    ws_path = tmp_path / "w.json"
    ws_path.write_bytes(export_workspace(ws))
    via_workspace = run_cli("run", "--workspace", str(ws_path))

    combined = write_program(tmp_path, "all.lp", "a.\nb :- a.")
    via_files = run_cli("run", combined)

    assert via_workspace.returncode == via_files.returncode == 0
    assert via_workspace.stdout == via_files.stdout


def test_filter_flag(tmp_path):
    prog = write_program(tmp_path, "p.lp", "p(1). q(2). r.")
    got = run_cli("run", prog, "--filter", "q,r")
    assert got.stdout == "Answer set 1\n{q(2), r}\n"


def test_opt_flag_passes_engine_options(tmp_path):
    prog = write_program(tmp_path, "p.lp", "p(1). q(2).")
    got = run_cli("run", prog, "--opt", "filter=q")
    assert got.returncode == 0
    assert got.stdout == "Answer set 1\n{q(2)}\n"


def test_parse_error_exits_one(tmp_path):
    prog = write_program(tmp_path, "broken.lp", "a :-")
    got = run_cli("run", prog)
    assert got.returncode == 1
    assert got.stdout == ""
    assert "parse_error" in got.stderr


def test_timeout_exits_one(tmp_path):
    prog = write_program(
        tmp_path, "slow.lp", " ".join(f"a{i} | b{i}." for i in range(60))
    )
    got = run_cli("run", prog, "--timeout", "0.2")
    assert got.returncode == 1
    assert "timeout" in got.stderr


def test_unknown_engine_exits_two(tmp_path):
    prog = write_program(tmp_path, "p.lp", "a.")
    got = run_cli("run", prog, "--engine", "clingo")
    assert got.returncode == 2
    assert "unknown_engine" in got.stderr


def test_usage_mistakes_exit_two(tmp_path):
    prog = write_program(tmp_path, "p.lp", "a.")
    assert run_cli("run").returncode == 2  # nothing to run
    assert run_cli("run", prog, "--workspace", "w.json").returncode == 2  # both
    assert run_cli("run", prog, "--frobnicate").returncode == 2  # unknown flag
    assert run_cli("run", "/does/not/exist.lp").returncode == 2
    assert run_cli("run", "--workspace", "/does/not/exist.json").returncode == 2


def test_bad_workspace_file_exits_two(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"version": 99, "tabs": [], "settings": {}}))
    got = run_cli("run", "--workspace", str(path))
    assert got.returncode == 2
    assert "version" in got.stderr


def test_incoherent_program_is_a_clean_result(tmp_path):
    prog = write_program(tmp_path, "odd.lp", "a :- not a.")
    got = run_cli("run", prog)
    assert got.returncode == 0
    assert got.stdout == "INCOHERENT\n"


def test_executor_flag_runs_over_the_wire(tmp_path):
    port = conftest.free_port()
    service = conftest.spawn_executor(port)
    try:
        url = f"ws://127.0.0.1:{port}/ws"
        conftest.wait_ws_ready(url)
        prog = write_program(tmp_path, "p.lp", "a. b :- a.")
        over_wire = run_cli("run", prog, "--executor", url)
        local = run_cli("run", prog)
        assert over_wire.returncode == 0
        assert over_wire.stdout == local.stdout
    finally:
        service.kill()
        service.wait()


def test_executor_url_env_respected(tmp_path):
    import os

    port = conftest.free_port()  # nothing listens here
    prog = write_program(tmp_path, "p.lp", "a.")
    env = dict(os.environ, LOIDE_EXECUTOR_URL=f"ws://127.0.0.1:{port}/ws")
    got = run_cli("run", prog, env=env)
    assert got.returncode == 2
    assert "executor_unavailable" in got.stderr
