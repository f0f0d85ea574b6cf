import csv

import pytest

from rcasim.cli import main
from rcasim.experiments import parse_matrix_text, run_matrix, summary_path
from rcasim.scenario import ConfigError, Scenario, dump_scenario, parse_text

TINY = """
nodes = 9
area_x = 600
area_y = 600
channels = 3
interfaces = 2
flows = 1
rate = 5
duration = 5
"""


def test_empty_file_gives_defaults():
    assert parse_text("") == Scenario()
    assert parse_text("# only a comment\n\n") == Scenario()


def test_more_interfaces_than_channels_is_rejected():
    with pytest.raises(ConfigError, match="interfaces"):
        parse_text("channels = 3\ninterfaces = 4\n")


@pytest.mark.parametrize("text, lineno", [
    ("nodes = 9\nbogus = 1\n", 2),
    ("nodes = 9\n\nthis line has no equals\n", 3),
    ("nodes = nine\n", 1),
    ("nodes = 9\nnodes = 10\n", 2),
])
def test_errors_name_the_line(text, lineno):
    with pytest.raises(ConfigError, match=f":{lineno}:"):
        parse_text(text, "s.txt")


def test_dump_round_trips():
    sc = parse_text(TINY + "flow_endpoint_policy = fixed_list\nflow_list = 0>8\nliteral_tpre = true\n")
    assert parse_text(dump_scenario(sc)) == sc
    assert parse_text(dump_scenario(Scenario())) == Scenario()


def matrix_text(values="5", algorithms="rca", seeds="0"):
    return TINY + f"sweep_key = rate\nsweep_values = {values}\nalgorithms = {algorithms}\nseeds = {seeds}\n"


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_one_cell_matrix(tmp_path):
    out, side = run_matrix(parse_matrix_text(matrix_text()), tmp_path / "m.csv")
    rows = read_rows(out)
    assert len(rows) == 2 and rows[1][:4] == ["rca", "rate", "5", "0"]
    assert side == summary_path(out) and len(read_rows(side)) == 2


def test_matrix_row_count_and_rerun_is_byte_identical(tmp_path):
    m = parse_matrix_text(matrix_text("5, 10", "rca, static, single", "0-1"))
    a, _ = run_matrix(m, tmp_path / "a.csv")
    b, _ = run_matrix(m, tmp_path / "b.csv")
    assert len(read_rows(a)) == 1 + 2 * 3 * 2
    assert a.read_bytes() == b.read_bytes()


def test_matrix_rejects_bad_sweep_key():
    with pytest.raises(ConfigError):
        parse_matrix_text(TINY + "sweep_key = colour\nsweep_values = 1\n")


@pytest.fixture
def scenario_file(tmp_path):
    p = tmp_path / "tiny.txt"
    p.write_text(TINY)
    return p


def test_cli_run_prints_csv_and_writes_trace(scenario_file, tmp_path, capsys):
    trace = tmp_path / "t.tsv"
    assert main(["run", "--scenario", str(scenario_file), "--seed", "3", "--trace", str(trace)]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0][0] == "flow" and rows[-1][0] == "mean"
    assert trace.read_text().startswith("# rcasim trace")
    assert main(["replay", "--trace", str(trace)]) == 0


def test_cli_validate(scenario_file, capsys):
    assert main(["validate", "--scenario", str(scenario_file)]) == 0
    assert parse_text(capsys.readouterr().out) == parse_text(TINY)


def test_cli_config_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("channels = 3\ninterfaces = 4\n")
    assert main(["validate", "--scenario", str(bad)]) == 1
    assert main(["run", "--scenario", str(tmp_path / "missing.txt")]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == 1


def test_cli_matrix(tmp_path, capsys):
    cfg = tmp_path / "m.txt"
    cfg.write_text(matrix_text())
    out = tmp_path / "out.csv"
    assert main(["matrix", "--config", str(cfg), "--out", str(out)]) == 0
    assert len(read_rows(out)) == 2


def test_cli_replay_of_tampered_trace_exits_2(scenario_file, tmp_path):
    trace = tmp_path / "t.tsv"
    main(["run", "--scenario", str(scenario_file), "--seed", "0", "--trace", str(trace)])
    lines = trace.read_text().splitlines()
    # claim one more delivery than the trace shows
    i = max(k for k, line in enumerate(lines) if "\tMETRICS\t" in line)
    head, _, tail = lines[i].partition("delivered=")
    count, _, rest = tail.partition(" ")
    lines[i] = f"{head}delivered={int(count) + 1} {rest}"
    trace.write_text("\n".join(lines) + "\n")
    assert main(["replay", "--trace", str(trace)]) == 2
