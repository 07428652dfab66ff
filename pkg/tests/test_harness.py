import json
import math

import pytest

from airtdma.exceptions import ConfigError
from airtdma.harness import cli
from airtdma.harness.results import config_hash, fmt, read_csv_rows, read_provenance
from airtdma.harness.runner import compare, simulate
from airtdma.harness.scenario import (
    DEFAULTS,
    loads_scenario,
    parse_scenario,
    preset_names,
    scenario_from_dict,
    scenario_to_dict,
    serialize_scenario,
)
from airtdma.harness.sweep import SweepSpec, sweep

PRESETS = ["dense_56_node", "legacy_lossy_8hop", "legacy_zero_loss_8hop", "proposed_lossy_8hop",
           "proposed_lossy_single_hop", "proposed_zero_loss_8hop"]


def test_empty_scenario_takes_defaults():
    cfg = scenario_from_dict({})
    assert scenario_to_dict(cfg) == {**DEFAULTS, "variant": "proposed"}
    assert cfg.n_aircraft == 8 and cfg.frame_duration == 2.0


def test_scenario_roundtrip():
    cfg = scenario_from_dict({"variant": "legacy", "rho": 0.05, "seed": 12,
                              "slot_assignment": {"1": 40}, "chain_length_km": 678})
    again = loads_scenario(serialize_scenario(cfg))
    assert again == cfg
    assert again.slot_assignment == {1: 40}


def test_interval_beyond_line_of_sight_is_rejected():
    with pytest.raises(ConfigError, match="line-of-sight"):
        scenario_from_dict({"node_interval_km": 700})


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="rng_seed"):
        scenario_from_dict({"rng_seed": 1})


def test_json_error_has_position():
    with pytest.raises(ConfigError, match=r"x.json:2:\d+"):
        loads_scenario('{\n  "rho": ,\n}', "x.json")


def test_parse_scenario_file_and_preset(tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"rho": 0.1}))
    assert parse_scenario(path).rho == 0.1
    assert parse_scenario("preset:proposed_lossy_8hop").rng_seed == 3
    with pytest.raises(ConfigError):
        parse_scenario("preset:nope")
    with pytest.raises(ConfigError):
        parse_scenario(tmp_path / "missing.json")


def test_preset_list():
    assert preset_names() == PRESETS


def test_fmt():
    assert fmt(1 / 3) == "0.333333"
    assert fmt(7) == "7"
    assert fmt(True) == "true"
    assert fmt(None) == ""
    assert fmt(math.nan) == "nan"


@pytest.mark.parametrize("quantity, rows", [
    ("utilization", 678 * 2), ("delay-vs-gs", 45 * 2), ("delay-vs-interval", 589 * 2),
    ("throughput", 45 * 4),
])
def test_sweep_row_counts(quantity, rows):
    table = sweep(SweepSpec(quantity))
    assert len(table.rows) == rows
    xs = table.column(table.columns[0])
    assert xs == sorted(xs)


def test_utilization_sweep_values():
    table = sweep(SweepSpec("utilization"))
    by = {(r[0], r[1]): r[2] for r in table.rows}
    assert by[(678.0, "proposed")] == pytest.approx(0.707266, abs=1e-6)
    assert by[(678.0, "legacy")] == pytest.approx(0.412575, abs=1e-6)
    for variant in ("proposed", "legacy"):
        ys = [r[2] for r in table.rows if r[1] == variant]
        assert all(a > b for a, b in zip(ys, ys[1:]))


def test_delay_sweeps_monotone():
    gs = sweep(SweepSpec("delay-vs-gs"))
    for label in ("rho=0", "rho=0.1"):
        ys = [r[2] for r in gs.rows if r[1] == label]
        assert all(a < b for a, b in zip(ys, ys[1:]))
    last = {r[1]: r[2] for r in gs.rows if r[0] == 4900.0}
    assert last["rho=0"] == pytest.approx(61.6716, abs=1e-4)
    assert last["rho=0.1"] == pytest.approx(68.5240, abs=1e-4)
    spacing = sweep(SweepSpec("delay-vs-interval"))
    ys = [r[2] for r in spacing.rows if r[1] == "rho=0"]
    assert all(a > b for a, b in zip(ys, ys[1:]))
    assert spacing.rows[0][3:] == [60.0, 90.0, 120.0]


def test_sweep_rejects_bad_axis():
    with pytest.raises(ConfigError):
        SweepSpec("utilization", axis_max=700)
    with pytest.raises(ConfigError):
        SweepSpec("delay-vs-gs", rhos=(0.5,))
    with pytest.raises(ConfigError):
        SweepSpec("bandwidth")


def test_sweep_provenance_reproduces_table():
    spec = SweepSpec("throughput", rhos=(0.0, 0.05))
    text = sweep(spec).to_csv()
    prov = read_provenance(text)
    assert prov["config_sha256"] == config_hash(spec.to_dict())
    rerun = sweep(SweepSpec.from_dict(json.loads(prov["config"])))
    assert rerun.to_csv() == text


def test_simulate_provenance_reproduces_csv():
    cfg = parse_scenario("preset:proposed_zero_loss_8hop")
    table, _, _ = simulate(cfg, frames=60, seed=9)
    text = table.to_csv()
    prov = read_provenance(text)
    assert prov["seed"] == "9" and prov["kind"] == "simulate"
    again, _, _ = simulate(loads_scenario(prov["config"]))
    assert again.to_csv() == text
    header, rows = read_csv_rows(text)
    assert header[-1] == "end_to_end_s"
    assert {r[-1] for r in rows} == {"16"}


@pytest.fixture(scope="module")
def compared():
    return {name: compare(parse_scenario(f"preset:{name}")) for name in PRESETS}


def _rel(table, quantity):
    return {r[0]: r for r in table.rows}[quantity][4]


@pytest.mark.parametrize("name", ["dense_56_node", "legacy_zero_loss_8hop",
                                  "proposed_zero_loss_8hop"])
def test_zero_loss_presets_match_model_exactly(compared, name):
    table, notes, metrics = compared[name]
    assert all(r[3] == 0 for r in table.rows)
    assert metrics.undelivered_count == 0
    assert not metrics.slot_conflicts


@pytest.mark.parametrize("name", ["proposed_lossy_8hop", "proposed_lossy_single_hop"])
def test_proposed_lossy_presets_exceed_model_by_ack_wait(compared, name):
    table, notes, _ = compared[name]
    assert 0.05 < _rel(table, "mean_delay_s") < 0.15
    assert abs(_rel(table, "hop_service_delay_s")) < 0.02
    assert abs(_rel(table, "mean_attempts_per_hop")) < 0.01
    assert any("1.1" in n for n in notes)


def test_legacy_lossy_preset_matches_model(compared):
    table, _, _ = compared["legacy_lossy_8hop"]
    assert abs(_rel(table, "mean_delay_s")) < 0.02


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_weather(capsys):
    assert run_cli(capsys, "weather", "encode") == (0, "000000000000000000\n", "")
    code, out, _ = run_cli(capsys, "weather", "encode", "--special", "hail,icing")
    assert code == 0 and out.strip()[-2:] == "18"
    code, out, _ = run_cli(capsys, "weather", "decode", out.strip())
    assert json.loads(out)["special"] == "hail,icing"
    code, _, err = run_cli(capsys, "weather", "encode", "--wind-dir", "360")
    assert code == 2 and "wind_dir" in err
    assert run_cli(capsys, "weather", "encode", "--special", "fog")[0] == 2
    assert run_cli(capsys, "weather", "decode", "abc")[0] == 2


def test_cli_analyze(capsys, tmp_path):
    out_file = tmp_path / "u.csv"
    code, _, _ = run_cli(capsys, "analyze", "utilization", "--min", "600", "--max", "678",
                         "--step", "78", "--out", str(out_file))
    assert code == 0
    header, rows = read_csv_rows(out_file.read_text())
    assert header == ["distance_km", "series", "utilization", "throughput_bps"]
    assert rows[-2:] == [["678", "legacy", "0.412575", "18400.6"],
                         ["678", "proposed", "0.707266", "22278.9"]]
    assert run_cli(capsys, "analyze", "delay-vs-gs", "--rho", "0.3")[0] == 2


def test_cli_validate_and_errors(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "validate", "preset:legacy_zero_loss_8hop")
    assert code == 0 and json.loads(out)["variant"] == "legacy"
    bad = tmp_path / "bad.json"
    bad.write_text('{"node_interval_km": 700}')
    code, _, err = run_cli(capsys, "simulate", str(bad))
    assert code == 2 and "line-of-sight" in err
    assert run_cli(capsys, "presets")[1].split() == PRESETS


def test_cli_simulate_and_trace(capsys, tmp_path):
    trace = tmp_path / "t.csv"
    code, out, err = run_cli(capsys, "simulate", "preset:proposed_zero_loss_8hop", "--frames", "9",
                             "--trace", str(trace))
    assert code == 0
    assert "mean end-to-end delay: 16 s" in err
    assert trace.read_text().startswith("frame,slot,sender,receiver,kind,packet,attempt,outcome\n")
    assert read_provenance(out)["kind"] == "simulate"


def test_cli_compare(capsys):
    code, out, _ = run_cli(capsys, "compare", "preset:proposed_zero_loss_8hop", "--frames", "30")
    assert code == 0
    header, rows = read_csv_rows(out)
    assert header == ["quantity", "analytical", "simulated", "abs_delta", "rel_delta"]
    assert rows[0] == ["mean_delay_s", "16", "16", "0", "0"]


def test_cli_capacity_exhausted_is_config_error(capsys, tmp_path):
    path = tmp_path / "crowd.json"
    path.write_text(json.dumps({"chain_length_km": 27000, "node_interval_km": 90}))
    code, _, err = run_cli(capsys, "simulate", str(path))
    assert code == 2 and "reserved-access" in err
