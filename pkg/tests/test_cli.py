import pytest

from polyion.cli import EXPERIMENTS, RunConfig, build_parser, main, run, validate
from polyion.core.io import read_csv, read_json, read_jsonl
from polyion.data import species_path, trap_path
from polyion.molspec import Partition, read_grotrian_json
from polyion.protocol import LOG_KEYS

NOISELESS = ("thermometer.false_positive=0", "thermometer.false_negative=0")


def config(tmp_path, experiment, *overrides, seed=7, species="generic76"):
    return RunConfig(species_path(species), trap_path("sr88-1050nm"), experiment, seed,
                     out=tmp_path / "out", overrides=tuple(overrides))


def test_shipped_files_validate(tmp_path):
    for species in ("generic76", "propanediol-like", "co-like"):
        assert validate(config(tmp_path, "levels", species=species)) == []


def test_negative_wavelength_is_one_diagnostic(tmp_path):
    problems = validate(config(tmp_path, "levels", "lattice.wavelength_nm=-1050"))
    assert len(problems) == 1
    assert "lattice.wavelength_nm" in problems[0]


def test_polarization_along_the_beam_is_rejected(tmp_path):
    problems = validate(config(tmp_path, "levels", "lattice.polarization=[1,1,1]"))
    assert problems == ["lattice.polarization: must be orthogonal to lattice.direction"]


def test_every_problem_is_reported(tmp_path):
    cfg = RunConfig(species_path("generic76"), tmp_path / "missing.json", "levitate", -1,
                    overrides=("species.B_GHz=-3", "no-equals-sign"))
    problems = validate(cfg)
    assert any(p.startswith("experiment:") for p in problems)
    assert any(p.startswith("seed:") for p in problems)
    assert any("file not found" in p for p in problems)
    assert any("no-equals-sign" in p for p in problems)


def test_species_overrides_reach_the_species_file(tmp_path):
    problems = validate(config(tmp_path, "levels", "species.B_GHz=-3"))
    assert any(p.startswith("species.B_GHz") for p in problems)


def test_invalid_run_writes_nothing(tmp_path):
    assert run(config(tmp_path, "levitate")) == 2
    assert not (tmp_path / "out").exists()


def test_unknown_state_label_is_a_config_error(tmp_path):
    cfg = config(tmp_path, "potential", 'heating.flip_states=["9_0_9_0","0_0_0_0"]')
    assert validate(cfg) == []
    assert run(cfg) == 2


def test_levels(tmp_path):
    assert run(config(tmp_path, "levels")) == 0
    document = read_json(tmp_path / "out" / "levels.json")
    assert document["provenance"]["seed"] == 7
    assert document["n_states"] == 64
    assert document["n_levels"] == 8
    assert document["levels"][0]["energy_GHz"] == pytest.approx(0.0, abs=1e-9)


def test_transitions(tmp_path):
    assert run(config(tmp_path, "transitions", species="propanediol-like")) == 0
    out = tmp_path / "out"
    for name in ("grotrian.json", "levels.csv", "transitions.csv"):
        assert (out / name).is_file()
    reach = read_json(out / "reachability.json")
    assert reach["all_reached"]
    assert reach["reach_GHz"] == pytest.approx(20.0)
    diagram = read_grotrian_json(out / "grotrian.json")
    assert diagram.partition(Partition.Below) and diagram.partition(Partition.Above)


def test_alpha(tmp_path):
    assert run(config(tmp_path, "alpha")) == 0
    derived = read_json(tmp_path / "out" / "derived.json")
    assert derived["U0_over_h_MHz"] == pytest.approx(7.24, rel=1e-2)
    assert derived["rabi_over_2pi_MHz"] == pytest.approx(10.068, rel=1e-3)
    assert derived["anisotropy"] == pytest.approx(0.5, rel=1e-3)
    _, header, rows = read_csv(tmp_path / "out" / "alpha.csv")
    assert header[0] == "label"
    assert len(rows) == 64


def test_potential(tmp_path):
    assert run(config(tmp_path, "potential")) == 0
    names = sorted(path.name for path in (tmp_path / "out").iterdir())
    assert names == ["potential_0_0_0_0.csv", "potential_1_0_1_0.csv", "potential_2_0_2_0.csv"]


def test_readout(tmp_path):
    assert run(config(tmp_path, "readout", "protocol.runs=30", *NOISELESS)) == 0
    summary = read_json(tmp_path / "out" / "readout.json")
    assert summary["runs_inside"] + summary["runs_outside"] == 30
    assert summary["heated_inside"] == summary["runs_inside"]
    assert summary["heated_outside"] == 0
    assert len(read_jsonl(tmp_path / "out" / "readout.jsonl")) == 30


def test_search(tmp_path):
    assert run(config(tmp_path, "search", "protocol.runs=20", *NOISELESS)) == 0
    summary = read_json(tmp_path / "out" / "search.json")
    assert summary["runs"] == 20
    assert summary["step_budget"] == 18
    assert summary["failures"] == 0
    assert summary["correct"] == 20
    assert summary["max_steps"] <= 6
    lines = read_jsonl(tmp_path / "out" / "search.jsonl")
    assert set(lines[0]) == set(LOG_KEYS)
    assert len({line["run_id"] for line in lines}) == 20


def test_prepare(tmp_path):
    assert run(config(tmp_path, "prepare", "protocol.runs=20", *NOISELESS)) == 0
    summary = read_json(tmp_path / "out" / "prepare.json")
    assert summary["manifold"] == [0, 1, 2, 3]
    assert summary["target"] not in summary["manifold"]
    assert summary["successes"] == 20
    assert summary["expected_rounds"] == 4.0


def test_chiral(tmp_path):
    assert run(config(tmp_path, "chiral")) == 0
    summary = read_json(tmp_path / "out" / "chiral.json")
    assert summary["contrast"] >= 0.99
    assert set(summary["phases_rad"]) == {"AB", "AC", "CB"}


def test_scan(tmp_path):
    assert run(config(tmp_path, "scan", "scan.points=21")) == 0
    _, header, rows = read_csv(tmp_path / "out" / "scan.csv")
    assert header == ["detuning_kHz", "transfer_prob"]
    assert len(rows) == 21
    assert float(rows[10][1]) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("experiment", ["levels", "search"])
def test_reruns_are_byte_identical(tmp_path, experiment):
    first = RunConfig(species_path("generic76"), trap_path("sr88-1050nm"), experiment, 11,
                      out=tmp_path / "a", overrides=("protocol.runs=5",))
    second = RunConfig(species_path("generic76"), trap_path("sr88-1050nm"), experiment, 11,
                       out=tmp_path / "b", overrides=("protocol.runs=5",))
    assert run(first) == 0 and run(second) == 0
    files = sorted(path.name for path in (tmp_path / "a").iterdir())
    assert files
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_parser_lists_experiments():
    args = build_parser().parse_args(["--species", "s.json", "--trap", "t.json",
                                      "--experiment", "levels", "--seed", "3",
                                      "--set", "protocol.runs=2", "--set", "scan.points=5"])
    assert args.seed == 3
    assert args.overrides == ["protocol.runs=2", "scan.points=5"]
    assert "levels" in EXPERIMENTS


def test_main(tmp_path):
    argv = ["--species", str(species_path("generic76")), "--trap", str(trap_path("sr88-1050nm")),
            "--experiment", "levels", "--seed", "0", "--out", str(tmp_path)]
    assert main(argv) == 0
    assert (tmp_path / "levels.json").is_file()
    assert main(argv[:-4] + ["--seed", "0", "--out", str(tmp_path), "--set",
                             "lattice.wavelength_nm=-1"]) == 2
