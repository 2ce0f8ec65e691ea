"""
Runner Module

This module turns a RunConfig into artifacts on disk. Each experiment reads
the species and trap/lattice files, calls into the library and writes JSON
or CSV output carrying a provenance block. Artifacts hold no timestamps, so
the same files and seed reproduce them byte for byte.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from ..core.config import (TrapLatticeConfig, apply_overrides, load_document, parse_override,
                           setup_from_document, setup_problems, species_from_document,
                           species_problems)
from ..core.errors import ConfigError, DomainError, PolyionError, SearchFailure
from ..core.io import config_hash, provenance, write_csv, write_json
from ..molspec.grotrian import export_grotrian, write_grotrian_csv, write_grotrian_json
from ..molspec.levels import LevelTable, RotationalState, j_max_for_cutoff, solve_levels
from ..molspec.species import MolecularSpecies
from ..molspec.transitions import allowed_transitions, reachability
from ..optics.lattice import peak_intensity, rayleigh_length
from ..optics.polarizability import alpha_eff, anisotropy
from ..optics.potential import (lattice_secular_frequency, max_acceleration, potential_profile,
                                potential_table, write_potential_csv)
from ..protocol.measurement import DynamicsReadout, measure_subspace
from ..protocol.preparation import bridge_state, prepare_state
from ..protocol.query import SubspaceQuery, validate_drive_plan
from ..protocol.register import MoleculeRegister
from ..protocol.runlog import write_run_log
from ..protocol.search import binary_search_state, step_budget
from ..protocol.spectroscopy import ScanPulse, spectroscopy_scan
from ..pulses.chiral import optimize_chiral_contrast
from ..pulses.drive import rabi_from_voltage
from ..trapdyn.crystal import normal_modes
from ..trapdyn.flips import FlipProcess
from ..trapdyn.heating import heating_rate, telegraph_heating_estimate
from ..trapdyn.integrator import LatticeField

logger = logging.getLogger(__name__)

EXPERIMENTS = ("levels", "transitions", "alpha", "potential", "heat", "readout", "search",
               "prepare", "chiral", "scan")
SEED_LIMIT = 2 ** 64

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


@dataclass(frozen=True)
class RunConfig:
    """
    One command-line invocation

    Attributes:
        species (Path): Species JSON file
        trap (Path): Trap/lattice JSON file
        experiment (str): One of EXPERIMENTS
        seed (int): Master seed in [0, 2**64)
        out (Path): Output directory
        overrides (Tuple[str, ...]): 'section.key=value' settings; the 'species.'
            prefix targets the species file, every other key the trap file
    """

    species: Path
    trap: Path
    experiment: str
    seed: int
    out: Path = Path("out")
    overrides: Tuple[str, ...] = field(default_factory=tuple)


@dataclass
class Context:
    """Everything an experiment needs, built once per run"""

    config: RunConfig
    species: MolecularSpecies
    setup: TrapLatticeConfig
    documents: Dict[str, Any]

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def out(self) -> Path:
        return self.config.out

    def provenance(self) -> Dict[str, Any]:
        return provenance(self.documents, self.seed)

    def table(self) -> LevelTable:
        cutoff = self.setup.levels.cutoff
        return solve_levels(self.species, j_max_for_cutoff(self.species, cutoff), cutoff)

    def write(self, name: str, document: Dict[str, Any]) -> Path:
        return write_json(self.out / name, {"provenance": self.provenance(), **document})

    def state(self, table: LevelTable, label: str) -> RotationalState:
        try:
            return table.by_label(label)
        except DomainError:
            raise ConfigError(f"state {label!r} is not in the {self.species.name} level table "
                              f"below {self.setup.levels.cutoff_K:g} K") from None

    def state_id(self, table: LevelTable, label: str) -> int:
        return self.state(table, label).id


def _documents(config: RunConfig, problems: List[str]) -> Optional[Dict[str, Any]]:
    documents = {}
    for key, path in (("species", config.species), ("trap", config.trap)):
        try:
            documents[key] = load_document(path)
        except ConfigError as exc:
            problems.append(str(exc))
    overrides = {"species": [], "trap": []}
    for text in config.overrides:
        try:
            path, value = parse_override(text)
        except ConfigError as exc:
            problems.append(str(exc))
            continue
        if path[0] == "species":
            if len(path) < 2:
                problems.append(f"override {text!r} names no species key")
                continue
            overrides["species"].append((path[1:], value))
        else:
            overrides["trap"].append((path, value))
    if len(documents) < 2:
        return None
    return {key: apply_overrides(doc, overrides[key]) for key, doc in documents.items()}


def validate(config: RunConfig) -> List[str]:
    """
    Every problem with a run configuration

    Nothing is raised and nothing is written; an empty list means the run
    can start.
    """
    problems: List[str] = []
    if config.experiment not in EXPERIMENTS:
        problems.append(f"experiment: unknown {config.experiment!r}, expected one of "
                        f"{', '.join(EXPERIMENTS)}")
    if isinstance(config.seed, bool) or not isinstance(config.seed, int) \
            or not 0 <= config.seed < SEED_LIMIT:
        problems.append(f"seed: expected an integer in [0, 2**64), got {config.seed!r}")
    documents = _documents(config, problems)
    if documents is None:
        return problems
    species_issues = species_problems(documents["species"])
    setup_issues = setup_problems(documents["trap"])
    problems.extend(species_issues)
    problems.extend(setup_issues)
    if not species_issues:
        try:
            species_from_document(documents["species"])
        except ConfigError as exc:
            problems.append(f"species: {exc}")
    if not setup_issues:
        try:
            setup_from_document(documents["trap"])
        except ConfigError as exc:
            problems.append(f"trap: {exc}")
    return problems


# experiments

def run_levels(ctx: Context) -> List[Path]:
    table = ctx.table()
    levels = [{"id": s.id, "J": s.J, "Ka": s.Ka, "Kc": s.Kc, "m": s.m, "energy_GHz": s.energy / 1e9}
              for s in table]
    summary = {"species": ctx.species.name, "cutoff_K": ctx.setup.levels.cutoff_K,
               "n_levels": len(table.manifolds), "n_states": len(table), "levels": levels}
    return [ctx.write("levels.json", summary)]


def run_transitions(ctx: Context) -> List[Path]:
    table = ctx.table()
    f_max = ctx.setup.levels.f_max
    catalog = allowed_transitions(table, ctx.species, 0.0, f_max)
    diagram = export_grotrian(table, catalog, ctx.setup.levels.split)
    meta = ctx.provenance()
    paths = [write_grotrian_json(diagram, ctx.out / "grotrian.json", meta)]
    paths.extend(write_grotrian_csv(diagram, ctx.out / "levels.csv", ctx.out / "transitions.csv",
                                    meta))
    split = ctx.setup.levels.split
    report = reachability(table, catalog, split)
    paths.append(ctx.write("reachability.json", {
        "f_max_GHz": f_max / 1e9,
        "reach_GHz": split / 1e9,
        "n_transitions": len(catalog),
        "all_reached": report.all_reached,
        "reached": [list(level) for level in report.reached],
        "unreached": [list(level) for level in report.unreached],
    }))
    return paths


def run_alpha(ctx: Context) -> List[Path]:
    table = ctx.table()
    species, lattice = ctx.species, ctx.setup.lattice
    rows = []
    for state in table:
        potential = potential_profile(state, species, lattice)
        rows.append([state.label, alpha_eff(state, species), potential.U0_hz / 1e6])
    meta = ctx.provenance()
    paths = [write_csv(ctx.out / "alpha.csv", ("label", "alpha_eff_Cm2_per_V", "U0_over_h_MHz"),
                       rows, meta)]
    ground = potential_profile(table[0], species, lattice)
    mw = ctx.setup.microwave
    paths.append(ctx.write("derived.json", {
        "peak_intensity_W_per_m2": peak_intensity(lattice),
        "rayleigh_length_m": rayleigh_length(lattice),
        "anisotropy": anisotropy(species),
        "U0_over_h_MHz": ground.U0_hz / 1e6,
        "lattice_secular_rad_per_s": lattice_secular_frequency(ground, species.mass),
        "max_acceleration_m_per_s2": max_acceleration(ground, species.mass),
        "rabi_over_2pi_MHz": rabi_from_voltage(mw.voltage, float(np.linalg.norm(species.dipole)),
                                               mw.electrode_spacing) / (2 * np.pi) / 1e6,
    }))
    return paths


def run_potential(ctx: Context) -> List[Path]:
    table = ctx.table()
    heating = ctx.setup.heating
    lattice = ctx.setup.lattice
    labels = list(heating.flip_states) + [heating.held_state]
    states = [ctx.state(table, label) for label in labels]
    z = np.linspace(0.0, 2 * lattice.wavelength, 201)
    samples = potential_table(states, ctx.species, lattice, z)
    return [write_potential_csv(ctx.out / f"potential_{label}.csv", data, ctx.provenance())
            for label, data in samples.items()]


def _lattice_field(ctx: Context, table: LevelTable, labels) -> LatticeField:
    lattice = ctx.setup.lattice
    potentials = {}
    for label in labels:
        state = ctx.state(table, label)
        potentials[state.id] = potential_profile(state, ctx.species, lattice)
    return LatticeField(potentials, tuple(lattice.direction))


def run_heat(ctx: Context) -> List[Path]:
    table = ctx.table()
    heating = ctx.setup.heating
    trap = ctx.setup.trap_for(ctx.species)
    field = _lattice_field(ctx, table, heating.flip_states)
    ids = tuple(ctx.state_id(table, label) for label in heating.flip_states)
    flips = FlipProcess(ctx.setup.microwave.flip_rate, ids)
    result = heating_rate(trap, field, flips, heating.n_traj, heating.t_end, ctx.seed,
                          dt=heating.dt, temperature=heating.temperature, settle=heating.settle)
    estimate = telegraph_heating_estimate(trap, field, flips, normal_modes(trap))
    return [ctx.write("heating.json", {
        **result.summary(),
        "r_squared": result.r_squared,
        "telegraph_estimate_K_per_s": estimate,
        "t_end_ms": heating.t_end * 1e3,
    })]


def _registers(ctx: Context, table: LevelTable) -> List[MoleculeRegister]:
    protocol = ctx.setup.protocol
    children = np.random.SeedSequence(ctx.seed).spawn(protocol.runs)
    return [MoleculeRegister.thermal(table, protocol.rotational_temperature, seed=child,
                                     n_max=protocol.n_candidates) for child in children]


def _readout(ctx: Context, table: LevelTable) -> Optional[DynamicsReadout]:
    if ctx.setup.protocol.mode != "full":
        return None
    heating = ctx.setup.heating
    return DynamicsReadout(table, ctx.setup.trap_for(ctx.species), ctx.setup.lattice,
                           flip_rate=ctx.setup.microwave.flip_rate, t_end=heating.t_end,
                           dt=heating.dt, temperature=heating.temperature, seed=ctx.seed)


def _run_id(ctx: Context, index: int) -> str:
    return f"{config_hash(ctx.documents)}-{ctx.seed}-{index}"


def run_readout(ctx: Context) -> List[Path]:
    table = ctx.table()
    protocol = ctx.setup.protocol
    query = SubspaceQuery.chain(ctx.state_id(table, label) for label in ctx.setup.heating.flip_states)
    validate_drive_plan(query, table, ctx.species)
    readout = _readout(ctx, table)
    runs, hits = [], {"inside": [0, 0], "outside": [0, 0]}
    for index, register in enumerate(_registers(ctx, table)):
        where = "inside" if register.truth in query else "outside"
        record = measure_subspace(register, query, ctx.setup.thermometer, protocol.mode,
                                  protocol.repetitions, readout)
        hits[where][0] += bool(record.outcome)
        hits[where][1] += 1
        runs.append((_run_id(ctx, index), [record]))
    return [write_run_log(ctx.out / "readout.jsonl", runs),
            ctx.write("readout.json", {
                "query_ids": query.ids,
                "heated_inside": hits["inside"][0], "runs_inside": hits["inside"][1],
                "heated_outside": hits["outside"][0], "runs_outside": hits["outside"][1],
            })]


def run_search(ctx: Context) -> List[Path]:
    table = ctx.table()
    protocol = ctx.setup.protocol
    readout = _readout(ctx, table)
    runs, steps, correct, failures = [], [], 0, 0
    for index, register in enumerate(_registers(ctx, table)):
        run_id = _run_id(ctx, index)
        try:
            result = binary_search_state(register, table, ctx.setup.thermometer,
                                         mode=protocol.mode, repetitions=protocol.repetitions,
                                         readout=readout)
        except SearchFailure as exc:
            failures += 1
            runs.append((run_id, exc.records))
            continue
        runs.append((run_id, result.records))
        steps.append(result.steps)
        correct += result.state == register.truth
    return [write_run_log(ctx.out / "search.jsonl", runs),
            ctx.write("search.json", {
                "runs": protocol.runs,
                "n_candidates": protocol.n_candidates,
                "step_budget": step_budget(protocol.n_candidates),
                "correct": correct,
                "failures": failures,
                "mean_steps": float(np.mean(steps)) if steps else None,
                "max_steps": max(steps) if steps else None,
            })]


def preparation_target(table: LevelTable, manifold: List[int]) -> int:
    """First state outside the manifold reachable from it by one allowed transition"""
    for state in table:
        if state.id in manifold:
            continue
        try:
            bridge_state(table, manifold, state.id)
        except ConfigError:
            continue
        return state.id
    raise ConfigError("no state outside the manifold couples to it")


def run_prepare(ctx: Context) -> List[Path]:
    table = ctx.table()
    protocol = ctx.setup.protocol
    manifold = table.ids[: protocol.manifold_size]
    target = preparation_target(table, manifold)
    readout = _readout(ctx, table)
    runs, rounds, successes = [], [], 0
    for index, child in enumerate(np.random.SeedSequence(ctx.seed).spawn(protocol.runs)):
        register = MoleculeRegister.uniform(manifold, seed=child)
        result = prepare_state(register, table, ctx.setup.thermometer, target, manifold,
                               protocol.max_rounds, protocol.mode, protocol.repetitions, readout)
        runs.append((_run_id(ctx, index), result.records))
        rounds.append(result.rounds)
        successes += result.success
    return [write_run_log(ctx.out / "prepare.jsonl", runs),
            ctx.write("prepare.json", {
                "manifold": manifold,
                "target": target,
                "runs": protocol.runs,
                "successes": successes,
                "mean_rounds": float(np.mean(rounds)),
                "expected_rounds": float(len(manifold)),
            })]


def run_chiral(ctx: Context) -> List[Path]:
    result = optimize_chiral_contrast(ctx.setup.chiral_rabi)
    return [ctx.write("chiral.json", {
        **result.summary(),
        "phases_rad": result.phases,
        "duration_us": result.duration * 1e6,
    })]


def run_scan(ctx: Context) -> List[Path]:
    table = ctx.table()
    scan = ctx.setup.scan
    source, destination = (ctx.state_id(table, label) for label in ctx.setup.heating.flip_states)
    register = MoleculeRegister(source, {source: 1.0}, seed=ctx.seed)
    pulse = ScanPulse(scan.sequence, scan.duration, free_time=scan.free_time)
    detunings = np.linspace(-scan.span / 2, scan.span / 2, scan.points)
    helper = next(i for i in table.ids if i not in (source, destination))
    result = spectroscopy_scan(register, (source, destination), ctx.setup.thermometer, pulse,
                               detunings, shots=scan.shots, helper=helper)
    return [result.write_csv(ctx.out / "scan.csv", ctx.provenance())]


RUNNERS: Dict[str, Callable[[Context], List[Path]]] = {
    "levels": run_levels,
    "transitions": run_transitions,
    "alpha": run_alpha,
    "potential": run_potential,
    "heat": run_heat,
    "readout": run_readout,
    "search": run_search,
    "prepare": run_prepare,
    "chiral": run_chiral,
    "scan": run_scan,
}


def run(config: RunConfig) -> int:
    """
    Validate, dispatch and write artifacts

    Returns:
        0 on success, 2 for configuration problems, 3 for numeric or other
        library failures
    """
    problems = validate(config)
    if problems:
        for problem in problems:
            logger.error("%s", problem)
        return EXIT_CONFIG
    documents = _documents(config, [])
    ctx = Context(config, species_from_document(documents["species"]),
                  setup_from_document(documents["trap"]), documents)
    try:
        paths = RUNNERS[config.experiment](ctx)
    except ConfigError as exc:
        logger.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except PolyionError as exc:
        logger.error("%s failed: %s", config.experiment, exc)
        return EXIT_NUMERIC
    for path in paths:
        logger.info("wrote %s", path)
    return EXIT_OK
