"""Command-line entry points: sample, learn, experiment, verify, separation.

Exit codes: 0 on success, 1 on verification failure, 2 on configuration
errors. Flags override values read from an optional key=value config file.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Dict, Optional

import click

from . import harness, oracles, plots
from .gf2 import BitString
from .harness import ConfigurationError, ExperimentConfig
from .oracles import ParityConcept


def _fail_config(message: str):
    click.echo(f"configuration error: {message}", err=True)
    sys.exit(2)


def _parse_concept(n: int, concept_text: Optional[str], weight: Optional[int], rng):
    if concept_text is not None:
        bits = BitString.from_text(concept_text)
        if bits.n != n:
            _fail_config(f"concept length {bits.n} does not match n={n}")
        return ParityConcept(bits)
    if weight is not None:
        return oracles.random_concept_of_weight(n, weight, rng)
    return oracles.random_concept(n, rng)


def _noise_from_flags(noise: str, eta: float):
    try:
        return harness.parse_noise(noise, eta)
    except (ConfigurationError, ValueError) as exc:
        _fail_config(str(exc))


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a key=value config file; '#' starts a comment."""
    values: Dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


@click.group()
def main():
    """Parity-learning simulation lab: noisy quantum and classical oracles."""


@main.command()
@click.option("--n", type=int, required=True, help="Input register width.")
@click.option(
    "--noise",
    type=click.Choice(["noiseless", "classification", "depolarizing"]),
    default="noiseless",
)
@click.option("--eta", type=float, default=0.0, help="Noise rate in [0, 1/2).")
@click.option("--kind", type=click.Choice(["quantum", "classical"]), default="quantum")
@click.option("--concept", "concept_text", default=None, help="Fixed hidden bitstring.")
@click.option("--weight", type=int, default=None, help="Random concept of this weight.")
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), default=None, help="CSV file (default stdout).")
def sample(n, noise, eta, kind, concept_text, weight, count, seed, output):
    """Dump raw oracle outputs as CSV rows m_or_x,b_or_y."""
    model = _noise_from_flags(noise, eta)
    rng = oracles.make_stream(seed)
    try:
        concept = _parse_concept(n, concept_text, weight, rng)
    except ValueError as exc:
        _fail_config(str(exc))
    lines = ["m_or_x,b_or_y"]
    if kind == "quantum":
        m_bits, b = oracles.sample_quantum_batch(concept, model, count, rng)
        rows = zip(m_bits, b)
    else:
        m_bits, b = oracles.sample_classical_batch(concept, model, count, rng)
        rows = zip(m_bits, b)
    for bits, result in rows:
        lines.append(f"{''.join(str(int(v)) for v in bits)},{int(result)}")
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--n", type=int, required=True)
@click.option(
    "--learner", type=click.Choice(list(harness.LEARNER_NAMES)), required=True
)
@click.option(
    "--noise",
    type=click.Choice(["noiseless", "classification", "depolarizing"]),
    default="noiseless",
)
@click.option("--eta", type=float, default=0.0)
@click.option("--delta", type=float, default=0.01, show_default=True)
@click.option("--concept", "concept_text", default=None)
@click.option("--weight", type=int, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--nonzero-k", type=int, default=20, show_default=True)
@click.option("--map-examples", type=int, default=200, show_default=True)
@click.option("--block-count", type=int, default=2, show_default=True)
@click.option("--sample-budget", type=int, default=1 << 14, show_default=True)
def learn(
    n, learner, noise, eta, delta, concept_text, weight, seed,
    nonzero_k, map_examples, block_count, sample_budget,
):
    """Run one learner against one planted concept and print the report."""
    model = _noise_from_flags(noise, eta)
    try:
        config = ExperimentConfig(
            n=n,
            noise=model,
            learner=learner,
            delta=delta,
            trials=1,
            seed=seed,
            fixed_concept=BitString.from_text(concept_text) if concept_text else None,
            concept_weight=weight,
            nonzero_k=nonzero_k,
            map_examples=map_examples,
            block_count=block_count,
            sample_budget=sample_budget,
        )
        records, _ = harness.run_experiment(config)
    except (ConfigurationError, ValueError) as exc:
        _fail_config(str(exc))
    record = records[0]
    click.echo(f"learner:      {record.learner}")
    click.echo(f"n:            {record.n}")
    click.echo(f"noise:        {record.noise_model} (eta={record.eta})")
    click.echo(f"queries_used: {record.queries_used}")
    click.echo(f"retained:     {record.retained}")
    click.echo(f"success:      {record.success}")
    click.echo(f"wall_time_ms: {record.wall_time_ms}")


_CONFIG_KEYS = {
    "n": int,
    "noise": str,
    "eta": float,
    "learner": str,
    "delta": float,
    "trials": int,
    "seed": int,
    "concept": str,
    "weight": int,
    "nonzero_k": int,
    "map_examples": int,
    "block_count": int,
    "sample_budget": int,
}


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="key=value config file; flags override file values.")
@click.option("--n", type=int, default=None)
@click.option("--learner", type=click.Choice(list(harness.LEARNER_NAMES)), default=None)
@click.option(
    "--noise",
    type=click.Choice(["noiseless", "classification", "depolarizing"]),
    default=None,
)
@click.option("--eta", type=float, default=None)
@click.option("--delta", type=float, default=None)
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--concept", "concept_text", default=None)
@click.option("--weight", type=int, default=None)
@click.option("--nonzero-k", type=int, default=None)
@click.option("--map-examples", type=int, default=None)
@click.option("--block-count", type=int, default=None)
@click.option("--sample-budget", type=int, default=None)
@click.option("--output", type=click.Path(), default=None, help="CSV file (default stdout).")
@click.option("--timing/--no-timing", default=False, show_default=True,
              help="Write measured per-trial wall time; off keeps output "
                   "byte-reproducible.")
def experiment(config_path, output, timing, **flags):
    """Run a batch of seeded trials and emit the trial CSV."""
    values: Dict[str, object] = {
        "noise": "noiseless", "eta": 0.0, "delta": 0.01, "trials": 100, "seed": 0,
        "concept": None, "weight": None, "nonzero_k": 20, "map_examples": 200,
        "block_count": 2, "sample_budget": 1 << 14, "n": None, "learner": None,
    }
    if config_path:
        try:
            for key, raw in read_config_file(config_path).items():
                if key not in _CONFIG_KEYS:
                    raise ConfigurationError(f"unknown config key {key!r}")
                values[key] = _CONFIG_KEYS[key](raw)
        except (ConfigurationError, ValueError) as exc:
            _fail_config(str(exc))
    flag_map = dict(flags)
    flag_map["concept"] = flag_map.pop("concept_text")
    for key, value in flag_map.items():
        if value is not None:
            values[key] = value
    if values["n"] is None or values["learner"] is None:
        _fail_config("--n and --learner are required (by flag or config file)")
    model = _noise_from_flags(str(values["noise"]), float(values["eta"]))
    try:
        config = ExperimentConfig(
            n=int(values["n"]),
            noise=model,
            learner=str(values["learner"]),
            delta=float(values["delta"]),
            trials=int(values["trials"]),
            seed=int(values["seed"]),
            fixed_concept=(
                BitString.from_text(str(values["concept"])) if values["concept"] else None
            ),
            concept_weight=values["weight"],
            nonzero_k=int(values["nonzero_k"]),
            map_examples=int(values["map_examples"]),
            block_count=int(values["block_count"]),
            sample_budget=int(values["sample_budget"]),
        )
        records, summary = harness.run_experiment(config)
    except (ConfigurationError, ValueError) as exc:
        _fail_config(str(exc))
    text = harness.records_to_csv(records, include_timing=timing)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    click.echo(
        f"success rate {summary.success_rate:.4f} "
        f"(95% CI [{summary.ci_low:.4f}, {summary.ci_high:.4f}]), "
        f"mean queries {summary.mean_queries:.1f}, "
        f"mean wall time {summary.mean_wall_time_ms:.1f} ms",
        err=True,
    )


@main.command()
@click.option(
    "--suite",
    type=click.Choice(["distributions", "bounds", "solvers", "all"]),
    default="all",
    show_default=True,
)
@click.option("--seed", type=int, default=20140718, show_default=True)
def verify(suite, seed):
    """Run the cross-module statistical and algebraic verification suites."""
    report = harness.verify(suite, seed)
    for line in report.lines():
        click.echo(line)
    if not report.passed:
        sys.exit(1)


@main.command()
@click.option("--n-list", default="16,32,64,128", show_default=True,
              help="Comma-separated input widths.")
@click.option("--eta", type=float, default=0.2, show_default=True)
@click.option("--delta", type=float, default=0.01, show_default=True)
@click.option("--trials", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", type=click.Path(), required=True, help="Separation CSV path.")
@click.option("--figure/--no-figure", default=True, show_default=True,
              help="Render a comparison figure next to the CSV.")
def separation(n_list, eta, delta, trials, seed, output, figure):
    """Quantum-vs-classical query comparison CSV (plus figure)."""
    try:
        widths = [int(part) for part in n_list.split(",") if part.strip()]
        if not widths:
            raise ValueError("empty n list")
        rows = harness.separation_report(widths, eta, delta, trials, seed)
    except (ConfigurationError, ValueError) as exc:
        _fail_config(str(exc))
    Path(output).write_text(harness.separation_to_csv(rows))
    click.echo(f"wrote {output}", err=True)
    if figure:
        fig_path = str(Path(output).with_suffix(".png"))
        plots.plot_separation(rows, fig_path)
        click.echo(f"wrote {fig_path}", err=True)


if __name__ == "__main__":
    main()
