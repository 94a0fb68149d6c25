"""Seeded experiment runner, verification suites, and CSV reporting.

Every experiment is determined by (config, seed): the trial streams are
children of a single SeedSequence, the concept planting and all oracle draws
come from the trial's own stream, and output rows are ordered by trial index.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import binomtest

from . import bounds, learners, oracles, statevector
from .gf2 import BitString
from .oracles import (
    Classification,
    ClassicalExample,
    ClassicalOracle,
    Depolarizing,
    MarginalDistribution,
    NoiseModel,
    Noiseless,
    OutcomeDistribution,
    ParityConcept,
    QuantumOracle,
)

LEARNER_NAMES = (
    "noiseless_classical",
    "quantum_nonzero",
    "quantum_majority",
    "lpn_bruteforce",
    "lpn_bkw",
)

CSV_COLUMNS = (
    "trial_index",
    "n",
    "noise_model",
    "eta",
    "learner",
    "queries_used",
    "retained",
    "success",
    "wall_time_ms",
    "seed",
)


class ConfigurationError(ValueError):
    """Invalid experiment configuration (bad learner/noise pairing etc.)."""


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    noise: NoiseModel
    learner: str
    delta: float = 0.01
    trials: int = 100
    seed: int = 0
    fixed_concept: Optional[BitString] = None
    concept_weight: Optional[int] = None
    # learner-specific knobs
    nonzero_k: int = 20
    map_examples: int = 200
    block_count: int = 2
    sample_budget: int = 1 << 14

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.n < 1:
            raise ConfigurationError("n must be >= 1")
        if self.learner not in LEARNER_NAMES:
            raise ConfigurationError(f"unknown learner {self.learner!r}")
        if self.fixed_concept is not None and self.fixed_concept.n != self.n:
            raise ConfigurationError("fixed_concept length must equal n")
        _check_pairing(self.learner, self.noise)


def _check_pairing(learner: str, noise: NoiseModel) -> None:
    if learner == "noiseless_classical" and not isinstance(noise, Noiseless):
        raise ConfigurationError("noiseless_classical requires the noiseless oracle")
    if learner == "quantum_nonzero" and isinstance(noise, Depolarizing):
        raise ConfigurationError(
            "quantum_nonzero's guarantee holds only for noiseless or "
            "classification noise"
        )
    if learner == "quantum_majority" and not isinstance(noise, Depolarizing):
        raise ConfigurationError("quantum_majority requires depolarizing noise")


def noise_label(noise: NoiseModel) -> str:
    return type(noise).__name__.lower()


def noise_eta(noise: NoiseModel) -> float:
    return getattr(noise, "eta", 0.0)


def parse_noise(name: str, eta: float) -> NoiseModel:
    name = name.lower()
    if name == "noiseless":
        return Noiseless()
    if name == "classification":
        return Classification(eta)
    if name == "depolarizing":
        return Depolarizing(eta)
    raise ConfigurationError(f"unknown noise model {name!r}")


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    n: int
    noise_model: str
    eta: float
    learner: str
    queries_used: int
    retained: int
    success: bool
    wall_time_ms: int
    seed: int


@dataclass(frozen=True)
class ExperimentSummary:
    trials: int
    successes: int
    success_rate: float
    ci_low: float
    ci_high: float
    mean_queries: float
    mean_wall_time_ms: float


def _plant_concept(config: ExperimentConfig, rng) -> ParityConcept:
    if config.fixed_concept is not None:
        return ParityConcept(config.fixed_concept)
    if config.concept_weight is not None:
        return oracles.random_concept_of_weight(config.n, config.concept_weight, rng)
    return oracles.random_concept(config.n, rng)


def _run_learner(
    config: ExperimentConfig, concept: ParityConcept, rng
) -> learners.LearnerReport:
    noise = config.noise
    if config.learner == "noiseless_classical":
        oracle = ClassicalOracle(concept, noise)
        return learners.learn_noiseless_classical(oracle, config.n, config.delta, rng)
    if config.learner == "quantum_nonzero":
        oracle = QuantumOracle(concept, noise)
        return learners.learn_quantum_nonzero_report(oracle, config.nonzero_k, rng)
    if config.learner == "quantum_majority":
        oracle = QuantumOracle(concept, noise)
        return learners.learn_quantum_majority(
            oracle, config.n, noise.eta, config.delta, rng
        )
    eta_prime = _label_error_rate(concept, noise)
    oracle = ClassicalOracle(concept, noise)
    if config.learner == "lpn_bruteforce":
        x_bits, y = oracle.sample_batch(config.map_examples, rng)
        examples = [
            ClassicalExample(BitString.from_array(x_bits[i]), int(y[i]))
            for i in range(config.map_examples)
        ]
        a_hat = learners.learn_lpn_bruteforce(examples, eta_prime)
        return learners.LearnerReport(a_hat, config.map_examples, config.map_examples, True)
    # lpn_bkw
    result = learners.learn_lpn_bkw(
        oracle, config.n, eta_prime, config.block_count, config.sample_budget, rng
    )
    if isinstance(result, learners.BkwFailure):
        return learners.LearnerReport(
            BitString.zeros(config.n), config.sample_budget, 0, False
        )
    return learners.LearnerReport(result, config.sample_budget, config.sample_budget, True)


def _label_error_rate(concept: ParityConcept, noise: NoiseModel) -> float:
    """Label error rate of the classical oracle; harness-side knowledge only.

    Under depolarizing noise this depends on the planted concept's weight; it
    is handed to the LPN solvers as the assumed noise rate, never the concept
    itself.
    """
    if isinstance(noise, Noiseless):
        return 0.0
    if isinstance(noise, Classification):
        return noise.eta
    return bounds.effective_error_rate(concept.n, concept.a.weight(), noise.eta)


def run_experiment(
    config: ExperimentConfig,
) -> Tuple[List[TrialRecord], ExperimentSummary]:
    """Run all trials on independent derived streams and summarize."""
    streams = oracles.split_stream(config.seed, config.trials)
    records: List[TrialRecord] = []
    for trial in range(config.trials):
        rng = streams[trial]
        concept = _plant_concept(config, rng)
        start = time.monotonic_ns()
        report = _run_learner(config, concept, rng)
        elapsed_ms = (time.monotonic_ns() - start) // 1_000_000
        records.append(
            TrialRecord(
                trial_index=trial,
                n=config.n,
                noise_model=noise_label(config.noise),
                eta=noise_eta(config.noise),
                learner=config.learner,
                queries_used=report.queries_used,
                retained=report.retained,
                success=report.a_hat == concept.a,
                wall_time_ms=int(elapsed_ms),
                seed=config.seed,
            )
        )
    return records, summarize(records)


def summarize(records: Sequence[TrialRecord]) -> ExperimentSummary:
    trials = len(records)
    successes = sum(r.success for r in records)
    ci = binomtest(successes, trials).proportion_ci(confidence_level=0.95, method="wilson")
    return ExperimentSummary(
        trials=trials,
        successes=successes,
        success_rate=successes / trials,
        ci_low=float(ci.low),
        ci_high=float(ci.high),
        mean_queries=float(np.mean([r.queries_used for r in records])),
        mean_wall_time_ms=float(np.mean([r.wall_time_ms for r in records])),
    )


def records_to_csv(
    records: Sequence[TrialRecord], include_timing: bool = False
) -> str:
    """Render trial records in the stable CSV schema.

    Timing is zeroed unless explicitly requested so that identical
    (config, seed) runs produce byte-identical output.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(
            [
                r.trial_index,
                r.n,
                r.noise_model,
                _fmt(r.eta),
                r.learner,
                r.queries_used,
                r.retained,
                int(r.success),
                r.wall_time_ms if include_timing else 0,
                r.seed,
            ]
        )
    return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# distribution distance


def tv_distance(
    p: Union[OutcomeDistribution, MarginalDistribution],
    q: Union[OutcomeDistribution, MarginalDistribution],
) -> float:
    """Total variation distance (1/2) sum |p - q| over a common support."""
    if p.p.shape != q.p.shape:
        raise ValueError(f"support mismatch: {p.p.shape} vs {q.p.shape}")
    return 0.5 * float(np.abs(p.p - q.p).sum())


def empirical_outcome_distribution(
    m_bits: np.ndarray, b: np.ndarray, n: int
) -> OutcomeDistribution:
    """Histogram of sampled (m, b) outcomes as a normalized distribution."""
    weights = (1 << np.arange(n, dtype=np.int64))[::-1]
    idx = (m_bits.astype(np.int64) @ weights) * 2 + b.astype(np.int64)
    counts = np.bincount(idx, minlength=1 << (n + 1)).astype(float)
    return OutcomeDistribution(n, counts / counts.sum())


# ---------------------------------------------------------------------------
# verification suites


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))

    def lines(self) -> List[str]:
        return [
            f"[{'PASS' if c.passed else 'FAIL'}] {c.name}"
            + (f" ({c.detail})" if c.detail else "")
            for c in self.checks
        ]


def verify(suite: str = "all", seed: int = 20140718) -> VerifyReport:
    """Run cross-module oracle checks. Suites: distributions, bounds, solvers, all."""
    if suite not in ("distributions", "bounds", "solvers", "all"):
        raise ConfigurationError(f"unknown verify suite {suite!r}")
    report = VerifyReport()
    if suite in ("distributions", "all"):
        _verify_distributions(report, seed)
    if suite in ("bounds", "all"):
        _verify_bounds(report)
    if suite in ("solvers", "all"):
        _verify_solvers(report, seed)
    return report


def _verify_distributions(report: VerifyReport, seed: int) -> None:
    rng = oracles.make_stream(seed)

    # Post-Hadamard identity: exactly two 1/sqrt(2) amplitudes at (0^n,0), (a,1).
    worst = 0.0
    for n in range(1, 6):
        for _ in range(4):
            concept = oracles.random_concept(n, rng)
            state = statevector.apply_hadamard_all(
                statevector.prepare_example_state(concept)
            )
            amps = state.amplitudes
            expected = np.zeros_like(amps)
            expected[0] = expected[(concept.a.value << 1) | 1] = 1.0 / np.sqrt(2.0)
            worst = max(worst, float(np.abs(amps - expected).max()))
    report.add("post-hadamard two-branch identity", worst < 1e-10, f"max dev {worst:.2e}")

    # Structured closed form vs Pauli-pattern enumeration.
    worst = 0.0
    for n in (1, 2, 3):
        for eta in (0.05, 0.15, 0.3):
            concept = oracles.random_concept(n, rng)
            exact = oracles.exact_outcome_distribution(concept, Depolarizing(eta))
            brute = statevector.depolarized_distribution_exact(concept, eta)
            worst = max(worst, float(np.abs(exact.p - brute.p).max()))
    report.add(
        "depolarized closed form vs pattern enumeration",
        worst < 1e-12,
        f"max entry dev {worst:.2e}",
    )

    # Trajectory sampling statistics.
    concept = ParityConcept(BitString.from_text("101"))
    eta = 0.15
    samples = 20000
    counts = np.zeros(1 << 4)
    for _ in range(samples):
        m, b = statevector.noisy_outcome_trajectory(concept, eta, rng)
        counts[(m.value << 1) | b] += 1
    emp = OutcomeDistribution(3, counts / samples)
    tv = tv_distance(emp, statevector.depolarized_distribution_exact(concept, eta))
    report.add("pauli-trajectory sampling TV", tv <= 0.02, f"TV {tv:.4f}")

    # Structured sampler histogram vs closed form.
    m_bits, b = oracles.sample_quantum_batch(concept, Depolarizing(eta), 100000, rng)
    emp = empirical_outcome_distribution(m_bits, b, 3)
    tv = tv_distance(emp, oracles.exact_outcome_distribution(concept, Depolarizing(eta)))
    report.add("structured sampler histogram TV", tv <= 0.02, f"TV {tv:.4f}")

    # Retained strings: mixture identity against the b=1 slice.
    worst = 0.0
    for n in (2, 4, 6):
        concept = oracles.random_concept(n, rng)
        for eta in (0.05, 0.3):
            cond = oracles.conditional_retained_distribution(concept, eta)
            joint = oracles.exact_outcome_distribution(concept, Depolarizing(eta))
            slice_b1 = joint.p[1::2]
            worst = max(worst, float(np.abs(cond.p - slice_b1 / slice_b1.sum()).max()))
    report.add("retained-mixture slice identity", worst < 1e-12, f"max dev {worst:.2e}")


def _verify_bounds(report: VerifyReport) -> None:
    worst = 0.0
    for n in (1, 4, 8, 12):
        for w in range(n + 1):
            for eta in (0.05, 0.1, 0.25, 0.4):
                worst = max(
                    worst,
                    abs(bounds.zeta(n, w, eta) - bounds.zeta_reference_sum(n, w, eta)),
                )
    report.add("parity-flip closed form vs double sum", worst < 1e-12, f"max dev {worst:.2e}")

    ok = True
    for n in (1, 8, 32):
        for w in range(0, n + 1, max(1, n // 8)):
            for eta in (0.01, 0.2, 0.45):
                ep = bounds.effective_error_rate(n, w, eta)
                ok = ok and (eta - 1e-15 <= ep <= 1.0 - eta + 1e-15)
    report.add("effective label error rate stays in [eta, 1-eta]", ok)

    ok = True
    for eta in np.linspace(0.002, 0.498, 200):
        dp = bounds.select_delta_prime(float(eta))
        g = (1 - 2 * eta) * (1 - eta) + eta
        ok = ok and dp < eta / (1 - eta) and (1 - dp) > 1 / (2 * g) and dp > 0
    report.add("margin parameter satisfies both constraints strictly", ok)


def _verify_solvers(report: VerifyReport, seed: int) -> None:
    rng = oracles.make_stream(seed)

    # Exact ML on noiseless full-rank examples.
    concept = oracles.random_concept(10, rng)
    oracle = ClassicalOracle(concept, Noiseless())
    x_bits, y = oracle.sample_batch(40, rng)
    examples = [
        ClassicalExample(BitString.from_array(x_bits[i]), int(y[i]))
        for i in range(40)
    ]
    a_hat = learners.learn_lpn_bruteforce(examples, 0.1)
    report.add("exact ML recovers noiseless concept", a_hat == concept.a)

    # Exact ML under label noise.
    wins = 0
    for _ in range(10):
        concept = oracles.random_concept(10, rng)
        oracle = ClassicalOracle(concept, Classification(0.1))
        x_bits, y = oracle.sample_batch(150, rng)
        examples = [
            ClassicalExample(BitString.from_array(x_bits[i]), int(y[i]))
            for i in range(150)
        ]
        wins += learners.learn_lpn_bruteforce(examples, 0.1) == concept.a
    report.add("exact ML under 10% label noise", wins >= 9, f"{wins}/10 recovered")

    # BKW agreement with exact ML.
    agree = 0
    for _ in range(5):
        concept = oracles.random_concept(12, rng)
        oracle = ClassicalOracle(concept, Classification(0.1))
        bkw = learners.learn_lpn_bkw(oracle, 12, 0.1, 2, 1 << 13, rng)
        x_bits, y = oracle.sample_batch(300, rng)
        examples = [
            ClassicalExample(BitString.from_array(x_bits[i]), int(y[i]))
            for i in range(300)
        ]
        ml = learners.learn_lpn_bruteforce(examples, 0.1)
        agree += isinstance(bkw, BitString) and bkw == ml
    report.add("BKW agrees with exact ML", agree >= 4, f"{agree}/5 agreed")

    # Noiseless classical learner round trip.
    concept = oracles.random_concept(16, rng)
    lr = learners.learn_noiseless_classical(
        ClassicalOracle(concept, Noiseless()), 16, 0.01, rng
    )
    report.add(
        "elimination learner recovers concept",
        lr.succeeded_selfcheck and lr.a_hat == concept.a,
    )

    # Majority vote on a hand-checked list.
    voted = learners.majority_vote(
        [BitString.from_text(s) for s in ("101", "101", "010")]
    )
    report.add("bit-wise majority vote", str(voted) == "101")


# ---------------------------------------------------------------------------
# separation report


SEPARATION_COLUMNS = (
    "n",
    "learner",
    "noise_model",
    "eta",
    "trials",
    "success_rate",
    "mean_queries",
)

# Candidate enumeration and xor-reduction stop being desk-scale past these.
_MAP_MAX_N = 16
_BKW_MAX_N = 32


def separation_report(
    n_list: Sequence[int],
    eta: float,
    delta: float,
    trials: int,
    seed: int,
) -> List[Dict[str, object]]:
    """Quantum-vs-classical query accounting, one row per (n, learner).

    The quantum majority-vote learner runs under depolarizing noise at rate
    eta; the noiseless elimination learner provides the n-query classical
    baseline. The LPN solvers run under classification noise at the same
    rate, i.e. a fixed label-error rate eta: on the dephased depolarizing
    oracle the label-error rate climbs toward 1/2 exponentially in the
    concept weight, so the fixed-rate oracle is a *lower bound* on the
    classical cost while keeping the solver rows desk-scale. Solver rows are
    emitted only where their cost is still tractable.
    """
    rows: List[Dict[str, object]] = []
    for i, n in enumerate(n_list):
        configs = [
            ExperimentConfig(
                n=n,
                noise=Depolarizing(eta),
                learner="quantum_majority",
                delta=delta,
                trials=trials,
                seed=seed + 1000 * i,
            ),
            ExperimentConfig(
                n=n,
                noise=Noiseless(),
                learner="noiseless_classical",
                delta=delta,
                trials=trials,
                seed=seed + 1000 * i + 1,
            ),
        ]
        if n <= _MAP_MAX_N:
            configs.append(
                ExperimentConfig(
                    n=n,
                    noise=Classification(eta),
                    learner="lpn_bruteforce",
                    delta=delta,
                    trials=trials,
                    seed=seed + 1000 * i + 2,
                    map_examples=max(200, 30 * n),
                )
            )
        if n <= _BKW_MAX_N:
            configs.append(
                ExperimentConfig(
                    n=n,
                    noise=Classification(eta),
                    learner="lpn_bkw",
                    delta=delta,
                    trials=trials,
                    seed=seed + 1000 * i + 3,
                    block_count=2,
                    sample_budget=1 << max(12, n // 2 + 5),
                )
            )
        for config in configs:
            _, summary = run_experiment(config)
            rows.append(
                {
                    "n": n,
                    "learner": config.learner,
                    "noise_model": noise_label(config.noise),
                    "eta": noise_eta(config.noise),
                    "trials": trials,
                    "success_rate": summary.success_rate,
                    "mean_queries": summary.mean_queries,
                }
            )
    return rows


def separation_to_csv(rows: Sequence[Dict[str, object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SEPARATION_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row["n"],
                row["learner"],
                row["noise_model"],
                _fmt(row["eta"]),
                row["trials"],
                _fmt(row["success_rate"]),
                _fmt(row["mean_queries"]),
            ]
        )
    return buf.getvalue()
