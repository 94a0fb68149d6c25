"""Simulation lab for learning parity functions from noisy example oracles.

Quantum learners stay efficient under depolarizing noise while the dephased
classical counterpart becomes a learning-parity-with-noise instance; this
package provides the oracles, learners, closed-form planners, a statevector
verification oracle, and a seeded experiment harness with CSV/figure output.
"""

from .bounds import (
    NoiseRate,
    PlannerResult,
    chernoff_bound,
    effective_error_rate,
    eta_tilde,
    plan_retained_count,
    select_delta_prime,
    zeta,
    zeta_reference_sum,
)
from .gf2 import (
    INCONSISTENT,
    UNDERDETERMINED,
    BitString,
    Gf2System,
    Inconsistent,
    Underdetermined,
    dot,
    hamming_weight,
    independence_probability,
    rank,
    solve,
)
from .harness import (
    ConfigurationError,
    ExperimentConfig,
    TrialRecord,
    run_experiment,
    separation_report,
    tv_distance,
    verify,
)
from .learners import (
    LearnerConfig,
    LearnerReport,
    agreement,
    learn_lpn_bkw,
    learn_lpn_bruteforce,
    learn_noiseless_classical,
    learn_quantum_majority,
    learn_quantum_nonzero_report,
    majority_vote,
)
from .oracles import (
    Classification,
    ClassicalExample,
    ClassicalOracle,
    Depolarizing,
    NoiseModel,
    Noiseless,
    OutcomeDistribution,
    ParityConcept,
    QuantumOracle,
    QuantumOutcome,
    classical_example,
    conditional_retained_distribution,
    exact_outcome_distribution,
    make_stream,
    marginal_result_bit,
    quantum_outcome,
    random_concept,
    random_concept_of_weight,
    split_stream,
)
from .statevector import (
    PauliPattern,
    PureState,
    apply_hadamard_all,
    apply_membership_oracle,
    apply_pauli,
    bernstein_vazirani,
    depolarized_distribution_exact,
    measurement_distribution,
    prepare_example_state,
    sample_pauli_pattern,
)

__version__ = "0.1.0"
