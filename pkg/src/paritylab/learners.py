"""Learning algorithms for the parity oracles.

Noiseless classical learning by Gaussian elimination, the nonzero-report
strategy for classification noise, the retain-and-majority-vote algorithm for
depolarizing noise, and two solvers for the dephased (LPN) instance: an
exact maximum-likelihood enumeration and a blockwise xor-reduction (BKW).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .bounds import plan_retained_count
from .gf2 import (
    BitString,
    Gf2System,
    solve,
)
from .oracles import (
    ClassicalExample,
    ClassicalOracle,
    ParityConcept,
    QuantumOracle,
    RandomStream,
)


@dataclass(frozen=True)
class LearnerReport:
    """Outcome of one learner run.

    succeeded_selfcheck reflects only what the learner can verify on its own
    (it never sees the planted concept).
    """

    a_hat: BitString
    queries_used: int
    retained: int
    succeeded_selfcheck: bool

    def __post_init__(self):
        if self.retained > self.queries_used:
            raise ValueError("retained cannot exceed queries_used")


@dataclass(frozen=True)
class LearnerConfig:
    delta: float = 0.01
    epsilon: float = 0.01
    eta_assumed: float = 0.0
    query_budget: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.delta < 0.5:
            raise ValueError(f"delta must be in (0, 1/2), got {self.delta}")
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must be in (0, 1/2), got {self.epsilon}")


def learn_noiseless_classical(
    oracle: ClassicalOracle, n: int, delta: float, rng: RandomStream
) -> LearnerReport:
    """Recover a from noiseless examples by repeated rounds of elimination.

    Each round draws n fresh examples and succeeds iff their rank is n, which
    happens with probability > 1/4 (so failure rate p < 3/4 per round).
    Rounds are capped at ceil(log_{1/p}(1/delta)) + 1 with p = 3/4, driving
    the overall failure probability below delta. Failure is detectable
    (rank < n in every round) and flagged, never silently wrong.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    max_rounds = math.ceil(math.log(1.0 / delta) / math.log(4.0 / 3.0)) + 1
    queries = 0
    for _ in range(max_rounds):
        x_bits, y = oracle.sample_batch(n, rng)
        queries += n
        pairs = [(BitString.from_array(x_bits[i]), int(y[i])) for i in range(n)]
        result = solve(Gf2System.from_pairs(pairs, n))
        if isinstance(result, BitString):
            return LearnerReport(result, queries, n, True)
    return LearnerReport(BitString.zeros(n), queries, 0, False)


def learn_quantum_nonzero_report(
    oracle: QuantumOracle, k: int, rng: RandomStream
) -> LearnerReport:
    """Report the first nonzero query-register string among k outcomes, else 0^n.

    Under noiseless or classification noise every outcome's string is 0^n or
    a, so this fails only when a != 0^n and all k draws landed on the 0^n
    branch: probability (1/2)^k, independent of n and eta.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    m_bits, _ = oracle.sample_batch(k, rng)
    nonzero = np.flatnonzero(m_bits.any(axis=1))
    if nonzero.size:
        return LearnerReport(
            BitString.from_array(m_bits[nonzero[0]]), k, int(nonzero.size), True
        )
    return LearnerReport(BitString.zeros(oracle.n), k, 0, True)


def majority_vote(strings: Sequence[BitString]) -> BitString:
    """Bit-wise majority: output bit is 1 iff strictly more than half are 1.

    Exact ties go to 0.
    """
    if not strings:
        raise ValueError("majority_vote requires a nonempty list")
    n = strings[0].n
    if any(s.n != n for s in strings):
        raise ValueError("strings must share a common length")
    counts = np.zeros(n, dtype=np.int64)
    for s in strings:
        counts += s.to_array()
    return BitString.from_array((counts * 2 > len(strings)).astype(np.uint8))


def learn_quantum_majority(
    oracle: QuantumOracle, n: int, eta: float, delta: float, rng: RandomStream
) -> LearnerReport:
    """Retain-and-vote learner for the depolarized quantum example oracle.

    Plans k' from (n, eta, delta), queries until k' outcomes with b = 1 are
    retained or 3k' total queries are spent, and majority-votes each bit over
    the retained strings. If fewer than k' were retained (probability
    exponentially small in k'), the vote proceeds on what was retained and
    the self-check flag is cleared.

    At eta = 0 every retained string already equals a, so the planner is
    bypassed and k' only needs to make an empty retention set unlikely.
    """
    if eta == 0.0:
        k_prime = max(1, math.ceil(math.log2(1.0 / delta)))
        cap = 3 * k_prime
    else:
        plan = plan_retained_count(n, eta, delta)
        k_prime, cap = plan.k_prime, plan.total_queries
    m_bits, b = oracle.sample_batch(cap, rng)
    retained_idx = np.flatnonzero(b == 1)
    if retained_idx.size >= k_prime:
        retained_idx = retained_idx[:k_prime]
        queries = int(retained_idx[-1]) + 1
        ok = True
    else:
        queries = cap
        ok = False
    retained = int(retained_idx.size)
    if retained == 0:
        return LearnerReport(BitString.zeros(n), queries, 0, False)
    counts = m_bits[retained_idx].sum(axis=0, dtype=np.int64)
    a_hat = BitString.from_array((counts * 2 > retained).astype(np.uint8))
    return LearnerReport(a_hat, queries, retained, ok)


def learn_lpn_bruteforce(
    examples: Sequence[ClassicalExample], eta_prime: float
) -> BitString:
    """Exact maximum-likelihood parity recovery by enumerating all candidates.

    Minimizes label disagreements when eta_prime < 1/2 and maximizes them
    when eta_prime > 1/2 (the complement concept is then the likely one).
    Ties break to the lexicographically smallest candidate. n <= 24.
    """
    if not examples:
        raise ValueError("need at least one example")
    n = examples[0].x.n
    if n > 24:
        raise ValueError(f"candidate enumeration limited to n <= 24, got {n}")
    if eta_prime == 0.5:
        raise ValueError("eta_prime = 1/2 carries no information")
    x_bits = np.stack([ex.x.to_array() for ex in examples]).astype(np.float64)
    y = np.array([ex.y for ex in examples], dtype=np.float64)
    disagreements = _disagreement_counts(x_bits, y, n)
    if eta_prime < 0.5:
        best = int(np.argmin(disagreements))
    else:
        best = int(np.argmax(disagreements))
    return BitString(best, n)


def _disagreement_counts(
    x_bits: np.ndarray, y: np.ndarray, n: int
) -> np.ndarray:
    """Disagreement count per candidate a in 0..2^n-1 (candidate order = lex order)."""
    # Candidate bit matrix rows: bits of c, most significant first, so row
    # order matches lexicographic order of the textual rendering. Chunked to
    # bound the (candidates x examples) intermediate.
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    out = np.empty(1 << n, dtype=np.float64)
    chunk = 1 << 13
    for lo in range(0, 1 << n, chunk):
        hi = min(lo + chunk, 1 << n)
        cand = (
            (np.arange(lo, hi, dtype=np.uint64)[:, None] >> shifts) & 1
        ).astype(np.float64)
        predictions = cand @ x_bits.T  # exact small-integer counts in float64
        out[lo:hi] = ((predictions + y) % 2.0).sum(axis=1)
    return out


@dataclass(frozen=True)
class BkwFailure:
    """Detectable failure: the sample budget left too few reduced examples."""

    reason: str


def learn_lpn_bkw(
    oracle: ClassicalOracle,
    n: int,
    eta_prime: float,
    block_count: int,
    sample_budget: int,
    rng: RandomStream,
) -> Union[BitString, BkwFailure]:
    """Blockwise xor-reduction solver for the noisy-parity examples.

    Coordinates are split into block_count contiguous blocks. For each target
    block, the other blocks are zeroed one at a time by bucketing examples on
    that block's bits and xoring each example with its bucket representative;
    the target block's bits are then recovered by exact maximum likelihood
    over its 2^width candidates. Each reduction level doubles the number of
    xored originals, so the reduced label noise is
    (1 - (1 - 2 eta')^(2^(block_count - 1))) / 2, which must stay below 1/2.
    """
    if block_count < 1 or block_count > n:
        raise ValueError(f"block_count must be in [1, {n}], got {block_count}")
    if not 0.0 <= eta_prime < 0.5:
        raise ValueError(f"eta_prime must be in [0, 1/2), got {eta_prime}")
    if sample_budget < 1:
        raise ValueError("sample_budget must be positive")

    x_bits, y = oracle.sample_batch(sample_budget, rng)
    x_bits = x_bits.astype(np.uint8)
    y = y.astype(np.uint8)

    bounds = np.linspace(0, n, block_count + 1).astype(int)
    blocks = [(int(bounds[i]), int(bounds[i + 1])) for i in range(block_count)]

    a_bits = np.zeros(n, dtype=np.uint8)
    min_reduced = max(32, 1 << (max(e - s for s, e in blocks) + 2))
    for target in range(block_count):
        xs, ys = x_bits, y
        for other in range(block_count):
            if other == target:
                continue
            xs, ys = _reduce_block(xs, ys, *blocks[other])
            if xs.shape[0] == 0:
                return BkwFailure(
                    f"no examples survived reduction for block {target}"
                )
        if xs.shape[0] < min_reduced:
            return BkwFailure(
                f"only {xs.shape[0]} reduced examples for block {target}, "
                f"need {min_reduced}"
            )
        start, end = blocks[target]
        a_bits[start:end] = _block_ml(xs[:, start:end], ys)
    return BitString.from_array(a_bits)


def _reduce_block(
    x_bits: np.ndarray, y: np.ndarray, start: int, end: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Zero out columns [start, end) by xoring within equal-block buckets.

    The first example seen with each block value is the bucket representative
    and is consumed.
    """
    width = end - start
    weights = (1 << np.arange(width, dtype=np.int64))[::-1]
    keys = x_bits[:, start:end].astype(np.int64) @ weights
    order = np.argsort(keys, kind="stable")
    keys_sorted = keys[order]
    first_in_bucket = np.ones(len(keys), dtype=bool)
    first_in_bucket[1:] = keys_sorted[1:] != keys_sorted[:-1]
    rep_positions = np.flatnonzero(first_in_bucket)
    # Map every example to its bucket's representative row.
    rep_of = rep_positions[np.cumsum(first_in_bucket) - 1]
    keep = ~first_in_bucket
    rows = order[keep]
    reps = order[rep_of[keep]]
    return x_bits[rows] ^ x_bits[reps], y[rows] ^ y[reps]


def _block_ml(x_block: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Exact ML over the 2^width candidates for one block's bits."""
    width = x_block.shape[1]
    disagreements = _disagreement_counts(
        x_block.astype(np.float64), y.astype(np.float64), width
    )
    best = int(np.argmin(disagreements))
    return BitString(best, width).to_array()


def lpn_disagreements(
    a: BitString, examples: Sequence[ClassicalExample]
) -> int:
    """Number of examples whose label disagrees with candidate a."""
    return sum(
        1 for ex in examples if ((a.value & ex.x.value).bit_count() & 1) != ex.y
    )


def agreement(h: ParityConcept, f: ParityConcept) -> float:
    """Fraction of inputs on which two parity concepts agree.

    Distinct parities agree on exactly half of all inputs, so this is 1 for
    equal concepts and 1/2 otherwise.
    """
    if h.n != f.n:
        raise ValueError(f"length mismatch: {h.n} vs {f.n}")
    return 1.0 if h.a == f.a else 0.5
