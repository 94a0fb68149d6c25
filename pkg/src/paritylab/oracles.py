"""Structured samplers for the parity example oracles.

Covers the noiseless quantum/classical example oracle, the
classification-noise variant (result bit flipped with probability eta), and
the depolarizing variant (every output qubit independently depolarized at
rate eta). Sampling is O(n) per query and never touches a dense state;
exact small-n outcome distributions are provided for verification.

Randomness: all samplers take an explicit numpy ``Generator``. The project
fixes PCG64 seeded through ``SeedSequence`` as the generator; use
``make_stream`` / ``split_stream`` so that parallel trials stay reproducible
bit for bit across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple, Union

import numpy as np

from .gf2 import BitString, dot

RandomStream = np.random.Generator


def make_stream(seed: int) -> RandomStream:
    """Fresh PCG64 stream from a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def split_stream(seed: int, count: int) -> List[RandomStream]:
    """Deterministically derive `count` independent child streams of a seed."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


@dataclass(frozen=True)
class ParityConcept:
    """The hidden string a defining f_a(x) = <a, x> mod 2."""

    a: BitString

    @property
    def n(self) -> int:
        return self.a.n

    def evaluate(self, x: BitString) -> int:
        return dot(self.a, x)


@dataclass(frozen=True)
class Noiseless:
    pass


@dataclass(frozen=True)
class Classification:
    """Result bit/qubit flipped with probability eta."""

    eta: float

    def __post_init__(self):
        _check_eta(self.eta)


@dataclass(frozen=True)
class Depolarizing:
    """Independent depolarizing channel at rate eta on each output qubit."""

    eta: float

    def __post_init__(self):
        _check_eta(self.eta)


NoiseModel = Union[Noiseless, Classification, Depolarizing]


def _check_eta(eta: float) -> None:
    if not 0.0 <= eta < 0.5:
        raise ValueError(f"noise rate must be in [0, 1/2), got {eta}")


@dataclass(frozen=True)
class QuantumOutcome:
    """One post-Hadamard measurement: query-register string m and result bit b."""

    m: BitString
    b: int


@dataclass(frozen=True)
class ClassicalExample:
    """One dephased-oracle example (x, y)."""

    x: BitString
    y: int


class OutcomeDistribution:
    """Exact distribution over (m, b) outcomes for an n-bit concept.

    Probabilities are stored as a dense vector over 2^(n+1) basis strings,
    indexed by (int(m) << 1) | b.
    """

    def __init__(self, n: int, probabilities: np.ndarray):
        probabilities = np.asarray(probabilities, dtype=float)
        if probabilities.shape != (1 << (n + 1),):
            raise ValueError(
                f"expected {1 << (n + 1)} entries for n={n}, got {probabilities.shape}"
            )
        if np.any(probabilities < -1e-15):
            raise ValueError("negative probability entry")
        total = probabilities.sum()
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        self.n = n
        self.p = np.clip(probabilities, 0.0, None)

    def prob(self, m: BitString, b: int) -> float:
        return float(self.p[(m.value << 1) | (b & 1)])

    def items(self) -> Iterator[Tuple[BitString, int, float]]:
        for idx, pr in enumerate(self.p):
            yield BitString(idx >> 1, self.n), idx & 1, float(pr)

    def as_dict(self) -> Dict[Tuple[str, int], float]:
        return {(str(m), b): pr for m, b, pr in self.items() if pr > 0.0}


class MarginalDistribution:
    """Exact distribution over n-bit strings (no result bit)."""

    def __init__(self, n: int, probabilities: np.ndarray):
        probabilities = np.asarray(probabilities, dtype=float)
        if probabilities.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} entries for n={n}")
        if abs(probabilities.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")
        self.n = n
        self.p = probabilities

    def prob(self, m: BitString) -> float:
        return float(self.p[m.value])


_MAX_TABLE_N = 20


def _check_capacity(n: int) -> None:
    if n > _MAX_TABLE_N:
        raise ValueError(f"exact distributions limited to n <= {_MAX_TABLE_N}, got {n}")


def _flip_weights(n: int, eta: float, offset: int = 0) -> np.ndarray:
    """Vector over all m of eta^|m ^ offset| (1-eta)^(n - |m ^ offset|)."""
    m = np.arange(1 << n, dtype=np.uint64) ^ np.uint64(offset)
    w = np.bitwise_count(m).astype(float)
    if eta == 0.0:
        out = np.zeros(1 << n)
        out[offset] = 1.0
        return out
    return eta**w * (1.0 - eta) ** (n - w)


# ---------------------------------------------------------------------------
# samplers


def classical_example(
    concept: ParityConcept, noise: NoiseModel, rng: RandomStream
) -> ClassicalExample:
    """Draw one example from the dephased oracle under the given noise model."""
    x_bits, y = sample_classical_batch(concept, noise, 1, rng)
    return ClassicalExample(BitString.from_array(x_bits[0]), int(y[0]))


# Row-chunk size for batch generation; bounds the transient uniform-double
# buffers to ~tens of MB even at n in the hundreds.
_CHUNK_ROWS = 1 << 16


def _random_bits(rng: RandomStream, rows: int, cols: int, p: float) -> np.ndarray:
    """(rows, cols) iid Bernoulli(p) bits as uint8, generated chunkwise."""
    out = np.empty((rows, cols), dtype=np.uint8)
    for lo in range(0, rows, _CHUNK_ROWS):
        hi = min(lo + _CHUNK_ROWS, rows)
        out[lo:hi] = rng.random((hi - lo, cols)) < p
    return out


def sample_classical_batch(
    concept: ParityConcept, noise: NoiseModel, count: int, rng: RandomStream
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized classical examples: (count, n) uint8 inputs and labels."""
    n = concept.n
    a_bits = concept.a.to_array()
    x = _random_bits(rng, count, n, 0.5)
    labels = ((x @ a_bits.astype(np.uint64)) & 1).astype(np.uint8)
    if isinstance(noise, Noiseless):
        return x, labels
    if isinstance(noise, Classification):
        flips = (rng.random(count) < noise.eta).astype(np.uint8)
        return x, labels ^ flips
    if isinstance(noise, Depolarizing):
        e_in = _random_bits(rng, count, n, noise.eta)
        e_out = (rng.random(count) < noise.eta).astype(np.uint8)
        return x ^ e_in, labels ^ e_out
    raise TypeError(f"unknown noise model: {noise!r}")


def quantum_outcome(
    concept: ParityConcept, noise: NoiseModel, rng: RandomStream
) -> QuantumOutcome:
    """Sample one post-Hadamard measurement of the (noisy) example state.

    Noiseless outcomes are (0^n, 0) or (a, 1) with probability 1/2 each.
    Classification noise complements the result bit with probability eta.
    Depolarizing noise XORs an independent Bernoulli(eta) flip pattern onto
    the noiseless branch: per qubit, the Paulis X and Y (total probability
    eta) flip the measured bit after the Hadamard while I and Z do not; the
    relative phase between the two branches cannot affect computational-basis
    statistics. The statevector module verifies this reduction independently.
    """
    m_bits, b = sample_quantum_batch(concept, noise, 1, rng)
    return QuantumOutcome(BitString.from_array(m_bits[0]), int(b[0]))


def sample_quantum_batch(
    concept: ParityConcept, noise: NoiseModel, count: int, rng: RandomStream
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized post-Hadamard outcomes: (count, n) uint8 strings and result bits."""
    n = concept.n
    a_bits = concept.a.to_array()
    branch = (rng.random(count) < 0.5).astype(np.uint8)
    m = branch[:, None] * a_bits[None, :]
    if isinstance(noise, Noiseless):
        return m, branch
    if isinstance(noise, Classification):
        flips = (rng.random(count) < noise.eta).astype(np.uint8)
        return m, branch ^ flips
    if isinstance(noise, Depolarizing):
        e_in = _random_bits(rng, count, n, noise.eta)
        e_out = (rng.random(count) < noise.eta).astype(np.uint8)
        return m ^ e_in, branch ^ e_out
    raise TypeError(f"unknown noise model: {noise!r}")


class ClassicalOracle:
    """Example source hiding the planted concept behind sample calls."""

    def __init__(self, concept: ParityConcept, noise: NoiseModel):
        self._concept = concept
        self.noise = noise
        self.n = concept.n

    def sample(self, rng: RandomStream) -> ClassicalExample:
        return classical_example(self._concept, self.noise, rng)

    def sample_batch(self, count: int, rng: RandomStream):
        return sample_classical_batch(self._concept, self.noise, count, rng)


class QuantumOracle:
    """Post-Hadamard outcome source hiding the planted concept."""

    def __init__(self, concept: ParityConcept, noise: NoiseModel):
        self._concept = concept
        self.noise = noise
        self.n = concept.n

    def sample(self, rng: RandomStream) -> QuantumOutcome:
        return quantum_outcome(self._concept, self.noise, rng)

    def sample_batch(self, count: int, rng: RandomStream):
        return sample_quantum_batch(self._concept, self.noise, count, rng)


# ---------------------------------------------------------------------------
# exact distributions


def exact_outcome_distribution(
    concept: ParityConcept, noise: NoiseModel
) -> OutcomeDistribution:
    """Exact joint law of (m, b) for the post-Hadamard measurement, n <= 20."""
    n = concept.n
    _check_capacity(n)
    a = concept.a.value
    size = 1 << (n + 1)
    p = np.zeros(size)
    if isinstance(noise, Noiseless):
        p[0 << 1 | 0] += 0.5
        p[a << 1 | 1] += 0.5
    elif isinstance(noise, Classification):
        eta = noise.eta
        p[0 << 1 | 0] += 0.5 * (1 - eta)
        p[a << 1 | 1] += 0.5 * (1 - eta)
        p[0 << 1 | 1] += 0.5 * eta
        p[a << 1 | 0] += 0.5 * eta
    elif isinstance(noise, Depolarizing):
        eta = noise.eta
        # Branch 0: m is pure flip noise, b = e_{n+1}.
        # Branch 1: m is a corrupted by flips, b = 1 ^ e_{n+1}.
        d0 = _flip_weights(n, eta, offset=0)
        da = _flip_weights(n, eta, offset=a)
        p[0::2] = 0.5 * (d0 * (1 - eta) + da * eta)  # b = 0
        p[1::2] = 0.5 * (d0 * eta + da * (1 - eta))  # b = 1
    else:
        raise TypeError(f"unknown noise model: {noise!r}")
    return OutcomeDistribution(n, p)


def conditional_retained_distribution(
    concept: ParityConcept, eta: float
) -> MarginalDistribution:
    """Law of the query string m given result bit b = 1 under depolarizing noise.

    Equals the mixture (1 - eta) D_a^eta + eta D_{0^n}^eta exactly, where
    D_q^eta is q corrupted by independent rate-eta bit flips.
    """
    _check_eta(eta)
    n = concept.n
    _check_capacity(n)
    d0 = _flip_weights(n, eta, offset=0)
    da = _flip_weights(n, eta, offset=concept.a.value)
    return MarginalDistribution(n, (1.0 - eta) * da + eta * d0)


def marginal_result_bit(concept: ParityConcept, noise: NoiseModel) -> float:
    """Pr[b = 1]: exactly 1/2 under every supported noise model.

    Noiseless: equal-weight branches. Classification: (1-eta)/2 + eta/2.
    Depolarizing: b = branch ^ flip with the branch uniform.
    """
    if not isinstance(noise, (Noiseless, Classification, Depolarizing)):
        raise TypeError(f"unknown noise model: {noise!r}")
    return 0.5


def random_concept(n: int, rng: RandomStream) -> ParityConcept:
    """Uniformly random hidden string of length n."""
    bits = (rng.random(n) < 0.5).astype(np.uint8)
    return ParityConcept(BitString.from_array(bits))


def random_concept_of_weight(n: int, weight: int, rng: RandomStream) -> ParityConcept:
    """Random hidden string with exactly `weight` ones."""
    if not 0 <= weight <= n:
        raise ValueError(f"weight must be in [0, {n}], got {weight}")
    positions = rng.choice(n, size=weight, replace=False)
    bits = np.zeros(n, dtype=np.uint8)
    bits[positions] = 1
    return ParityConcept(BitString.from_array(bits))
