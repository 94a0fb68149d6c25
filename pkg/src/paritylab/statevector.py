"""Dense statevector simulator for the (n+1)-qubit example oracle.

This is the verification oracle for the structured samplers: it builds the
example state from the membership-oracle circuit, applies depolarizing noise
either exactly (enumerating Pauli patterns) or by trajectory sampling, applies
the Hadamard layer, and measures.

Basis convention: computational basis index = (int(m) << 1) | b, i.e. the
result qubit is the least significant index bit and query-register bit j
(1-based, most significant first) sits at index bit position n + 1 - j.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .gf2 import BitString
from .oracles import (
    MarginalDistribution,
    OutcomeDistribution,
    ParityConcept,
    RandomStream,
)

_NORM_TOL = 1e-10


@dataclass
class PureState:
    """Dense amplitude vector over n_qubits qubits."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError(
                f"expected {1 << self.n_qubits} amplitudes, got {self.amplitudes.shape}"
            )
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm}")

    def copy(self) -> "PureState":
        return PureState(self.n_qubits, self.amplitudes.copy())


@dataclass(frozen=True)
class PauliPattern:
    """One single-qubit Pauli label per qubit.

    labels[0..n-1] act on query-register bits 1..n, labels[n] on the result
    qubit.
    """

    labels: Tuple[str, ...]

    def __post_init__(self):
        if any(l not in "IXYZ" for l in self.labels):
            raise ValueError(f"labels must be I/X/Y/Z, got {self.labels}")


def basis_state(n_qubits: int, index: int) -> PureState:
    amps = np.zeros(1 << n_qubits, dtype=np.complex128)
    amps[index] = 1.0
    return PureState(n_qubits, amps)


def _qubit_position(n_qubits: int, label_index: int) -> int:
    """Index bit position of the qubit at pattern/label position label_index."""
    n = n_qubits - 1
    if label_index == n:
        return 0  # result qubit
    return n - label_index  # query bit j = label_index + 1


def _pair_view(amps: np.ndarray, pos: int) -> np.ndarray:
    """Reshape so axis 1 indexes the bit at position pos."""
    return amps.reshape(-1, 2, 1 << pos)


_INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _hadamard_at(amps: np.ndarray, pos: int) -> None:
    v = _pair_view(amps, pos)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = (a0 + a1) * _INV_SQRT2
    v[:, 1, :] = (a0 - a1) * _INV_SQRT2


def apply_membership_oracle(state: PureState, concept: ParityConcept) -> PureState:
    """Unitary |x, b> -> |x, b ^ f_a(x)>: swaps result-qubit amplitude pairs."""
    n = concept.n
    if state.n_qubits != n + 1:
        raise ValueError(f"state has {state.n_qubits} qubits, expected {n + 1}")
    x = np.arange(1 << n, dtype=np.uint64)
    parity = (np.bitwise_count(x & np.uint64(concept.a.value)) & 1).astype(bool)
    amps = state.amplitudes.copy().reshape(-1, 2)
    amps[parity] = amps[parity][:, ::-1]
    return PureState(state.n_qubits, amps.reshape(-1))


def prepare_example_state(concept: ParityConcept) -> PureState:
    """Example state 2^(-n/2) sum_x |x, f_a(x)> built from the oracle circuit.

    Hadamards on the query register of |0^n, 0>, then the membership oracle.
    """
    n = concept.n
    if n > 20:
        raise ValueError(f"statevector capacity is n <= 20, got {n}")
    state = basis_state(n + 1, 0)
    for j in range(n):
        _hadamard_at(state.amplitudes, _qubit_position(n + 1, j))
    return apply_membership_oracle(state, concept)


def apply_hadamard_all(state: PureState) -> PureState:
    """Hadamard on every qubit."""
    out = state.copy()
    for pos in range(out.n_qubits):
        _hadamard_at(out.amplitudes, pos)
    return out


def sample_pauli_pattern(eta: float, n_qubits: int, rng: RandomStream) -> PauliPattern:
    """Draw a Pauli pattern realizing the rate-eta depolarizing channel.

    Per qubit: I with probability 1 - 3 eta / 2, and X, Y, Z each with
    probability eta / 2.
    """
    if not 0.0 <= eta <= 2.0 / 3.0:
        raise ValueError(f"eta must be in [0, 2/3], got {eta}")
    probs = [1.0 - 1.5 * eta, 0.5 * eta, 0.5 * eta, 0.5 * eta]
    picks = rng.choice(4, size=n_qubits, p=probs)
    return PauliPattern(tuple("IXYZ"[k] for k in picks))


def apply_pauli(state: PureState, pattern: PauliPattern) -> PureState:
    """Apply the tensor product of single-qubit Paulis."""
    if len(pattern.labels) != state.n_qubits:
        raise ValueError(
            f"pattern length {len(pattern.labels)} != {state.n_qubits} qubits"
        )
    out = state.copy()
    for k, label in enumerate(pattern.labels):
        if label == "I":
            continue
        pos = _qubit_position(state.n_qubits, k)
        v = _pair_view(out.amplitudes, pos)
        if label == "X":
            v[:, :, :] = v[:, ::-1, :]
        elif label == "Y":
            a0 = v[:, 0, :].copy()
            v[:, 0, :] = -1j * v[:, 1, :]
            v[:, 1, :] = 1j * a0
        else:  # Z
            v[:, 1, :] *= -1.0
    return out


def measurement_distribution(state: PureState) -> OutcomeDistribution:
    """Computational-basis probabilities split as (m, b)."""
    n = state.n_qubits - 1
    if n > 20:
        raise ValueError(f"capacity is n <= 20, got {n}")
    return OutcomeDistribution(n, np.abs(state.amplitudes) ** 2)


def sample_measurement(state: PureState, rng: RandomStream) -> Tuple[BitString, int]:
    """One computational-basis measurement via inverse CDF with a single draw."""
    probs = np.abs(state.amplitudes) ** 2
    cdf = np.cumsum(probs)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    idx = min(idx, len(probs) - 1)
    n = state.n_qubits - 1
    return BitString(idx >> 1, n), idx & 1


def noisy_outcome_trajectory(
    concept: ParityConcept, eta: float, rng: RandomStream
) -> Tuple[BitString, int]:
    """One depolarized oracle query simulated end to end on the statevector.

    Example state -> sampled Pauli pattern -> Hadamard layer -> measurement.
    """
    state = prepare_example_state(concept)
    pattern = sample_pauli_pattern(eta, state.n_qubits, rng)
    state = apply_pauli(state, pattern)
    state = apply_hadamard_all(state)
    return sample_measurement(state, rng)


def depolarized_distribution_exact(
    concept: ParityConcept, eta: float
) -> OutcomeDistribution:
    """Exact post-Hadamard outcome law under depolarizing noise, by enumeration.

    Averages the measurement distribution over all 4^(n+1) Pauli patterns with
    their channel probabilities. Brute force by construction; n <= 6.
    """
    n = concept.n
    if n > 6:
        raise ValueError(f"pattern enumeration limited to n <= 6, got {n}")
    if not 0.0 <= eta <= 2.0 / 3.0:
        raise ValueError(f"eta must be in [0, 2/3], got {eta}")
    base = prepare_example_state(concept)
    weights = {"I": 1.0 - 1.5 * eta, "X": 0.5 * eta, "Y": 0.5 * eta, "Z": 0.5 * eta}
    total = np.zeros(1 << (n + 1))
    for labels in itertools.product("IXYZ", repeat=n + 1):
        w = 1.0
        for l in labels:
            w *= weights[l]
        if w == 0.0:
            continue
        state = apply_pauli(base, PauliPattern(labels))
        state = apply_hadamard_all(state)
        total += w * np.abs(state.amplitudes) ** 2
    total /= total.sum()
    return OutcomeDistribution(n, total)


def bernstein_vazirani(concept: ParityConcept) -> BitString:
    """Recover a with one membership query: |0^n>|-> -> Q_f -> Hadamards.

    Deterministic in the noiseless case; the result qubit ends in |1>.
    """
    n = concept.n
    if n > 20:
        raise ValueError(f"statevector capacity is n <= 20, got {n}")
    state = basis_state(n + 1, 1)  # |0^n, 1>
    state = apply_hadamard_all(state)
    state = apply_membership_oracle(state, concept)
    state = apply_hadamard_all(state)
    probs = np.abs(state.amplitudes) ** 2
    idx = int(np.argmax(probs))
    if probs[idx] < 1.0 - 1e-9:
        raise RuntimeError("noiseless run should be deterministic")
    return BitString(idx >> 1, n)
