"""Closed-form noise and sample-size quantities for the majority-vote learner.

Everything here is a pure function of scalar parameters: the loose Chernoff
bound, the parity-flip probability of input-register bit noise, the effective
label error rate of the dephased depolarizing oracle, and the planner that
sizes the retained-string count for a target failure probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class NoiseRate:
    """A noise rate constrained to [0, 1/2)."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta < 0.5:
            raise ValueError(f"noise rate must be in [0, 1/2), got {self.eta}")


@dataclass(frozen=True)
class PlannerResult:
    """Output of the retained-count planner.

    total_queries = 3 * k_prime: drawing that many outcomes retains at least
    k_prime of them except with probability exponentially small in k_prime.
    """

    delta_prime: float
    eta_tilde: float
    k_prime: int
    total_queries: int


def chernoff_bound(k: int, eta: float, delta: float) -> float:
    """Loose Chernoff tail bound B_k(eta, delta) = 2 exp(-delta^2 eta k / 3).

    This is a bound, not a probability: it can exceed 1 (e.g. k = 0 gives 2).
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    return 2.0 * math.exp(-delta * delta * eta * k / 3.0)


def zeta(n: int, weight_a: int, eta: float) -> float:
    """Probability that rate-eta bit flips on the input register flip the parity.

    Only flips on the weight_a relevant positions matter, and the parity flips
    iff an odd number of them flip, which collapses the combinatorial sum to
    (1 - (1 - 2 eta)^weight_a) / 2. The full double sum over flip weights is
    kept as ``zeta_reference_sum`` for verification.
    """
    _check_zeta_args(n, weight_a, eta)
    if weight_a == 0:
        return 0.0
    return (1.0 - (1.0 - 2.0 * eta) ** weight_a) / 2.0


def zeta_reference_sum(n: int, weight_a: int, eta: float) -> float:
    """Direct evaluation of the double sum over flip weights.

    Sum over total flip weight w and odd relevant-flip count k of
    C(|a|, k) C(n-|a|, w-k) eta^w (1-eta)^(n-w). Binomials are evaluated via
    log-gamma so the sum stays finite well past n = 60. Slower than ``zeta``;
    retained as an independent check.
    """
    _check_zeta_args(n, weight_a, eta)
    if weight_a == 0 or eta == 0.0:
        return 0.0
    total = 0.0
    for w in range(1, n + 1):
        for k in range(1, min(w, weight_a) + 1, 2):
            if w - k > n - weight_a:
                continue
            log_term = (
                _log_comb(weight_a, k)
                + _log_comb(n - weight_a, w - k)
                + w * math.log(eta)
                + (n - w) * math.log1p(-eta)
            )
            total += math.exp(log_term)
    return total


def effective_error_rate(n: int, weight_a: int, eta: float) -> float:
    """Label error rate eta' = eta (1 - zeta) + zeta (1 - eta) of the dephased oracle.

    Always lands in [eta, 1 - eta].
    """
    z = zeta(n, weight_a, eta)
    return eta * (1.0 - z) + z * (1.0 - eta)


def select_delta_prime(eta: float) -> float:
    """Deterministic choice of the vote-margin parameter delta'.

    Both constraints must hold strictly:
      delta' < eta / (1 - eta)
      1 - delta' > 1 / (2 ((1 - 2 eta)(1 - eta) + eta))
    We take half of the tighter cap, which satisfies both with margin.
    """
    if not 0.0 < eta < 0.5:
        raise ValueError(f"eta must be in (0, 1/2), got {eta}")
    cap_ratio = eta / (1.0 - eta)
    g = (1.0 - 2.0 * eta) * (1.0 - eta) + eta
    cap_vote = 1.0 - 1.0 / (2.0 * g)
    return 0.5 * min(cap_ratio, cap_vote)


def eta_tilde(eta: float, delta_prime: float) -> float:
    """Effective rate eta~ = eta (1 - (1 + delta')(1 - eta)).

    Strictly positive whenever delta' < eta / (1 - eta).
    """
    if not 0.0 < eta < 0.5:
        raise ValueError(f"eta must be in (0, 1/2), got {eta}")
    if delta_prime < 0.0 or delta_prime >= eta / (1.0 - eta):
        raise ValueError(
            f"delta_prime {delta_prime} must be in [0, eta/(1-eta)) = [0, {eta / (1 - eta)})"
        )
    return eta * (1.0 - (1.0 + delta_prime) * (1.0 - eta))


def plan_retained_count(n: int, eta: float, delta: float) -> PlannerResult:
    """Smallest retained count k' guaranteeing Pr[wrong estimate] < delta.

    k' is the least integer strictly greater than
    (3 / (delta'^2 eta~)) ln(4 n / delta), with delta' from
    ``select_delta_prime``. Natural log, matching the exp(-x) Chernoff form.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    dp = select_delta_prime(eta)
    et = eta_tilde(eta, dp)
    threshold = (3.0 / (dp * dp * et)) * math.log(4.0 * n / delta)
    k_prime = int(math.floor(threshold)) + 1
    return PlannerResult(
        delta_prime=dp, eta_tilde=et, k_prime=k_prime, total_queries=3 * k_prime
    )


def _check_zeta_args(n: int, weight_a: int, eta: float) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= weight_a <= n:
        raise ValueError(f"weight_a must be in [0, {n}], got {weight_a}")
    if not 0.0 <= eta < 0.5:
        raise ValueError(f"eta must be in [0, 1/2), got {eta}")


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
