"""Closed-form objectives equivalent to each game's expected loss.

For a fixed sender, plugging the synchronized receiver back into each game's
loss yields a closed-form function of the protocol alone:

* reconstruction: the unexplained variance ``sum_m p_m Var[X|m]``;
* d-candidates discrimination: ``sum_m f(p_m)`` with
  ``f(p) = p * E log(1 + Binomial(d-1, p))`` (for d=2 this is
  ``log 2 * sum_m p_m^2``, and ``sum_m p_m^2`` is the constant-stripped
  form valid inside argmin);
* global discrimination: ``-I(X; S(X)) = -H(S(X))`` for deterministic senders;
* supervised discrimination (d=2): ``sum_m p_m^2 - sum_{m,y} P(m,y)^2``;
* classification discrimination: ``-I(Y; S(X))``.

All logarithms are natural (nats); entropies use the plug-in convention
``0 log 0 = 0``; mutual information is computed from exact joint weight
tables, never from samples.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .core import InputSpace, LabelMap, Protocol, conditional_stats, \
    message_probabilities

__all__ = [
    "reco_objective",
    "binomial_log_moment",
    "disc_objective",
    "disc_objective_simplified",
    "global_objective",
    "supervised_objective",
    "SupervisedObjective",
    "classification_objective",
    "convexity_check",
    "entropy",
    "conditional_entropy",
    "mutual_information",
    "joint_message_label",
]


def reco_objective(protocol: Protocol, space: InputSpace) -> float:
    """Weighted unexplained variance ``sum_m P(S=m) Var[X | S=m]``."""
    p = message_probabilities(protocol, space)
    total = 0.0
    for m in range(protocol.num_messages):
        if p[m] > 0.0:
            _, var = conditional_stats(protocol, space, m)
            total += p[m] * var
    return total


def binomial_log_moment(p: float, d: int) -> float:
    """``f(p) = p * E log(1 + Binomial(d-1, p))`` via the exact binomial sum."""
    if d < 2:
        raise ValueError("candidate count d must be at least 2")
    if not -1e-12 <= p <= 1.0 + 1e-12:
        raise ValueError("p must lie in [0, 1]")
    p = min(max(p, 0.0), 1.0)
    if p == 0.0:
        return 0.0
    n = d - 1
    q = 1.0 - p
    acc = 0.0
    for k in range(1, n + 1):  # k = 0 contributes log 1 = 0
        acc += math.comb(n, k) * p ** k * q ** (n - k) * math.log1p(k)
    return p * acc


def disc_objective(protocol: Protocol, space: InputSpace, d: int) -> float:
    """Exact expected discrimination loss of the synchronized pair,
    ``sum_m p_m * E log(1 + Binomial(d-1, p_m))``."""
    p = message_probabilities(protocol, space)
    return float(sum(binomial_log_moment(pm, d) for pm in p))


def disc_objective_simplified(protocol: Protocol, space: InputSpace) -> float:
    """The single-distractor form ``sum_m p_m^2``.

    Valid for comparing protocols at d=2 only; it strips the constant
    ``log 2`` factor, so it is not a loss value.
    """
    p = message_probabilities(protocol, space)
    return float(p @ p)


def global_objective(protocol: Protocol, space: InputSpace) -> float:
    """``-I(X; S(X))``, which equals ``-H(S(X))`` for a deterministic sender.

    Inputs are treated as distinct atoms indexed by position, so the
    identity ``I(X; S(X)) = H(X) - H(X|S(X)) = H(S(X))`` holds exactly.
    """
    return -entropy(message_probabilities(protocol, space))


class SupervisedObjective(NamedTuple):
    value: float
    diversity_term: float  # sum_m P(m)^2
    purity_term: float     # sum_{m,y} P(m, y)^2


def supervised_objective(protocol: Protocol, space: InputSpace,
                         labels: LabelMap) -> SupervisedObjective:
    """Two-term supervised objective ``sum_m P(m)^2 - sum_{m,y} P(m,y)^2``.

    The first term rewards diverse messages, the second rewards label-pure
    equivalence classes. The value lies in [0, 1] and vanishes exactly when
    every class is label-pure.
    """
    p = message_probabilities(protocol, space)
    joint = joint_message_label(protocol, space, labels)
    diversity = float(p @ p)
    purity = float((joint * joint).sum())
    return SupervisedObjective(diversity - purity, diversity, purity)


def classification_objective(protocol: Protocol, space: InputSpace,
                             labels: LabelMap) -> float:
    """``-I(Y; S(X))`` from the exact joint message/label table."""
    return -mutual_information(joint_message_label(protocol, space, labels))


def convexity_check(d: int, grid_step: float = 1e-3, tol: float = 1e-9) -> bool:
    """Grid check that ``p -> binomial_log_moment(p, d)`` is convex on [0, 1].

    Evaluates central second differences on a uniform grid and requires all
    of them to be at least ``-tol``.
    """
    if grid_step > 1e-3:
        raise ValueError("grid step must be at most 1e-3")
    grid = np.arange(0.0, 1.0 + grid_step / 2, grid_step)
    vals = np.array([binomial_log_moment(p, d) for p in grid])
    second = vals[2:] - 2.0 * vals[1:-1] + vals[:-2]
    return bool(np.all(second >= -tol))


# ---------------------------------------------------------------------------
# Plug-in information quantities
# ---------------------------------------------------------------------------

def entropy(probs: np.ndarray) -> float:
    """Plug-in Shannon entropy in nats with ``0 log 0 = 0``."""
    p = np.asarray(probs, dtype=float)
    p = p[p > 0.0]
    return float(-(p * np.log(p)).sum())


def conditional_entropy(joint: np.ndarray) -> float:
    """``H(col | row)`` of a joint table whose rows are the conditioning
    variable."""
    joint = np.asarray(joint, dtype=float)
    row = joint.sum(axis=1)
    return entropy(joint.ravel()) - entropy(row)


def mutual_information(joint: np.ndarray) -> float:
    """``I(row; col)`` of a joint probability table, in nats."""
    joint = np.asarray(joint, dtype=float)
    return entropy(joint.sum(axis=1)) + entropy(joint.sum(axis=0)) \
        - entropy(joint.ravel())


def joint_message_label(protocol: Protocol, space: InputSpace,
                        labels: LabelMap) -> np.ndarray:
    """Exact joint table ``P(S(X) = m, Y = y)`` of shape (K, |Y|)."""
    if labels.size != space.size:
        raise ValueError("label map does not cover the input space")
    joint = np.zeros((protocol.num_messages, labels.num_values))
    np.add.at(joint, (protocol.assignment, labels.codes()), space.weights)
    return joint
