"""Protocol analysis metrics: message variance, random baselines, purity,
topographic similarity, disentanglement scores, cluster variance and
discrimination accuracy.

Message variance follows the empirical recipe exactly: classes are formed
from the dataset, pairwise squared distances are summed over ordered pairs
including self-pairs, each class sum is divided by its cardinality, and the
total by ``2N``. Under that ordered-pair convention the metric coincides
with the unexplained-variance objective on uniform-weight spaces. The
random baseline shuffles the input-to-message assignment while preserving
class cardinalities.

Disentanglement scores are mutual-information gaps normalized per unit
(position, vocabulary symbol, or attribute) and averaged over units; units
with zero entropy contribute 0 (the 0/0 convention). All information
quantities are plug-in values from exact joint weight tables, in nats; the
scores themselves are ratios and therefore base-free.
"""

from __future__ import annotations

import itertools
import math
import warnings
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .core import InputSpace, LabelMap, MessageSpace, Protocol, \
    equivalence_classes
from .errors import BudgetExceededError, MetricUndefinedError
from .games import GameSpec, substream, synchronized_receiver

__all__ = [
    "unique_messages",
    "message_variance",
    "random_baseline",
    "purity",
    "max_purity",
    "topsim",
    "levenshtein",
    "disentanglement",
    "cluster_variance",
    "discrimination_accuracy",
]


def unique_messages(protocol: Protocol) -> int:
    return int(protocol.used_messages().size)


def message_variance(protocol: Protocol, space: InputSpace) -> float:
    """Class-normalized pairwise spread ``(1/2N) sum_m (1/|[m]|)
    sum_{x1,x2 in [m]} ||x1 - x2||^2`` over ordered pairs with self-pairs.

    Counts inputs as dataset rows (the empirical measure); on uniform-weight
    spaces the value equals the unexplained-variance objective exactly.
    """
    total = 0.0
    for members in equivalence_classes(protocol):
        if members.size == 0:
            continue
        pts = space.points[members]
        n_m = members.size
        sq = np.einsum("ij,ij->i", pts, pts)
        s = pts.sum(axis=0)
        pair_sum = 2.0 * (n_m * sq.sum() - float(s @ s))
        total += pair_sum / n_m
    return total / (2.0 * space.size)


def random_baseline(protocol: Protocol, space: InputSpace,
                    metric: Callable[[Protocol, InputSpace], float],
                    repeats: int = 100, seed: int = 0,
                    exact: bool = False,
                    exact_budget: int = 100_000) -> tuple[float, float]:
    """Mean and population std of a metric over class-size-preserving
    shuffles of the assignment.

    ``exact=True`` enumerates every distinct assignment with the given class
    cardinalities (all equally likely under a uniform shuffle) instead of
    sampling. Non-uniform weights trigger a warning: a shuffle preserves
    class cardinalities, not class masses.
    """
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    if not space.is_uniform():
        warnings.warn("random baseline preserves class cardinalities; with "
                      "non-uniform weights the class masses change under "
                      "shuffling")
    if exact:
        values = [metric(Protocol(np.asarray(a, dtype=int),
                                  protocol.num_messages), space)
                  for a in _distinct_shuffles(protocol.assignment,
                                              exact_budget)]
    else:
        rng = substream(seed, "baseline")
        values = []
        for _ in range(repeats):
            perm = rng.permutation(space.size)
            values.append(metric(Protocol(protocol.assignment[perm],
                                          protocol.num_messages), space))
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std(ddof=0))


def _distinct_shuffles(assignment: np.ndarray, budget: int):
    """All distinct rearrangements of the assignment multiset."""
    counts = {}
    for m in assignment:
        counts[int(m)] = counts.get(int(m), 0) + 1
    total = math.factorial(len(assignment))
    for c in counts.values():
        total //= math.factorial(c)
    if total > budget:
        raise BudgetExceededError(
            f"{total} distinct shuffles exceed budget {budget}",
            required=total)

    def rec(prefix, remaining, n_left):
        if n_left == 0:
            yield tuple(prefix)
            return
        for m in sorted(remaining):
            if remaining[m] == 0:
                continue
            remaining[m] -= 1
            prefix.append(m)
            yield from rec(prefix, remaining, n_left - 1)
            prefix.pop()
            remaining[m] += 1

    yield from rec([], dict(counts), len(assignment))


def purity(protocol: Protocol, space: InputSpace, labels: LabelMap) -> float:
    """Mass-weighted average over messages of the majority-label fraction."""
    from .objectives import joint_message_label
    joint = joint_message_label(protocol, space, labels)
    return float(joint.max(axis=1).sum())


def max_purity(protocol: Protocol, space: InputSpace,
               attributes: Sequence[LabelMap]) -> float:
    """Per-message maximum purity over the attributes, averaged by mass."""
    from .objectives import joint_message_label
    if not attributes:
        raise ValueError("max purity needs at least one attribute")
    per_attr = np.stack([
        joint_message_label(protocol, space, lab).max(axis=1)
        for lab in attributes
    ])
    return float(per_attr.max(axis=0).sum())


def topsim(protocol: Protocol, space: InputSpace,
           message_space: MessageSpace) -> float:
    """Spearman correlation between input-pair distances (Euclidean) and
    message-pair distances, over all unordered input pairs.

    Ties get average ranks. A constant distance vector on either side makes
    the correlation undefined and raises.
    """
    if space.size < 2:
        raise MetricUndefinedError("topsim needs at least two inputs")
    iu = np.triu_indices(space.size, k=1)
    diff = space.points[iu[0]] - space.points[iu[1]]
    input_d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    msg_d = message_space.distance_matrix()[
        protocol.assignment[iu[0]], protocol.assignment[iu[1]]]
    if np.ptp(input_d) == 0.0 or np.ptp(msg_d) == 0.0:
        raise MetricUndefinedError("topsim undefined (zero variance)")
    rho = stats.spearmanr(input_d, msg_d).statistic
    return float(rho)


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance for variable-length messages; on equal-length
    sequences of the spaces used here it reduces to Hamming distance."""
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1,
                           prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# ---------------------------------------------------------------------------
# Disentanglement
# ---------------------------------------------------------------------------

def _weighted_joint(codes_a: np.ndarray, codes_b: np.ndarray,
                    weights: np.ndarray) -> np.ndarray:
    joint = np.zeros((codes_a.max() + 1, codes_b.max() + 1))
    np.add.at(joint, (codes_a, codes_b), weights)
    return joint


def disentanglement(protocol: Protocol, space: InputSpace,
                    message_space: MessageSpace,
                    attributes: Sequence[LabelMap],
                    kind: str = "posdis") -> float:
    """Mutual-information-gap scores over message units.

    ``posdis`` treats each message position as a unit, ``bosdis`` each
    vocabulary symbol's occurrence count, and the gap (difference between
    the two largest MI values against the attributes) is normalized by the
    unit's entropy. ``sposdis`` flips the roles: the gap is taken per
    attribute over the positions and normalized by the attribute's entropy.
    Scores are means over units and lie in [0, 1].
    """
    if message_space.kind != "hamming":
        raise ValueError("disentanglement needs a symbol-sequence message "
                         "space")
    from .objectives import entropy, mutual_information
    seqs = np.asarray([message_space.atoms[m] for m in protocol.assignment],
                      dtype=int)
    attr_codes = [lab.codes() for lab in attributes]
    w = space.weights

    if kind in ("posdis", "bosdis"):
        if len(attributes) < 2:
            raise ValueError(f"{kind} needs at least two attributes "
                             "(the MI gap is taken over attributes)")
        if kind == "posdis":
            units = [seqs[:, j] for j in range(message_space.length)]
        else:
            units = [(seqs == v).sum(axis=1)
                     for v in range(message_space.vocab_size)]
        terms = []
        for u in units:
            h_u = entropy(_weighted_joint(u, np.zeros_like(u), w).sum(axis=1))
            if h_u <= 0.0:
                terms.append(0.0)
                continue
            mis = sorted((mutual_information(_weighted_joint(u, a, w))
                          for a in attr_codes), reverse=True)
            terms.append((mis[0] - mis[1]) / h_u)
        return float(np.mean(terms))

    if kind == "sposdis":
        if message_space.length < 2:
            raise ValueError("sposdis needs at least two message positions "
                             "(the MI gap is taken over positions)")
        terms = []
        for a in attr_codes:
            h_a = entropy(_weighted_joint(a, np.zeros_like(a), w).sum(axis=1))
            if h_a <= 0.0:
                terms.append(0.0)
                continue
            mis = sorted((mutual_information(
                _weighted_joint(seqs[:, j], a, w))
                for j in range(message_space.length)), reverse=True)
            terms.append((mis[0] - mis[1]) / h_a)
        return float(np.mean(terms))
    raise ValueError(f"unknown disentanglement kind {kind!r}")


# ---------------------------------------------------------------------------
# Cluster variance (symbol-group-restricted message spaces)
# ---------------------------------------------------------------------------

def cluster_variance(protocol: Protocol, space: InputSpace,
                     message_space: MessageSpace,
                     symbol_groups: Sequence[Sequence[int]]) -> float:
    """Message variance after merging messages whose symbols share a group.

    ``symbol_groups`` must partition the vocabulary, and every used message
    must draw all its symbols from a single group (mirroring generation
    that masks out all other symbols); offending messages are rejected.
    """
    if message_space.kind != "hamming":
        raise ValueError("cluster variance needs a symbol-sequence message "
                         "space")
    groups = [frozenset(int(s) for s in g) for g in symbol_groups]
    seen: set[int] = set()
    for g in groups:
        if g & seen:
            raise ValueError("symbol groups must be disjoint")
        seen |= g
    if seen != set(range(message_space.vocab_size)):
        raise ValueError("symbol groups must cover the whole vocabulary")
    group_of_symbol = {s: gi for gi, g in enumerate(groups) for s in g}

    merged = np.zeros(space.size, dtype=int)
    for i, m in enumerate(protocol.assignment):
        gids = {group_of_symbol[s] for s in message_space.atoms[m]}
        if len(gids) != 1:
            raise ValueError(
                f"message {message_space.atom_string(int(m))!r} mixes "
                "symbols from different groups")
        merged[i] = gids.pop()
    return message_variance(Protocol(merged, len(groups)), space)


# ---------------------------------------------------------------------------
# Discrimination accuracy
# ---------------------------------------------------------------------------

def discrimination_accuracy(protocol: Protocol, space: InputSpace,
                            receiver_kind: str = "synchronized",
                            d: int = 41, seed: int = 0, trials: int = 1,
                            mode: str = "auto",
                            distractors: str = "replacement",
                            budget: int = 10 ** 7) -> float:
    """Probability of picking the target's position among ``d`` candidates.

    Distractors are i.i.d. draws from the prior; with the default
    ``replacement`` law a distractor may duplicate the target (matching the
    game definition), while ``exclude-target`` renormalizes the prior over
    the other inputs. ``synchronized`` picks the argmax of the synchronized
    discrimination receiver, ``reconstruction-nearest`` the candidate
    closest to the conditional-mean reconstruction; ties break uniformly at
    random. Exact mode enumerates every distractor tuple and averages the
    analytic tie-break probability; Monte-Carlo simulates ``trials`` seeded
    episodes per input.
    """
    if receiver_kind not in ("synchronized", "reconstruction-nearest"):
        raise ValueError(f"unknown receiver kind {receiver_kind!r}")
    if distractors not in ("replacement", "exclude-target"):
        raise ValueError(f"unknown distractor law {distractors!r}")
    msgs = protocol.assignment
    recon = None
    if receiver_kind == "reconstruction-nearest":
        recon = synchronized_receiver(protocol, space,
                                      GameSpec("reconstruction"))

    def distractor_weights(i: int) -> np.ndarray:
        if distractors == "replacement":
            return space.weights
        w = space.weights.copy()
        w[i] = 0.0
        total = w.sum()
        if total <= 0.0:
            raise ValueError("exclude-target needs at least two inputs")
        return w / total

    terms = space.size ** (d - 1) * space.size
    if mode == "auto":
        mode = "exact" if terms <= budget else "mc"

    if mode == "exact":
        if terms > budget:
            raise BudgetExceededError(
                f"exact accuracy needs {terms} terms (budget {budget})",
                required=terms)
        acc = 0.0
        for i in range(space.size):
            dw = distractor_weights(i)
            support = np.flatnonzero(dw > 0.0)
            hit = 0.0
            for distr in itertools.product(support, repeat=d - 1):
                w = float(np.prod(dw[list(distr)])) if d > 1 else 1.0
                hit += w * _correct_probability(i, distr, msgs, space, recon)
            acc += space.weights[i] * hit
        return float(acc)

    if mode == "mc":
        rng = substream(seed, "accuracy")
        acc = 0.0
        for i in range(space.size):
            dw = distractor_weights(i)
            correct = 0
            for _ in range(trials):
                distr = tuple(rng.choice(space.size, size=d - 1, p=dw))
                p = _correct_probability(i, distr, msgs, space, recon)
                correct += int(rng.random() < p)
            acc += space.weights[i] * (correct / trials)
        return float(acc)
    raise ValueError(f"unknown mode {mode!r}")


def _correct_probability(i, distractors, msgs, space, recon) -> float:
    """Chance the receiver's (tie-broken) pick lands on the target's slot.

    The candidate tuple is position-exchangeable, so the target slot can sit
    first without loss of generality.
    """
    if recon is None:
        share = 1 + sum(1 for c in distractors if msgs[c] == msgs[i])
        return 1.0 / share
    target = recon.point(int(msgs[i]))
    cands = np.concatenate([[i], list(distractors)]).astype(int)
    dist = np.linalg.norm(space.points[cands] - target, axis=1)
    lo = dist.min()
    ties = np.isclose(dist, lo, rtol=0.0, atol=1e-12)
    return float(ties[0]) / float(ties.sum())
