"""Protocol search: exhaustive argmin enumeration, alternating
reconstruction optimization, and balanced-partition constructors.

The exhaustive search evaluates the closed-form objective of the requested
game for every assignment of inputs to messages and keeps the whole argmin
set. The alternation for the reconstruction game interleaves a
nearest-output assignment step with a class-mean update step, exactly the
classic weighted k-means loop, and its objective trace is non-increasing.
Balanced partitions construct uniform-mass protocols directly: a greedy
variant for arbitrary weights and an adversarial variant that pairs each
point with its farthest unmatched partner.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .core import GameSpec, InputSpace, MessageSpace, Protocol
from .errors import BudgetExceededError
from .games import substream

__all__ = [
    "SearchResult",
    "exhaustive_search",
    "objective_value",
    "batch_objective",
    "canonical_assignment",
    "KMeansResult",
    "kmeans_alternation",
    "balanced_partition",
]

ENUMERATION_BUDGET = 10 ** 7


def objective_value(protocol: Protocol, space: InputSpace,
                    spec: GameSpec) -> float:
    """Closed-form objective of the given game for one protocol."""
    from . import objectives as obj
    if spec.kind == "reconstruction":
        return obj.reco_objective(protocol, space)
    if spec.kind == "discrimination":
        return obj.disc_objective(protocol, space, spec.d)
    if spec.kind == "global":
        return obj.global_objective(protocol, space)
    if spec.kind == "supervised":
        return obj.supervised_objective(protocol, space, spec.labels).value
    if spec.kind == "classification":
        return obj.classification_objective(protocol, space, spec.labels)
    raise ValueError(f"unknown game kind {spec.kind!r}")


def _entropy_rows(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    np.multiply(p, np.log(p, out=np.zeros_like(p), where=p > 0), out=out,
                where=p > 0)
    return -out.sum(axis=-1)


def _binomial_log_moment_vec(p: np.ndarray, d: int) -> np.ndarray:
    n = d - 1
    acc = np.zeros_like(p)
    q = 1.0 - p
    for k in range(1, n + 1):
        acc += math.comb(n, k) * p ** k * q ** (n - k) * math.log1p(k)
    return p * acc


def batch_objective(assignments: np.ndarray, space: InputSpace,
                    spec: GameSpec) -> np.ndarray:
    """Closed-form objective for a (batch, n) matrix of assignments."""
    assignments = np.asarray(assignments, dtype=int)
    c, n = assignments.shape
    k = int(assignments.max(initial=0)) + 1
    w = space.weights
    masses = np.zeros((c, k))
    member = [assignments == m for m in range(k)]
    for m in range(k):
        masses[:, m] = member[m] @ w

    if spec.kind == "reconstruction":
        total = space.variance()
        wx = w[:, None] * space.points
        explained = np.zeros(c)
        mu = space.mean()
        for m in range(k):
            s = member[m] @ wx  # (c, dim)
            centered = s - masses[:, m][:, None] * mu
            norm = np.einsum("ij,ij->i", centered, centered)
            np.divide(norm, masses[:, m], out=norm, where=masses[:, m] > 0)
            explained += norm
        return total - explained
    if spec.kind == "discrimination":
        return _binomial_log_moment_vec(masses, spec.d).sum(axis=1)
    if spec.kind == "global":
        return -_entropy_rows(masses)
    if spec.kind in ("supervised", "classification"):
        codes = spec.labels.codes()
        v = spec.labels.num_values
        joint = np.zeros((c, k, v))
        for m in range(k):
            for y in range(v):
                joint[:, m, y] = (member[m] & (codes == y)) @ w
        if spec.kind == "supervised":
            return (masses ** 2).sum(axis=1) - (joint ** 2).sum(axis=(1, 2))
        h_y = _entropy_rows(joint.sum(axis=1))
        h_joint = _entropy_rows(joint.reshape(c, -1))
        h_m = _entropy_rows(masses)
        return -(h_m + h_y - h_joint)
    raise ValueError(f"unknown game kind {spec.kind!r}")


class SearchResult(NamedTuple):
    value: float
    protocols: list[Protocol]


def exhaustive_search(space: InputSpace,
                      message_space: MessageSpace | int,
                      spec: GameSpec,
                      budget: int = ENUMERATION_BUDGET,
                      tie_tol: float = 1e-12,
                      chunk: int = 4096) -> SearchResult:
    """Evaluate every one of the ``K^N`` protocols and return the full
    argmin set (values tied within ``tie_tol``)."""
    k = message_space.size if isinstance(message_space, MessageSpace) \
        else int(message_space)
    n = space.size
    total = k ** n
    if total > budget:
        raise BudgetExceededError(
            f"search space has {total} protocols (budget {budget})",
            required=total)
    best = math.inf
    kept: list[tuple[float, np.ndarray]] = []
    powers = np.asarray([k ** j for j in range(n)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = ((idx[:, None] // powers) % k).astype(int)
        values = batch_objective(digits, space, spec)
        lo = float(values.min())
        if lo < best:
            best = lo
            kept = [(v, row) for v, row in kept if v <= best + tie_tol]
        for pos in np.flatnonzero(values <= best + tie_tol):
            kept.append((float(values[pos]), digits[pos].copy()))
    protocols = [Protocol(row, k) for v, row in kept if v <= best + tie_tol]
    return SearchResult(best, protocols)


def canonical_assignment(protocol: Protocol) -> tuple[int, ...]:
    """Assignment relabeled by order of first appearance, for grouping
    protocols that differ only by a message permutation."""
    mapping: dict[int, int] = {}
    out = []
    for m in protocol.assignment:
        if int(m) not in mapping:
            mapping[int(m)] = len(mapping)
        out.append(mapping[int(m)])
    return tuple(out)


# ---------------------------------------------------------------------------
# Alternating reconstruction optimization (weighted k-means)
# ---------------------------------------------------------------------------

class KMeansResult(NamedTuple):
    protocol: Protocol
    centroids: np.ndarray
    trace: list[float]
    rounds: int
    converged: bool


def kmeans_alternation(space: InputSpace, k: int,
                       init: str | Sequence = "sample", seed: int = 0,
                       max_iters: int = 100, tol: float = 0.0) -> KMeansResult:
    """Alternate nearest-centroid assignment and class-mean updates.

    ``init`` is either ``"sample"`` (a seeded draw of ``k`` distinct data
    points) or an explicit centroid array. Ties in the assignment step break
    toward the lowest message index. An empty cluster is re-seeded to the
    point farthest from its nearest centroid. The returned trace holds the
    weighted sum of squared distances after every half-step and is
    non-increasing; the final value equals the reconstruction objective of
    the returned protocol.
    """
    if not 1 <= k <= space.size:
        raise ValueError("need 1 <= K <= number of points")
    pts, w = space.points, space.weights
    if isinstance(init, str):
        if init != "sample":
            raise ValueError(f"unknown init {init!r}")
        rng = substream(seed, "kmeans-init")
        centroids = pts[rng.choice(space.size, size=k, replace=False)].copy()
    else:
        centroids = np.asarray(init, dtype=float).reshape(k, -1)
        if centroids.shape[1] != space.dim:
            raise ValueError("centroid dimension mismatch")

    trace: list[float] = []
    prev_assign = None
    prev_obj = math.inf
    rounds = 0
    converged = False
    assign = np.zeros(space.size, dtype=int)
    for _ in range(max_iters):
        rounds += 1
        assign, centroids = _assign_with_repair(pts, w, centroids)
        d2 = _sq_dists(pts, centroids)
        trace.append(float(w @ d2[np.arange(space.size), assign]))
        if prev_assign is not None and np.array_equal(assign, prev_assign):
            converged = True
            break
        for m in range(k):
            members = assign == m
            wm = w[members]
            centroids[m] = (wm / wm.sum()) @ pts[members]
        d2 = _sq_dists(pts, centroids)
        obj = float(w @ d2[np.arange(space.size), assign])
        trace.append(obj)
        if prev_obj - obj < tol:
            converged = True
            break
        prev_assign = assign
        prev_obj = obj
    protocol = Protocol(assign, k)
    return KMeansResult(protocol, centroids, trace, rounds, converged)


def _sq_dists(pts: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _assign_with_repair(pts, w, centroids):
    """Nearest-centroid assignment, re-seeding empty clusters to the point
    farthest from its nearest centroid."""
    k = centroids.shape[0]
    centroids = centroids.copy()
    for _ in range(k + 1):
        d2 = _sq_dists(pts, centroids)
        assign = np.argmin(d2, axis=1)
        empty = [m for m in range(k) if not np.any(assign == m)]
        if not empty:
            return assign, centroids
        nearest = d2[np.arange(pts.shape[0]), assign]
        centroids[empty[0]] = pts[int(np.argmax(nearest))]
    raise RuntimeError("empty-cluster repair did not converge")


# ---------------------------------------------------------------------------
# Balanced partitions
# ---------------------------------------------------------------------------

def balanced_partition(space: InputSpace, k: int,
                       flavor: str = "greedy-uniform") -> Protocol:
    """Uniform-mass protocol constructors.

    ``greedy-uniform`` places the largest remaining weight into the
    currently lightest message. ``adversarial-antipodal`` requires a uniform
    prior with exactly ``2K`` points and pairs each point with its farthest
    unmatched partner, one pair per message, producing protocols that are
    optimal for the single-distractor discrimination objective while
    deliberately merging dissimilar inputs.
    """
    if flavor == "greedy-uniform":
        order = np.argsort(-space.weights, kind="stable")
        masses = np.zeros(k)
        assign = np.zeros(space.size, dtype=int)
        for i in order:
            m = int(np.argmin(masses))
            assign[i] = m
            masses[m] += space.weights[i]
        return Protocol(assign, k)
    if flavor == "adversarial-antipodal":
        if space.size != 2 * k:
            raise ValueError("adversarial pairing requires exactly 2K points")
        if not space.is_uniform():
            raise ValueError("adversarial pairing requires a uniform prior")
        assign = np.full(space.size, -1, dtype=int)
        diff = space.points[:, None, :] - space.points[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        unmatched = list(range(space.size))
        for m in range(k):
            i = unmatched[0]
            rest = unmatched[1:]
            j = rest[int(np.argmax(d2[i, rest]))]
            assign[i] = assign[j] = m
            unmatched.remove(i)
            unmatched.remove(j)
        return Protocol(assign, k)
    raise ValueError(f"unknown flavor {flavor!r}")
