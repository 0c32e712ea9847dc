"""Seeded Monte-Carlo rounds from a model, with an adversary that predicts every outcome.

Two sampling orders realize the two causal stories: source-first draws the
hidden state and then the settings from its factorized conditionals, while
settings-first draws the settings and then the hidden state from its
posterior.  Both induce the same joint law on (lambda, x, y, a, b).

The round stream comes from numpy's Philox counter-based generator (algorithm
identifier recorded in RNG_ALGORITHM), so identical (model, n, seed, order)
always reproduce the same rounds.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum, unique

import numpy as np

from ._util import atomic_write_text
from .core import (
    DomainError,
    MissingSetting,
    Model,
    OrderUnavailable,
    SETTINGS,
    derived_marginal,
    is_factorized_per_lambda,
    posterior_weights,
    setting_index,
)

__all__ = [
    "RNG_ALGORITHM",
    "SampleOrder",
    "RoundRecord",
    "EmpiricalStats",
    "sample_rounds",
    "empirical_stats",
    "chsh_standard_error",
    "rounds_to_csv",
    "rounds_from_csv",
]

#: Identifier of the pseudo-random stream backing sample_rounds.
RNG_ALGORITHM = "numpy-philox4x64"

_LOG2 = math.log(2.0)

_CSV_HEADER = ["round", "lambda", "x", "y", "a", "b", "pred_a", "pred_b"]


@unique
class SampleOrder(Enum):
    SOURCE_FIRST = "source-first"
    SETTINGS_FIRST = "settings-first"


@dataclass(frozen=True, slots=True)
class RoundRecord:
    """One experiment round, including the adversary's outcome predictions."""

    lambda_index: int
    x: int
    y: int
    a: int
    b: int
    predicted_a: int
    predicted_b: int


@dataclass(frozen=True)
class EmpiricalStats:
    s_hat: float
    info_hat: float
    prediction_accuracy: float


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def sample_rounds(m: Model, n: int, seed: int, order: SampleOrder) -> list[RoundRecord]:
    """Draw n rounds from the model under the given sampling order.

    Source-first needs per-state factorized conditionals (it samples
    x ~ p(x|lambda) and y ~ p(y|lambda) independently) and raises
    OrderUnavailable otherwise.  Outcomes are set deterministically from the
    response functions, and the adversary's predictions with them.
    """
    if n < 1:
        raise DomainError("sample_rounds needs n >= 1")
    rng = _generator(seed)
    n_states = len(m.states)

    if order is SampleOrder.SOURCE_FIRST:
        if not is_factorized_per_lambda(m):
            raise OrderUnavailable(
                "source-first sampling needs p(x,y|lambda) = p(x|lambda) p(y|lambda)"
            )
        u = rng.random((n, 3))
        cum_w = np.cumsum([st.weight for st in m.states])
        lam = np.searchsorted(cum_w, u[:, 0], side="right")
        lam = np.minimum(lam, n_states - 1)
        px0 = np.array([st.dist.px0() for st in m.states])
        py0 = np.array([st.dist.py0() for st in m.states])
        xs = (u[:, 1] >= px0[lam]).astype(np.int64)
        ys = (u[:, 2] >= py0[lam]).astype(np.int64)
    elif order is SampleOrder.SETTINGS_FIRST:
        u = rng.random((n, 2))
        marg = derived_marginal(m)
        cum_s = np.cumsum(marg.probs)
        sidx = np.searchsorted(cum_s, u[:, 0], side="right")
        sidx = np.minimum(sidx, 3)
        cum_post = np.zeros((4, n_states))
        for k, (x, y) in enumerate(SETTINGS):
            if marg.prob(x, y) > 0.0:
                cum_post[k] = np.cumsum(posterior_weights(m, x, y))
            else:
                cum_post[k] = 1.0  # never drawn
        lam = (u[:, 1, None] > cum_post[sidx]).sum(axis=1)
        lam = np.minimum(lam, n_states - 1)
        xs = sidx // 2
        ys = sidx % 2
    else:  # pragma: no cover
        raise DomainError(f"unknown sample order {order!r}")

    resp_a = np.array([[st.a(0), st.a(1)] for st in m.states])
    resp_b = np.array([[st.b(0), st.b(1)] for st in m.states])
    avals = resp_a[lam, xs]
    bvals = resp_b[lam, ys]

    return [
        RoundRecord(li, xi, yi, ai, bi, ai, bi)
        for li, xi, yi, ai, bi in zip(
            lam.tolist(), xs.tolist(), ys.tolist(), avals.tolist(), bvals.tolist()
        )
    ]


def _arrays_from_rounds(rounds: list[RoundRecord]):
    lam = np.fromiter((r.lambda_index for r in rounds), dtype=np.int64, count=len(rounds))
    xs = np.fromiter((r.x for r in rounds), dtype=np.int64, count=len(rounds))
    ys = np.fromiter((r.y for r in rounds), dtype=np.int64, count=len(rounds))
    avals = np.fromiter((r.a for r in rounds), dtype=np.int64, count=len(rounds))
    bvals = np.fromiter((r.b for r in rounds), dtype=np.int64, count=len(rounds))
    pa = np.fromiter((r.predicted_a for r in rounds), dtype=np.int64, count=len(rounds))
    pb = np.fromiter((r.predicted_b for r in rounds), dtype=np.int64, count=len(rounds))
    return lam, xs, ys, avals, bvals, pa, pb


def empirical_stats(rounds: list[RoundRecord]) -> EmpiricalStats:
    """Plug-in estimates of S, the setting/source information, and the prediction rate."""
    if not rounds:
        raise DomainError("empirical_stats needs at least one round")
    lam, xs, ys, avals, bvals, pa, pb = _arrays_from_rounds(rounds)
    n = len(rounds)
    sidx = 2 * xs + ys

    s_hat = 0.0
    for x, y in SETTINGS:
        mask = sidx == setting_index(x, y)
        cnt = int(mask.sum())
        if cnt == 0:
            raise MissingSetting(f"setting ({x},{y}) never occurs in the round log")
        corr = float((avals[mask] * bvals[mask]).mean())
        s_hat += corr if (x, y) != (1, 1) else -corr

    n_lam = int(lam.max()) + 1
    joint = np.zeros((n_lam, 4))
    np.add.at(joint, (lam, sidx), 1.0)
    joint /= n
    p_lam = joint.sum(axis=1)
    p_set = joint.sum(axis=0)
    info = 0.0
    for i in range(n_lam):
        for k in range(4):
            pij = joint[i, k]
            if pij > 0.0:
                info += pij * math.log(pij / (p_lam[i] * p_set[k]))
    info_hat = info / _LOG2

    accuracy = float(((pa == avals) & (pb == bvals)).mean())
    return EmpiricalStats(s_hat=s_hat, info_hat=info_hat, prediction_accuracy=accuracy)


def chsh_standard_error(rounds: list[RoundRecord]) -> float:
    """Standard error of the empirical S from the binomial variance of each correlator."""
    _, xs, ys, avals, bvals, _, _ = _arrays_from_rounds(rounds)
    sidx = 2 * xs + ys
    var = 0.0
    for x, y in SETTINGS:
        mask = sidx == setting_index(x, y)
        cnt = int(mask.sum())
        if cnt == 0:
            raise MissingSetting(f"setting ({x},{y}) never occurs in the round log")
        corr = float((avals[mask] * bvals[mask]).mean())
        var += max(0.0, 1.0 - corr * corr) / cnt
    return math.sqrt(var)


def rounds_to_csv(rounds: list[RoundRecord], path: str | None = None) -> str:
    """Render rounds as CSV `round,lambda,x,y,a,b,pred_a,pred_b` (LF endings)."""
    lines = [",".join(_CSV_HEADER)]
    for i, r in enumerate(rounds):
        lines.append(
            f"{i},{r.lambda_index},{r.x},{r.y},{r.a},{r.b},{r.predicted_a},{r.predicted_b}"
        )
    text = "\n".join(lines) + "\n"
    if path is not None:
        atomic_write_text(path, text)
    return text


def rounds_from_csv(path: str) -> list[RoundRecord]:
    out = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != _CSV_HEADER:
            raise DomainError(f"unexpected round-log header {header!r}")
        for row in reader:
            _, lam, x, y, a, b, pa, pb = (int(v) for v in row)
            out.append(RoundRecord(lam, x, y, a, b, pa, pb))
    return out
