"""Independent brute-force verification of the minimal-information curves.

The search space is the grid family the optimality proofs reduce to: four
equal-weight states, one per (mu, nu) response class with the canonical
signs, and per-state setting conditionals quantized to multiples of 1/N
(joint grid for the retrocausal class, factorized for causal, factorized
with an unbiased Y side for one-sided).  Feasible points must reproduce the
uniform setting distribution exactly and reach the target CHSH value; the
search returns the least mutual information over all of them.

With exact uniformity every feasible point is a bona fide uniform-settings
model, so the analytic curve at its achieved S is a rigorous lower bound on
its information cost; the searches here verify that the curves are attained
up to grid resolution.

The enumeration is exhaustive but organized as a meet-in-the-middle scan:
state pairs are tabulated by their joint contribution to the setting
marginal and to the CHSH value, and the two halves are joined on exactly
complementary contributions.  Equal-value ties resolve to the first hit in
lexicographic grid order, so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CausalClass,
    DomainError,
    HiddenState,
    Model,
    NoFeasibleModel,
    SettingDist,
    mutual_information,
    setting_index,
)
from .models import LAMBDA_CLASSES, OutcomeSigns

__all__ = [
    "SearchConfig",
    "SearchResult",
    "BoundChainReport",
    "brute_force_min_info",
    "verify_bound_chain",
]

_LOG2 = math.log(2.0)

#: Special setting cell (flat index) per (mu, nu) class: (x, y) = (1-nu, 1-mu).
_SPECIAL = tuple(setting_index(1 - nu, 1 - mu) for mu, nu in LAMBDA_CLASSES)


@dataclass(frozen=True)
class SearchConfig:
    """Grid search parameters.

    resolution is the probability grid denominator N; tolerance is the slack
    subtracted from target_s when testing feasibility (the uniform-marginal
    constraint is enforced exactly on the grid).
    """

    resolution: int
    target_s: float
    causal_class: CausalClass
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.resolution < 4:
            raise DomainError("SearchConfig: resolution must be >= 4")
        if self.tolerance <= 0.0:
            raise DomainError("SearchConfig: tolerance must be positive")


@dataclass(frozen=True)
class SearchResult:
    best_info: float
    best_model: Model


def brute_force_min_info(cfg: SearchConfig) -> SearchResult:
    """Minimal mutual information over the feasible grid family, with a witness model."""
    if cfg.causal_class is CausalClass.RETROCAUSAL:
        return _search_retrocausal(cfg)
    if cfg.causal_class is CausalClass.CAUSAL:
        return _search_causal(cfg)
    if cfg.causal_class is CausalClass.ONE_SIDED:
        return _search_one_sided(cfg)
    raise DomainError(
        "brute_force_min_info supports the retrocausal, causal and one-sided classes"
    )


def _build_model(dists: list[SettingDist], label: str) -> Model:
    signs = OutcomeSigns()
    states = tuple(
        HiddenState(0.25, dist, signs.responses_for(mu, nu))
        for (mu, nu), dist in zip(LAMBDA_CLASSES, dists)
    )
    return Model(states, label=label)


# ---------------------------------------------------------------------------
# retrocausal: joint grid
# ---------------------------------------------------------------------------


def _compositions4(total: int) -> np.ndarray:
    """All nonnegative integer 4-vectors summing to total, in lexicographic order."""
    rows = []
    for a in range(total + 1):
        for b in range(total - a + 1):
            for c in range(total - a - b + 1):
                rows.append((a, b, c, total - a - b - c))
    return np.array(rows, dtype=np.int64)


def _row_entropies(counts: np.ndarray, n: int) -> np.ndarray:
    probs = counts / n
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(probs > 0, -probs * np.log(probs), 0.0)
    return terms.sum(axis=1) / _LOG2


def _special_budget(cfg: SearchConfig, scale: int) -> int:
    """Largest allowed total special-cell mass (in grid units of 1/scale per state)."""
    budget = math.floor(scale * (4.0 - cfg.target_s + cfg.tolerance) / 2.0 + 1e-12)
    return min(budget, 4 * scale)


def _retro_half(
    options: np.ndarray, entropies: np.ndarray, sp_first: int, sp_second: int, n: int, budget: int
) -> np.ndarray:
    """Dense table F[c0, c1, c2, q] = max entropy sum over ordered state pairs.

    (c0, c1, c2) are the pair's cell mass sums for the first three settings
    (the fourth is implied), q the summed special-cell mass.  Cell sums above
    n cannot be completed to an exactly uniform model and are dropped.
    """
    q_first = options[:, sp_first]
    order = np.argsort(options[:, sp_second], kind="stable")
    second = options[order]
    second_h = entropies[order]
    second_q = second[:, sp_second]
    # options with special mass <= x, for prefix slicing
    limit = np.searchsorted(second_q, np.arange(budget + 1), side="right")
    table = np.full((n + 1, n + 1, n + 1, budget + 1), -np.inf)
    for i in range(len(options)):
        qa = int(q_first[i])
        if qa > budget:
            continue
        m = limit[budget - qa]
        if m == 0:
            continue
        k = options[i]
        c0 = k[0] + second[:m, 0]
        c1 = k[1] + second[:m, 1]
        c2 = k[2] + second[:m, 2]
        c3 = k[3] + second[:m, 3]
        ok = (c0 <= n) & (c1 <= n) & (c2 <= n) & (c3 <= n)
        if not ok.any():
            continue
        np.maximum.at(
            table,
            (c0[ok], c1[ok], c2[ok], qa + second_q[:m][ok]),
            entropies[i] + second_h[:m][ok],
        )
    return table


def _retro_pair_from(
    options: np.ndarray,
    entropies: np.ndarray,
    sp_first: int,
    sp_second: int,
    cells: tuple[int, int, int],
    q: int,
    value: float,
    n: int,
) -> tuple[np.ndarray, np.ndarray]:
    """First (lex) ordered option pair matching a half table entry."""
    c3 = 2 * n - sum(cells)
    target = np.array([cells[0], cells[1], cells[2], c3], dtype=np.int64)
    for i in range(len(options)):
        k2 = target - options[i]
        if k2.min() < 0:
            continue
        if int(options[i][sp_first] + k2[sp_second]) != q:
            continue
        j_h = _row_entropies(k2[None, :], n)[0]
        if entropies[i] + j_h >= value - 1e-9:
            return options[i], k2
    raise NoFeasibleModel("internal: half witness not found")  # pragma: no cover


def _search_retrocausal(cfg: SearchConfig) -> SearchResult:
    n = cfg.resolution
    budget = _special_budget(cfg, n)
    if budget < 0:
        raise NoFeasibleModel(f"target S {cfg.target_s!r} unreachable on the grid")
    options = _compositions4(n)
    entropies = _row_entropies(options, n)

    # halves: (lam00, lam10) with specials (cell 3, cell 2); (lam01, lam11) with (1, 0)
    table_a = _retro_half(options, entropies, _SPECIAL[0], _SPECIAL[1], n, budget)
    table_b = _retro_half(options, entropies, _SPECIAL[2], _SPECIAL[3], n, budget)

    best_b_upto = np.maximum.accumulate(table_b, axis=3)
    flipped = best_b_upto[::-1, ::-1, ::-1, :]  # complement cell sums: c -> n - c
    best_val = -np.inf
    best_at = None
    for qa in range(budget + 1):
        cand = table_a[:, :, :, qa] + flipped[:, :, :, budget - qa]
        val = cand.max()
        if val > best_val:
            best_val = val
            best_at = (qa, np.unravel_index(int(cand.argmax()), cand.shape))
    if not np.isfinite(best_val):
        raise NoFeasibleModel("no grid model meets the marginal and CHSH constraints")

    qa, cells_a = best_at
    cells_a = tuple(int(c) for c in cells_a)
    cells_b = tuple(n - c for c in cells_a)
    # smallest special mass q_b achieving the joined maximum on the B side
    col_b = table_b[cells_b[0], cells_b[1], cells_b[2], : budget - qa + 1]
    qb = int(np.argmax(col_b == col_b.max()))
    k1, k2 = _retro_pair_from(
        options, entropies, _SPECIAL[0], _SPECIAL[1], cells_a, qa, float(table_a[cells_a][qa]), n
    )
    k3, k4 = _retro_pair_from(
        options, entropies, _SPECIAL[2], _SPECIAL[3], cells_b, qb, float(col_b[qb]), n
    )
    dists = [SettingDist.joint((row / n).tolist()) for row in (k1, k2, k3, k4)]
    model = _build_model(dists, label=f"oracle-retro(N={n}, target={cfg.target_s!r})")
    return SearchResult(best_info=mutual_information(model), best_model=model)


# ---------------------------------------------------------------------------
# causal: factorized grid
# ---------------------------------------------------------------------------


def _causal_half_arrays(n: int, budget: int, h_grid: np.ndarray):
    """Enumerate ordered (A1, B1, A2, B2) per half; A, B are special-side masses.

    Returns (a1, b1, a2, b2, q, value) filtered to summed special products
    q = A1*B1 + A2*B2 within the CHSH budget.
    """
    rng = np.arange(n + 1, dtype=np.int64)
    a1, b1, a2, b2 = (g.ravel() for g in np.meshgrid(rng, rng, rng, rng, indexing="ij"))
    q = a1 * b1 + a2 * b2
    keep = q <= budget
    a1, b1, a2, b2, q = a1[keep], b1[keep], a2[keep], b2[keep], q[keep]
    value = h_grid[a1] + h_grid[b1] + h_grid[a2] + h_grid[b2]
    return a1, b1, a2, b2, q, value


def _causal_raw(a: np.ndarray, b: np.ndarray, mu: int, nu: int, n: int):
    """Raw grid marginals (i, j) = N*(P(x=0), P(y=0)) for a class-(mu, nu) state."""
    i = (n - a) if nu == 0 else a
    j = (n - b) if mu == 0 else b
    return i, j


def _segmented_prefix_max(keys: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Running maxima of values within equal-key runs (keys sorted ascending)."""
    out = values.copy()
    shift = 1
    m = len(out)
    while shift < m:
        same = keys[shift:] == keys[:-shift]
        np.maximum(out[shift:], np.where(same, out[:-shift], -np.inf), out=out[shift:])
        shift <<= 1
    return out


def _search_causal(cfg: SearchConfig) -> SearchResult:
    n = cfg.resolution
    budget = _special_budget(cfg, n * n)
    if budget < 0:
        raise NoFeasibleModel(f"target S {cfg.target_s!r} unreachable on the grid")
    h_grid = np.array([_binary_entropy_float(k / n) for k in range(n + 1)])

    a1, b1, a2, b2, q_a, val_a = _causal_half_arrays(n, budget, h_grid)
    i1, j1 = _causal_raw(a1, b1, *LAMBDA_CLASSES[0], n)
    i2, j2 = _causal_raw(a2, b2, *LAMBDA_CLASSES[1], n)
    si_a, sj_a, sij_a = i1 + i2, j1 + j2, i1 * j1 + i2 * j2

    a3, b3, a4, b4, q_b, val_b = _causal_half_arrays(n, budget, h_grid)
    i3, j3 = _causal_raw(a3, b3, *LAMBDA_CLASSES[2], n)
    i4, j4 = _causal_raw(a4, b4, *LAMBDA_CLASSES[3], n)
    si_b, sj_b, sij_b = i3 + i4, j3 + j4, i3 * j3 + i4 * j4

    nn = n * n
    keep_b = sij_b <= nn
    key_b = ((si_b[keep_b] * (2 * n + 1) + sj_b[keep_b]) * (nn + 1) + sij_b[keep_b]).astype(np.int64)
    qb = q_b[keep_b]
    vb = val_b[keep_b]
    idx_b = np.nonzero(keep_b)[0]

    qcap = 1
    while qcap <= budget + 1:
        qcap <<= 1
    sort_key = key_b * qcap + qb
    order = np.argsort(sort_key, kind="stable")
    sorted_keys = sort_key[order]
    sorted_group = key_b[order]
    prefix = _segmented_prefix_max(sorted_group, vb[order])

    keep_a = sij_a <= nn
    key_a = ((2 * n - si_a[keep_a]) * (2 * n + 1) + (2 * n - sj_a[keep_a])) * (nn + 1) + (
        nn - sij_a[keep_a]
    )
    want = key_a.astype(np.int64) * qcap + (budget - q_a[keep_a])
    pos = np.searchsorted(sorted_keys, want, side="right") - 1
    valid = pos >= 0
    pos_c = np.clip(pos, 0, len(sorted_keys) - 1)
    valid &= sorted_group[pos_c] == key_a
    totals = np.where(valid, val_a[keep_a] + prefix[pos_c], -np.inf)
    if not np.isfinite(totals.max()):
        raise NoFeasibleModel("no grid model meets the marginal and CHSH constraints")

    row = int(totals.argmax())
    idx_a = np.nonzero(keep_a)[0][row]
    half_a = (int(a1[idx_a]), int(b1[idx_a]), int(a2[idx_a]), int(b2[idx_a]))
    # B-side witness: first sorted entry in the matching key run, value equal to the
    # prefix max at or before pos (ties resolve to the smallest special mass)
    p = int(pos_c[row])
    target_val = prefix[p]
    run = p
    while run > 0 and sorted_group[run - 1] == sorted_group[p]:
        run -= 1
    seg = slice(run, p + 1)
    hit = run + int(np.argmax(vb[order][seg] >= target_val - 1e-12))
    b_idx = idx_b[order[hit]]
    half_b = (int(a3[b_idx]), int(b3[b_idx]), int(a4[b_idx]), int(b4[b_idx]))

    ab = (
        (half_a[0], half_a[1]),
        (half_a[2], half_a[3]),
        (half_b[0], half_b[1]),
        (half_b[2], half_b[3]),
    )
    dists = []
    for (mu, nu), (a, b) in zip(LAMBDA_CLASSES, ab):
        px0 = (n - a) / n if nu == 0 else a / n
        py0 = (n - b) / n if mu == 0 else b / n
        dists.append(SettingDist.factorized(px0, py0))
    model = _build_model(dists, label=f"oracle-causal(N={n}, target={cfg.target_s!r})")
    return SearchResult(best_info=mutual_information(model), best_model=model)


def _binary_entropy_float(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -(p * math.log(p) + (1 - p) * math.log(1 - p)) / _LOG2


# ---------------------------------------------------------------------------
# one-sided: factorized grid, unbiased Y
# ---------------------------------------------------------------------------


def _search_one_sided(cfg: SearchConfig) -> SearchResult:
    n = cfg.resolution
    budget = math.floor(n * (4.0 - cfg.target_s + cfg.tolerance) + 1e-12)
    if budget < 0:
        raise NoFeasibleModel(f"target S {cfg.target_s!r} unreachable on the grid")
    h_grid = np.array([_binary_entropy_float(k / n) for k in range(n + 1)])
    rng = np.arange(n + 1, dtype=np.int64)
    a1, a2, a3, a4 = np.meshgrid(rng, rng, rng, rng, indexing="ij")
    feasible = (a1 + a2 == a3 + a4) & (a1 + a2 + a3 + a4 <= budget)
    value = h_grid[a1] + h_grid[a2] + h_grid[a3] + h_grid[a4]
    value = np.where(feasible, value, -np.inf)
    if not np.isfinite(value.max()):
        raise NoFeasibleModel("no grid model meets the marginal and CHSH constraints")
    best = np.unravel_index(int(value.argmax()), value.shape)
    dists = []
    for (mu, nu), a in zip(LAMBDA_CLASSES, best):
        px0 = (n - int(a)) / n if nu == 0 else int(a) / n
        dists.append(SettingDist.factorized(px0, 0.5))
    model = _build_model(dists, label=f"oracle-onesided(N={n}, target={cfg.target_s!r})")
    return SearchResult(best_info=mutual_information(model), best_model=model)


# ---------------------------------------------------------------------------
# bound chain
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundChainReport:
    """Per-model audit of the CHSH upper bounds and their saturation conditions.

    The inequalities are guaranteed for models whose derived setting
    distribution is uniform (marginal_uniform); the causal fields are None
    when the per-state conditionals do not factorize.
    """

    classes: tuple[tuple[int, int], ...]
    s_value: float
    marginal_uniform: bool
    general_bound: float
    general_saturated: bool
    p_min: float
    p_min_bound: float
    p_min_saturated: bool
    causal_bound: float | None
    causal_saturated: bool | None
    s_within_general: bool
    s_within_p_min: bool
    s_within_causal: bool | None


def _state_class(st: HiddenState) -> tuple[int, int]:
    mu = 0 if st.a(1) == st.a(0) else 1
    nu = 0 if st.b(1) == st.b(0) else 1
    return mu, nu


def verify_bound_chain(m: Model, tol: float = 1e-9) -> BoundChainReport:
    """Classify each state, evaluate the CHSH bound chain, and test saturation."""
    from .core import chsh_value, derived_marginal, is_factorized_per_lambda

    classes = tuple(_state_class(st) for st in m.states)
    s_value = chsh_value(m)
    marg = derived_marginal(m)
    uniform = all(abs(p - 0.25) <= 1e-9 for p in marg.probs)

    general = 0.0
    general_sat = True
    p_min = min(min(st.dist.probs) for st in m.states if st.weight > 0.0)
    p_min_sat = True
    for st, (mu, nu) in zip(m.states, classes):
        if st.weight <= 0.0:
            continue
        special = st.dist.probs[setting_index(1 - nu, 1 - mu)]
        gap = 1.0 - 2.0 * special
        general += 4.0 * st.weight * abs(gap)
        if abs(gap) > tol and st.a(0) * st.b(0) != (-1) ** (mu * nu) * (1 if gap > 0 else -1):
            general_sat = False
        if min(abs(special - p_min), abs(special - (1.0 - p_min))) > tol:
            p_min_sat = False
    p_min_sat = p_min_sat and general_sat
    p_min_bound = 4.0 - 8.0 * p_min

    causal_bound = None
    causal_sat = None
    if is_factorized_per_lambda(m):
        causal_bound = 0.0
        causal_sat = general_sat
        for st, (mu, nu) in zip(m.states, classes):
            if st.weight <= 0.0:
                continue
            px0, py0 = st.dist.px0(), st.dist.py0()
            pmin_x = min(px0, 1.0 - px0)
            pmin_y = min(py0, 1.0 - py0)
            causal_bound += st.weight * (4.0 - 8.0 * pmin_x * pmin_y)
            p_xbar = px0 if nu == 1 else 1.0 - px0
            p_ybar = py0 if mu == 1 else 1.0 - py0
            if abs(p_xbar - pmin_x) > tol or abs(p_ybar - pmin_y) > tol:
                causal_sat = False

    return BoundChainReport(
        classes=classes,
        s_value=s_value,
        marginal_uniform=uniform,
        general_bound=general,
        general_saturated=general_sat,
        p_min=p_min,
        p_min_bound=p_min_bound,
        p_min_saturated=p_min_sat,
        causal_bound=causal_bound,
        causal_saturated=causal_sat,
        s_within_general=s_value <= general + tol,
        s_within_p_min=s_value <= p_min_bound + tol,
        s_within_causal=None if causal_bound is None else s_value <= causal_bound + tol,
    )
