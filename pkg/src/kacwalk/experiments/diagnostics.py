"""Monte Carlo experiments for the walk and its couplings.

Each experiment takes an :class:`ExperimentConfig` and returns a
:class:`ResultRecord`. Batched experiments draw one stream per replica
chunk; coupling experiments draw one stream per replica.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import __version__
from ..coupling import (
    CoupledPair,
    CouplingTuning,
    contraction_factor,
    nonmarkovian_coupling_run,
    proportional_step_batch,
    two_phase_coupling,
)
from ..coupling.nonmarkovian import PAPER_A, PAPER_B
from ..errors import InvariantViolation
from ..partition import connectivity_probability
from ..rng import RngStream
from ..stats import (
    Moments,
    angular_histogram_tv,
    beta_marginal,
    histogram_noise_floor,
    ks_critical_value,
    ks_distance,
    loglog_slope,
    proportion_se,
    wilson_interval,
)
from ..walk import TWO_PI, SphereState, sample_pairs, sample_uniform_sphere
from .config import ExperimentConfig, nlogn
from .records import ResultRecord, row, start_clock, stop_clock
from .runner import map_chunks

SETUP_STREAM = 2**63


def coverage_probability(n: int, t: int) -> float:
    """Exact P[every coordinate appears among ``t`` uniform pairs].

    Inclusion-exclusion over the set of missed coordinates, in exact
    rational arithmetic.
    """
    pairs = Fraction(n * (n - 1) // 2)
    total = Fraction(0)
    for k in range(n + 1):
        left = (n - k) * (n - k - 1) // 2
        total += (-1) ** k * math.comb(n, k) * (Fraction(left) / pairs) ** t
    return float(total)


def _proportion_row(kind, statistic, hits, trials, **kw):
    p = hits / trials
    return row(kind, statistic, p, stderr=proportion_se(hits, trials),
               ci=wilson_interval(hits, trials), count=trials, **kw)


def _record(cfg, rows, clock, replicas=None, headline=0, meta=None):
    m = {"version": __version__, "chunks": math.ceil(cfg.replicas / cfg.chunk_size)}
    if meta:
        m.update(meta)
    return ResultRecord(cfg.kind, cfg.echo(), rows, replicas if cfg.per_replica else None,
                        m, headline, stop_clock(clock))


def _tuning_meta(cfg):
    return {"paper_tuning": {"a": PAPER_A, "b": PAPER_B},
            "desk_tuning": {"a": cfg.a, "b": cfg.b}}


# ---------------------------------------------------------------- contraction

def contraction_starts(cfg) -> dict:
    n = cfg.n
    e1, e2 = np.zeros(n), np.zeros(n)
    e1[0], e2[1] = 1.0, 1.0
    setup = RngStream(cfg.seed, SETUP_STREAM)
    rx = sample_uniform_sphere(n, setup).coords
    ry = sample_uniform_sphere(n, setup).coords
    return {"worst": (e1, e2), "random": (np.array(rx), np.array(ry))}


def _contraction_chunk(cfg, k, first, m, starts):
    gen = RngStream(cfg.seed, k).gen
    grid = sorted(set(cfg.t_grid))
    horizon = grid[-1]
    out = {}
    for label, (x0, y0) in starts.items():
        x = np.tile(x0, (m, 1))
        y = np.tile(y0, (m, 1))
        d0 = float(((x0 * x0 - y0 * y0) ** 2).sum())
        stats = {}
        for t in range(horizon + 1):
            if t in grid:
                d = x * x - y * y
                gap = np.einsum("ij,ij->i", d, d)
                ratio = gap / d0 if d0 > 0.0 else np.full(m, np.nan)
                stats[t] = (Moments.of(gap), Moments.of(ratio), gap)
            if t == horizon:
                break
            i, j = sample_pairs(cfg.n, m, gen)
            proportional_step_batch(x, y, i, j, TWO_PI * gen.random(m), gen)
        out[label] = stats
    return out


def contraction_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """Mean of sum_k (A_t[k] - B_t[k])^2 under the proportional coupling.

    Two starts: ``worst`` = (e1, e2) and ``random`` = a fixed Haar pair.
    Rows carry the bound ``2 (1 - 1/(2n))^t`` and the exact expectation
    ``rho^t * D_0`` with ``rho = 1 - 1/(2n) - 3/(2n(n-1))``.
    """
    clock = start_clock()
    if not cfg.t_grid:
        cfg = cfg.replace(t_grid=[1])
    starts = contraction_starts(cfg)
    parts = map_chunks(_contraction_chunk, cfg, starts)
    n = cfg.n
    rho = contraction_factor(n)
    rows, reps = [], []
    for label, (x0, y0) in starts.items():
        d0 = float(((x0 * x0 - y0 * y0) ** 2).sum())
        for t in sorted(set(cfg.t_grid)):
            gap_m, ratio_m = Moments(), Moments()
            for p in parts:
                g, r, _ = p[label][t]
                gap_m, ratio_m = gap_m.merge(g), ratio_m.merge(r)
            rows.append(row("contract", "sq_gap", gap_m.mean, n=n, t=t, label=label,
                            stderr=gap_m.se, ci=gap_m.interval(),
                            bound=2.0 * (1.0 - 1.0 / (2 * n)) ** t,
                            reference=rho ** t * d0, count=gap_m.count))
            if d0 > 0.0:
                rows.append(row("contract", "ratio", ratio_m.mean, n=n, t=t, label=label,
                                stderr=ratio_m.se, ci=ratio_m.interval(),
                                bound=(1.0 - 1.0 / (2 * n)) ** t, reference=rho ** t,
                                count=ratio_m.count))
    t_last = max(cfg.t_grid)
    for p in parts:
        reps.extend({"label": "worst", "t": t_last, "sq_gap": float(v)}
                    for v in p["worst"][t_last][2])
    headline = next((k for k, r in enumerate(rows) if r["statistic"] == "ratio"), 0)
    return _record(cfg, rows, clock, reps, headline, {"contraction_factor": rho})


# ----------------------------------------------------------- coupon collector

def _cover_times(n, horizon, m, gen):
    """Steps needed to touch every coordinate; ``horizon + 1`` if not reached."""
    covered = np.zeros((m, n), dtype=bool)
    times = np.full(m, horizon + 1, dtype=np.int64)
    rows = np.arange(m)
    for t in range(1, horizon + 1):
        i, j = sample_pairs(n, m, gen)
        covered[rows, i] = True
        covered[rows, j] = True
        new = (times > horizon) & covered.all(axis=1)
        times[new] = t
    return times


def _coupon_chunk(cfg, k, first, m, horizon):
    return _cover_times(cfg.n, horizon, m, RngStream(cfg.seed, k).gen)


def coupon_collector_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """P[tau > t] for the all-coordinates-touched time, against n e^{-t/n}.

    ``tau`` counts update steps. Also reports P[zeta > T1] with
    ``T1 = ceil(t1_factor * n log n)`` and exact inclusion-exclusion values.
    """
    clock = start_clock()
    n = cfg.n
    if not cfg.t_grid:
        cfg = cfg.replace(t_grid=[5 * n])
    t1 = math.ceil(cfg.t1_factor * nlogn(n))
    horizon = max(max(cfg.t_grid), t1)
    times = np.concatenate(map_chunks(_coupon_chunk, cfg, horizon))
    total = times.size
    rows = []
    for t in sorted(set(cfg.t_grid)):
        hits = int((times > t).sum())
        rows.append(_proportion_row("coupon", "p_tau_gt_t", hits, total, n=n, t=t,
                                    bound=min(1.0, n * math.exp(-t / n)),
                                    reference=1.0 - coverage_probability(n, t)))
    hits = int((times > t1).sum())
    rows.append(_proportion_row("coupon", "p_zeta_gt_T1", hits, total, n=n, t=t1,
                                reference=1.0 - coverage_probability(n, t1)))
    reps = [{"replica": r, "cover_time": int(v) if v <= horizon else None}
            for r, v in enumerate(times.tolist())]
    return _record(cfg, rows, clock, reps)


# --------------------------------------------------------------- small values

def _smallvals_chunk(cfg, k, first, m, threshold):
    y = sample_uniform_sphere(cfg.n, RngStream(cfg.seed, k), size=m)
    sq = y[:, 0] ** 2
    return int((sq <= threshold).sum()), int((sq <= 1.0).sum()), sq if cfg.per_replica else None


def small_values_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """P[Y[1]^2 <= n^{-3c}] for Haar Y, against the bound 2 n^{1-c}.

    The reference is the exact Beta(1/2, (n-1)/2) CDF at the threshold.
    """
    clock = start_clock()
    n, c = cfg.n, cfg.c_exp
    thr = float(n) ** (-3.0 * c)
    parts = map_chunks(_smallvals_chunk, cfg, thr)
    hits = sum(p[0] for p in parts)
    ones = sum(p[1] for p in parts)
    total = cfg.replicas
    rows = [
        _proportion_row("smallvals", "p_small", hits, total, n=n,
                        bound=2.0 * float(n) ** (1.0 - c),
                        reference=float(beta_marginal(n).cdf(thr))),
        _proportion_row("smallvals", "p_below_one", ones, total, n=n, reference=1.0),
    ]
    reps = []
    if cfg.per_replica:
        vals = np.concatenate([p[2] for p in parts])
        reps = [{"replica": r, "y1_sq": float(v)} for r, v in enumerate(vals)]
    return _record(cfg, rows, clock, reps, meta={"threshold": thr})


# ---------------------------------------------------------------------- mixing

def _mixing_chunk(cfg, k, first, m, grid):
    """Walk a batch from e1; keep X_t[1]^2 (or X_t itself for n = 2) at grid times."""
    n = cfg.n
    gen = RngStream(cfg.seed, k).gen
    x0 = np.zeros(n)
    x0[0] = 1.0
    x = np.tile(x0, (m, 1))
    touched = np.zeros((m, n), dtype=bool)
    rows = np.arange(m)
    horizon = max(grid)
    out = {}
    for t in range(horizon + 1):
        if t in grid:
            sample = x.copy() if n == 2 else x[:, 0] ** 2
            untouched = int((~touched.all(axis=1)).sum())
            in_initial = int((x == x0).any(axis=1).sum())
            out[t] = (sample, untouched, in_initial)
        if t == horizon:
            break
        i, j = sample_pairs(n, m, gen)
        th = TWO_PI * gen.random(m)
        c, s = np.cos(th), np.sin(th)
        xi, xj = x[rows, i], x[rows, j]
        x[rows, i] = c * xi - s * xj
        x[rows, j] = s * xi + c * xj
        touched[rows, i] = True
        touched[rows, j] = True
        if (t + 1) % 10_000 == 0:
            x /= np.sqrt(np.einsum("ij,ij->i", x, x))[:, None]
    return out


def mixing_diagnostics(cfg: ExperimentConfig) -> ResultRecord:
    """Distance to stationarity along a time grid, started from e1.

    For n = 2: binned angular TV against uniform with its noise floor. For
    n >= 3: KS distance of X_t[1]^2 against Beta(1/2, (n-1)/2) with the
    critical value at ``alpha``, the fraction of walks with an untouched
    coordinate, and the fraction still having some coordinate equal to its
    starting value.
    """
    clock = start_clock()
    n = cfg.n
    grid = sorted(set(cfg.t_grid)) if cfg.t_grid else (
        [1] if n == 2 else [0, math.ceil(cfg.t1_factor * nlogn(n)), math.ceil(nlogn(n)),
                            math.ceil(200 * nlogn(n))])
    cfg = cfg.replace(t_grid=grid)
    parts = map_chunks(_mixing_chunk, cfg, set(grid))
    total = cfg.replicas
    rows = []
    law = beta_marginal(n)
    crit = ks_critical_value(total, cfg.alpha)
    for t in grid:
        sample = np.concatenate([p[t][0] for p in parts])
        if n == 2:
            rows.append(row("mixing", "angular_tv", angular_histogram_tv(sample, cfg.bins),
                            n=n, t=t, bound=histogram_noise_floor(cfg.bins, total), count=total))
            continue
        rows.append(row("mixing", "ks_distance", ks_distance(sample, law.cdf), n=n, t=t,
                        bound=crit, count=total))
        untouched = sum(p[t][1] for p in parts)
        rows.append(_proportion_row("mixing", "p_untouched", untouched, total, n=n, t=t,
                                    reference=1.0 - coverage_probability(n, t)))
        in_initial = sum(p[t][2] for p in parts)
        rows.append(_proportion_row("mixing", "p_in_initial_set", in_initial, total, n=n, t=t))
    return _record(cfg, rows, clock, meta={"ks_alpha": cfg.alpha, "bins": cfg.bins})


def walk_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """Single-time stationarity check after ``steps`` steps from e1."""
    steps = cfg.steps if cfg.steps is not None else (
        1 if cfg.n == 2 else math.ceil(200 * nlogn(cfg.n)))
    rec = mixing_diagnostics(cfg.replace(kind="walk", t_grid=[steps], steps=steps))
    for r in rec.rows:
        r["kind"] = "walk"
    return rec


# ------------------------------------------------------------------- partition

def _partition_chunk(cfg, k, first, m, edges):
    return connectivity_probability(cfg.n, edges, m, RngStream(cfg.seed, k))[2]


def partition_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """Frequency with which ``edges`` uniform pairs connect all coordinates.

    The default edge count is ``ceil((1/2 + 2 epsilon) n log n)``; the
    bound ``1 - 2 n^{-epsilon}`` is attached when the edge count exceeds
    that threshold.
    """
    clock = start_clock()
    n, eps = cfg.n, cfg.epsilon
    need = (0.5 + 2.0 * eps) * nlogn(n)
    edges = cfg.edges if cfg.edges is not None else math.ceil(need)
    cfg = cfg.replace(edges=edges)
    hits = sum(map_chunks(_partition_chunk, cfg, edges))
    bound = 1.0 - 2.0 * float(n) ** (-eps) if edges > need else None
    rows = [_proportion_row("partition", "p_connected", hits, cfg.replicas, n=n, t=edges,
                            bound=bound)]
    return _record(cfg, rows, clock)


# -------------------------------------------------------------------- coupling

def near_pair(n: int, l1: float, min_sq: float, rng):
    """Two nearby sphere points with matching signs.

    ``x`` is Haar conditioned on ``min x[k]^2 >= 2 * min_sq``; ``y`` is a
    small same-sign perturbation rescaled so that
    ``sum |x^2 - y^2| <= l1`` and ``min y[k]^2 >= min_sq``.
    """
    gen = rng.gen if isinstance(rng, RngStream) else rng
    while True:
        x = sample_uniform_sphere(n, gen).coords
        if float((x * x).min()) >= 2.0 * min_sq:
            break
    w = gen.standard_normal(n)
    scale = 0.5 * l1
    while True:
        y = np.abs(x) * (1.0 + scale * w)
        y = np.sign(x) * y / np.linalg.norm(y)
        gap = float(np.abs(x * x - y * y).sum())
        if gap <= l1 and float((y * y).min()) >= min_sq:
            return np.array(x), y
        scale *= 0.5


def _check_violations(outcomes):
    bad = sum(o["closeness_violations"] for o in outcomes)
    if bad:
        raise InvariantViolation(f"{bad} closeness-bound violations across the runs")


def _couple_chunk(cfg, k, first, m, length):
    tuning = CouplingTuning(cfg.a, cfg.b)
    out = []
    for r in range(first, first + m):
        stream = RngStream(cfg.seed, r)
        x, y = near_pair(cfg.n, cfg.l1_start, cfg.min_sq, stream.child(0))
        res = nonmarkovian_coupling_run(CoupledPair(x, y), 0, length, tuning, stream)
        d = res.to_dict()
        d["replica"] = r
        out.append(d)
    return out


def _tally(kind, outcomes, n, label=""):
    m = len(outcomes)
    co = sum(o["coalesced"] for o in outcomes)
    return [
        _proportion_row(kind, "p_coalesced", co, m, n=n, label=label),
        _proportion_row(kind, "p_good_event", sum(o["good_event_ok"] for o in outcomes), m,
                        n=n, label=label),
        _proportion_row(kind, "p_partition_merged",
                        sum(o["partition_merged"] for o in outcomes), m, n=n, label=label),
        row(kind, "closeness_violations", sum(o["closeness_violations"] for o in outcomes),
            n=n, label=label, bound=0, count=m),
        row(kind, "snap_mismatches", sum(o["snap_mismatch"] for o in outcomes), n=n,
            label=label, count=m),
    ]


def couple_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """Non-Markovian coupling runs from nearby starts.

    Starts satisfy ``sum |A - B| <= l1_start`` and ``min coord^2 >=
    min_sq``; the window length defaults to ``ceil(5 n log n)``. Raises
    :class:`InvariantViolation` if any run breaks a closeness bound.
    """
    clock = start_clock()
    n = cfg.n
    length = cfg.t_phase2 if cfg.t_phase2 is not None else math.ceil(5 * nlogn(n))
    cfg = cfg.replace(t_phase2=length)
    outcomes = [o for part in map_chunks(_couple_chunk, cfg, length) for o in part]
    rows = _tally("couple", outcomes, n)
    for r in rows:
        r["t"] = length
    _check_violations(outcomes)
    return _record(cfg, rows, clock, outcomes, meta=_tuning_meta(cfg))


def phase_lengths(cfg, n):
    t1 = cfg.t_phase1 if cfg.t_phase1 is not None else math.ceil((4 * cfg.a + 5) * nlogn(n))
    t2 = cfg.t_phase2 if cfg.t_phase2 is not None else math.ceil(5 * nlogn(n))
    return t1, t2


def _coalesce_chunk(cfg, k, first, m, n):
    tuning = CouplingTuning(cfg.a, cfg.b)
    t1, t2 = phase_lengths(cfg, n)
    out = []
    for r in range(first, first + m):
        stream = RngStream(cfg.seed, r, (n,))
        if cfg.start == "random":
            x0 = sample_uniform_sphere(n, stream.child(0))
        else:
            x0 = SphereState.basis(n, 1)
        res = two_phase_coupling(x0, n, t1, t1 + t2, tuning, stream, stop_early=cfg.stop_early)
        d = res.to_dict()
        d["replica"] = r
        out.append(d)
    return out


def coalescence_experiment(cfg: ExperimentConfig) -> ResultRecord:
    """Two-phase coupling over replicas, for each dimension in ``n_grid``.

    Reports the coalescence rate, the frequencies of the three failure
    events (phase one not close, partition not merged, coupling failed
    otherwise) and the median coupling time. With two or more dimensions,
    a final row gives the log-log slope of median coupling time against
    ``n log n``.
    """
    clock = start_clock()
    grid = list(cfg.n_grid) if cfg.n_grid else [cfg.n]
    rows, reps = [], []
    medians = []
    for n in grid:
        outcomes = [o for part in map_chunks(_coalesce_chunk, cfg, n) for o in part]
        _check_violations(outcomes)
        m = len(outcomes)
        t1, t2 = phase_lengths(cfg, n)
        rows.extend(_tally("coalesce", outcomes, n))
        e1 = sum(not o["phase1_close"] for o in outcomes)
        e3 = sum(not o["partition_merged"] for o in outcomes)
        e2_rest = sum((not o["coalesced"]) and o["phase1_close"] and o["partition_merged"]
                      for o in outcomes)
        rows.append(_proportion_row("coalesce", "p_E1", e1, m, n=n, t=t1))
        rows.append(_proportion_row("coalesce", "p_E3", e3, m, n=n, t=t2,
                                    bound=min(1.0, 2.0 * float(n) ** (-cfg.epsilon))))
        rows.append(_proportion_row("coalesce", "p_E2_E1c_E3c", e2_rest, m, n=n))
        taus = [o["tau"] for o in outcomes if o["coalesced"]]
        med = float(np.median(taus)) if taus else float("nan")
        medians.append(med)
        ph1 = Moments.of([o["phase1_steps"] for o in outcomes])
        rows.append(row("coalesce", "median_tau", med, n=n, count=len(taus),
                        reference=nlogn(n)))
        rows.append(row("coalesce", "mean_phase1_steps", ph1.mean, n=n, stderr=ph1.se,
                        ci=ph1.interval(), count=m))
        for o in outcomes:
            o["n"] = n
        reps.extend(outcomes)
    if len(grid) >= 2 and all(math.isfinite(v) for v in medians):
        slope, _ = loglog_slope([nlogn(n) for n in grid], medians)
        rows.append(row("coalesce", "tau_scaling_slope", slope, reference=1.0,
                        count=len(grid)))
    meta = _tuning_meta(cfg)
    meta["phase_lengths"] = {str(n): list(phase_lengths(cfg, n)) for n in grid}
    return _record(cfg, rows, clock, reps, meta=meta)


EXPERIMENTS = {
    "walk": walk_experiment,
    "couple": couple_experiment,
    "contract": contraction_experiment,
    "coalesce": coalescence_experiment,
    "partition": partition_experiment,
    "mixing": mixing_diagnostics,
    "coupon": coupon_collector_experiment,
    "smallvals": small_values_experiment,
}


def run_experiment(cfg: ExperimentConfig) -> ResultRecord:
    return EXPERIMENTS[cfg.kind](cfg)
