"""The non-Markovian coupling and the two-phase coupling built on it.

Over a window ``[t0, t_end)`` both chains share one pair schedule. The
partition process is built backward from ``t_end``; at non-merge times the
chains use the proportional coupling, and at each merge time the angles are
drawn from the maximal coupling of the block statistic of the block that
holds ``i``. If every merge coupling succeeds, the squared coordinates agree
block by block at every later time and the chains meet at ``t_end``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..errors import UsageError
from ..partition import PairSchedule, build_partitions, is_fully_merged
from ..rng import RngStream, as_generator
from ..walk import TWO_PI, SphereState, sample_pairs, sample_uniform_sphere
from .arcsine import coupled_cos2
from .proportional import CoupledPair, proportional_update

CLOSENESS_TOL = 1e-9

PAPER_A = 47.0
PAPER_B = 18.1
DESK_A = 8.0
DESK_B = 3.0


@dataclass(frozen=True)
class CouplingTuning:
    """Exponents for the coupling events.

    ``a`` sets the phase-one closeness target ``n**-a``; ``b`` sets the
    small-coordinate floor ``n**-b / 2``. ``p``, ``q`` and ``q_prime``
    default to ``b``, ``a - 1`` and ``2(a - 1)/5``; they only enter the
    reported success bound. ``coalescence_snap_tol`` defaults to
    ``1e-6 * sqrt(n)``.
    """

    a: float = PAPER_A
    b: float = PAPER_B
    p: float | None = None
    q: float | None = None
    q_prime: float | None = None
    coalescence_snap_tol: float | None = None

    def __post_init__(self):
        if self.p is None:
            object.__setattr__(self, "p", float(self.b))
        if self.q is None:
            object.__setattr__(self, "q", float(self.a) - 1.0)
        if self.q_prime is None:
            object.__setattr__(self, "q_prime", 2.0 * (float(self.a) - 1.0) / 5.0)

    @classmethod
    def paper(cls) -> "CouplingTuning":
        return cls(PAPER_A, PAPER_B)

    @classmethod
    def desk(cls) -> "CouplingTuning":
        return cls(DESK_A, DESK_B)

    @property
    def hypotheses_hold(self) -> bool:
        """Whether ``1 < p < q' < q/2`` holds."""
        return 1.0 < self.p < self.q_prime < self.q / 2.0

    @property
    def c(self) -> float:
        return min(self.q_prime / 2.0, self.q - 2.0 * self.q_prime)

    def snap_tol(self, n: int) -> float:
        if self.coalescence_snap_tol is not None:
            return float(self.coalescence_snap_tol)
        return 1e-6 * math.sqrt(n)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["c"] = self.c
        d["hypotheses_hold"] = self.hypotheses_hold
        return d


@dataclass
class CouplingOutcome:
    """Per-run record of a coupling attempt.

    ``good_event_ok`` is the event that every block-sum equality and every
    sign condition held through ``t_end``; ``b_event_ok`` that the y-chain
    kept every squared coordinate at or above ``n**-b / 2``.
    ``phase1_close`` is the complement of the phase-one failure event and
    is ``None`` for a bare non-Markovian run.
    """

    n: int
    t0: int
    t_end: int
    coalesced: bool
    tau: int | None
    good_event_ok: bool
    b_event_ok: bool
    partition_merged: bool
    phase1_close: bool | None
    merge_success: tuple
    l1_start: float
    l1_final: float
    l2_final: float
    closeness_violations: int = 0
    snap_mismatch: bool = False
    phase1_steps: int | None = None
    seed: dict | None = None
    tuning: dict | None = None
    x_final: np.ndarray | None = field(default=None, repr=False, compare=False)
    y_final: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("x_final", "y_final")}
        d["merge_success"] = [bool(s) for s in self.merge_success]
        d["merges_failed"] = int(sum(not s for s in self.merge_success))
        return d


def _seed_echo(rng):
    if isinstance(rng, RngStream):
        return {"seed": rng.seed, "stream_id": rng.stream_id, "path": list(rng.path)}
    return None


def _coords(s):
    return np.array(s.coords if isinstance(s, SphereState) else s, dtype=np.float64)


def nonmarkovian_coupling_run(start: CoupledPair, t0: int, t_end: int, tuning: CouplingTuning,
                              rng, schedule: PairSchedule | None = None,
                              check_invariants: bool = True, on_step=None) -> CouplingOutcome:
    """Couple two chains over ``[t0, t_end)`` with the non-Markovian coupling.

    Parameters
    ----------
    start : CoupledPair
        States at time ``t0``.
    t0, t_end : int
        Window; ``t0 < t_end``.
    tuning : CouplingTuning
    rng : RngStream or Generator
    schedule : PairSchedule, optional
        Shared pair schedule; sampled from ``rng`` when omitted.
    check_invariants : bool
        Count violations of the block-wise l1 closeness bounds while the
        good event holds.
    on_step : callable, optional
        Called as ``on_step(t, x, y, labels, is_merge)`` after the step at
        time ``t``, with the arrays at time ``t + 1`` and block labels of
        the partition at ``t + 1`` (``None`` if the partition is not fully
        merged). The arrays must not be modified.

    Returns
    -------
    CouplingOutcome
        On declared coalescence ``y`` is set to ``x`` and ``tau = t_end``.
    """
    if not t0 < t_end:
        raise UsageError(f"need t0 < t_end, got [{t0}, {t_end})")
    gen = as_generator(rng)
    x, y = _coords(start.x), _coords(start.y)
    n = x.size
    length = t_end - t0
    if schedule is None:
        schedule = PairSchedule.sample(n, length, gen, t0)
    elif schedule.n != n or schedule.t0 != t0 or schedule.t_end != t_end:
        raise UsageError("schedule does not match the coupling window")
    parts = build_partitions(schedule)
    merged = is_fully_merged(parts)
    ii, jj = schedule.as_arrays()
    ii, jj = ii.tolist(), jj.tolist()
    thetas = (TWO_PI * gen.random(length)).tolist()

    d0 = x * x - y * y
    l1_start = float(np.abs(d0).sum())
    floor = 0.5 * float(n) ** (-tuning.b)
    b_ok = True
    good = merged
    successes = []
    violations = 0
    labels = np.zeros(n, dtype=np.intp) if merged else None
    next_label = 1
    merge_at = {}
    if merged:
        for m in parts.merges:
            rest = np.array([r for r in m.block_i if r != m.i], dtype=np.intp)
            merge_at[m.time] = (rest, np.array(m.block_j, dtype=np.intp))
    bound_block = l1_start + CLOSENESS_TOL
    bound_total = n * l1_start + CLOSENESS_TOL

    for k in range(length):
        t = t0 + k
        i, j = ii[k], jj[k]
        if b_ok and float((y * y).min()) < floor:
            b_ok = False
        is_merge = t in merge_at
        if not merged:
            c, s = math.cos(thetas[k]), math.sin(thetas[k])
            xi, xj, yi, yj = x[i], x[j], y[i], y[j]
            x[i], x[j] = c * xi - s * xj, s * xi + c * xj
            y[i], y[j] = c * yi - s * yj, s * yi + c * yj
        elif is_merge:
            rest, block_j = merge_at[t]
            xi, xj, yi, yj = x[i], x[j], y[i], y[j]
            A = float(x[rest] @ x[rest])
            C = float(y[rest] @ y[rest])
            B = xi * xi + xj * xj
            D = yi * yi + yj * yj
            rx, ry = math.hypot(xi, xj), math.hypot(yi, yj)
            if B > 0.0 and D > 0.0:
                u, u2, sc, ss, ok = coupled_cos2(A, B, C, D, gen)
            else:
                # no statistic to couple; share one uniform angle
                psi = TWO_PI * gen.random()
                u = u2 = math.cos(psi) ** 2
                sc = 1.0 if math.cos(psi) >= 0.0 else -1.0
                ss = 1.0 if math.sin(psi) >= 0.0 else -1.0
                ok = B == D and A == C
            x[i] = sc * rx * math.sqrt(u)
            x[j] = ss * rx * math.sqrt(1.0 - u)
            y[i] = sc * ry * math.sqrt(u2)
            y[j] = ss * ry * math.sqrt(1.0 - u2)
            successes.append(ok)
            good = good and ok
            labels[block_j] = next_label
            next_label += 1
        else:
            proportional_update(x, y, i, j, thetas[k], gen)
        if good and (x[i] * y[i] < 0.0 or x[j] * y[j] < 0.0):
            good = False
        if good and check_invariants:
            d = np.abs(x * x - y * y)
            if (np.bincount(labels, weights=d).max() > bound_block
                    or float(d.sum()) > bound_total):
                violations += 1
        if on_step is not None:
            on_step(t, x, y, labels, is_merge)

    dist = float(np.linalg.norm(x - y))
    snap = merged and good and all(successes)
    coalesced = snap and dist <= tuning.snap_tol(n)
    if coalesced:
        y = x.copy()
    d = x * x - y * y
    return CouplingOutcome(
        n=n, t0=t0, t_end=t_end, coalesced=coalesced, tau=t_end if coalesced else None,
        good_event_ok=bool(good), b_event_ok=b_ok, partition_merged=merged,
        phase1_close=None, merge_success=tuple(successes), l1_start=l1_start,
        l1_final=float(np.abs(d).sum()), l2_final=float(np.linalg.norm(x - y)),
        closeness_violations=violations, snap_mismatch=bool(snap and not coalesced),
        seed=_seed_echo(rng), tuning=tuning.to_dict(), x_final=x, y_final=y)


def phase_one_done(x, y, a: float) -> bool:
    """Complement of the phase-one failure event at the current state."""
    n = x.size
    return float(np.abs(x * x - y * y).sum()) <= float(n) ** (-a) and float((x * y).min()) >= 0.0


def two_phase_coupling(x0, n: int, t_phase1: int, t_total: int, tuning: CouplingTuning, rng,
                       y0=None, stop_early: bool = False,
                       check_invariants: bool = True) -> CouplingOutcome:
    """Proportional coupling for ``t_phase1`` steps, then the non-Markovian one.

    ``Y_0`` is Haar unless ``y0`` is given. With ``stop_early`` the first
    phase ends at the first time the closeness event holds (at most
    ``t_phase1`` steps) and the second phase keeps its length
    ``t_total - t_phase1``; ``tau`` then counts the steps actually used.
    """
    if not 0 <= t_phase1 < t_total:
        raise UsageError(f"need 0 <= t_phase1 < t_total, got {t_phase1}, {t_total}")
    gen = as_generator(rng)
    x = _coords(x0)
    if x.size != n:
        raise UsageError(f"x0 has dimension {x.size}, expected {n}")
    y = _coords(y0) if y0 is not None else _coords(sample_uniform_sphere(n, gen))
    SphereState(x), SphereState(y)
    ii, jj = sample_pairs(n, t_phase1, gen)
    th = TWO_PI * gen.random(t_phase1)
    t1 = t_phase1
    if stop_early and phase_one_done(x, y, tuning.a):
        t1 = 0
    else:
        for k, (i, j, theta) in enumerate(zip(ii.tolist(), jj.tolist(), th.tolist())):
            proportional_update(x, y, i, j, theta, gen)
            if stop_early and phase_one_done(x, y, tuning.a):
                t1 = k + 1
                break
    x /= math.sqrt(float(x @ x))
    y /= math.sqrt(float(y @ y))
    close = phase_one_done(x, y, tuning.a)
    length = t_total - t_phase1
    out = nonmarkovian_coupling_run(CoupledPair(SphereState(x), SphereState(y), t1), t1,
                                    t1 + length, tuning, gen, check_invariants=check_invariants)
    out.phase1_close = close
    out.phase1_steps = t1
    out.seed = _seed_echo(rng)
    return out
