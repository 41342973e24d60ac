"""Result records and their JSON-lines / CSV output."""

from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

SUMMARY_COLUMNS = ("kind", "label", "n", "t", "statistic", "estimate", "stderr",
                   "ci_low", "ci_high", "bound", "reference", "count")


def _clean(v):
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_clean(x) for x in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def row(kind, statistic, estimate, n=None, t=None, label="", stderr=None, ci=None,
        bound=None, reference=None, count=None) -> dict:
    """One summary row in the stable long format."""
    lo, hi = ci if ci is not None else (None, None)
    return {"kind": kind, "label": label, "n": n, "t": t, "statistic": statistic,
            "estimate": estimate, "stderr": stderr, "ci_low": lo, "ci_high": hi,
            "bound": bound, "reference": reference, "count": count}


@dataclass
class ResultRecord:
    """Output of one experiment.

    ``rows`` follow :data:`SUMMARY_COLUMNS`; ``replicas`` holds per-replica
    rows when requested. ``timestamp`` is the only field that varies
    between identical runs.
    """

    kind: str
    config: dict
    rows: list
    replicas: list | None = None
    meta: dict = field(default_factory=dict)
    headline: int = 0
    timestamp: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {"kind": self.kind, "config": self.config, "rows": self.rows,
                   "meta": self.meta, "headline": self.headline,
                   "timestamp": self.timestamp}
        if self.replicas is not None:
            payload["replicas"] = self.replicas
        return json.dumps(_clean(payload), sort_keys=True, separators=(",", ":"))

    def summary_line(self) -> str:
        if not self.rows:
            return f"{self.kind}: no rows"
        r = self.rows[self.headline]
        parts = [f"{self.kind}"]
        if r.get("n") is not None:
            parts.append(f"n={r['n']}")
        if r.get("t") is not None:
            parts.append(f"t={r['t']}")
        label = f"[{r['label']}]" if r.get("label") else ""
        parts.append(f"{r['statistic']}{label}={_fmt(r['estimate'])}")
        if r.get("ci_low") is not None:
            parts.append(f"99% CI [{_fmt(r['ci_low'])}, {_fmt(r['ci_high'])}]")
        if r.get("bound") is not None:
            parts.append(f"bound {_fmt(r['bound'])}")
        if r.get("reference") is not None:
            parts.append(f"reference {_fmt(r['reference'])}")
        return " ".join(parts)


def _fmt(v):
    return "nan" if v is None else f"{v:.6g}"


def start_clock() -> dict:
    return {"started": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "_t": time.perf_counter()}


def stop_clock(clock: dict) -> dict:
    return {"started": clock["started"],
            "duration_s": round(time.perf_counter() - clock["_t"], 6)}


def output_stem(kind: str, n: int, seed: int, started: str | None = None) -> str:
    stamp = started or time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    stamp = stamp.replace("-", "").replace(":", "")
    return f"{kind}_n{n}_seed{seed}_{stamp}"


def emit_results(records, path, stem: str | None = None) -> dict:
    """Write ``<stem>.jsonl`` and ``<stem>.csv`` (plus ``<stem>.replicas.csv``).

    ``path`` is the output directory; nothing is written outside it.
    Returns the paths written.
    """
    records = list(records)
    os.makedirs(path, exist_ok=True)
    if stem is None:
        if records:
            cfg = records[0].config
            stem = output_stem(records[0].kind, cfg.get("n", 0), cfg.get("seed", 0),
                               records[0].timestamp.get("started"))
        else:
            stem = output_stem("empty", 0, 0)
    out = {"jsonl": os.path.join(path, stem + ".jsonl"), "csv": os.path.join(path, stem + ".csv")}
    with open(out["jsonl"], "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
    with open(out["csv"], "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS, extrasaction="ignore")
        w.writeheader()
        for rec in records:
            for r in rec.rows:
                w.writerow({k: _csv_value(r.get(k)) for k in SUMMARY_COLUMNS})
    reps = [r for rec in records if rec.replicas for r in rec.replicas]
    if reps:
        out["replicas_csv"] = os.path.join(path, stem + ".replicas.csv")
        cols = list(dict.fromkeys(k for r in reps for k in r))
        with open(out["replicas_csv"], "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=cols)
            w.writeheader()
            for r in reps:
                w.writerow({k: _csv_value(r.get(k)) for k in cols})
    return out


def _csv_value(v):
    v = _clean(v)
    if v is None:
        return ""
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return v
