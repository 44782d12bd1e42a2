"""Experiment grid: generate instances, run methods, emit JSON Lines rows."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .instance import Instance, generate_instance
from .lrp import solve_lrp
from .solvers import (
    DEFAULT_BUDGET,
    RATIO_TOL,
    BudgetExceeded,
    SolveReport,
    algorithm4,
    combined,
    exact_bruteforce,
    independent,
)

METHODS = ("exact", "lp", "algorithm4", "independent", "combined")


@dataclass
class ExperimentConfig:
    hubs: List[int]
    nonhubs: List[int]
    instances: int
    mode: str = "general"
    seed: int = 0
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    output: str = "results.jsonl"
    exact_budget: int = DEFAULT_BUDGET
    workers: int = 1
    record_time: bool = False

    def __post_init__(self):
        problems = []
        if not self.hubs or any(h < 3 for h in self.hubs):
            problems.append("hubs must be a non-empty list of integers >= 3")
        if not self.nonhubs or any(n < 1 for n in self.nonhubs):
            problems.append("nonhubs must be a non-empty list of positive integers")
        if self.instances < 1:
            problems.append("instances must be positive")
        if self.mode not in ("general", "assumption1"):
            problems.append(f"unknown mode {self.mode!r}")
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            problems.append(f"methods must be drawn from {METHODS}, got {self.methods}")
        if self.workers < 1:
            problems.append("workers must be positive")
        if problems:
            raise ValueError("; ".join(problems))


def _int_list(value, name) -> List[int]:
    # accepts [3, 4, 5] or {"min": 3, "max": 5}
    if isinstance(value, dict):
        return list(range(int(value["min"]), int(value["max"]) + 1))
    if isinstance(value, int):
        return [value]
    if isinstance(value, list) and all(isinstance(v, int) for v in value):
        return list(value)
    raise ValueError(f"{name}: expected an integer list or {{min, max}}")


def load_config(path) -> ExperimentConfig:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    doc["hubs"] = _int_list(doc.get("hubs"), "hubs")
    doc["nonhubs"] = _int_list(doc.get("nonhubs"), "nonhubs")
    known = set(ExperimentConfig.__dataclass_fields__)
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return ExperimentConfig(**doc)


def instance_seed(seed: int, h: int, n: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, h, n, index]).generate_state(1)[0])


def _num(v: Optional[float]) -> Optional[float]:
    if v is None:
        return None
    v = float(v)
    return v if np.isfinite(v) else None


def report_row(report: SolveReport, h: int, n: int, seed, record_time: bool) -> dict:
    row = {
        "h": h,
        "n": n,
        "seed": seed,
        "method": report.method,
        "assignment": None if report.assignment is None else [int(a) + 1 for a in report.assignment],
        "cost": _num(report.cost),
        "lp_value": _num(report.lp_value),
        "w1": _num(report.w1),
        "w2": _num(report.w2),
        "exact_cost": _num(report.exact_cost),
        "ratio_vs_exact": _num(report.ratio_vs_exact),
        "guarantee": _num(report.guarantee),
        "within_guarantee": report.within_guarantee,
        "wall_time": round(report.wall_time, 6) if record_time else None,
    }
    if report.cost is None:
        del row["cost"], row["assignment"]
    return row


def run_methods(
    instance: Instance,
    methods: Sequence[str],
    budget: int = DEFAULT_BUDGET,
    seed: Optional[int] = None,
    with_exact: bool = True,
) -> List[SolveReport]:
    """Run ``methods`` on one instance, sharing one relaxation and one exact solve."""
    exact_cost = None
    exact_report = None
    if "exact" in methods or with_exact:
        t0 = time.perf_counter()
        try:
            a, exact_cost = exact_bruteforce(instance, budget)
            exact_report = SolveReport(a, exact_cost, None, None, None, 1.0, "exact",
                                       wall_time=time.perf_counter() - t0)
        except BudgetExceeded:
            if "exact" in methods:
                raise
    lp = None
    if any(m != "exact" for m in methods):
        t0 = time.perf_counter()
        lp = solve_lrp(instance)
        lp_time = time.perf_counter() - t0
    reports = []
    for m in methods:
        if m == "exact":
            rep = exact_report
            rep.lp_value = lp.value if lp else None
            rep.w1 = lp.split.w1 if lp else None
            rep.w2 = lp.split.w2 if lp else None
        elif m == "lp":
            rep = SolveReport(None, None, lp.value, lp.split.w1, lp.split.w2, 1.0, "lp", wall_time=lp_time)
        elif m == "algorithm4":
            if seed is None:
                rep = algorithm4(instance, lp=lp)
            else:
                rep = algorithm4(instance, mode="randomized", seed=seed, lp=lp)
                # a single random draw carries only an in-expectation bound
                rep.guarantee = None
            rep.wall_time += lp_time
        elif m == "independent":
            rep = independent(instance, lp=lp)
            rep.wall_time += lp_time
        elif m == "combined":
            rep = combined(instance, lp=lp)
            rep.wall_time += lp_time
        else:
            raise ValueError(f"unknown method {m!r}")
        rep.exact_cost = exact_cost
        reports.append(rep)
    return reports


def _run_task(args) -> List[dict]:
    cfg, h, n, index = args
    seed = instance_seed(cfg.seed, h, n, index)

    def error_row(method, exc):
        return {"h": h, "n": n, "seed": seed, "instance": index, "method": method,
                "error": f"{type(exc).__name__}: {exc}"}

    failed = {}
    try:
        inst = generate_instance(h, n, cfg.mode, seed)
        try:
            reports = run_methods(inst, cfg.methods, cfg.exact_budget)
        except BudgetExceeded as exc:
            # only the exact row fails; the rest run without a reference optimum
            failed["exact"] = exc
            others = [m for m in cfg.methods if m != "exact"]
            reports = run_methods(inst, others, cfg.exact_budget) if others else []
    except Exception as exc:  # recorded per row, the grid keeps going
        return [error_row(m, exc) for m in cfg.methods]
    # run_methods returns reports in the order the methods were given
    remaining = iter(reports)
    rows = []
    for m in cfg.methods:
        if m in failed:
            rows.append(error_row(m, failed[m]))
            continue
        row = report_row(next(remaining), h, n, seed, cfg.record_time)
        rows.append({"h": h, "n": n, "seed": seed, "instance": index, **row})
    return rows


def run_bench(cfg: ExperimentConfig) -> List[dict]:
    tasks = [(cfg, h, n, k) for h in cfg.hubs for n in cfg.nonhubs for k in range(cfg.instances)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def dump_rows(rows: Iterable[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=False) + "\n" for r in rows)


def read_rows(path) -> List[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def summarize(rows: Iterable[dict]) -> List[dict]:
    """Per (h, method): worst ratio against the exact optimum and the tightest margin."""
    groups: Dict[tuple, dict] = {}
    for r in rows:
        key = (r["h"], r["method"])
        g = groups.setdefault(key, {"h": r["h"], "method": r["method"], "rows": 0, "errors": 0,
                                    "max_ratio": None, "guarantee": None, "min_margin": None,
                                    "violations": 0})
        g["rows"] += 1
        if "error" in r:
            g["errors"] += 1
            continue
        ratio = r.get("ratio_vs_exact")
        if ratio is None:
            continue
        g["max_ratio"] = ratio if g["max_ratio"] is None else max(g["max_ratio"], ratio)
        if r.get("guarantee") is not None:
            gval = r["guarantee"]
            g["guarantee"] = gval if g["guarantee"] is None else min(g["guarantee"], gval)
            margin = gval - ratio
            g["min_margin"] = margin if g["min_margin"] is None else min(g["min_margin"], margin)
            if ratio > gval + RATIO_TOL:
                g["violations"] += 1
    return [groups[k] for k in sorted(groups)]


def format_summary(summary: List[dict]) -> str:
    def f(v):
        # round first so float noise around zero never prints as -0.000000
        return "-" if v is None else f"{round(v, 6) + 0.0:.6f}"

    header = f"{'h':>3} {'method':<12} {'rows':>5} {'max_ratio':>10} {'guarantee':>10} {'margin':>10} {'viol':>5} {'err':>4}"
    lines = [header, "-" * len(header)]
    for g in summary:
        lines.append(
            f"{g['h']:>3} {g['method']:<12} {g['rows']:>5} {f(g['max_ratio']):>10} "
            f"{f(g['guarantee']):>10} {f(g['min_margin']):>10} {g['violations']:>5} {g['errors']:>4}"
        )
    return "\n".join(lines)
