"""Seeded experiment runners and the metrics report they fill."""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import kendalltau

from .exceptions import NonFiniteResult, ValidationError
from .likelihood import PreferenceBatch
from .models import match_components, per_component_mse, softmax_mse
from .poset import decompose
from .quadrature import DEFAULT_RULE, QuadratureRule
from .simulate import simulate_rankings
from .training import OptimizerConfig, em_fit, fit_single_mnl

RECOVERY_FACTOR = 10.0


def parse_trim(text: str | None) -> tuple[int, int] | None:
    """``'10of50'`` -> ``(10, 50)``: drop the 10 worst rows out of 50."""
    if text in (None, "", "0"):
        return None
    m = re.fullmatch(r"\s*(\d+)\s*of\s*(\d+)\s*", str(text))
    if not m:
        raise ValidationError(f"trim must look like '10of50', got {text!r}")
    drop, total = int(m.group(1)), int(m.group(2))
    if total < 1 or drop >= total:
        raise ValidationError("trim must drop fewer rows than it keeps")
    return drop, total


@dataclass
class MetricsReport:
    """Per-seed rows plus aggregates recomputed from them.

    ``metric`` names the column aggregated (lower is better when trimming).
    """

    rows: list = field(default_factory=list)
    metric: str = "mse"

    def add(self, **row) -> None:
        self.rows.append(row)

    def values(self) -> np.ndarray:
        return np.array([float(r[self.metric]) for r in self.rows if r.get(self.metric) is not None])

    def aggregate(self, trim: str | tuple | None = None) -> dict:
        """Mean and standard error; with ``trim='DofN'`` also the mean after dropping the worst rows.

        When the row count differs from ``N`` the dropped count is scaled
        to ``round(D * rows / N)``.
        """
        v = self.values()
        out = {"n": int(v.size), "mean": float(np.mean(v)) if v.size else math.nan,
               "stderr": float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else math.nan}
        t = parse_trim(trim) if isinstance(trim, (str, type(None))) else trim
        if t is not None and v.size:
            drop = int(round(t[0] * v.size / t[1]))
            kept = np.sort(v)[: v.size - drop] if drop else v
            out["trimmed_mean"] = float(np.mean(kept))
            out["dropped"] = drop
        return out

    def columns(self) -> list:
        cols: list = []
        for r in self.rows:
            for k in r:
                if k not in cols:
                    cols.append(k)
        return cols

    def table(self) -> tuple[list, list]:
        cols = self.columns()
        return cols, [[r.get(c, "") for c in cols] for r in self.rows]


def kendall_tau(a, b) -> float:
    return float(kendalltau(a, b).statistic)


def single_mnl_trial(n_items: int, n_rankings: int, p: float, seed, quad: QuadratureRule = DEFAULT_RULE,
                     opt: OptimizerConfig | None = None) -> dict:
    """Simulate, fit one MNL and score it against the truth."""
    sample = simulate_rankings(n_items, n_rankings, p, seed=seed)
    start = time.perf_counter()
    batch = PreferenceBatch.from_rankings(sample.rankings, n_items)
    fit = fit_single_mnl(batch, None, opt, quad)
    ms = 1000.0 * (time.perf_counter() - start)
    w, truth = fit.model.params, sample.utilities[0]
    return {"N": n_items, "n": n_rankings, "p": p, "seed": seed, "mse": softmax_mse(w, truth),
            "tau": kendall_tau(w, truth), "loss": fit.loss_trace[-1], "steps": len(fit.loss_trace) - 1,
            "converged": fit.converged, "ms": ms}


def mixture_trial(n_items: int, n_rankings: int, p: float, k: int, seed, *, init: str = "cluster",
                  B: int = 20, m_steps: int = 50, quad: QuadratureRule = DEFAULT_RULE,
                  opt: OptimizerConfig | None = None, floor: bool = True, tol: float = 0.0,
                  sample=None) -> dict:
    """Simulate a k-mixture, fit it by EM and score matched components.

    A component counts as recovered when its matched softmax-MSE is below
    ten times the MSE of a single MNL fit on the rankings it truly generated.
    """
    sample = sample or simulate_rankings(n_items, n_rankings, p, n_components=k, seed=seed)
    rows = [decompose(r) for r in sample.rankings]
    start = time.perf_counter()
    res = em_fit(sample.rankings, k, B, opt, quad, seed, init=init, m_steps=m_steps,
                 n_items=n_items, tol=tol)
    ms = 1000.0 * (time.perf_counter() - start)
    est = [c.params for c in res.mixture.components]
    perm, mse = match_components(est, sample.utilities)
    per = per_component_mse(est, sample.utilities, perm)
    row = {"N": n_items, "n": n_rankings, "p": p, "k": k, "seed": seed, "init": init, "mse": mse,
           "degenerate": res.degenerate, "rounds": res.state.iteration, "ms": ms}
    for r, v in enumerate(per):
        row[f"mse_{r}"] = float(v)
    if floor:
        batch = PreferenceBatch(rows, n_items)
        floors = [softmax_mse(fit_single_mnl(batch, None, opt, quad,
                                             (sample.labels == r).astype(float)).model.params,
                              sample.utilities[r]) for r in range(k)]
        row["recovered"] = bool(np.all(per < RECOVERY_FACTOR * np.asarray(floors)))
        for r, v in enumerate(floors):
            row[f"floor_{r}"] = float(v)
    return row


def scaling_trial(n_items: int, n_rankings: int, p: float, seed, quad: QuadratureRule = DEFAULT_RULE,
                  steps: int = 5) -> dict:
    """Time decomposition plus ``steps`` AdaGrad steps at one universe size."""
    sample = simulate_rankings(n_items, n_rankings, p, seed=seed)
    start = time.perf_counter()
    batch = PreferenceBatch.from_rankings(sample.rankings, n_items)
    fit = fit_single_mnl(batch, None, OptimizerConfig(max_steps=steps, gradient_tolerance=0.0), quad)
    ms = 1000.0 * (time.perf_counter() - start)
    loss = fit.loss_trace[-1]
    if not math.isfinite(loss):
        raise NonFiniteResult(f"non-finite loss at N={n_items}")
    return {"N": n_items, "n": n_rankings, "p": p, "seed": seed, "loss": loss, "ms": ms}


def loglog_slope(x, y) -> float:
    """Least-squares slope of log y against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


def single_evaluation(n_items: int, p: float, seed, quad: QuadratureRule = DEFAULT_RULE) -> dict:
    """One likelihood-and-gradient evaluation of a random poset over ``n_items``."""
    sample = simulate_rankings(n_items, 1, p, seed=seed)
    batch = PreferenceBatch.from_rankings(sample.rankings, n_items)
    start = time.perf_counter()
    value, grad, _ = batch.value_and_grad(sample.utilities[0], quad)
    ms = 1000.0 * (time.perf_counter() - start)
    return {"N": n_items, "loglik": value, "grad_finite": bool(np.all(np.isfinite(grad))),
            "finite": bool(math.isfinite(value) and np.all(np.isfinite(grad))), "ms": ms}


def bar_chart_svg(labels: Sequence[str], values: Sequence[float], title: str = "",
                  width: int = 480, height: int = 300) -> str:
    """Plain SVG bar chart of non-negative values."""
    values = [float(v) for v in values]
    top = max(values + [1e-12])
    pad, n = 40, max(len(values), 1)
    bar_w = (width - 2 * pad) / n
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>']
    for i, (lab, v) in enumerate(zip(labels, values)):
        h = (height - 2 * pad) * max(v, 0.0) / top
        x = pad + i * bar_w + 0.1 * bar_w
        y = height - pad - h
        parts.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{0.8 * bar_w:.1f}" height="{h:.1f}" fill="#4477aa"/>')
        parts.append(f'<text x="{x + 0.4 * bar_w:.1f}" y="{height - pad + 15}" text-anchor="middle" '
                     f'font-size="11">{_esc(str(lab))}</text>')
        parts.append(f'<text x="{x + 0.4 * bar_w:.1f}" y="{y - 4:.1f}" text-anchor="middle" '
                     f'font-size="10">{v:.3f}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
