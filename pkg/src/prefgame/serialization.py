"""JSON forms of instances, traces and analysis reports.

Rationals are always written as exact ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .core import (
    AnchoredInstance,
    Graph,
    Instance,
    Metric,
    cycle_metric,
    line_metric,
    make_metric,
    to_rational,
    tree_metric,
)
from .dynamics import Trace
from .optimize import INFINITE, AnalysisReport


def rational_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text) -> Fraction:
    if isinstance(text, float):
        raise ValueError(f"decimal value {text!r}; write rationals as \"p/q\" strings")
    return to_rational(text)


def metric_to_dict(metric: Metric) -> dict:
    src = dict(metric.source or {"kind": "matrix", "matrix": metric.dist})
    kind = src["kind"]
    if kind == "matrix":
        return {"kind": "matrix",
                "matrix": [[rational_str(x) for x in row] for row in metric.dist]}
    if kind == "tree":
        return {"kind": "tree", "size": src["size"],
                "edges": [[u, v, rational_str(w)] for u, v, w in src["edges"]]}
    if kind == "line":
        return {"kind": "line", "positions": [rational_str(p) for p in src["positions"]]}
    if kind == "cycle":
        return {"kind": "cycle", "size": src["size"]}
    raise ValueError(f"unknown metric kind {kind!r}")


def metric_from_dict(data: dict) -> Metric:
    kind = data.get("kind", "matrix")
    if kind == "matrix":
        return make_metric([[parse_rational(x) for x in row] for row in data["matrix"]])
    if kind == "tree":
        edges = [(u, v, parse_rational(w)) for u, v, w in data["edges"]]
        return tree_metric(int(data["size"]), edges)
    if kind == "line":
        return line_metric([parse_rational(p) for p in data["positions"]])
    if kind == "cycle":
        return cycle_metric(int(data["size"]))
    raise ValueError(f"unknown metric kind {kind!r}")


def instance_to_dict(inst) -> dict:
    out = {
        "n": inst.graph.n,
        "edges": [list(e) for e in inst.graph.edges],
        "metric": metric_to_dict(inst.metric),
    }
    if isinstance(inst, AnchoredInstance):
        out["alpha"] = rational_str(inst.alpha)
        out["fixed"] = [{"node": v, "preferred": s} for v, s in inst.fixed.items()]
        out["strategic"] = list(inst.strategic)
    else:
        out["preferred"] = list(inst.preferred)
        out["alpha"] = rational_str(inst.alpha)
    return out


def instance_from_dict(data: dict):
    graph = Graph(int(data["n"]), tuple(tuple(e) for e in data["edges"]))
    metric = metric_from_dict(data["metric"])
    if "fixed" in data:
        fixed = {int(f["node"]): int(f["preferred"]) for f in data["fixed"]}
        inst = AnchoredInstance(graph, metric, fixed)
        if "strategic" in data and sorted(data["strategic"]) != list(inst.strategic):
            raise ValueError("fixed and strategic nodes must partition the node set")
        if "alpha" in data and parse_rational(data["alpha"]) != inst.alpha:
            raise ValueError("anchored games are defined at alpha = 1/2 only")
        return inst
    return Instance(graph, metric, tuple(data["preferred"]), parse_rational(data["alpha"]))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dump_instance(inst, path) -> None:
    Path(path).write_text(dumps(instance_to_dict(inst)))


def load_instance(path):
    return instance_from_dict(json.loads(Path(path).read_text()))


def trace_to_list(trace: Trace) -> list[dict]:
    return [
        {"player": m.player, "from": m.from_, "to": m.to,
         "cost_delta": rational_str(m.cost_delta), "phi_after": rational_str(phi)}
        for m, phi in zip(trace.moves, trace.phis)
    ]


def _maybe_inf(x) -> str:
    return "inf" if x == INFINITE else rational_str(x)


def report_to_dict(report: AnalysisReport) -> dict:
    return {
        "opt_cost": rational_str(report.opt_cost),
        "opt_vector": list(report.opt_vector),
        "best_eq_cost": rational_str(report.best_eq_cost),
        "best_eq_vector": list(report.best_eq_vector),
        "worst_eq_cost": rational_str(report.worst_eq_cost),
        "worst_eq_vector": list(report.worst_eq_vector),
        "pos": _maybe_inf(report.pos),
        "poa": _maybe_inf(report.poa),
        "num_optima": report.num_optima,
        "num_equilibria": report.num_equilibria,
    }
