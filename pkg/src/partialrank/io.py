"""Reading and writing datasets, events, graphs, checkpoints and reports.

Writers emit keys and rows in a fixed order so that write -> read -> write
reproduces the same bytes.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ValidationError
from .models import model_from_dict
from .netform.events import ChoiceEvent
from .netform.graph import DirectedGraph
from .poset import PartitionedPreference, build_partial_ranking


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_jsonl(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
    return out


def ranking_to_dict(r) -> dict:
    if isinstance(r, PartitionedPreference):
        return {"partitions": [list(p) for p in r.partitions]}
    return {"items": sorted(r.items), "relations": sorted([a, b] for a, b in r.relations)}


def ranking_from_dict(d: dict):
    if "partitions" in d:
        return PartitionedPreference(d["partitions"])
    if "items" not in d or "relations" not in d:
        raise ValidationError("ranking record needs 'items' and 'relations'")
    return build_partial_ranking(d["items"], d["relations"])


def write_rankings(path, rankings: Iterable, extra: Sequence[dict] | None = None) -> None:
    """One JSON object per line; ``extra`` adds per-line fields (e.g. the true component)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for j, r in enumerate(rankings):
            rec = ranking_to_dict(r)
            if extra is not None:
                rec.update(extra[j])
            fh.write(_dumps(rec) + "\n")


def read_rankings(path, with_extra: bool = False):
    records = _read_jsonl(path)
    rankings = [ranking_from_dict(d) for d in records]
    if not with_extra:
        return rankings
    keys = {"items", "relations", "partitions"}
    return rankings, [{k: v for k, v in d.items() if k not in keys} for d in records]


def event_to_dict(ev: ChoiceEvent) -> dict:
    d = {
        "source": ev.source,
        "chosen": list(ev.chosen),
        "window": [list(w) for w in ev.windows],
        "candidates_scope": ev.scope,
        "negatives": None if ev.negatives is None else list(ev.negatives),
        "label": ev.label,
    }
    if ev.timestamp is not None:
        d["timestamp"] = ev.timestamp
    if ev.candidates is not None:
        d["candidates"] = list(ev.candidates)
    return d


def event_from_dict(d: dict) -> ChoiceEvent:
    try:
        windows = d.get("window") or [d["chosen"]]
        if sorted(x for w in windows for x in w) != sorted(d["chosen"]):
            raise ValidationError("'window' tiers must partition 'chosen'")
        return ChoiceEvent(d["source"], windows, d.get("candidates_scope", "global"), d.get("label"),
                           d.get("negatives"), d.get("timestamp"), d.get("candidates"))
    except KeyError as exc:
        raise ValidationError(f"event record missing field {exc}") from None


def write_events(path, events: Iterable[ChoiceEvent]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ev in events:
            fh.write(_dumps(event_to_dict(ev)) + "\n")


def read_events(path) -> list:
    return [event_from_dict(d) for d in _read_jsonl(path)]


def write_edges(path, g: DirectedGraph) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["src", "dst", "timestamp"])
        for u, v in g.edges():
            ts = g.timestamps.get((u, v))
            w.writerow([u, v, "" if ts is None else ts])


def read_edges(path, extra_labels=()):
    """Edge list with columns ``src,dst[,timestamp]``.

    Returns ``(edges, labels)``: edges as ``(src, dst, timestamp)`` over dense
    ids and ``labels[id]`` the original node label.  When every label
    (including ``extra_labels``, e.g. nodes named only by events) is a
    non-negative integer, ids equal the labels and the universe is
    ``0..max``; otherwise labels are numbered in sorted order.
    """
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"src", "dst"} <= set(reader.fieldnames):
            raise ValidationError(f"{path}: edge list needs 'src' and 'dst' columns")
        for rec in reader:
            ts = (rec.get("timestamp") or "").strip()
            try:
                rows.append((rec["src"].strip(), rec["dst"].strip(), int(ts) if ts else None))
            except ValueError:
                raise ValidationError(f"{path}: timestamp {ts!r} is not an integer") from None
    raw = {x for r in rows for x in r[:2]} | {str(x) for x in extra_labels}
    if raw and all(x.isdigit() for x in raw):
        n = max(int(x) for x in raw) + 1
        return [(int(s), int(d), t) for s, d, t in rows], [str(i) for i in range(n)]
    names = sorted(raw, key=_label_key)
    index = {name: k for k, name in enumerate(names)}
    edges = [(index[s], index[d], t) for s, d, t in rows]
    return edges, names


def _label_key(x: str):
    try:
        return (0, int(x), x)
    except ValueError:
        return (1, 0, x)


def graph_from_edges(edges, n_nodes: int, features: dict | None = None, labels=None) -> DirectedGraph:
    g = DirectedGraph(n_nodes, features=features, labels=labels)
    for s, d, t in edges:
        if s != d:
            g.add_edge(s, d, t)
    return g


def read_node_features(path, labels: Sequence[str]) -> dict:
    """``node_id,<features>`` rows aligned to ``labels``; missing nodes get 0."""
    index = {str(name): k for k, name in enumerate(labels)}
    cols: dict = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or reader.fieldnames[0] != "node_id":
            raise ValidationError(f"{path}: first column must be 'node_id'")
        names = reader.fieldnames[1:]
        cols = {n: np.zeros(len(labels)) for n in names}
        for rec in reader:
            k = index.get(rec["node_id"].strip())
            if k is None:
                continue
            for n in names:
                try:
                    cols[n][k] = float(rec[n])
                except (TypeError, ValueError):
                    raise ValidationError(f"{path}: non-numeric {n!r} for node {rec['node_id']}") from None
    return cols


def write_checkpoint(path, kind: str, payload: dict, seed, config: dict) -> None:
    """JSON checkpoint ``{"kind", ..., "seed", "config"}`` with sorted keys."""
    doc = {"kind": kind, **payload, "seed": seed, "config": config}
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def read_checkpoint(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid checkpoint ({exc.msg})") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValidationError(f"{path}: checkpoint has no 'kind'")
    return doc


def checkpoint_model(doc: dict):
    """Model object of a ranking checkpoint (free, linear or mixture)."""
    if doc["kind"] == "netform":
        raise ValidationError("network checkpoints have no item-utility model")
    return model_from_dict(doc)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(header))
        for r in rows:
            w.writerow([_fmt(x) for x in r])


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def write_trace(path, rows: Sequence[dict], n_weights: int) -> None:
    """Training trace: iteration, loss, one column per mixture weight, wall-clock ms."""
    header = ["iteration", "loss"] + [f"pi_{r}" for r in range(n_weights)] + ["ms"]
    out = []
    for row in rows:
        pis = list(row.get("weights", [])) + [""] * (n_weights - len(row.get("weights", [])))
        out.append([row["iteration"], row["loss"], *pis, row["ms"]])
    write_csv(path, header, out)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")
