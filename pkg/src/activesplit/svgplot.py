"""Dependency-free SVG charts rendered from an aggregates file.

Two chart kinds: per-dataset loss charts with ±2SE error bars (datasets
ordered left to right by increasing size) and overall-score curves as a
function of the training quantile q, with the plain bootstrap shown as
q = 1.0 (random partitioning).
"""

import os
import xml.etree.ElementTree as ET

MODEL_COLORS = {
    "mlp": "#d62728",  # red
    "svr": "#1f77b4",  # blue
    "rf": "#ff7f0e",  # orange
    "ridge": "#2ca02c",  # green
}
FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]

WIDTH, HEIGHT = 960, 430
MARGIN = {"left": 62, "right": 24, "top": 24, "bottom": 108}


def _color(model, index):
    return MODEL_COLORS.get(model, FALLBACK_COLORS[index % len(FALLBACK_COLORS)])


def _svg_root(title):
    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(WIDTH),
        "height": str(HEIGHT),
        "viewBox": f"0 0 {WIDTH} {HEIGHT}",
    })
    t = ET.SubElement(svg, "title")
    t.text = title
    return svg


def _text(svg, x, y, s, size=11, anchor="middle", rotate=None, color="#222"):
    attrs = {"x": f"{x:.1f}", "y": f"{y:.1f}", "font-size": str(size),
             "text-anchor": anchor, "fill": color,
             "font-family": "sans-serif"}
    if rotate is not None:
        attrs["transform"] = f"rotate({rotate} {x:.1f} {y:.1f})"
    el = ET.SubElement(svg, "text", attrs)
    el.text = s
    return el


def _line(svg, x1, y1, x2, y2, color="#222", width=1.0):
    ET.SubElement(svg, "line", {
        "x1": f"{x1:.1f}", "y1": f"{y1:.1f}", "x2": f"{x2:.1f}",
        "y2": f"{y2:.1f}", "stroke": color, "stroke-width": str(width),
    })


def _circle(svg, x, y, r, color):
    ET.SubElement(svg, "circle", {
        "cx": f"{x:.1f}", "cy": f"{y:.1f}", "r": str(r), "fill": color,
    })


def _frame(svg, y_max, y_label):
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    _line(svg, x0, y0, x1, y0)
    _line(svg, x0, y0, x0, y1)
    for i in range(6):
        frac = i / 5
        y = y0 + (y1 - y0) * frac
        _line(svg, x0 - 4, y, x0, y)
        _text(svg, x0 - 8, y + 4, f"{y_max * frac:.3g}", size=10, anchor="end")
    _text(svg, 16, (y0 + y1) / 2, y_label, size=12, anchor="middle", rotate=-90)
    return x0, x1, y0, y1


def _legend(svg, models, x, y):
    for i, m in enumerate(models):
        _circle(svg, x, y + 16 * i, 4, _color(m, i))
        _text(svg, x + 10, y + 16 * i + 4, m, size=11, anchor="start")


def dataset_loss_chart(aggregates, split, loss):
    """Mean loss ± 2SE per model over datasets ordered by size."""
    meta = aggregates["metadata"]
    models = meta["model_keys"]
    datasets = sorted(meta["datasets"], key=lambda d: (d["n"], d["name"]))
    cells = {(c["dataset"], c["split"], c["loss"]): c for c in aggregates["cells"]}

    svg = _svg_root(f"{loss} by dataset, split {split}")
    y_max = 0.0
    for d in datasets:
        stats = cells[(d["name"], split, loss)]["models"]
        y_max = max(y_max, max(stats[m]["mean"] + 2 * stats[m]["se"] for m in models))
    y_max = y_max * 1.08 or 1.0

    x0, x1, y0, y1 = _frame(svg, y_max, loss)
    slot = (x1 - x0) / max(len(datasets), 1)
    for di, d in enumerate(datasets):
        cx = x0 + slot * (di + 0.5)
        _text(svg, cx, y0 + 16, f"{d['name']} ({d['n']})", size=10,
              anchor="end", rotate=-40)
        stats = cells[(d["name"], split, loss)]["models"]
        for mi, m in enumerate(models):
            x = cx + (mi - (len(models) - 1) / 2) * min(12.0, slot / (len(models) + 1))
            mean = stats[m]["mean"]
            half = 2 * stats[m]["se"]
            y = y0 + (y1 - y0) * (mean / y_max)
            ylo = y0 + (y1 - y0) * (max(mean - half, 0.0) / y_max)
            yhi = y0 + (y1 - y0) * ((mean + half) / y_max)
            color = _color(m, mi)
            _line(svg, x, ylo, x, yhi, color=color, width=1.2)
            _line(svg, x - 3, ylo, x + 3, ylo, color=color)
            _line(svg, x - 3, yhi, x + 3, yhi, color=color)
            _circle(svg, x, y, 3, color)
    _legend(svg, models, x1 - 70, y1 + 10)
    _text(svg, (x0 + x1) / 2, HEIGHT - 8,
          f"datasets by increasing size | split {split} | loss {loss}", size=11)
    return svg


def score_vs_q_chart(aggregates, loss):
    """Overall model score against the training-quantile q; the plain
    bootstrap appears as q = 1.0 (random partitioning)."""
    meta = aggregates["metadata"]
    models = meta["model_keys"]
    n_datasets = len(meta["datasets"])
    points = []  # (q, split_label)
    for plan in meta["config"]["splits"]:
        if "quantile_bootstrap" in plan:
            q = float(plan["quantile_bootstrap"]["q"])
            points.append((q, f"qboot{q:g}"))
        elif "bootstrap" in plan:
            points.append((1.0, "bootstrap"))
    points.sort()
    scores = {(s["split"], s["loss"]): s["scores"] for s in aggregates["overall_scores"]}

    svg = _svg_root(f"overall score vs q, loss {loss}")
    y_max = float(n_datasets)
    x0, x1, y0, y1 = _frame(svg, y_max, f"score ({loss})")
    qs = [q for q, _ in points]
    q_lo, q_hi = min(qs), max(qs)
    span = (q_hi - q_lo) or 1.0

    def xpos(q):
        return x0 + (x1 - x0) * (0.06 + 0.88 * (q - q_lo) / span)

    for q, label in points:
        x = xpos(q)
        _line(svg, x, y0, x, y0 + 4)
        tick = f"{q:g}" + (" (random)" if label == "bootstrap" else "")
        _text(svg, x, y0 + 18, tick, size=10)
    for mi, m in enumerate(models):
        color = _color(m, mi)
        coords = []
        for q, label in points:
            y = y0 + (y1 - y0) * (scores[(label, loss)][m] / y_max)
            coords.append((xpos(q), y))
        for (xa, ya), (xb, yb) in zip(coords[:-1], coords[1:]):
            _line(svg, xa, ya, xb, yb, color=color, width=1.5)
        for x, y in coords:
            _circle(svg, x, y, 3.5, color)
    _legend(svg, models, x1 - 70, y1 + 10)
    _text(svg, (x0 + x1) / 2, HEIGHT - 8,
          f"training quantile q (1.0 = random partitioning) | loss {loss}",
          size=11)
    return svg


def _safe(name):
    return name.replace("@", "_")


def write_plots(aggregates, outdir) -> list:
    """Emit every chart as an .svg file; returns the written paths."""
    os.makedirs(outdir, exist_ok=True)
    meta = aggregates["metadata"]
    paths = []
    for split in meta["split_labels"]:
        for loss in meta["loss_names"]:
            svg = dataset_loss_chart(aggregates, split, loss)
            path = os.path.join(outdir, f"dataset_losses__{split}__{_safe(loss)}.svg")
            ET.ElementTree(svg).write(path, xml_declaration=True, encoding="utf-8")
            paths.append(path)
    has_q_axis = any("quantile_bootstrap" in p or "bootstrap" in p
                     for p in meta["config"]["splits"])
    if has_q_axis:
        for loss in meta["loss_names"]:
            svg = score_vs_q_chart(aggregates, loss)
            path = os.path.join(outdir, f"score_vs_q__{_safe(loss)}.svg")
            ET.ElementTree(svg).write(path, xml_declaration=True, encoding="utf-8")
            paths.append(path)
    return paths
