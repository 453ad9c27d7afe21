"""Plain-text tables rendered from a persisted aggregates file."""


def _fmt(x, width=9):
    return f"{x:{width}.4f}"


def per_dataset_tables(aggregates: dict) -> str:
    """One table per (dataset, split): models x losses, mean +/- 2SE."""
    meta = aggregates["metadata"]
    models = meta["model_keys"]
    losses = meta["loss_names"]
    cells = {(c["dataset"], c["split"], c["loss"]): c for c in aggregates["cells"]}
    lines = []
    for ds in [d["name"] for d in meta["datasets"]]:
        for split in meta["split_labels"]:
            lines.append(f"dataset {ds} | split {split}")
            header = f"  {'model':<8}" + "".join(f"{l:>22}" for l in losses)
            lines.append(header)
            for m in models:
                row = f"  {m:<8}"
                for l in losses:
                    stats = cells[(ds, split, l)]["models"][m]
                    row += f"{_fmt(stats['mean']):>11} ±{_fmt(2 * stats['se'], 8)}"
                lines.append(row)
            lines.append("")
    return "\n".join(lines)


def score_tables(aggregates: dict) -> str:
    """Overall model scores per (split, loss); loss panels ordered with
    the rank losses per gamma first and MSE last."""
    meta = aggregates["metadata"]
    models = meta["model_keys"]
    losses = meta["loss_names"]
    panel_order = [l for l in losses if l != "mse"] + (["mse"] if "mse" in losses else [])
    by_key = {(s["split"], s["loss"]): s["scores"] for s in aggregates["overall_scores"]}
    n_datasets = len(meta["datasets"])
    lines = [f"overall model scores (sum of optimality probabilities over "
             f"{n_datasets} datasets)"]
    for split in meta["split_labels"]:
        lines.append(f"split {split}")
        lines.append(f"  {'loss':<12}" + "".join(f"{m:>10}" for m in models))
        for loss in panel_order:
            scores = by_key[(split, loss)]
            lines.append(f"  {loss:<12}" + "".join(f"{scores[m]:>10.3f}" for m in models))
        lines.append("")
    return "\n".join(lines)


def render_report(aggregates: dict) -> str:
    meta = aggregates["metadata"]
    head = [
        f"run created {meta['created_at']} | seed {meta['config']['master_seed']} "
        f"| iterations {meta['config']['iterations']} | backend {meta['kernel_backend']}",
        "",
    ]
    return "\n".join(head) + per_dataset_tables(aggregates) + "\n" + \
        score_tables(aggregates)
