"""Rendering of tuning reports: a markdown comparison table and a grouped
bar chart emitted as plain SVG text.

Both renderers consume the report's JSON dictionary (the single source of
truth for every displayed number) and are byte-deterministic for a fixed
report. Accuracies are shown as percentages with two decimals; per-column
maxima are bolded, with ties at display precision all bolded.
"""

from __future__ import annotations

_VOLATILE_KEYS = frozenset({"duration_seconds", "total_seconds", "fit_seconds", "created_unix"})

_METHOD_COLORS = {"Baseline": "#7f7f7f", "GS": "#1f77b4", "RS": "#ff7f0e"}
_REFERENCE_COLORS = ("#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2")


def strip_volatile(value):
    """Copy of a report structure without timing/timestamp fields, for
    comparing two runs that should agree on everything else."""
    if isinstance(value, dict):
        return {k: strip_volatile(v) for k, v in value.items() if k not in _VOLATILE_KEYS}
    if isinstance(value, list):
        return [strip_volatile(v) for v in value]
    return value


def _method_columns(report: dict, references: dict | None):
    """Ordered (label, {family: percent}) columns: Baseline, GS, RS, refs."""
    if references is None:
        references = report.get("config", {}).get("references") or {}
    columns = [("Baseline", {}), ("GS", {}), ("RS", {})]
    for entry in report["families"]:
        family = entry["family"]
        columns[0][1][family] = entry["baseline"]["mean_accuracy"] * 100.0
        columns[1][1][family] = entry["grid"]["best"]["mean_accuracy"] * 100.0
        columns[2][1][family] = entry["random"]["best"]["mean_accuracy"] * 100.0
    for label in references:
        columns.append((label, {f: float(v) for f, v in references[label].items()}))
    return columns


def render_table(report: dict, references: dict | None = None) -> str:
    """Markdown table, one row per family in report order.

    Reference columns carry externally supplied percentages; families they
    do not cover render as "-". When ``references`` is None the columns
    echoed in the report config are used.
    """
    columns = _method_columns(report, references)
    families = [entry["family"] for entry in report["families"]]

    formatted = {}
    for label, values in columns:
        cells = {f: f"{values[f]:.2f}" for f in families if f in values}
        top = max(cells.values(), key=float, default=None)
        for family in families:
            if family not in cells:
                formatted[(family, label)] = "-"
            elif cells[family] == top:
                formatted[(family, label)] = f"**{cells[family]}**"
            else:
                formatted[(family, label)] = cells[family]

    labels = [label for label, _ in columns]
    lines = [
        "| Classifier | " + " | ".join(labels) + " |",
        "|---" * (len(labels) + 1) + "|",
    ]
    for family in families:
        cells = [formatted[(family, label)] for label in labels]
        lines.append(f"| {family} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _bar_color(label: str, reference_index: int) -> str:
    if label in _METHOD_COLORS:
        return _METHOD_COLORS[label]
    return _REFERENCE_COLORS[reference_index % len(_REFERENCE_COLORS)]


def render_chart(report: dict, references: dict | None = None) -> str:
    """Grouped bar chart as SVG text: one group per family, one bar per
    method, y axis fixed to 0-100%. Zero accuracies keep their (zero-height)
    bar element and label."""
    columns = _method_columns(report, references)
    families = [entry["family"] for entry in report["families"]]

    margin_left, margin_top, margin_bottom, margin_right = 56, 46, 58, 16
    plot_height = 240.0
    bar_width, bar_gap, group_gap = 16, 3, 22
    n_methods = len(columns)
    group_width = n_methods * bar_width + (n_methods - 1) * bar_gap
    width = margin_left + len(families) * (group_width + group_gap) + margin_right
    height = margin_top + plot_height + margin_bottom
    baseline_y = margin_top + plot_height

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
        'font-family="sans-serif" font-size="13">'
        "Cross-validated accuracy by classifier and tuning method</text>",
    ]

    # y gridlines and tick labels every 20%
    for tick in range(0, 101, 20):
        y = baseline_y - tick / 100.0 * plot_height
        out.append(
            f'<line x1="{margin_left}" y1="{y:.1f}" x2="{width - margin_right:.0f}" '
            f'y2="{y:.1f}" stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{margin_left - 6}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{tick}</text>'
        )
    out.append(
        f'<text x="14" y="{margin_top + plot_height / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 14 {margin_top + plot_height / 2:.1f})">accuracy (%)</text>'
    )

    reference_index = 0
    legend_x = float(margin_left)
    for label, _ in columns:
        color = _bar_color(label, reference_index)
        if label not in _METHOD_COLORS:
            reference_index += 1
        out.append(
            f'<rect x="{legend_x:.1f}" y="26" width="10" height="10" fill="{color}"/>'
        )
        out.append(
            f'<text x="{legend_x + 14:.1f}" y="35" font-family="sans-serif" '
            f'font-size="10">{label}</text>'
        )
        legend_x += 24 + 6.5 * len(label)

    reference_index = 0
    for method_pos, (label, values) in enumerate(columns):
        color = _bar_color(label, reference_index)
        if label not in _METHOD_COLORS:
            reference_index += 1
        for group_pos, family in enumerate(families):
            if family not in values:
                continue
            percent = values[family]
            x = (
                margin_left
                + group_gap / 2
                + group_pos * (group_width + group_gap)
                + method_pos * (bar_width + bar_gap)
            )
            bar_height = percent / 100.0 * plot_height
            out.append(
                f'<rect class="bar" x="{x:.1f}" y="{baseline_y - bar_height:.1f}" '
                f'width="{bar_width}" height="{bar_height:.1f}" fill="{color}">'
                f"<title>{family} {label} {percent:.2f}%</title></rect>"
            )

    for group_pos, family in enumerate(families):
        center = (
            margin_left
            + group_gap / 2
            + group_pos * (group_width + group_gap)
            + group_width / 2
        )
        out.append(
            f'<text x="{center:.1f}" y="{baseline_y + 16:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{family}</text>'
        )
    out.append(
        f'<text x="{margin_left + (width - margin_left - margin_right) / 2:.1f}" '
        f'y="{height - 14:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="11">classifier</text>'
    )
    out.append(
        f'<line x1="{margin_left}" y1="{margin_top}" x2="{margin_left}" '
        f'y2="{baseline_y:.1f}" stroke="black" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{margin_left}" y1="{baseline_y:.1f}" x2="{width - margin_right:.0f}" '
        f'y2="{baseline_y:.1f}" stroke="black" stroke-width="1"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
