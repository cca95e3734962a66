"""Self-contained SVG sensitivity charts from sweep tables.

No plotting dependency: charts are assembled as plain SVG text so the
outputs are diffable and render anywhere.
"""

from __future__ import annotations

import enum
from pathlib import Path

from .sweep import SweepRow, SweepTable, write_sweep_csv

WIDTH, HEIGHT = 840, 520
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 200, 48, 56

PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
    "#8c564b", "#e377c2",
]


class ReportKind(enum.Enum):
    """Which side of each sweep row to plot."""

    BANK_MULTIPLE = "bank_multiple"        # equity multiple, break-even at 1.0
    UNDERWRITER_RETURN = "underwriter_return"  # gross return, break-even at 0.0


def _series_for(table: SweepTable, kind: ReportKind) -> dict[str, list[tuple[float, float]]]:
    series: dict[str, list[tuple[float, float]]] = {}
    if kind is ReportKind.BANK_MULTIPLE:
        for (label, moc), rows in table.curves().items():
            name = f"{label} @ {moc:g}X"
            series[name] = [(r.bank_rate_pct, r.bank_multiple) for r in rows]
    else:
        # The underwriter side does not depend on leverage; one curve per portfolio.
        for (label, _moc), rows in table.curves().items():
            if label in series:
                continue
            series[label] = [(r.bank_rate_pct, r.underwriter_return) for r in rows]
    return series


def _ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    return [lo + span * i / (n - 1) for i in range(n)]


def _svg_chart(series: dict[str, list[tuple[float, float]]], title: str,
               x_label: str, y_label: str, ref_y: float, ref_label: str) -> str:
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts] + [ref_y]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo or 1.0) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo or 1.0) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
        f'font-family="Helvetica, Arial, sans-serif" font-size="13">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{MARGIN_L}" y="24" font-size="17" font-weight="bold">{title}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#444"/>',
    ]

    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(f'<line x1="{x:.1f}" y1="{MARGIN_T + plot_h}" x2="{x:.1f}" '
                     f'y2="{MARGIN_T + plot_h + 5}" stroke="#444"/>')
        parts.append(f'<text x="{x:.1f}" y="{MARGIN_T + plot_h + 20}" '
                     f'text-anchor="middle">{t:.2f}</text>')
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(f'<line x1="{MARGIN_L - 5}" y1="{y:.1f}" x2="{MARGIN_L}" '
                     f'y2="{y:.1f}" stroke="#444"/>')
        parts.append(f'<text x="{MARGIN_L - 9}" y="{y + 4:.1f}" '
                     f'text-anchor="end">{t:.2f}</text>')

    parts.append(f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" '
                 f'text-anchor="middle">{x_label}</text>')
    parts.append(f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" text-anchor="middle" '
                 f'transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.1f})">{y_label}</text>')

    ry = py(ref_y)
    parts.append(f'<line class="refline" x1="{MARGIN_L}" y1="{ry:.1f}" '
                 f'x2="{MARGIN_L + plot_w}" y2="{ry:.1f}" stroke="#333" '
                 f'stroke-dasharray="7 5" stroke-width="1.5"/>')
    parts.append(f'<text x="{MARGIN_L + plot_w - 4}" y="{ry - 6:.1f}" '
                 f'text-anchor="end" fill="#333">{ref_label}</text>')

    legend_y = MARGIN_T + 10
    for i, (name, pts) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in pts)
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                     f'points="{coords}"/>')
        lx = MARGIN_L + plot_w + 14
        parts.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 22}" y2="{legend_y}" '
                     f'stroke="{color}" stroke-width="3"/>')
        parts.append(f'<text x="{lx + 28}" y="{legend_y + 4}">{name}</text>')
        legend_y += 20

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(table: SweepTable, kind: ReportKind, out: str | Path) -> Path:
    """Write the chart for one side of the sweep, plus its backing CSV.

    The bank chart carries a break-even reference line at 1.0; the
    underwriter chart at 0. The CSV lands next to the SVG with the same
    stem. Raises on an empty table before creating any file.
    """
    if not table.rows:
        raise ValueError("cannot render an empty sweep table")
    out = Path(out)
    if kind is ReportKind.BANK_MULTIPLE:
        svg = _svg_chart(
            _series_for(table, kind),
            title="Venture bank sensitivity to funding rate",
            x_label="bank funding rate (%)",
            y_label="ten-year equity multiple",
            ref_y=1.0, ref_label="break-even = 1.0",
        )
    else:
        svg = _svg_chart(
            _series_for(table, kind),
            title="Underwriter gross return sensitivity to funding rate",
            x_label="bank funding rate (%)",
            y_label="gross return on insured face",
            ref_y=0.0, ref_label="break-even = 0",
        )
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg, encoding="utf-8")
    write_sweep_csv(out.with_suffix(".csv"), table)
    return out
