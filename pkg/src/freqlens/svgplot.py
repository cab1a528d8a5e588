"""Dependency-free SVG bar and line charts for influence profiles and curves."""

from __future__ import annotations

from xml.sax.saxutils import escape

from .errors import ParameterError

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 56, 16, 34, 44


def _header(width: int, height: int, title: str) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">'
            f"{escape(title)}</text>"
        )
    return parts


def _y_scale(lo: float, hi: float, height: int):
    span = hi - lo if hi > lo else 1.0
    inner = height - _MARGIN_T - _MARGIN_B

    def to_px(v: float) -> float:
        return _MARGIN_T + inner * (1.0 - (v - lo) / span)

    return to_px


def bar_chart(
    values,
    labels,
    *,
    title: str = "",
    ylabel: str = "",
    signed: bool = False,
    width: int = 640,
    height: int = 360,
) -> str:
    """Bar plot of per-band values; labels mark each band's upper bound.

    With signed=True bars extend up or down from a zero axis, which is how
    directed profiles are displayed.
    """
    values = [float(v) for v in values]
    labels = [str(x) for x in labels]
    if len(values) != len(labels) or not values:
        raise ParameterError("bar chart needs matching, non-empty values and labels")
    lo = min(0.0, min(values)) if signed else 0.0
    hi = max(0.0, max(values))
    if hi == lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    to_px = _y_scale(lo - (pad if signed else 0.0), hi + pad, height)
    inner_w = width - _MARGIN_L - _MARGIN_R
    slot = inner_w / len(values)
    bar_w = 0.7 * slot

    parts = _header(width, height, title)
    zero_y = to_px(0.0)
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{zero_y:.1f}" x2="{width - _MARGIN_R}" '
        f'y2="{zero_y:.1f}" stroke="#333" stroke-width="1"/>'
    )
    axis_vals = (lo, hi) if signed else (0.0, hi)
    for v in axis_vals:
        y = to_px(v)
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{y + 4:.1f}" text-anchor="end">{v:.3g}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {height / 2:.1f})">{escape(ylabel)}</text>'
        )
    for i, (v, label) in enumerate(zip(values, labels)):
        x = _MARGIN_L + i * slot + (slot - bar_w) / 2
        y_val = to_px(v)
        top = min(y_val, zero_y)
        h = abs(y_val - zero_y)
        parts.append(
            f'<rect class="bar" x="{x:.1f}" y="{top:.1f}" width="{bar_w:.1f}" '
            f'height="{h:.1f}" fill="{PALETTE[0] if v >= 0 else PALETTE[1]}"/>'
        )
        parts.append(
            f'<text x="{x + bar_w / 2:.1f}" y="{height - _MARGIN_B + 16}" '
            f'text-anchor="middle">{escape(label)}</text>'
        )
    parts.append(
        f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle">frequency band (upper bound)</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_chart_with_errors(
    means,
    stds,
    labels,
    *,
    title: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 360,
) -> str:
    """Bar plot with one standard-deviation whiskers (aggregate profiles)."""
    means = [float(v) for v in means]
    stds = [float(v) for v in stds]
    if not (len(means) == len(stds) == len(labels)) or not means:
        raise ParameterError("error-bar chart needs matching, non-empty inputs")
    hi = max(m + s for m, s in zip(means, stds))
    lo = min(0.0, min(m - s for m, s in zip(means, stds)))
    to_px = _y_scale(lo, hi if hi > lo else lo + 1.0, height)
    inner_w = width - _MARGIN_L - _MARGIN_R
    slot = inner_w / len(means)
    bar_w = 0.7 * slot

    parts = _header(width, height, title)
    zero_y = to_px(0.0)
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{zero_y:.1f}" x2="{width - _MARGIN_R}" '
        f'y2="{zero_y:.1f}" stroke="#333" stroke-width="1"/>'
    )
    if ylabel:
        parts.append(
            f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {height / 2:.1f})">{escape(ylabel)}</text>'
        )
    for i, (m, s, label) in enumerate(zip(means, stds, labels)):
        x = _MARGIN_L + i * slot + (slot - bar_w) / 2
        cx = x + bar_w / 2
        top = min(to_px(m), zero_y)
        parts.append(
            f'<rect class="bar" x="{x:.1f}" y="{top:.1f}" width="{bar_w:.1f}" '
            f'height="{abs(to_px(m) - zero_y):.1f}" fill="{PALETTE[0]}"/>'
        )
        y_hi, y_lo = to_px(m + s), to_px(m - s)
        parts.append(
            f'<line class="whisker" x1="{cx:.1f}" y1="{y_hi:.1f}" x2="{cx:.1f}" '
            f'y2="{y_lo:.1f}" stroke="#333" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{cx:.1f}" y="{height - _MARGIN_B + 16}" '
            f'text-anchor="middle">{escape(str(label))}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def line_chart(
    series,
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    width: int = 640,
    height: int = 360,
) -> str:
    """Overlayed polylines; dashed series render with a dotted stroke.

    Each series is a dict with keys points, label, and optional dashed/color.
    """
    if not series:
        raise ParameterError("line chart needs at least one series")
    all_y = [y for s in series for _, y in s["points"]]
    all_x = [x for s in series for x, _ in s["points"]]
    if not all_y:
        raise ParameterError("line chart series are empty")
    y_lo, y_hi = min(0.0, min(all_y)), max(all_y) * 1.05 or 1.0
    x_lo, x_hi = min(all_x), max(all_x)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    to_py = _y_scale(y_lo, y_hi, height)
    inner_w = width - _MARGIN_L - _MARGIN_R

    def to_px(x: float) -> float:
        return _MARGIN_L + inner_w * (x - x_lo) / (x_hi - x_lo)

    parts = _header(width, height, title)
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{to_py(y_lo):.1f}" x2="{width - _MARGIN_R}" '
        f'y2="{to_py(y_lo):.1f}" stroke="#333"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{to_py(y_lo):.1f}" stroke="#333"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        parts.append(
            f'<text x="{to_px(xv):.1f}" y="{to_py(y_lo) + 16:.1f}" text-anchor="middle">{xv:.2g}</text>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 6}" y="{to_py(yv) + 4:.1f}" text-anchor="end">{yv:.3g}</text>'
        )
    if xlabel:
        parts.append(f'<text x="{width / 2:.1f}" y="{height - 8}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        parts.append(
            f'<text x="14" y="{height / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {height / 2:.1f})">{escape(ylabel)}</text>'
        )
    legend_y = _MARGIN_T + 4
    for i, s in enumerate(series):
        color = s.get("color") or PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="4 3"' if s.get("dashed") else ""
        points = " ".join(f"{to_px(x):.1f},{to_py(y):.1f}" for x, y in s["points"])
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{points}"/>'
        )
        label = s.get("label")
        if label:
            parts.append(
                f'<text x="{width - _MARGIN_R - 4}" y="{legend_y}" text-anchor="end" '
                f'fill="{color}">{escape(label)}</text>'
            )
            legend_y += 14
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
