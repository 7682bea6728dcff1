"""CSV and SVG writers."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from xml.sax.saxutils import escape

RUN_HEADER = ("problem", "measure", "n_or_m", "topology", "mu", "tau", "operator",
              "replication", "seed", "parallel_time", "capped")
SUMMARY_HEADER = ("problem", "measure", "n_or_m", "topology", "mu", "tau", "operator",
                  "count", "mean", "median", "std", "ci95", "q1", "q3", "cap_hits",
                  "speedup", "efficiency")


class OutputError(OSError):
    pass


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf"
        if math.isnan(v):
            return ""
        return repr(v)
    return "" if v is None else str(v)


def emit_csv(rows, path, header=RUN_HEADER) -> None:
    """Write dict rows under a fixed header; floats use ``repr`` so they round-trip."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_fmt(r.get(k)) for k in header])
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def parse_run_row(row: dict) -> dict:
    """Typed view of one run row as written by :func:`emit_csv`."""
    out = dict(row)
    for k in ("n_or_m", "mu", "replication", "seed"):
        out[k] = int(row[k])
    pt = row["parallel_time"]
    out["parallel_time"] = math.inf if pt == "inf" else int(pt)
    out["capped"] = row["capped"] == "true"
    return out


def emit_svg(series, path, logx=False, logy=False, title="", xlabel="mu", ylabel="") -> None:
    """Minimal line chart; ``series`` maps a label to ``[(x, y), ...]``.

    Produces one ``<polyline>`` per series plus axes, ticks and a legend.
    """
    W, H, L, R, T, B = 640, 420, 70, 150, 40, 50
    pts = [(x, y) for s in series.values() for x, y in s
           if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0)]
    fx = math.log10 if logx else float
    fy = math.log10 if logy else float
    if pts:
        x0, x1 = min(fx(x) for x, _ in pts), max(fx(x) for x, _ in pts)
        y0, y1 = min(fy(y) for _, y in pts), max(fy(y) for _, y in pts)
    else:
        x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def px(x):
        return L + (fx(x) - x0) / (x1 - x0) * (W - L - R)

    def py(y):
        return H - B - (fy(y) - y0) / (y1 - y0) * (H - T - B)

    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<text x="{W / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
           f'<line x1="{L}" y1="{H - B}" x2="{W - R}" y2="{H - B}" stroke="black"/>',
           f'<line x1="{L}" y1="{T}" x2="{L}" y2="{H - B}" stroke="black"/>']
    for k in range(5):
        tx = x0 + (x1 - x0) * k / 4
        ty = y0 + (y1 - y0) * k / 4
        vx = 10**tx if logx else tx
        vy = 10**ty if logy else ty
        X = L + (W - L - R) * k / 4
        Y = H - B - (H - T - B) * k / 4
        out.append(f'<line x1="{X:.1f}" y1="{H - B}" x2="{X:.1f}" y2="{H - B + 5}" stroke="black"/>')
        out.append(f'<text x="{X:.1f}" y="{H - B + 18}" text-anchor="middle" font-size="11">{vx:.3g}</text>')
        out.append(f'<line x1="{L - 5}" y1="{Y:.1f}" x2="{L}" y2="{Y:.1f}" stroke="black"/>')
        out.append(f'<text x="{L - 8}" y="{Y + 4:.1f}" text-anchor="end" font-size="11">{vy:.3g}</text>')
    out.append(f'<text x="{(L + W - R) / 2:.1f}" y="{H - 12}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(T + H - B) / 2:.1f}" text-anchor="middle" font-size="12" '
               f'transform="rotate(-90 16 {(T + H - B) / 2:.1f})">{escape(ylabel)}</text>')
    for k, (label, data) in enumerate(series.items()):
        c = colors[k % len(colors)]
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in data
                          if math.isfinite(x) and math.isfinite(y) and (not logx or x > 0) and (not logy or y > 0))
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="2" points="{coords}"/>')
        ly = T + 16 * k + 8
        out.append(f'<line x1="{W - R + 12}" y1="{ly}" x2="{W - R + 32}" y2="{ly}" stroke="{c}" stroke-width="2"/>')
        out.append(f'<text x="{W - R + 36}" y="{ly + 4}" font-size="11">{escape(str(label))}</text>')
    out.append("</svg>")
    try:
        Path(path).write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc
