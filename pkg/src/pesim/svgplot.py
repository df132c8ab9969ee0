"""Self-contained SVG rendering for trajectories and zone maps.

Plots are built directly as SVG text so the package needs no plotting
dependency and the output is stable enough to diff. Two products:

* trajectory plot: both agents' paths, start markers, capture point;
* zone map: one colored cell per sweep grid point, the a_p = a_e diagonal,
  and the fitted phase-transition line.
"""

from __future__ import annotations

from .episode import EpisodeConfig, EpisodeResult, Outcome
from .zonemap import LineFit, ZoneGrid

PURSUER_COLOR = "#c0392b"
EVADER_COLOR = "#2471a3"
CAPTURED_FILL = "#3b6fb5"
ESCAPED_FILL = "#d94fb0"

_FONT = 'font-family="sans-serif" font-size="12"'


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    """Affine map from world coordinates to SVG pixels (y flipped)."""

    def __init__(
        self,
        x_lo: float,
        x_hi: float,
        y_lo: float,
        y_hi: float,
        width: float,
        height: float,
        margin_left: float,
        margin_top: float,
    ) -> None:
        self.x_lo, self.x_hi = x_lo, x_hi
        self.y_lo, self.y_hi = y_lo, y_hi
        self.width, self.height = width, height
        self.left, self.top = margin_left, margin_top

    def px(self, x: float) -> float:
        return self.left + (x - self.x_lo) / (self.x_hi - self.x_lo) * self.width

    def py(self, y: float) -> float:
        return self.top + (self.y_hi - y) / (self.y_hi - self.y_lo) * self.height


def _polyline(points: list[tuple[float, float]], frame: _Frame, color: str) -> str:
    coords = " ".join(f"{_fmt(frame.px(x))},{_fmt(frame.py(y))}" for x, y in points)
    return (
        f'<polyline points="{coords}" fill="none" stroke="{color}" '
        'stroke-width="1.5"/>'
    )


def trajectory_svg(result: EpisodeResult, config: EpisodeConfig) -> str:
    p_path = [(config.x_p0.x, config.x_p0.y)]
    e_path = [(config.x_e0.x, config.x_e0.y)]
    for row in result.trajectory:
        p_path.append((row.x_p.x, row.x_p.y))
        e_path.append((row.x_e.x, row.x_e.y))

    xs = [x for x, _ in p_path + e_path]
    ys = [y for _, y in p_path + e_path]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    pad = 0.08 * span
    cx, cy = (min(xs) + max(xs)) / 2.0, (min(ys) + max(ys)) / 2.0
    half = span / 2.0 + pad
    frame = _Frame(cx - half, cx + half, cy - half, cy + half, 560, 560, 40, 40)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="640" height="640" '
        'viewBox="0 0 640 640">',
        '<rect width="640" height="640" fill="white"/>',
        _polyline(p_path, frame, PURSUER_COLOR),
        _polyline(e_path, frame, EVADER_COLOR),
    ]
    for (x0, y0), color, label in (
        (p_path[0], PURSUER_COLOR, "pursuer start"),
        (e_path[0], EVADER_COLOR, "evader start"),
    ):
        px, py = frame.px(x0), frame.py(y0)
        parts.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="4" fill="{color}"/>')
        parts.append(
            f'<text x="{_fmt(px + 7)}" y="{_fmt(py + 4)}" {_FONT} '
            f'fill="{color}">{label}</text>'
        )
    if result.outcome is Outcome.CAPTURED:
        fx, fy = frame.px(result.final.x_e.x), frame.py(result.final.x_e.y)
        parts.append(
            f'<path d="M {_fmt(fx - 5)} {_fmt(fy - 5)} L {_fmt(fx + 5)} {_fmt(fy + 5)} '
            f'M {_fmt(fx - 5)} {_fmt(fy + 5)} L {_fmt(fx + 5)} {_fmt(fy - 5)}" '
            'stroke="black" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{_fmt(fx + 8)}" y="{_fmt(fy - 8)}" {_FONT}>'
            f"capture t={result.capture_time:.9g} s</text>"
        )
    parts.append(
        f'<text x="16" y="22" {_FONT}>outcome: {result.outcome.value}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _clip_line(
    slope: float, intercept: float, x_lo: float, x_hi: float, y_lo: float, y_hi: float
) -> tuple[tuple[float, float], tuple[float, float]] | None:
    # Clip y = slope*x + intercept to the plot rectangle.
    xa, xb = x_lo, x_hi
    ya, yb = slope * xa + intercept, slope * xb + intercept
    t_lo, t_hi = 0.0, 1.0
    dy = yb - ya
    if dy == 0.0:
        if not (y_lo <= ya <= y_hi):
            return None
    else:
        t0, t1 = (y_lo - ya) / dy, (y_hi - ya) / dy
        if t0 > t1:
            t0, t1 = t1, t0
        t_lo, t_hi = max(t_lo, t0), min(t_hi, t1)
        if t_lo >= t_hi:
            return None
    p0 = (xa + t_lo * (xb - xa), ya + t_lo * dy)
    p1 = (xa + t_hi * (xb - xa), ya + t_hi * dy)
    return p0, p1


def zone_svg(grid: ZoneGrid, fit: LineFit | None = None) -> str:
    spec = grid.spec
    x_lo, x_hi = spec.ae_min - spec.ae_step / 2, spec.ae_max + spec.ae_step / 2
    y_lo, y_hi = spec.ap_min - spec.ap_step / 2, spec.ap_max + spec.ap_step / 2
    frame = _Frame(x_lo, x_hi, y_lo, y_hi, 480, 560, 60, 30)
    total_w, total_h = 640, 650

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" '
        f'height="{total_h}" viewBox="0 0 {total_w} {total_h}">',
        f'<rect width="{total_w}" height="{total_h}" fill="white"/>',
    ]
    cell_w = frame.px(x_lo + spec.ae_step) - frame.px(x_lo)
    cell_h = frame.py(y_lo) - frame.py(y_lo + spec.ap_step)
    for i, ap in enumerate(spec.ap_values):
        for j, ae in enumerate(spec.ae_values):
            fill = (
                CAPTURED_FILL
                if grid.outcomes[i][j] is Outcome.CAPTURED
                else ESCAPED_FILL
            )
            parts.append(
                f'<rect x="{_fmt(frame.px(ae - spec.ae_step / 2))}" '
                f'y="{_fmt(frame.py(ap + spec.ap_step / 2))}" '
                f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" fill="{fill}"/>'
            )

    # Equal-acceleration diagonal: everything escaped above it is expected,
    # escapes below it are the interesting region.
    d_lo = max(x_lo, y_lo)
    d_hi = min(x_hi, y_hi)
    if d_lo < d_hi:
        parts.append(
            f'<line x1="{_fmt(frame.px(d_lo))}" y1="{_fmt(frame.py(d_lo))}" '
            f'x2="{_fmt(frame.px(d_hi))}" y2="{_fmt(frame.py(d_hi))}" '
            'stroke="#444444" stroke-width="1.5" stroke-dasharray="6,4"/>'
        )
    if fit is not None:
        seg = _clip_line(fit.slope, fit.intercept, x_lo, x_hi, y_lo, y_hi)
        if seg is not None:
            (ax, ay), (bx, by) = seg
            parts.append(
                f'<line x1="{_fmt(frame.px(ax))}" y1="{_fmt(frame.py(ay))}" '
                f'x2="{_fmt(frame.px(bx))}" y2="{_fmt(frame.py(by))}" '
                'stroke="black" stroke-width="2"/>'
            )

    axis_y = frame.top + frame.height
    parts.append(
        f'<line x1="{frame.left}" y1="{axis_y}" x2="{frame.left + frame.width}" '
        f'y2="{axis_y}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{frame.left}" y1="{frame.top}" x2="{frame.left}" '
        f'y2="{axis_y}" stroke="black"/>'
    )
    tick = int(x_lo) + 1
    while tick <= x_hi:
        px = frame.px(tick)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{axis_y}" x2="{_fmt(px)}" '
            f'y2="{axis_y + 5}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{axis_y + 18}" {_FONT} '
            f'text-anchor="middle">{tick}</text>'
        )
        tick += 1
    tick = int(y_lo) + 1
    while tick <= y_hi:
        py = frame.py(tick)
        parts.append(
            f'<line x1="{frame.left - 5}" y1="{_fmt(py)}" x2="{frame.left}" '
            f'y2="{_fmt(py)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{frame.left - 9}" y="{_fmt(py + 4)}" {_FONT} '
            f'text-anchor="end">{tick}</text>'
        )
        tick += 1
    parts.append(
        f'<text x="{frame.left + frame.width / 2}" y="{axis_y + 36}" {_FONT} '
        'text-anchor="middle">evader max acceleration (m/s^2)</text>'
    )
    parts.append(
        f'<text x="16" y="{frame.top + frame.height / 2}" {_FONT} '
        f'text-anchor="middle" transform="rotate(-90 16 '
        f'{frame.top + frame.height / 2})">pursuer max acceleration (m/s^2)</text>'
    )

    legend_y = total_h - 22
    parts.append(
        f'<rect x="{frame.left}" y="{legend_y - 11}" width="12" height="12" '
        f'fill="{CAPTURED_FILL}"/>'
    )
    parts.append(f'<text x="{frame.left + 17}" y="{legend_y}" {_FONT}>captured</text>')
    parts.append(
        f'<rect x="{frame.left + 95}" y="{legend_y - 11}" width="12" height="12" '
        f'fill="{ESCAPED_FILL}"/>'
    )
    parts.append(f'<text x="{frame.left + 112}" y="{legend_y}" {_FONT}>escaped</text>')
    if fit is not None:
        parts.append(
            f'<text x="{frame.left + 190}" y="{legend_y}" {_FONT}>'
            f"fit: a_p = {fit.slope:.3f} a_e + {fit.intercept:.3f}</text>"
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
