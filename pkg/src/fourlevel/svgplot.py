"""Minimal self-contained SVG rendering for spectrum sweeps.

No plotting dependency: polyline paths, axis ticks and a small legend.
Imaginary parts are drawn solid, real parts dashed, following the usual
absorption/refraction plotting convention.
"""
from __future__ import annotations

from .spectra import SusceptibilityPoint

_WIDTH = 720
_HEIGHT = 480
_MARGIN_L = 70
_MARGIN_R = 20
_MARGIN_T = 40
_MARGIN_B = 50
_N_TICKS = 5


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _scale(values, lo, hi, out_lo, out_hi):
    span = hi - lo
    if span == 0.0:
        span = 1.0
    return [out_lo + (v - lo) / span * (out_hi - out_lo) for v in values]


def _polyline(xs, ys, stroke: str, dashed: bool) -> str:
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return (f'<polyline fill="none" stroke="{stroke}" stroke-width="1.5"{dash} '
            f'points="{pts}"/>')


def render_spectrum_svg(points: list[SusceptibilityPoint], title: str) -> str:
    """SVG document with Im (solid) and Re (dashed) of the angle-resolved
    susceptibility against detuning."""
    deltas = [p.delta for p in points]
    im_vals = [p.chi_psi.imag for p in points]
    re_vals = [p.chi_psi.real for p in points]

    x_lo, x_hi = min(deltas), max(deltas)
    y_all = im_vals + re_vals
    y_lo, y_hi = min(y_all), max(y_all)
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo -= pad
    y_hi += pad

    plot_l, plot_r = _MARGIN_L, _WIDTH - _MARGIN_R
    plot_t, plot_b = _MARGIN_T, _HEIGHT - _MARGIN_B

    xs = _scale(deltas, x_lo, x_hi, plot_l, plot_r)
    ys_im = _scale(im_vals, y_lo, y_hi, plot_b, plot_t)
    ys_re = _scale(re_vals, y_lo, y_hi, plot_b, plot_t)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<rect x="{plot_l}" y="{plot_t}" width="{plot_r - plot_l}" '
        f'height="{plot_b - plot_t}" fill="none" stroke="black"/>',
    ]

    for k in range(_N_TICKS):
        frac = k / (_N_TICKS - 1)
        xv = x_lo + frac * (x_hi - x_lo)
        xp = plot_l + frac * (plot_r - plot_l)
        parts.append(f'<line x1="{xp:.2f}" y1="{plot_b}" x2="{xp:.2f}" '
                     f'y2="{plot_b + 5}" stroke="black"/>')
        parts.append(f'<text x="{xp:.2f}" y="{plot_b + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{_fmt(xv)}</text>')
        yv = y_lo + frac * (y_hi - y_lo)
        yp = plot_b + frac * (plot_t - plot_b)
        parts.append(f'<line x1="{plot_l - 5}" y1="{yp:.2f}" x2="{plot_l}" '
                     f'y2="{yp:.2f}" stroke="black"/>')
        parts.append(f'<text x="{plot_l - 8}" y="{yp + 4:.2f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{_fmt(yv)}</text>')

    # zero line when the range straddles zero
    if y_lo < 0.0 < y_hi:
        yz = plot_b + (0.0 - y_lo) / (y_hi - y_lo) * (plot_t - plot_b)
        parts.append(f'<line x1="{plot_l}" y1="{yz:.2f}" x2="{plot_r}" '
                     f'y2="{yz:.2f}" stroke="#bbbbbb" stroke-width="0.75"/>')

    parts.append(_polyline(xs, ys_im, "#1f4e9c", dashed=False))
    parts.append(_polyline(xs, ys_re, "#b03030", dashed=True))

    lx, ly = plot_l + 12, plot_t + 16
    parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" '
                 f'stroke="#1f4e9c" stroke-width="1.5"/>')
    parts.append(f'<text x="{lx + 36}" y="{ly + 4}" font-family="sans-serif" '
                 f'font-size="12">Im chi(psi)</text>')
    parts.append(f'<line x1="{lx}" y1="{ly + 18}" x2="{lx + 30}" y2="{ly + 18}" '
                 f'stroke="#b03030" stroke-width="1.5" stroke-dasharray="6,4"/>')
    parts.append(f'<text x="{lx + 36}" y="{ly + 22}" font-family="sans-serif" '
                 f'font-size="12">Re chi(psi)</text>')

    parts.append(f'<text x="{(plot_l + plot_r) // 2}" y="{_HEIGHT - 12}" '
                 f'text-anchor="middle" font-family="sans-serif" font-size="12">'
                 f'probe detuning (units of the decay rate)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
