"""CSV and SVG writers for simulation traces."""

import csv
import math
from xml.sax.saxutils import escape

import numpy as np

from .errors import ScenarioError
from .sim import Trace, column_kind

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
           "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(value, kind):
    if kind == "str":
        return value
    if kind == "int":
        return str(int(value))
    if value == 0:
        return "0"
    return "%.9g" % value


def write_csv(trace, path):
    kinds = [column_kind(c) for c in trace.columns]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(trace.columns)
        for row in trace.rows:
            w.writerow([_fmt(v, k) for v, k in zip(row, kinds)])


def read_trace_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise ScenarioError("empty trace file", str(path)) from None
        if "t_s" not in columns:
            raise ScenarioError("missing t_s column", str(path))
        kinds = [column_kind(c) for c in columns]
        conv = {"str": str, "int": int, "float": float}
        rows = []
        for n, raw in enumerate(reader, start=2):
            if len(raw) != len(columns):
                raise ScenarioError(f"line {n} has {len(raw)} fields, expected {len(columns)}",
                                    str(path))
            rows.append([conv[k](v) for v, k in zip(raw, kinds)])
    return Trace(columns, rows)


class _Frame:
    """Maps north/east metres to SVG pixels with north up and equal scale."""

    def __init__(self, north, east, box):
        x0, y0, w, h = box
        n_lo, n_hi = float(np.min(north)), float(np.max(north))
        e_lo, e_hi = float(np.min(east)), float(np.max(east))
        span = max(n_hi - n_lo, e_hi - e_lo, 1.0) * 1.1
        self.scale = min(w, h) / span
        self.cx = x0 + w / 2 - self.scale * (e_lo + e_hi) / 2
        self.cy = y0 + h / 2 + self.scale * (n_lo + n_hi) / 2

    def __call__(self, n, e):
        return self.cx + self.scale * e, self.cy - self.scale * n


def _pts(pairs):
    return " ".join(f"{x:.2f},{y:.2f}" for x, y in pairs)


def write_svg(trace, path, title=None, width=800, height=1000, glyph_every_s=20.0):
    """Plan view of the trajectories above a tracking-error strip."""
    ids = trace.airship_ids
    t = trace.time
    north = [trace.airship(i, "n_m") for i in ids] + [trace.column("goal_n_m")]
    east = [trace.airship(i, "e_m") for i in ids] + [trace.column("goal_e_m")]
    frame = _Frame(np.concatenate(north), np.concatenate(east), (40, 60, width - 80, width - 80))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.0f}" y="30" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="18">{escape(title)}</text>')
    out.append(f'<text x="{width - 40}" y="55" text-anchor="end" font-family="sans-serif" '
               'font-size="12">N up</text>')

    # goals: distinct waypoint markers with their radius, or the target path
    gn, ge = trace.column("goal_n_m"), trace.column("goal_e_m")
    radius = trace.column("goal_radius_m")
    seen = set()
    moving = len(set(zip(gn.round(6), ge.round(6)))) > len(set(trace.column("wp_index"))) + 1
    if moving:
        out.append(f'<polyline fill="none" stroke="#555" stroke-dasharray="6,4" stroke-width="1.5" '
                   f'points="{_pts(frame(n, e) for n, e in zip(gn, ge))}"/>')
    else:
        for n, e, r in zip(gn, ge, radius):
            key = (round(n, 6), round(e, 6))
            if key in seen:
                continue
            seen.add(key)
            x, y = frame(n, e)
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r * frame.scale:.2f}" '
                       'fill="none" stroke="#555" stroke-dasharray="4,3"/>')
            out.append(f'<path d="M {x - 5:.2f} {y:.2f} L {x + 5:.2f} {y:.2f} M {x:.2f} '
                       f'{y - 5:.2f} L {x:.2f} {y + 5:.2f}" stroke="#555"/>')

    dt = float(t[1] - t[0]) if len(t) > 1 else 1.0
    every = max(int(round(glyph_every_s / dt)), 1)
    roles = trace.roles
    for k, i in enumerate(ids):
        colour = PALETTE[k % len(PALETTE)]
        n, e, yaw = trace.airship(i, "n_m"), trace.airship(i, "e_m"), trace.airship(i, "yaw_rad")
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" '
                   f'points="{_pts(frame(a, b) for a, b in zip(n, e))}"/>')
        for j in range(0, len(n), every):
            x, y = frame(n[j], e[j])
            # triangle pointing along the heading, screen y grows southward
            c, s = math.cos(yaw[j]), math.sin(yaw[j])
            tip = (x + 8 * s, y - 8 * c)
            left = (x - 4 * c - 4 * s, y - 4 * s + 4 * c)
            right = (x + 4 * c - 4 * s, y + 4 * s + 4 * c)
            out.append(f'<polygon points="{_pts((tip, left, right))}" fill="{colour}"/>')
        lx, ly = 50, 70 + 16 * k
        out.append(f'<text x="{lx}" y="{ly}" font-family="sans-serif" font-size="12" '
                   f'fill="{colour}">airship {i} ({escape(roles[i])})</text>')

    # error strip
    top, h = width + 10, height - width - 40
    left, w = 60, width - 100
    errs = [trace.airship(i, "err_m") for i in ids]
    e_max = max(float(np.nanmax(np.abs(e))) for e in errs) if errs else 1.0
    e_max = e_max if e_max > 0 else 1.0
    t_max = float(t[-1]) if len(t) and t[-1] > 0 else 1.0
    out.append(f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" stroke="black"/>')
    out.append(f'<text x="{left}" y="{top - 2}" font-family="sans-serif" font-size="12">'
               f'tracking error (m), max {e_max:.1f}</text>')
    out.append(f'<text x="{left + w}" y="{top + h + 14}" text-anchor="end" '
               f'font-family="sans-serif" font-size="12">t = {t_max:.0f} s</text>')
    for k, err in enumerate(errs):
        colour = PALETTE[k % len(PALETTE)]
        pts = ((left + w * tt / t_max, top + h - h * ee / e_max) for tt, ee in zip(t, err))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1" points="{_pts(pts)}"/>')
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
