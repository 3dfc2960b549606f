"""CSV, JSON, and SVG emission.

Floating-point values in CSV files are written with 17 significant digits
(%.17g), which round-trips IEEE doubles losslessly.  JSON uses the standard
shortest-roundtrip float representation, which is also lossless.  All
writers are deterministic: identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .simplex import to_planar

SQRT3 = math.sqrt(3.0)


def fmt(x: float) -> str:
    return "%.17g" % float(x)


def write_trajectory_csv(path, points: np.ndarray) -> None:
    """Header n,x1,...,xm and one row per trajectory point."""
    points = np.atleast_2d(points)
    m = points.shape[1]
    header = "n," + ",".join(f"x{i + 1}" for i in range(m))
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for n, row in enumerate(points):
            fh.write(str(n) + "," + ",".join(fmt(v) for v in row) + "\n")


def read_trajectory_csv(path) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        m = len(header) - 1
        rows = []
        for line in fh:
            parts = line.strip().split(",")
            rows.append([float(v) for v in parts[1:]])
    return np.array(rows).reshape(-1, m)


def write_cloud_csv(path, samples: np.ndarray) -> None:
    """Header x1,...,xm and one row per sample."""
    samples = np.atleast_2d(samples)
    m = samples.shape[1]
    with open(path, "w") as fh:
        fh.write(",".join(f"x{i + 1}" for i in range(m)) + "\n")
        for row in samples:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_sweep_csv(path, rows) -> None:
    with open(path, "w") as fh:
        fh.write("alpha,components,lyapunov,min_coord,diameter,verdict\n")
        for r in rows:
            fh.write(",".join([
                fmt(r.alpha),
                str(r.component_count),
                fmt(r.top_lyapunov_estimate),
                fmt(r.min_coordinate_seen),
                fmt(r.attractor_diameter),
                r.verdict_summary,
            ]) + "\n")


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def svg_scatter(samples: np.ndarray, width: int = 640, dot_radius: float = 1.0) -> str:
    """Scatter plot of a cloud inside the outlined 2-simplex.

    The simplex is drawn as an equilateral triangle via the planar map
    u = x2 + x3/2, v = (sqrt(3)/2) x3 (first vertex at the origin, lower
    left).  One circle element per sample, plus one polygon outline.
    """
    margin = 20.0
    scale = width - 2.0 * margin
    height = margin * 2.0 + scale * (SQRT3 / 2.0)

    def pix(uv):
        x = margin + uv[:, 0] * scale
        y = height - margin - uv[:, 1] * scale
        return x, y

    uv = to_planar(np.atleast_2d(samples))
    px, py = pix(uv)
    corners = np.array([
        to_planar(np.array([1.0, 0.0, 0.0])),
        to_planar(np.array([0.0, 1.0, 0.0])),
        to_planar(np.array([0.0, 0.0, 1.0])),
    ])
    cx, cy = pix(corners)
    outline = " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(cx, cy))

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<polygon points="{outline}" fill="none" stroke="black" '
        'stroke-width="1"/>',
    ]
    for x, y in zip(px, py):
        parts.append(
            f'<circle cx="{x:.3f}" cy="{y:.3f}" r="{dot_radius:g}" '
            'fill="#1f4e79" fill-opacity="0.6" stroke="none"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(path, samples: np.ndarray, **kwargs) -> None:
    with open(path, "w") as fh:
        fh.write(svg_scatter(samples, **kwargs))
