"""Body-spec grammar and artifact serialization (CSV, JSON, SVG)."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .bodies import (
    Ball,
    CappedCylinder,
    Cylinder,
    DoubleCone,
    MeridianProfile,
    Mod4Body,
    PBody,
    Sampled,
    SegmentBody,
    TwoCylinderUnion,
)


class BodySpecError(ValueError):
    pass


def _floats(text: str, count: int, name: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != count:
        raise BodySpecError(f"{name} takes {count} parameter(s), got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise BodySpecError(f"bad number in {name}:{text}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise BodySpecError(f"{name} parameters must be finite")
    return vals


def parse_body(spec: str) -> MeridianProfile:
    """Parse ``ball | cone | cylinder | segment:a,b | pball:p | ktee:t | mod4 | capped:alpha | file:<csv>``."""
    name, _, arg = spec.strip().partition(":")
    name = name.lower()
    simple = {"ball": Ball, "cone": DoubleCone, "cylinder": Cylinder, "mod4": Mod4Body}
    try:
        if name in simple:
            if arg:
                raise BodySpecError(f"{name} takes no parameters")
            return simple[name]()
        if name == "segment":
            return SegmentBody(*_floats(arg, 2, name))
        if name == "pball":
            return PBody(*_floats(arg, 1, name))
        if name == "ktee":
            return TwoCylinderUnion(*_floats(arg, 1, name))
        if name == "capped":
            return CappedCylinder(*_floats(arg, 1, name))
        if name == "file":
            if not arg:
                raise BodySpecError("file: needs a path")
            return read_profile_csv(arg)
    except BodySpecError:
        raise
    except (ValueError, OSError) as exc:
        raise BodySpecError(f"{spec!r}: {exc}") from exc
    raise BodySpecError(f"unknown body {spec!r}")


def format_body(profile: MeridianProfile) -> str:
    if isinstance(profile, DoubleCone):
        return "cone"
    if isinstance(profile, SegmentBody):
        return f"segment:{profile.a!r},{profile.b!r}"
    if isinstance(profile, PBody):
        return f"pball:{profile.p!r}"
    if isinstance(profile, TwoCylinderUnion):
        return f"ktee:{profile.t!r}"
    if isinstance(profile, CappedCylinder):
        return f"capped:{profile.alpha!r}"
    if isinstance(profile, (Ball, Cylinder, Mod4Body)):
        return profile.kind
    raise BodySpecError(f"no spec string for {profile.kind!r} profiles")


def fmt(value) -> str:
    """17 significant digits, which round-trips binary64 exactly."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
    return path


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def read_profile_csv(path) -> Sampled:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header != ["theta", "rho"]:
            raise BodySpecError(f"{path}: expected header 'theta,rho', got {','.join(header)!r}")
        rows = [(float(a), float(b)) for a, b in reader]
    th, rho = np.array(rows).T
    return Sampled(th, rho)


def write_profile_csv(path, profile: Sampled) -> Path:
    return write_csv(path, ("theta", "rho"), zip(profile.theta, profile.rho))


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=False) + "\n")
    return path


def polyline_svg(curves, title: str = "", width: int = 800, height: int = 600) -> str:
    """Plain polylines in a fixed viewBox; ``curves`` is a list of (label, xs, ys)."""
    pad = 40
    xs_all = np.concatenate([np.asarray(c[1], float) for c in curves])
    ys_all = np.concatenate([np.asarray(c[2], float) for c in curves])
    x0, x1 = float(xs_all.min()), float(xs_all.max())
    y0, y1 = float(ys_all.min()), float(ys_all.max())
    x1 = x1 if x1 > x0 else x0 + 1
    y1 = y1 if y1 > y0 else y0 + 1
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{pad}" y="24" font-family="sans-serif" font-size="16">{title}</text>')
    for i, (label, xs, ys) in enumerate(curves):
        px = pad + (np.asarray(xs, float) - x0) / (x1 - x0) * (width - 2 * pad)
        py = height - pad - (np.asarray(ys, float) - y0) / (y1 - y0) * (height - 2 * pad)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        color = colors[i % len(colors)]
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        out.append(
            f'<text x="{width - 200}" y="{30 + 18 * i}" font-family="sans-serif" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = [
    "BodySpecError",
    "parse_body",
    "format_body",
    "fmt",
    "write_csv",
    "csv_text",
    "read_profile_csv",
    "write_profile_csv",
    "write_json",
    "polyline_svg",
]
