"""Min-ambiguity fields over grids of initial values.

Each pixel center is an initial value; its field value is the minimum
ambiguity of the first `steps` greedy steps (0 when the orbit ties).  The
per-pixel computation mirrors the scalar engine expression for expression,
so a grid value is bitwise equal to re-running that pixel through run_orbit.
Rows are partitioned into fixed-size blocks that are independent tasks;
worker count affects scheduling only, never values.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dynamics import rotation_batch

ROW_BLOCK = 8  # rows per task; fixed so tiling never depends on worker count


@dataclass(frozen=True)
class FieldSpec:
    rect: tuple[float, float, float, float]  # re_min, re_max, im_min, im_max
    resolution: tuple[int, int]  # width, height
    alpha: float
    steps: int
    transform: str = "sqrt"  # applied at encode time: 'sqrt' | 'linear'

    def __post_init__(self):
        re_min, re_max, im_min, im_max = self.rect
        if not (re_min < re_max and im_min < im_max):
            raise ValueError("rectangle is empty")
        width, height = self.resolution
        if width < 1 or height < 1:
            raise ValueError("resolution must be at least 1x1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.transform not in ("sqrt", "linear"):
            raise ValueError(f"unknown transform {self.transform!r}")

    @property
    def alpha_hex(self) -> str:
        return float(self.alpha).hex()


@dataclass(frozen=True)
class FieldStats:
    min: float
    max: float
    tie_count: int


@dataclass(frozen=True)
class Field:
    spec: FieldSpec
    values: np.ndarray  # float64, shape (height, width), row 0 at im_max
    stats: FieldStats

    def __post_init__(self):
        self.values.setflags(write=False)


def pixel_axes(spec: FieldSpec) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-center coordinates: xs left-to-right, ys top-to-bottom."""
    re_min, re_max, im_min, im_max = spec.rect
    width, height = spec.resolution
    xs = re_min + (np.arange(width) + 0.5) * (re_max - re_min) / width
    ys = im_max - (np.arange(height) + 0.5) * (im_max - im_min) / height
    return xs, ys


def _render_block(spec: FieldSpec, row_start: int, row_count: int) -> np.ndarray:
    xs, ys = pixel_axes(spec)
    rows = ys[row_start:row_start + row_count]
    width = xs.shape[0]
    zx = np.tile(xs, rows.shape[0])
    zy = np.repeat(rows, width)
    minamb = np.full(zx.shape, np.inf)
    active = np.ones(zx.shape, dtype=bool)
    wx_all, wy_all = rotation_batch(spec.alpha, 0, spec.steps)
    for n in range(spec.steps):
        px = zx + wx_all[n]
        py = zy + wy_all[n]
        mx = zx - wx_all[n]
        my = zy - wy_all[n]
        ap = np.sqrt(px * px + py * py)
        am = np.sqrt(mx * mx + my * my)
        amb = np.abs(ap - am)
        minamb = np.where(active, np.minimum(minamb, amb), minamb)
        tie = active & (ap == am)
        active &= ~tie
        plus = ap < am
        zx = np.where(active & plus, px, np.where(active, mx, zx))
        zy = np.where(active & plus, py, np.where(active, my, zy))
        if not active.any():
            break
    minamb[np.isinf(minamb)] = 0.0
    return minamb.reshape(rows.shape[0], width)


def _render_block_task(args):
    spec, row_start, row_count = args
    return row_start, _render_block(spec, row_start, row_count)


def render_field(spec: FieldSpec, workers: int = 1) -> Field:
    """Render the min-ambiguity field; output is independent of `workers`."""
    width, height = spec.resolution
    tasks = [(spec, start, min(ROW_BLOCK, height - start))
             for start in range(0, height, ROW_BLOCK)]
    values = np.empty((height, width), dtype=np.float64)
    if workers <= 1:
        for task in tasks:
            start, block = _render_block_task(task)
            values[start:start + block.shape[0]] = block
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for start, block in pool.map(_render_block_task, tasks):
                values[start:start + block.shape[0]] = block
    tie_count = int(np.count_nonzero(values == 0.0))
    stats = FieldStats(min=float(values.min()), max=float(values.max()),
                       tie_count=tie_count)
    return Field(spec=spec, values=values, stats=stats)


def _transformed(field: Field) -> np.ndarray:
    if field.spec.transform == "sqrt":
        return np.sqrt(field.values)
    return field.values


def _quantize(field: Field) -> tuple[np.ndarray, float]:
    shown = _transformed(field)
    peak = float(shown.max())
    if peak == 0.0:
        warnings.warn("field is identically zero; emitting an all-black image",
                      stacklevel=3)
        return np.zeros(shown.shape, dtype=np.uint8), 0.0
    scale = 255.0 / peak
    return np.rint(shown * scale).astype(np.uint8), scale


def encode_field(field: Field, format: str = "pgm8") -> bytes:
    """Serialize a field: 'pgm8' (display-normalized), 'raw_f32', or 'png'."""
    if format == "raw_f32":
        return field.values.astype("<f4").tobytes()
    if format == "pgm8":
        pixels, _ = _quantize(field)
        height, width = pixels.shape
        return f"P5\n{width} {height}\n255\n".encode() + pixels.tobytes()
    if format == "png":
        from PIL import Image
        import io
        pixels, _ = _quantize(field)
        buf = io.BytesIO()
        Image.fromarray(pixels, mode="L").save(buf, format="PNG")
        return buf.getvalue()
    raise ValueError(f"unknown format {format!r}")


def decode_raw_f32(data: bytes, resolution: tuple[int, int]) -> np.ndarray:
    width, height = resolution
    values = np.frombuffer(data, dtype="<f4")
    if values.size != width * height:
        raise ValueError(f"expected {width * height} f32 values, got {values.size}")
    return values.reshape(height, width)


def field_sidecar(field: Field, format: str = "raw_f32") -> dict:
    """Metadata sidecar pinning the exact parameters that produced the bytes."""
    doc = {
        "rect": list(field.spec.rect),
        "resolution": list(field.spec.resolution),
        "alpha": field.spec.alpha,
        "alpha_hex": field.spec.alpha_hex,
        "steps": field.spec.steps,
        "transform": field.spec.transform,
        "format": format,
        "min": field.stats.min,
        "max": field.stats.max,
        "tie_count": field.stats.tie_count,
    }
    if format in ("pgm8", "png"):
        shown_peak = float(_transformed(field).max())
        doc["scale"] = 255.0 / shown_peak if shown_peak > 0 else 0.0
    return doc


def field_sidecar_dumps(field: Field, format: str = "raw_f32") -> str:
    return json.dumps(field_sidecar(field, format), indent=2)
