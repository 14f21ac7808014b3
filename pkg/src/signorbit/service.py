"""HTTP service: orbits, field tiles, and region geometry over GET endpoints.

All numeric work happens in the library; endpoints are stateless apart from
the tile cache, which memoizes encoded tiles by their exact parameter tuple
(alpha as hex double, rect, resolution, steps) and flags hits in the
X-Tile-Cache header.  Alpha expressions are parsed server-side and echoed
back as hex doubles so every client sees the identical canonical value.
"""

from __future__ import annotations

import os
import threading

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib
from collections import OrderedDict
from dataclasses import dataclass, replace

from fastapi import FastAPI
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from .dynamics import Params, StatusKind, min_ambiguity, orbit_to_json, run_orbit
from .expr import ExpressionError, parse_complex, parse_real
from .mapper import Field, FieldSpec, encode_field, render_field
from .periodicity import (
    CertificationError,
    certify_periodic_best,
    detect_sign_period,
)
from .regions import constant_sign_disks, region_to_json

BIND_ENV_VAR = "SIGNORBIT_BIND"


@dataclass(frozen=True)
class ServiceConfig:
    bind: str = "127.0.0.1:8777"
    tile_cache_size: int = 64
    max_horizon: int = 200_000
    max_pixels: int = 1_048_576
    max_steps: int = 20_000
    static_path: str | None = None

    def with_bind(self, bind: str) -> "ServiceConfig":
        return replace(self, bind=bind)

    def with_static(self, static_path: str) -> "ServiceConfig":
        return replace(self, static_path=static_path)


def load_config(path: str) -> ServiceConfig:
    with open(path, "rb") as handle:
        doc = tomllib.load(handle)
    section = doc.get("service", doc)
    config = ServiceConfig(
        bind=section.get("bind", ServiceConfig.bind),
        tile_cache_size=section.get("tile_cache_size", ServiceConfig.tile_cache_size),
        max_horizon=section.get("max_horizon", ServiceConfig.max_horizon),
        max_pixels=section.get("max_pixels", ServiceConfig.max_pixels),
        max_steps=section.get("max_steps", ServiceConfig.max_steps),
        static_path=section.get("static_path"),
    )
    return config


class TileCache:
    """Small thread-safe LRU keyed by the exact tile parameter tuple."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._lock = threading.Lock()
        self._entries: OrderedDict[tuple, tuple[bytes, Field]] = OrderedDict()

    def get(self, key: tuple):
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                self._entries.move_to_end(key)
            return entry

    def put(self, key: tuple, value: tuple[bytes, Field]) -> None:
        if self.capacity <= 0:
            return
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.capacity:
                self._entries.popitem(last=False)


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse({"error": message, **extra}, status_code=status)


def _parse_real_param(text: str):
    try:
        return parse_real(text), None
    except ExpressionError as exc:
        return None, _error(400, str(exc), position=exc.position)


def _parse_complex_param(text: str):
    try:
        return parse_complex(text), None
    except ExpressionError as exc:
        return None, _error(400, str(exc), position=exc.position)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="signorbit", docs_url=None, redoc_url=None)
    tile_cache = TileCache(config.tile_cache_size)

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/parse")
    def parse(expr: str, kind: str = "real"):
        if kind == "real":
            value, err = _parse_real_param(expr)
            if err:
                return err
            return {"kind": "real", "value": value, "hex": float(value).hex()}
        value, err = _parse_complex_param(expr)
        if err:
            return err
        return {"kind": "complex", "value": [value.real, value.imag],
                "hex": [float(value.real).hex(), float(value.imag).hex()]}

    @app.get("/api/orbit")
    def orbit_endpoint(alpha: str, z: str, n: int, min_repeats: int = 5):
        alpha_value, err = _parse_real_param(alpha)
        if err:
            return err
        z_value, err = _parse_complex_param(z)
        if err:
            return err
        if n < 1:
            return _error(400, "n must be >= 1")
        if n > config.max_horizon:
            return _error(413, f"n exceeds the configured limit {config.max_horizon}")
        try:
            params = Params(alpha=alpha_value, z_init=z_value, horizon=n)
        except ValueError as exc:
            return _error(400, str(exc))
        orbit = run_orbit(params)
        hyp = detect_sign_period(orbit.signs, min_repeats) if len(orbit) else None
        certificate = None
        if hyp is not None and orbit.status.kind is not StatusKind.TIE:
            try:
                certificate = certify_periodic_best(orbit, hyp).to_json()
            except CertificationError:
                certificate = None
        doc = orbit_to_json(orbit, extra={
            "period": {"k": hyp.k, "p": hyp.p,
                       "repeats": hyp.repeats_observed} if hyp else None,
            "min_ambiguity": min_ambiguity(orbit, 0) if len(orbit) else 0.0,
            "certificate": certificate,
        })
        return JSONResponse(doc)

    @app.get("/api/tile")
    def tile_endpoint(alpha: str, rect: str, res: str, steps: int = 1000):
        alpha_value, err = _parse_real_param(alpha)
        if err:
            return err
        try:
            parts = [float(p) for p in rect.split(",")]
            if len(parts) != 4:
                raise ValueError
        except ValueError:
            return _error(400, "rect must be re_min,re_max,im_min,im_max")
        try:
            res_parts = res.lower().replace("x", ",").split(",")
            width, height = int(res_parts[0]), int(res_parts[1])
        except (ValueError, IndexError):
            return _error(400, "res must be WIDTHxHEIGHT")
        if steps > config.max_steps:
            return _error(413, f"steps exceeds the configured limit {config.max_steps}")
        if width * height > config.max_pixels:
            return _error(413,
                          f"resolution exceeds the configured limit "
                          f"{config.max_pixels} pixels")
        try:
            # Params normalizes alpha mod 1 and rejects alpha == 0
            alpha_canonical = Params(alpha=alpha_value, z_init=0j, horizon=1).alpha
            spec = FieldSpec(rect=tuple(parts), resolution=(width, height),
                             alpha=alpha_canonical, steps=steps)
        except ValueError as exc:
            return _error(400, str(exc))
        key = (spec.alpha_hex, spec.rect, spec.resolution, spec.steps)
        cached = tile_cache.get(key)
        if cached is not None:
            payload, field = cached
            hit = "hit"
        else:
            field = render_field(spec)
            payload = encode_field(field, "raw_f32")
            tile_cache.put(key, (payload, field))
            hit = "miss"
        headers = {
            "X-Tile-Cache": hit,
            "X-Alpha-Hex": spec.alpha_hex,
            "X-Field-Min": repr(field.stats.min),
            "X-Field-Max": repr(field.stats.max),
            "X-Tie-Count": str(field.stats.tie_count),
        }
        return Response(content=payload, media_type="application/octet-stream",
                        headers=headers)

    @app.get("/api/regions")
    def regions_endpoint(alpha: str):
        alpha_value, err = _parse_real_param(alpha)
        if err:
            return err
        try:
            canonical = Params(alpha=alpha_value, z_init=0j, horizon=1).alpha
        except ValueError as exc:
            return _error(400, str(exc))
        minus_disk, plus_disk = constant_sign_disks(canonical)
        return {
            "alpha": canonical,
            "alpha_hex": float(canonical).hex(),
            "minus_disk": region_to_json(minus_disk),
            "plus_disk": region_to_json(plus_disk),
        }

    if config.static_path and os.path.isdir(config.static_path):
        app.mount("/", StaticFiles(directory=config.static_path, html=True),
                  name="static")

    return app


def run_server(config: ServiceConfig) -> None:
    import uvicorn

    bind = os.environ.get(BIND_ENV_VAR, config.bind)
    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
