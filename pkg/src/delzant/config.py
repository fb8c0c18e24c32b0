"""Configuration files describing quotient presentations.

A configuration is a JSON object with the integer matrices and the
level data; see the README for the schema.  Facet indices in files are
1-based (matching the usual facet numbering); the library API is
0-based throughout.

The package ships a corpus of ready-made configurations covering
projective spaces, a weighted projective plane, the three-point blowup
of the projective plane, and the canonical bundles over these.
"""

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import ConfigError
from .lattice import IntegerMatrix, ToricPresentation

__all__ = ["PresentationConfig", "load_config", "to_presentation",
           "load_presentation", "bundled_names", "bundled_path"]

BUNDLED = ("p1", "p2", "p3", "p123", "p2blow3",
           "kp1", "kp1_allones", "kp2", "kp2blow3")


@dataclass(frozen=True)
class PresentationConfig:
    name: str
    B: list
    Q: list            # or None
    A: list            # or None
    kappa: list        # or None
    a: list            # or None
    anchor: list       # 0-based, or None
    is_canonical_bundle: bool
    d: int
    n: int


def _require_int_matrix(raw, field, source, rows=None, cols=None):
    if not isinstance(raw, list) or not raw or \
            not all(isinstance(r, list) for r in raw):
        raise ConfigError(f"{source}: field '{field}' must be a list of rows")
    width = len(raw[0])
    for i, row in enumerate(raw):
        if len(row) != width:
            raise ConfigError(
                f"{source}: field '{field}' row {i + 1} has length "
                f"{len(row)}, expected {width}")
        for j, x in enumerate(row):
            if not isinstance(x, int) or isinstance(x, bool):
                raise ConfigError(
                    f"{source}: field '{field}' entry ({i + 1},{j + 1}) "
                    f"is not an integer: {x!r}")
    if rows is not None and len(raw) != rows:
        raise ConfigError(
            f"{source}: field '{field}' must have {rows} rows, "
            f"got {len(raw)}")
    if cols is not None and width != cols:
        raise ConfigError(
            f"{source}: field '{field}' must have {cols} columns, "
            f"got {width}")
    return raw


def _require_numbers(raw, field, source, length=None):
    if not isinstance(raw, list) or \
            not all(isinstance(x, (int, float)) and not isinstance(x, bool)
                    for x in raw):
        raise ConfigError(f"{source}: field '{field}' must be a list "
                          "of numbers")
    if length is not None and len(raw) != length:
        raise ConfigError(f"{source}: field '{field}' must have length "
                          f"{length}, got {len(raw)}")
    return [float(x) for x in raw]


def load_config(source):
    """Parse and validate a configuration from a path or a dict."""
    if isinstance(source, dict):
        data, origin = source, "<dict>"
    else:
        origin = str(source)
        try:
            with open(source, encoding="utf-8") as handle:
                data = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"{origin}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{origin}: line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{origin}: top level must be a JSON object")
    unknown = set(data) - {"name", "d", "n", "B", "Q", "A", "level",
                           "is_canonical_bundle"}
    if unknown:
        raise ConfigError(f"{origin}: unknown fields {sorted(unknown)}")
    if "B" not in data:
        raise ConfigError(f"{origin}: field 'B' is required")
    b = _require_int_matrix(data["B"], "B", origin)
    n, d = len(b), len(b[0])
    if "n" in data and data["n"] != n:
        raise ConfigError(f"{origin}: field 'n' is {data['n']} but B has "
                          f"{n} rows")
    if "d" in data and data["d"] != d:
        raise ConfigError(f"{origin}: field 'd' is {data['d']} but B has "
                          f"{d} columns")
    q = _require_int_matrix(data["Q"], "Q", origin, rows=d, cols=d - n) \
        if "Q" in data and data["Q"] is not None else None
    a_mat = _require_int_matrix(data["A"], "A", origin, rows=d, cols=n) \
        if "A" in data and data["A"] is not None else None

    level = data.get("level")
    kappa = a_level = anchor = None
    if level is not None:
        if not isinstance(level, dict):
            raise ConfigError(f"{origin}: field 'level' must be an object")
        if "kappa" in level:
            kappa = _require_numbers(level["kappa"], "level.kappa", origin,
                                     length=d)
            if set(level) - {"kappa"}:
                raise ConfigError(f"{origin}: level with 'kappa' takes no "
                                  "other fields")
        elif "a" in level:
            a_level = _require_numbers(level["a"], "level.a", origin,
                                       length=d - n)
            if "anchor" not in level:
                raise ConfigError(f"{origin}: level with 'a' needs 'anchor'")
            raw_anchor = level["anchor"]
            if not isinstance(raw_anchor, list) or \
                    not all(isinstance(j, int) and not isinstance(j, bool)
                            for j in raw_anchor):
                raise ConfigError(f"{origin}: field 'level.anchor' must be "
                                  "a list of 1-based facet indices")
            if not all(1 <= j <= d for j in raw_anchor):
                raise ConfigError(f"{origin}: anchor indices must lie in "
                                  f"1..{d}")
            anchor = [j - 1 for j in raw_anchor]
        else:
            raise ConfigError(f"{origin}: level needs 'kappa' or "
                              "'a'+'anchor'")
    name = data.get("name") or (origin.rsplit("/", 1)[-1].removesuffix(".json")
                                if origin not in ("<dict>",) else "unnamed")
    return PresentationConfig(
        name=str(name), B=b, Q=q, A=a_mat, kappa=kappa, a=a_level,
        anchor=anchor, is_canonical_bundle=bool(
            data.get("is_canonical_bundle", False)),
        d=d, n=n)


def to_presentation(cfg, a=None, kappa=None, anchor=None):
    """Build a validated presentation, with optional level overrides.

    ``anchor`` is 0-based here; CLI layers convert from 1-based input.
    """
    if kappa is not None:
        level_kappa, level_a, level_anchor = np.asarray(kappa, float), None, None
    else:
        level_anchor = anchor if anchor is not None else cfg.anchor
        if a is not None:
            level_a = np.atleast_1d(np.asarray(a, dtype=float))
            if level_a.size == 1 and cfg.d - cfg.n > 1:
                level_a = np.full(cfg.d - cfg.n, float(level_a[0]))
            level_kappa = None
        elif cfg.a is not None:
            level_a, level_kappa = cfg.a, None
        else:
            level_a, level_kappa = None, cfg.kappa
    return ToricPresentation.build(
        IntegerMatrix.from_rows(cfg.B),
        q=IntegerMatrix.from_rows(cfg.Q) if cfg.Q else None,
        a_matrix=IntegerMatrix.from_rows(cfg.A) if cfg.A else None,
        kappa=level_kappa, a_level=level_a, anchor=level_anchor,
        is_canonical_bundle=cfg.is_canonical_bundle, name=cfg.name)


def bundled_names():
    return BUNDLED


def bundled_path(name):
    """Filesystem path of a bundled configuration."""
    if name not in BUNDLED:
        raise ConfigError(f"no bundled configuration named {name!r}; "
                          f"available: {', '.join(BUNDLED)}")
    return resources.files("delzant.data").joinpath(f"{name}.json")


def load_presentation(source, a=None, kappa=None, anchor=None):
    """One-stop loader: bundled name, path, or dict to presentation."""
    if isinstance(source, str) and source in BUNDLED:
        source = str(bundled_path(source))
    cfg = load_config(source)
    return to_presentation(cfg, a=a, kappa=kappa, anchor=anchor)
