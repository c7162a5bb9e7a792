"""Experiment configuration: TOML files, defaults and ``key=value`` overrides.

Complex numbers may be written as ``[re, im]`` or as a string such as
``"-1+0.004j"``.  The material table must contain exactly one of ``mu_c``,
``lambda`` or a ``drude`` sub-table; with none of them ``mu_c = 5`` is used.
Empty ``shape.params`` selects the named curve's standard parameters.
"""

from __future__ import annotations

import copy
import math
import re

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigError

DEFAULTS = {
    "shape": {"kind": "disk", "params": [], "scale": 1.0, "fit_order": 0},
    "material": {"omega": 0.01, "eps_m": 1.0, "mu_m": 1.0, "eps_c": 2.0},
    "incident": {"angle": math.pi / 3},
    "grid": {"n": 25, "n_synth": 32, "n_obs": 50, "R0": 1.5},
    "inversion": {
        "m": 3, "eta0": 1000.0, "alpha0": 1000.0, "beta0": 0.01, "delta": 0.001,
        "max_iters": 100, "stop_tol": 1e-5, "fd_step": 1e-6,
    },
    "sampling": {"n_samples": 10000, "level": 0.95},
    "sensitivity": {"eps_fd": 1e-4, "rtol": 1e-3, "h": "linear", "zetas": [0.5, 2 / 3, 1.0, 1.1, 1.2]},
    "spectrum": {"n": 100, "count": 12},
    "scan": {"omegas": [], "x0": [1.5, 0.0]},
    "svd": {"lambdas": []},
    "run": {"seed": 1, "seeds": list(range(1, 11)), "deltas": [0.001, 0.005, 0.01], "lambdas": []},
}

MATERIAL_FORMS = ("mu_c", "lambda", "drude")
SHAPE_KINDS = ("disk", "peanut", "peach", "ellipse", "trig_series")


def _line_of(text: str, section: str, key: str | None = None):
    """Best-effort line number of ``key`` inside ``[section]`` (1-based)."""
    if not text:
        return None
    lines = text.splitlines()
    header = re.compile(r"^\s*\[\s*" + re.escape(section) + r"\s*\]\s*$")
    start = None
    for i, line in enumerate(lines):
        if header.match(line):
            start = i
            break
    if start is None:
        return None
    if key is None:
        return start + 1
    pat = re.compile(r"^\s*" + re.escape(key) + r"\s*=")
    for j in range(start + 1, len(lines)):
        if re.match(r"^\s*\[", lines[j]):
            break
        if pat.match(lines[j]):
            return j + 1
    return start + 1


def parse_complex(value, where="value", line=None) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number", line)
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    if isinstance(value, str):
        try:
            return complex(value.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(f"{where}: cannot read {value!r} as a complex number", line)


def _merge(base: dict, extra: dict, text: str, path=()):
    for key, val in extra.items():
        if path == () and key not in base:
            raise ConfigError(f"unknown section [{key}]", _line_of(text, key))
        if isinstance(val, dict) and isinstance(base.get(key), dict):
            _merge(base[key], val, text, path + (key,))
        else:
            base[key] = val


def _check(cfg: dict, text: str):
    shape = cfg["shape"]
    if shape["kind"] not in SHAPE_KINDS:
        raise ConfigError(f"shape.kind must be one of {SHAPE_KINDS}", _line_of(text, "shape", "kind"))
    mat = cfg["material"]
    forms = [f for f in MATERIAL_FORMS if f in mat]
    if len(forms) != 1:
        raise ConfigError("material needs exactly one of mu_c, lambda or [material.drude]",
                          _line_of(text, "material"))
    form = forms[0]
    if form in ("mu_c", "lambda"):
        mat[form] = parse_complex(mat[form], f"material.{form}", _line_of(text, "material", form))
    else:
        d = mat["drude"]
        for key in ("mu_0", "filling", "omega_0", "tau", "lambda_target", "bracket"):
            if key not in d:
                raise ConfigError(f"material.drude.{key} missing", _line_of(text, "material.drude"))
    for sec, key in (("material", "omega"), ("grid", "R0"), ("inversion", "beta0")):
        val = cfg[sec][key]
        if not isinstance(val, (int, float)) or isinstance(val, bool) or val <= 0:
            raise ConfigError(f"{sec}.{key} must be a positive number", _line_of(text, sec, key))
    for key in ("n", "n_synth", "n_obs"):
        val = cfg["grid"][key]
        if not isinstance(val, int) or isinstance(val, bool) or val < (8 if key != "n_obs" else 1):
            raise ConfigError(f"grid.{key} must be an integer (n >= 8)", _line_of(text, "grid", key))
    if cfg["inversion"]["delta"] < 0:
        raise ConfigError("inversion.delta must be nonnegative", _line_of(text, "inversion", "delta"))
    cfg["run"]["lambdas"] = [parse_complex(v, "run.lambdas", _line_of(text, "run", "lambdas"))
                             for v in cfg["run"]["lambdas"]]
    cfg["svd"]["lambdas"] = [parse_complex(v, "svd.lambdas", _line_of(text, "svd", "lambdas"))
                             for v in cfg["svd"]["lambdas"]]


def _parse_override(item: str):
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not key=value")
    key, raw = item.split("=", 1)
    parts = key.strip().split(".")
    try:
        value = tomllib.loads(f"v = {raw.strip()}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw.strip()
    return parts, value


def load(path=None, overrides=(), text: str | None = None) -> dict:
    """Return the resolved configuration (defaults, then file, then overrides).

    Raises
    ------
    ConfigError
        With the offending line number when it can be located.
    """
    if text is None:
        text = ""
        if path is not None:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(exc).split(" (at line")[0], getattr(exc, "lineno", None)) from exc
    cfg = copy.deepcopy(DEFAULTS)
    _merge(cfg, raw, text)
    for item in overrides:
        parts, value = _parse_override(item)
        node = cfg
        for p in parts[:-1]:
            if p not in node or not isinstance(node[p], dict):
                node = node.setdefault(p, {})
            else:
                node = node[p]
        if parts[-1] in MATERIAL_FORMS and parts[:-1] == ["material"]:
            for f in MATERIAL_FORMS:
                node.pop(f, None)
        node[parts[-1]] = value
    if not any(f in cfg["material"] for f in MATERIAL_FORMS):
        cfg["material"]["mu_c"] = 5.0
    _check(cfg, text)
    return cfg
