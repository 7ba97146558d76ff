#!/usr/bin/env python3
import configparser
import os


# ---------- helpers ----------
def _cast(v, cast):
    if cast is int:
        return int(v)
    if cast is float:
        return float(v)
    if cast is bool:
        return str(v).lower() in ("1", "true", "yes", "on")
    return v


def env(name, default=None, cast=str):
    v = os.getenv(name, None if default is None else str(default))
    if v is None:
        return default
    # Trim surrounding quotes some shells/compose files add
    if len(v) >= 2 and v[0] == v[-1] and v[0] in ('"', "'"):
        v = v[1:-1]
    return _cast(v, cast)


_cfg = None

APP_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))


def ini(path=None):
    """Load config/config.ini with ExtendedInterpolation once."""
    global _cfg
    if _cfg is not None:
        return _cfg
    cp = configparser.ConfigParser(
        interpolation=configparser.ExtendedInterpolation(),
        defaults={"app_root": APP_ROOT},
    )
    default_path = os.path.join(APP_ROOT, "config", "config.ini")
    cp.read(path or env("PFR_CONFIG", default_path))
    _cfg = cp
    return _cfg


def cfg_get(section, key, default=None, cast=str):
    cp = ini()
    try:
        v = cp.get(section, key, fallback=None)
    except Exception:
        v = None
    if v is None:
        return default
    return _cast(v, cast)


# ---------- paths ----------
LOG_DIR = env("PFR_LOG_DIR", cfg_get("paths", "logs", os.path.join(APP_ROOT, "logs")))

# ---------- desk-scale caps ----------
# p^n for dense function tables
TABLE_CAP = env("PFR_TABLE_CAP", cfg_get("limits", "table_cap", 1 << 24, cast=int), cast=int)
# p^dim for subspace enumeration
ENUM_CAP = env("PFR_ENUM_CAP", cfg_get("limits", "enum_cap", 1 << 20, cast=int), cast=int)
# p^(2n) ordered pairs scanned by build_S
PAIR_CAP = env("PFR_PAIR_CAP", cfg_get("limits", "pair_cap", 1 << 20, cast=int), cast=int)
# candidate basis-image combinations in refute_exhaustive / classify_maps
ORACLE_CAP = env("PFR_ORACLE_CAP", cfg_get("limits", "oracle_cap", 1 << 26, cast=int), cast=int)
# |S|^t combinations materialised by sumset()
SUMSET_CAP = env("PFR_SUMSET_CAP", cfg_get("limits", "sumset_cap", 1 << 20, cast=int), cast=int)

# ---------- search defaults ----------
DEFAULT_MODE = env("PFR_MODE", cfg_get("search", "mode", "exact"))
DEFAULT_STRATEGY = env("PFR_STRATEGY", cfg_get("search", "strategy", "exhaustive"))
DEFAULT_BUDGET = env("PFR_BUDGET", cfg_get("search", "budget", 100000, cast=int), cast=int)
DEFAULT_WORKERS = env("PFR_WORKERS", cfg_get("search", "workers", 1, cast=int), cast=int)

# ---------- diagnostics ----------
# largest p^n for which sweep rows compute the U set
U_CAP = env("PFR_U_CAP", cfg_get("diagnostics", "u_cap", 1 << 16, cast=int), cast=int)
