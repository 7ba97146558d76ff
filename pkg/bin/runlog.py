#!/usr/bin/env python3
# file: bin/runlog.py
# Structured JSON-lines logging shared by every pfrlab module.

from __future__ import annotations

import json
import logging
import os
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler

from config import LOG_DIR

LOG_NAME = "pfrlab.jsonl"

_logger = logging.getLogger("pfrlab")
_logger.setLevel(logging.INFO)
_logger.propagate = False
_ready = False


def _setup() -> None:
    global _ready
    _ready = True
    try:
        os.makedirs(LOG_DIR, exist_ok=True)
        handler = RotatingFileHandler(
            os.path.join(LOG_DIR, LOG_NAME),
            maxBytes=10 * 1024 * 1024,  # 10 MB per file
            backupCount=3,
            encoding="utf-8",
        )
        handler.setFormatter(logging.Formatter("%(message)s"))  # raw JSONL
        _logger.addHandler(handler)
    except OSError:
        # read-only checkout: stderr echo only
        pass


def jlog(mod: str = "pfrlab", **kv) -> None:
    if not _ready:
        _setup()
    kv = {"ts": datetime.now(timezone.utc).isoformat(), "mod": mod, **kv}
    line = json.dumps(kv, ensure_ascii=False, default=str)
    print(line, file=sys.stderr, flush=True)
    try:
        _logger.info(line)
    except Exception:
        pass
