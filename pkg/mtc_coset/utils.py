"""Shared helpers: file logging, label formatting and number rounding."""

from __future__ import annotations

import logging
import math
import os
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from mtc_coset.config import log_path as configured_log_path


def setup_file_logging(log_path: str | None = None, *, level: int = logging.INFO) -> None:
    """Attach a FileHandler to the root logger for persistent logs.

    Safe to call multiple times; avoids duplicate handlers for the same file.
    The default target is ``MTC_COSET_LOG_PATH`` (``logs/mtc_coset.log``).
    """
    log_path = log_path or configured_log_path()
    Path(os.path.dirname(log_path) or ".").mkdir(parents=True, exist_ok=True)
    root = logging.getLogger()
    try:
        current_level = root.level
        if current_level == logging.NOTSET or current_level > level:
            root.setLevel(level)
    except Exception:
        pass
    norm_target = os.path.abspath(log_path)
    for h in root.handlers:
        if isinstance(h, logging.FileHandler):
            try:
                if os.path.abspath(getattr(h, "baseFilename", "")) == norm_target:
                    return
            except Exception:
                continue
    fh = logging.FileHandler(norm_target, encoding="utf-8")
    fh.setLevel(level)
    fh.setFormatter(logging.Formatter("%(asctime)s - %(levelname)s - %(message)s"))
    root.addHandler(fh)


def pair_label(a: str, b: str) -> str:
    """Label of a Deligne-product simple, e.g. ``("1", "σ") -> "(1,σ)"``."""
    return f"({a},{b})"


def pair_index(a: int, b: int, n2: int) -> int:
    """Flat index of ``(a, b)`` in a product whose second factor has rank ``n2``."""
    return a * n2 + b


def round_sig(value: float, digits: int = 6) -> float:
    """Round to ``digits`` significant digits (0 stays 0)."""
    if value == 0 or not math.isfinite(value):
        return value
    return round(value, digits - 1 - int(math.floor(math.log10(abs(value)))))


def fmt_residual(value: float | None) -> str:
    if value is None:
        return "-"
    return "{:.3e}".format(value)


def support(vector: Sequence[int] | np.ndarray) -> list[int]:
    """Indices with a positive entry."""
    return [int(i) for i in np.flatnonzero(np.asarray(vector) > 0)]


def format_set(labels: Iterable[str]) -> str:
    return "{" + ", ".join(labels) + "}"
