"""JSON file formats for modular data, coset systems and branching solutions.

Complex numbers are stored as ``[re, im]``. Floats are written with Python's
shortest round-trip representation, so ``load(save(x))`` is exact.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from mtc_coset.coset import CosetSystem, coset_system
from mtc_coset.coset_types import (
    BranchingEntry,
    ComplexPair,
    CosetFile,
    ModularDataFile,
    SolutionsFile,
)
from mtc_coset.errors import FileFormatError
from mtc_coset.modular_core import ModularData

logger = logging.getLogger(__name__)


def _pair(z: complex) -> ComplexPair:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise FileFormatError(f"{where}: expected a number or [re, im], got {value!r}")


def modular_data_to_dict(md: ModularData) -> ModularDataFile:
    return {
        "name": md.name,
        "labels": list(md.labels),
        "s": [[_pair(z) for z in row] for row in md.s],
        "twists": [_pair(z) for z in md.twists],
    }


def modular_data_from_dict(data: Any, where: str = "modular data") -> ModularData:
    if not isinstance(data, dict):
        raise FileFormatError(f"{where}: expected an object")
    missing = [k for k in ("labels", "s", "twists") if k not in data]
    if missing:
        raise FileFormatError(f"{where}: missing keys {missing}")
    labels = data["labels"]
    rows = data["s"]
    twists = data["twists"]
    if not isinstance(labels, list) or not isinstance(rows, list) or not isinstance(twists, list):
        raise FileFormatError(f"{where}: labels, s and twists must be lists")
    if not all(isinstance(r, list) for r in rows):
        raise FileFormatError(f"{where}: s must be a list of rows")
    if not rows or len({len(r) for r in rows}) != 1:
        raise FileFormatError(f"{where}: s must be a nonempty matrix with rows of equal length")
    s = np.array([[_complex(v, f"{where}.s") for v in row] for row in rows], dtype=complex)
    theta = np.array([_complex(v, f"{where}.twists") for v in twists], dtype=complex)
    return ModularData(
        name=str(data.get("name", where)),
        labels=tuple(str(x) for x in labels),
        s=s,
        twists=theta,
    )


def _read_json(path: str | Path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise FileFormatError(f"{path}: invalid JSON ({e})") from e
    except OSError as e:
        raise FileFormatError(f"{path}: cannot read ({e})") from e


def _write_json(data: Any, path: str | Path) -> None:
    fp = Path(path)
    fp.parent.mkdir(parents=True, exist_ok=True)
    with open(fp, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=4, ensure_ascii=False)
    logger.info(f"Wrote {fp}")


def load_modular_data(path: str | Path) -> ModularData:
    return modular_data_from_dict(_read_json(path), where=str(path))


def save_modular_data(md: ModularData, path: str | Path) -> None:
    _write_json(modular_data_to_dict(md), path)


def coset_to_dict(cs: CosetSystem) -> CosetFile:
    """Inline coset file; ``ambient`` holds the coset category C."""
    branching: dict[str, list[BranchingEntry]] = {}
    for i, label in enumerate(cs.mdc.labels):
        entries: list[BranchingEntry] = []
        for a, p in np.argwhere(cs.branching[i] > 0):
            entries.append(
                {"c1": cs.md1.labels[a], "c2": cs.md2.labels[p], "mult": int(cs.branching[i, a, p])}
            )
        branching[label] = entries
    return {
        "name": cs.name,
        "c1": modular_data_to_dict(cs.md1),
        "c2": modular_data_to_dict(cs.md2),
        "ambient": modular_data_to_dict(cs.mdc),
        "branching": branching,
    }


def _component(value: Any, base_dir: Path, key: str) -> ModularData:
    if isinstance(value, str):
        return load_modular_data(base_dir / value)
    return modular_data_from_dict(value, where=key)


def _index(labels: Sequence[str], label: Any, where: str) -> int:
    try:
        return list(labels).index(str(label))
    except ValueError as e:
        raise FileFormatError(f"{where}: unknown label {label!r}") from e


def coset_from_dict(data: Any, base_dir: str | Path = ".") -> CosetSystem:
    if not isinstance(data, dict):
        raise FileFormatError("coset file: expected an object")
    missing = [k for k in ("c1", "c2", "ambient", "branching") if k not in data]
    if missing:
        raise FileFormatError(f"coset file: missing keys {missing}")
    base = Path(base_dir)
    md1 = _component(data["c1"], base, "c1")
    md2 = _component(data["c2"], base, "c2")
    mdc = _component(data["ambient"], base, "ambient")
    raw = data["branching"]
    if not isinstance(raw, dict):
        raise FileFormatError("coset file: branching must map ambient labels to entry lists")
    z = np.zeros((mdc.rank, md1.rank, md2.rank), dtype=np.int64)
    for label, entries in raw.items():
        i = _index(mdc.labels, label, "branching")
        if not isinstance(entries, list):
            raise FileFormatError(f"branching[{label}]: expected a list")
        for entry in entries:
            if not isinstance(entry, dict) or not {"c1", "c2", "mult"} <= set(entry):
                raise FileFormatError(f"branching[{label}]: entries need c1, c2 and mult")
            mult = entry["mult"]
            if not isinstance(mult, int) or isinstance(mult, bool) or mult < 0:
                raise FileFormatError(f"branching[{label}]: mult must be a nonnegative integer")
            a = _index(md1.labels, entry["c1"], f"branching[{label}].c1")
            p = _index(md2.labels, entry["c2"], f"branching[{label}].c2")
            z[i, a, p] += mult
    return coset_system(md1, md2, mdc, z, name=str(data.get("name", "coset")))


def load_coset(path: str | Path) -> CosetSystem:
    p = Path(path)
    return coset_from_dict(_read_json(p), base_dir=p.parent)


def save_coset(cs: CosetSystem, path: str | Path) -> None:
    _write_json(coset_to_dict(cs), path)


def save_solutions(solutions: Sequence[CosetSystem], path: str | Path) -> None:
    payload: SolutionsFile = {
        "count": len(solutions),
        "solutions": [coset_to_dict(cs) for cs in solutions],
    }
    _write_json(payload, path)


def load_solutions(path: str | Path) -> list[CosetSystem]:
    p = Path(path)
    data = _read_json(p)
    if not isinstance(data, dict) or not isinstance(data.get("solutions"), list):
        raise FileFormatError(f"{path}: expected {{count, solutions}}")
    return [coset_from_dict(item, base_dir=p.parent) for item in data["solutions"]]
