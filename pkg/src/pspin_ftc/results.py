"""CSV result tables with a JSON metadata sidecar.

CSV bytes depend only on the computed values: floats are written with
``repr`` (shortest round-trip form) and nothing time-dependent goes in the
table. Timing and versions live in the sidecar.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
import platform

import numpy as np
import scipy

from . import __version__
from .otoc import FTC_THRESHOLD, N_BATCHES
from .spectral import R_POISSON, SPACING_FLOOR

__all__ = ["conventions", "format_value", "table_to_csv", "write_table", "write_metadata"]


def conventions() -> dict:
    """Every convention flag a result depends on."""
    return {
        "spacing_convention": "circular (wrap-around gap included)",
        "r_POS": R_POISSON,
        "spacing_floor": SPACING_FLOOR,
        "otoc_threshold_default": FTC_THRESHOLD,
        "otoc_stderr": f"batch means over {N_BATCHES} blocks",
        "dft_window": "rectangular",
        "dft_bins": "omega_k = 2 pi k / T_len, k = 0..T_len//2",
        "basis_order": "M = S, S-1, ..., -S",
        "kicked_unitary": "exp(i alpha Sx) exp(i Lambda/(p S^(p-1)) Sz^p), alpha = alpha_B + h",
        "drive_period": 1,
    }


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def table_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def _check_target(path: Path, force: bool):
    if path.exists() and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")


def write_table(out_dir, name: str, columns, rows, metadata: dict | None = None,
                force: bool = False) -> tuple[Path, Path]:
    """Write ``<name>.csv`` and ``<name>.json`` into ``out_dir``.

    Raises FileExistsError if either file exists and ``force`` is false.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, meta_path = out / f"{name}.csv", out / f"{name}.json"
    _check_target(csv_path, force)
    _check_target(meta_path, force)
    csv_path.write_text(table_to_csv(columns, rows))
    write_metadata(meta_path, {"columns": list(columns), **(metadata or {})}, force=True)
    return csv_path, meta_path


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def write_metadata(path, metadata: dict, force: bool = False) -> Path:
    path = Path(path)
    _check_target(path, force)
    payload = {
        "code_version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
        "conventions": conventions(),
        **metadata,
    }
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path
