"""Input files and the two reference datasets.

The dataset files are not bundled. ``scripts/fetch_datasets.py`` builds
``data/deaths.csv``; see its docstring for the wine series. The data directory
is ``$HANKELCOMP_DATA`` when set, otherwise ``data/`` at the repository root.
"""

from __future__ import annotations

import csv
import os
import pathlib
import warnings

import numpy as np

from ..core import TimeSeries
from ..errors import DatasetMissingError, ParseError

# Held-out 1979 observations of the accidental-deaths series
DEATHS_1979 = (7798, 7406, 8363, 8460, 9217, 9316)

# Published forecasts of the six 1979 values by comparison models, with sqrt(MSE)
COMPARISON_FORECASTS = {
    "Model I": ((8441, 7704, 8549, 8885, 9843, 10279), 582.626),
    "Model II": ((8345, 7619, 8356, 8742, 9795, 10179), 500.500),
    "HWS": ((8039, 7077, 7750, 7941, 8824, 9329), 401.263),
    "ARAR": ((8168, 7196, 7982, 8284, 9144, 9465), 253.202),
}

# Reference sqrt(MSE) of the nuclear-norm forecasts, keyed by (scheme, rank)
REFERENCE_RMSE = {
    ("W1", 3): 485.06, ("W1", 6): 404.00, ("W1", 12): 336.27,
    ("W2", 3): 424.87, ("W2", 6): 356.75, ("W2", 12): 295.23,
    ("W3", 3): 472.29, ("W3", 6): 308.28, ("W3", 12): 247.38,
}

SURFACE_OPTIMUM = {"alpha": 0.01, "tau": 8000.0, "rmse": 219.91}

DATASETS = {"deaths": ("deaths.csv", 78), "wine": ("wine.csv", 120)}


def data_dir():
    env = os.environ.get("HANKELCOMP_DATA")
    if env:
        return pathlib.Path(env)
    return pathlib.Path(__file__).resolve().parents[3] / "data"


def ingest_csv(path, origin=None) -> TimeSeries:
    """Read one value per row; an optional header and a second column are allowed.

    Raises
    ------
    DatasetMissingError
        If ``path`` does not exist.
    ParseError
        On an empty file or a non-numeric row (the message names the row).
    """
    path = pathlib.Path(path)
    if not path.exists():
        raise DatasetMissingError(f"input file not found: {path}")
    values = []
    extra_cols = False
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not any(cells):
                continue
            try:
                v = float(cells[0])
            except ValueError:
                if lineno == 1 and not values:
                    continue  # header
                raise ParseError(f"{path}: row {lineno}: not a number: {cells[0]!r}") from None
            if not np.isfinite(v):
                raise ParseError(f"{path}: row {lineno}: non-finite value {cells[0]!r}")
            if len(cells) > 1 and any(cells[1:]):
                extra_cols = True
            values.append(v)
    if not values:
        raise ParseError(f"{path}: no data rows")
    if extra_cols:
        warnings.warn(f"{path}: columns after the first are ignored", UserWarning, stacklevel=2)
    if len(values) < 2:
        raise ParseError(f"{path}: need at least 2 values, found {len(values)}")
    return TimeSeries(np.array(values), origin=origin or str(path))


def load_dataset(name) -> TimeSeries:
    """Load ``deaths`` (78 values) or ``wine`` (120 values) from :func:`data_dir`."""
    fname, expected = DATASETS[name]
    path = data_dir() / fname
    if not path.exists():
        raise DatasetMissingError(
            f"dataset {name!r} not found at {path}; run scripts/fetch_datasets.py "
            "or set HANKELCOMP_DATA"
        )
    ts = ingest_csv(path, origin=name)
    if len(ts) != expected:
        raise ParseError(f"{path}: expected {expected} values, found {len(ts)}")
    return ts
