"""Datasets, experiment harnesses and the command-line interface."""

from .data import DatasetMissingError, ingest_csv, load_dataset
from .harness import (
    ResultTable,
    alpha_tau_surface,
    bounds_table,
    calibrate_table,
    cell_rng,
    forecast_series,
    rmse,
    simulate,
    sweep_phase,
    sweep_rank,
    scheme_comparison,
)
